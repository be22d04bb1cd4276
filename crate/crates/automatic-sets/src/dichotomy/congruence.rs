//! Congruence languages and the congruence witness search.
//!
//! A congruence language over `(modulus m, length period l)` fixes a set
//! of residue classes for (value mod m, word length mod l). The
//! building block accepts the no-leading-zero words of length a multiple
//! of `l` whose value is congruent to `-c` mod `m`; the witness search
//! asks whether a cycle language is *exactly* a union of congruence
//! classes, which is decided by an equivalence check, never by sampling.

use std::collections::{BTreeSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::error::AutomatonError;

/// Exact congruence description of a cycle language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceWitness {
    pub modulus: u64,
    pub length_period: u32,
    /// Accepted classes: pairs (value mod modulus, length mod period).
    pub classes: BTreeSet<(u64, u32)>,
}

/// The set of no-leading-zero words of length a multiple of `len_period`
/// whose value is congruent to `-offset` modulo `modulus`; empty when
/// either parameter is zero. The empty word counts as the expansion of 0,
/// so it is accepted exactly when `offset = 0 (mod modulus)`.
pub fn congruence_language(len_period: u32, modulus: u64, offset: u64, radix: u32) -> Automaton {
    if len_period == 0 || modulus == 0 {
        return Automaton::builder(radix, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .build()
            .unwrap();
    }
    let target = (modulus - offset % modulus) % modulus;
    let mut builder = Automaton::builder(radix, 1).unwrap();
    // state 0 = start; 1 + (r * len_period + l) = residue pair
    let id = |r: u64, l: u32| 1 + (r as usize) * len_period as usize + l as usize;
    let states = 1 + modulus as usize * len_period as usize;
    for d in 1..radix {
        builder = builder.edge(0, d, id(d as u64 % modulus, 1 % len_period));
    }
    for r in 0..modulus {
        for l in 0..len_period {
            for d in 0..radix {
                let r2 = (r * radix as u64 + d as u64) % modulus;
                builder = builder.edge(id(r, l), d, id(r2, (l + 1) % len_period));
            }
        }
    }
    let mut finals = vec![id(target, 0)];
    if target == 0 {
        finals.push(0); // the empty word
    }
    builder.states(states).initial([0usize]).finals(finals).build().unwrap()
}

/// The residue image of a language: all (value mod m, length mod l) pairs
/// realized by accepted words.
fn residue_image(a: &Automaton, modulus: u64, len_period: u32) -> BTreeSet<(u64, u32)> {
    let mut image = BTreeSet::new();
    let mut seen: BTreeSet<(StateId, u64, u32)> = BTreeSet::new();
    let mut queue: VecDeque<(StateId, u64, u32)> = VecDeque::new();
    for &q in a.initial() {
        let start = (q, 0u64, 0u32);
        if seen.insert(start) {
            queue.push_back(start);
        }
    }
    while let Some((q, r, l)) = queue.pop_front() {
        if a.is_final(q) {
            image.insert((r, l));
        }
        for (sym, dst) in a.transitions_from(q) {
            let next = (dst, (r * a.radix() as u64 + sym as u64) % modulus, (l + 1) % len_period);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    image
}

/// The language of all words whose residue pair lies in `classes`,
/// optionally excluding words with leading zeros.
fn classes_language(
    classes: &BTreeSet<(u64, u32)>,
    modulus: u64,
    len_period: u32,
    radix: u32,
    leading_zeros: bool,
) -> Automaton {
    let mut builder = Automaton::builder(radix, 1).unwrap();
    if leading_zeros {
        // plain residue product automaton; start is the (0, 0) class
        let id = |r: u64, l: u32| (r as usize) * len_period as usize + l as usize;
        let states = modulus as usize * len_period as usize;
        for r in 0..modulus {
            for l in 0..len_period {
                for d in 0..radix {
                    let r2 = (r * radix as u64 + d as u64) % modulus;
                    builder = builder.edge(id(r, l), d, id(r2, (l + 1) % len_period));
                }
            }
        }
        let finals: Vec<usize> = classes.iter().map(|&(r, l)| id(r, l)).collect();
        builder.states(states).initial([id(0, 0)]).finals(finals).build().unwrap()
    } else {
        let id = |r: u64, l: u32| 1 + (r as usize) * len_period as usize + l as usize;
        let states = 1 + modulus as usize * len_period as usize;
        for d in 1..radix {
            builder = builder.edge(0, d, id(d as u64 % modulus, 1 % len_period));
        }
        for r in 0..modulus {
            for l in 0..len_period {
                for d in 0..radix {
                    let r2 = (r * radix as u64 + d as u64) % modulus;
                    builder = builder.edge(id(r, l), d, id(r2, (l + 1) % len_period));
                }
            }
        }
        let mut finals: Vec<usize> = classes.iter().map(|&(r, l)| id(r, l)).collect();
        if classes.contains(&(0, 0)) {
            finals.push(0);
        }
        builder.states(states).initial([0usize]).finals(finals).build().unwrap()
    }
}

/// Is the language of `cycle` exactly a union of congruence classes for
/// `(modulus, len_period)`? The leading-zero convention of the candidate
/// follows the cycle language's own zero behavior, probed on the digit-0
/// transition of its initial states.
pub fn find_congruence_witness(
    cycle: &Automaton,
    modulus: u64,
    len_period: u32,
) -> Result<Option<CongruenceWitness>, AutomatonError> {
    if modulus == 0 || len_period == 0 {
        return Ok(None);
    }
    let classes = residue_image(cycle, modulus, len_period);
    let leading_zeros = !cycle.step_set(cycle.initial(), 0).is_empty();
    let candidate = classes_language(&classes, modulus, len_period, cycle.radix(), leading_zeros);
    if cycle.equivalent(&candidate)? {
        Ok(Some(CongruenceWitness { modulus, length_period: len_period, classes }))
    } else {
        Ok(None)
    }
}

/// Search `(modulus, len_period)` pairs up to a bound, ordered by product
/// then by modulus, returning the first exact witness.
pub fn search_congruence_witness(
    cycle: &Automaton,
    bound: u64,
) -> Result<Option<CongruenceWitness>, AutomatonError> {
    let mut pairs: Vec<(u64, u32)> = Vec::new();
    for m in 1..=bound {
        for l in 1..=bound as u32 {
            pairs.push((m, l));
        }
    }
    pairs.sort_by_key(|&(m, l)| (m * l as u64, m, l));
    for (m, l) in pairs {
        if let Some(w) = find_congruence_witness(cycle, m, l)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basek::{canonical_expansion, eval_msd};

    #[test]
    fn building_block_matches_enumeration() {
        // even-length binary expansions of multiples of 3
        let a = congruence_language(2, 3, 0, 2);
        for len in 0..=10usize {
            for bits in 0..(1u64 << len) {
                let word: Vec<u32> = (0..len).rev().map(|b| ((bits >> b) & 1) as u32).collect();
                let expected = (word.is_empty() || word[0] != 0)
                    && len % 2 == 0
                    && eval_msd(&word, 2).unwrap() % 3 == 0;
                assert_eq!(a.accepts(&word), expected, "word {word:?}");
            }
        }
    }

    #[test]
    fn zero_parameters_give_the_empty_language() {
        let a = congruence_language(0, 3, 0, 2);
        assert!(a.minimize().state_count() == 0);
        let b = congruence_language(2, 0, 0, 2);
        assert!(b.minimize().state_count() == 0);
    }

    #[test]
    fn all_words_witnessed_at_one_one() {
        let universal = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .edge(0, 1, 0)
            .build()
            .unwrap();
        let w = find_congruence_witness(&universal, 1, 1).unwrap().unwrap();
        assert_eq!(w.modulus, 1);
        assert_eq!(w.length_period, 1);
        assert_eq!(w.classes.len(), 1);
    }

    #[test]
    fn parity_of_ones_has_no_witness() {
        // evenly many 1 digits is not a value/length congruence
        let evil = crate::corpus::evil_numbers().automaton().clone();
        for m in 1..=8u64 {
            for l in 1..=8u32 {
                assert!(
                    find_congruence_witness(&evil, m, l).unwrap().is_none(),
                    "unexpected witness at ({m}, {l})"
                );
            }
        }
    }

    #[test]
    fn canonical_expansion_sanity() {
        // the building block at l=1, m=1, c=0 accepts every canonical word
        let a = congruence_language(1, 1, 0, 3);
        for n in 0..200u64 {
            assert!(a.accepts(&canonical_expansion(n, 3)));
        }
        assert!(!a.accepts(&[0]));
    }
}
