//! Synchronized multi-track relations.
//!
//! A relation of arity `d` is a complete deterministic automaton with `d`
//! tracks reading MSD-first, equal-length, zero-padded tuples. Every
//! relation here is padding-closed: prepending the all-zeros symbol never
//! changes acceptance, so the relation is a well-defined set of tuples of
//! naturals.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::Symbol;
use crate::automaton::{Automaton, StateId};
use crate::basek::{canonical_expansion, BaseKSet};

use super::{LogicError, Var};

/// A compiled relation: `vars` in sorted order give the track layout.
#[derive(Debug, Clone)]
pub struct Relation {
    automaton: Automaton,
    vars: Vec<Var>,
}

impl Relation {
    pub(crate) fn from_parts(automaton: Automaton, vars: Vec<Var>) -> Self {
        debug_assert_eq!(automaton.tracks(), vars.len());
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "vars must be sorted");
        debug_assert!(automaton.is_deterministic());
        Relation { automaton, vars }
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// Free variables in track order.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn radix(&self) -> u32 {
        self.automaton.radix()
    }

    /// Does the relation contain the tuple? Values are given in track
    /// order.
    pub fn accepts_tuple(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.arity());
        let k = self.radix();
        let expansions: Vec<Vec<u32>> = values.iter().map(|&v| canonical_expansion(v, k)).collect();
        let len = expansions.iter().map(|e| e.len()).max().unwrap_or(0);
        let mut word = Vec::with_capacity(len);
        for pos in 0..len {
            let digits: Vec<u32> = expansions
                .iter()
                .map(|e| {
                    let pad = len - e.len();
                    if pos < pad {
                        0
                    } else {
                        e[pos - pad]
                    }
                })
                .collect();
            word.push(self.automaton.alphabet().encode(&digits).expect("digits are in range"));
        }
        self.automaton.accepts(&word)
    }

    /// Is the relation empty as a set of tuples? By padding closure this is
    /// plain automaton emptiness.
    pub fn is_empty(&self) -> bool {
        self.automaton.trim().state_count() == 0
    }

    /// The lexicographically least shortest accepted encoding, decoded to a
    /// tuple of values in track order.
    pub fn shortest_witness(&self) -> Option<Vec<u64>> {
        let a = &self.automaton;
        let start = *a.initial().iter().next()?;
        // BFS with smallest-symbol-first expansion; the first final state
        // dequeued is reached by the lex-least shortest word.
        let mut parent: BTreeMap<StateId, (StateId, Symbol)> = BTreeMap::new();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        let mut hit: Option<StateId> = None;
        if a.is_final(start) {
            hit = Some(start);
        }
        'bfs: while let Some(q) = queue.pop_front() {
            if hit.is_some() {
                break;
            }
            for sym in a.alphabet().symbols() {
                if let Some(d) = a.dfa_step(q, sym) {
                    if seen.insert(d) {
                        parent.insert(d, (q, sym));
                        if a.is_final(d) {
                            hit = Some(d);
                            break 'bfs;
                        }
                        queue.push_back(d);
                    }
                }
            }
        }
        let mut at = hit?;
        let mut word = Vec::new();
        while let Some(&(prev, sym)) = parent.get(&at) {
            word.push(sym);
            at = prev;
        }
        word.reverse();
        let mut values = vec![0u64; self.arity()];
        for &sym in &word {
            for (t, value) in values.iter_mut().enumerate() {
                *value = *value * self.radix() as u64 + self.automaton.alphabet().track_digit(sym, t) as u64;
            }
        }
        Some(values)
    }
}

/// Subset construction with a hard cap on the number of result states.
pub(crate) fn determinize_capped(a: &Automaton, cap: usize) -> Result<Automaton, LogicError> {
    let mut subset_ids: BTreeMap<BTreeSet<StateId>, usize> = BTreeMap::new();
    let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
    let mut intern = |s: BTreeSet<StateId>, subsets: &mut Vec<BTreeSet<StateId>>| -> usize {
        if let Some(&id) = subset_ids.get(&s) {
            return id;
        }
        let id = subsets.len();
        subset_ids.insert(s.clone(), id);
        subsets.push(s);
        id
    };
    let start = intern(a.initial().clone(), &mut subsets);
    let mut builder = Automaton::builder(a.radix(), a.tracks()).unwrap().initial([start]);
    let mut finals = Vec::new();
    let mut at = 0usize;
    while at < subsets.len() {
        let subset = subsets[at].clone();
        if subset.iter().any(|q| a.is_final(*q)) {
            finals.push(at);
        }
        for sym in a.alphabet().symbols() {
            let next = a.step_set(&subset, sym);
            let nid = intern(next, &mut subsets);
            builder = builder.edge(at, sym, nid);
        }
        if subsets.len() > cap {
            return Err(LogicError::StateCapExceeded(cap));
        }
        at += 1;
    }
    Ok(builder.states(subsets.len()).finals(finals).build().expect("subset construction is valid"))
}

/// Build a complete DFA from a transition function on dense states.
fn complete_dfa(
    radix: u32,
    tracks: usize,
    states: usize,
    initial: StateId,
    finals: &[StateId],
    step: impl Fn(StateId, &[u32]) -> StateId,
) -> Automaton {
    let mut builder = Automaton::builder(radix, tracks)
        .unwrap()
        .states(states)
        .initial([initial])
        .finals(finals.iter().copied());
    let alph = crate::alphabet::Alphabet::new(radix, tracks).unwrap();
    for q in 0..states {
        for sym in alph.symbols() {
            let digits = alph.decode(sym);
            builder = builder.edge(q, sym, step(q, &digits));
        }
    }
    builder.build().expect("complete DFA construction is valid")
}

/// The graph of addition: `{(x, y, z) : x + y = z}` with the given track
/// roles. MSD-first with a pending-borrow state.
pub(crate) fn addition_automaton(radix: u32, x_track: usize, y_track: usize, z_track: usize) -> Automaton {
    // states: 0 balanced (final), 1 owing one carry, 2 dead
    complete_dfa(radix, 3, 3, 0, &[0], |q, digits| {
        if q == 2 {
            return 2;
        }
        let (a, b, z) = (digits[x_track] as i64, digits[y_track] as i64, digits[z_track] as i64);
        let c = if q == 0 { 0i64 } else { -1i64 };
        let next = c * radix as i64 + a + b - z;
        match next {
            0 => 0,
            -1 => 1,
            _ => 2,
        }
    })
}

/// The public arity-3 addition relation over variables `x`, `y`, `z`.
pub fn addition_relation(radix: u32) -> Relation {
    Relation::from_parts(
        addition_automaton(radix, 0, 1, 2),
        vec!["x".into(), "y".into(), "z".into()],
    )
}

/// `x = y` on two tracks.
pub(crate) fn equality_automaton(radix: u32) -> Automaton {
    complete_dfa(radix, 2, 2, 0, &[0], |q, digits| {
        if q == 1 || digits[0] != digits[1] {
            1
        } else {
            0
        }
    })
}

/// `x < y` with `x` on `x_track`.
pub(crate) fn less_than_automaton(radix: u32, x_track: usize, y_track: usize) -> Automaton {
    // 0 equal so far, 1 strictly less (final), 2 strictly greater
    complete_dfa(radix, 2, 3, 0, &[1], |q, digits| match q {
        0 => {
            let (a, b) = (digits[x_track], digits[y_track]);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => 2,
            }
        }
        other => other,
    })
}

/// `x = c` on one track: the language `0* canon(c)`.
pub(crate) fn constant_automaton(radix: u32, c: u64) -> Automaton {
    let digits = canonical_expansion(c, radix);
    let len = digits.len();
    // states 0..=len walk the expansion, len+1 is dead
    let dead = len + 1;
    complete_dfa(radix, 1, len + 2, 0, &[len], move |q, sym| {
        let d = sym[0];
        if q == dead {
            return dead;
        }
        if q == 0 && d == 0 {
            return 0; // leading zeros
        }
        if q < len && d == digits[q] {
            return q + 1;
        }
        dead
    })
}

/// Membership of the track value in `{k^i : i >= 0}`: the language `0* 1 0*`.
pub(crate) fn power_automaton(radix: u32) -> Automaton {
    complete_dfa(radix, 1, 3, 0, &[1], |q, sym| match (q, sym[0]) {
        (0, 0) => 0,
        (0, 1) => 1,
        (1, 0) => 1,
        _ => 2,
    })
}

/// Membership of the track value in a named base-k set, as a complete DFA
/// over every expansion (padding closed via the zero-closed form).
pub(crate) fn set_automaton(set: &BaseKSet, cap: usize) -> Result<Automaton, LogicError> {
    determinize_capped(&set.zero_closed(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_examples() {
        let add = addition_relation(10);
        assert!(add.accepts_tuple(&[2, 3, 5]));
        assert!(add.accepts_tuple(&[0, 0, 0]));
        assert!(!add.accepts_tuple(&[9, 9, 17]));
    }

    #[test]
    fn addition_matches_arithmetic() {
        for k in [2u32, 3] {
            let add = addition_relation(k);
            for x in 0..60u64 {
                for y in 0..60u64 {
                    assert!(add.accepts_tuple(&[x, y, x + y]), "k={k} {x}+{y}");
                    assert!(!add.accepts_tuple(&[x, y, x + y + 1]), "k={k} {x}+{y}");
                }
            }
        }
    }

    #[test]
    fn addition_is_functional_in_z() {
        let add = addition_relation(3);
        for x in 0..40u64 {
            for y in 0..40u64 {
                let hits: Vec<u64> = (0..=100).filter(|&z| add.accepts_tuple(&[x, y, z])).collect();
                assert_eq!(hits, vec![x + y]);
            }
        }
    }

    #[test]
    fn constant_automaton_accepts_padded_expansions() {
        let a = constant_automaton(3, 15); // digits 1,2,0
        assert!(a.accepts(&[1, 2, 0]));
        assert!(a.accepts(&[0, 0, 1, 2, 0]));
        assert!(!a.accepts(&[1, 2]));
        let zero = constant_automaton(3, 0);
        assert!(zero.accepts(&[]));
        assert!(zero.accepts(&[0, 0]));
        assert!(!zero.accepts(&[1]));
    }

    #[test]
    fn power_automaton_examples() {
        let a = power_automaton(2);
        assert!(a.accepts(&[1])); // 1 = 2^0
        assert!(a.accepts(&[0, 1, 0, 0])); // 4
        assert!(!a.accepts(&[])); // 0
        assert!(!a.accepts(&[1, 1]));
    }

    #[test]
    fn shortest_witness_is_lex_least() {
        let add = addition_relation(2);
        // all of (0,0,0) is the shortest witness: the empty word
        assert_eq!(add.shortest_witness(), Some(vec![0, 0, 0]));
    }
}
