//! Base-k semantics: automata as subsets of the naturals.
//!
//! Words are read most significant digit first. A [`BaseKSet`] couples a
//! single-track automaton with the convention that membership of `n` is
//! existential over leading zeros: `n` is in the set when `0^j w` is
//! accepted for some `j >= 0`, where `w` is the canonical (no leading zero)
//! expansion of `n`. The canonical expansion of `0` is the empty word.

use std::collections::BTreeSet;

use crate::automaton::{Automaton, StateId};
use crate::error::{BaseKError, NormalizationError};

/// Value of a digit word read most significant digit first; the empty word
/// evaluates to zero.
pub fn eval_msd(word: &[u32], radix: u32) -> Result<u64, BaseKError> {
    if radix < 2 {
        return Err(BaseKError::Automaton(crate::error::AutomatonError::InvalidRadix(radix)));
    }
    let mut value: u64 = 0;
    for &d in word {
        if d >= radix {
            return Err(BaseKError::DigitOutOfRange { digit: d, radix });
        }
        value = value
            .checked_mul(radix as u64)
            .and_then(|v| v.checked_add(d as u64))
            .ok_or(BaseKError::Overflow)?;
    }
    Ok(value)
}

/// The unique expansion of `n` without leading zeros; `0` maps to the empty
/// word.
pub fn canonical_expansion(n: u64, radix: u32) -> Vec<u32> {
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push((rest % radix as u64) as u32);
        rest /= radix as u64;
    }
    digits.reverse();
    digits
}

/// A base-k automatic subset of the naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseKSet {
    automaton: Automaton,
    zero_closure: BTreeSet<StateId>,
}

impl BaseKSet {
    pub fn new(automaton: Automaton) -> Result<Self, BaseKError> {
        if automaton.tracks() != 1 {
            return Err(BaseKError::NotSingleTrack(automaton.tracks()));
        }
        let zero_closure = zero_closure_of(&automaton, automaton.initial());
        Ok(BaseKSet { automaton, zero_closure })
    }

    pub fn radix(&self) -> u32 {
        self.automaton.radix()
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// States reachable from the initial set by words in `0*`; a fixed point
    /// under the digit-0 step.
    pub fn zero_closure(&self) -> &BTreeSet<StateId> {
        &self.zero_closure
    }

    /// Is `n` in the denoted set? Runs the canonical expansion from the
    /// zero closure, which realizes the existential over leading zeros.
    pub fn member(&self, n: u64) -> bool {
        let word = canonical_expansion(n, self.radix());
        self.automaton.accepts_from(&self.zero_closure, &word)
    }

    /// The denoted set intersected with `[0, upto]`, ascending.
    pub fn enumerate(&self, upto: u64) -> Vec<u64> {
        (0..=upto).filter(|&n| self.member(n)).collect()
    }

    /// An equivalent automaton that accepts *every* expansion of every
    /// member, with any number of leading zeros. The fresh state (index
    /// `state_count - 1` of the result) absorbs leading zeros and is the
    /// sole initial state.
    pub fn zero_closed(&self) -> Automaton {
        let a = &self.automaton;
        let n = a.state_count();
        let fresh = n;
        let mut builder = Automaton::builder(a.radix(), 1)
            .unwrap()
            .states(n + 1)
            .initial([fresh]);
        for (src, sym, dst) in a.transitions() {
            builder = builder.edge(src, sym, dst);
        }
        for sym in a.alphabet().symbols() {
            for dst in a.step_set(&self.zero_closure, sym) {
                builder = builder.edge(fresh, sym, dst);
            }
        }
        builder = builder.edge(fresh, 0, fresh);
        let mut finals: Vec<StateId> = a.finals().iter().copied().collect();
        if self.zero_closure.iter().any(|q| a.is_final(*q)) {
            finals.push(fresh);
        }
        builder.finals(finals).build().expect("zero closure construction is valid")
    }

    /// Re-present the same subset of the naturals over radix `k^i`. New
    /// digits are `i`-blocks of old digits; the zero-closed form is used so
    /// that leading-zero padding to a block boundary cannot change the
    /// denotation.
    pub fn base_power_transform(&self, i: u32) -> Result<BaseKSet, BaseKError> {
        if i == 0 {
            return Err(BaseKError::ZeroExponent);
        }
        let k = self.radix() as u64;
        let new_radix = k
            .checked_pow(i)
            .filter(|&r| r <= u32::MAX as u64)
            .ok_or(BaseKError::Overflow)? as u32;
        let base = self.zero_closed();
        let blocked = blocked_automaton(&base, i, new_radix)?;
        BaseKSet::new(blocked)
    }
}

/// Block-transform an automaton: same states, transitions on `i`-blocks of
/// old digits, read most significant digit first.
fn blocked_automaton(a: &Automaton, i: u32, new_radix: u32) -> Result<Automaton, BaseKError> {
    let mut builder = Automaton::builder(new_radix, 1)?
        .states(a.state_count())
        .initial(a.initial().iter().copied())
        .finals(a.finals().iter().copied());
    for src in 0..a.state_count() {
        for new_digit in 0..new_radix {
            let block = block_digits(new_digit as u64, a.radix(), i);
            let mut from = BTreeSet::new();
            from.insert(src);
            for dst in a.run_set(&from, &block) {
                builder = builder.edge(src, new_digit, dst);
            }
        }
    }
    Ok(builder.build()?)
}

/// The `i` old digits (MSD first) that a new digit stands for.
fn block_digits(value: u64, old_radix: u32, i: u32) -> Vec<u32> {
    let mut digits = vec![0u32; i as usize];
    let mut rest = value;
    for slot in (0..i as usize).rev() {
        digits[slot] = (rest % old_radix as u64) as u32;
        rest /= old_radix as u64;
    }
    digits
}

fn zero_closure_of(a: &Automaton, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut closure = from.clone();
    loop {
        let step = a.step_set(&closure, 0);
        let before = closure.len();
        closure.extend(step);
        if closure.len() == before {
            return closure;
        }
    }
}

/// Result of the base-power normalization of a cycle-language set.
#[derive(Debug, Clone)]
pub struct Normalization {
    /// The chosen exponent: the analysis continues over radix `k^exponent`.
    pub exponent: u32,
    /// The distinguished digit `a` with `delta(p, a) = {p}` in the blocked
    /// automaton.
    pub letter: u32,
    /// The blocked automaton (same state indices as the input).
    pub blocked: Automaton,
    /// The transformed set, denotation-equal to the input set.
    pub transformed: BaseKSet,
    /// The tracked state `p` (same index in `blocked`).
    pub state: StateId,
}

/// Find the least exponent `i <= cap` such that over radix `k^i` the digits
/// `0` and `k^i - 1` are idempotent words and some single digit `a` loops at
/// `p`. The distinguished letter prefers the least nonzero candidate and
/// falls back to `0`.
pub fn find_normalization(
    set: &BaseKSet,
    p: StateId,
    cap: u32,
) -> Result<Normalization, NormalizationError> {
    let a = set.automaton();
    if !a.is_deterministic() {
        return Err(NormalizationError::NotDeterministic);
    }
    if p >= a.state_count() {
        return Err(NormalizationError::Automaton(
            crate::error::AutomatonError::StateOutOfRange { state: p, states: a.state_count() },
        ));
    }
    // cycle language must contain a nonempty word
    if !has_nontrivial_cycle(a, p) {
        return Err(NormalizationError::TrivialCycleLanguage(p));
    }

    let k = a.radix() as u64;
    for i in 1..=cap {
        if k.checked_pow(i).map_or(true, |r| r > u32::MAX as u64) {
            break;
        }
        let zeros = vec![0u32; i as usize];
        let zeros2 = vec![0u32; 2 * i as usize];
        let tops = vec![a.radix() - 1; i as usize];
        let tops2 = vec![a.radix() - 1; 2 * i as usize];
        let idempotent = (0..a.state_count()).all(|q| {
            a.dfa_run(q, &zeros) == a.dfa_run(q, &zeros2) && a.dfa_run(q, &tops) == a.dfa_run(q, &tops2)
        });
        if !idempotent {
            continue;
        }
        let new_radix = k.pow(i) as u32;
        // candidate letters: block words of length i that loop at p
        let mut letter: Option<u32> = None;
        for digit in 0..new_radix {
            let block = block_digits(digit as u64, a.radix(), i);
            if a.dfa_run(p, &block) == Some(p) {
                if digit != 0 {
                    letter = Some(digit);
                    break;
                }
                letter.get_or_insert(digit);
            }
        }
        let Some(letter) = letter else { continue };
        let transformed = set.base_power_transform(i)?;
        let blocked = blocked_automaton(a, i, new_radix)?;
        return Ok(Normalization { exponent: i, letter, blocked, transformed, state: p });
    }
    Err(NormalizationError::ExponentCapExceeded(cap))
}

/// Does some nonempty word run from `p` back to `p`?
fn has_nontrivial_cycle(a: &Automaton, p: StateId) -> bool {
    let successors: BTreeSet<StateId> = a.successors_any(p).collect();
    a.reachable_from(&successors).contains(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn msd_evaluation_examples() {
        assert_eq!(eval_msd(&[1, 2, 0], 3).unwrap(), 15);
        assert_eq!(eval_msd(&[], 3).unwrap(), 0);
        assert_eq!(eval_msd(&[2, 1, 1], 3).unwrap(), 22);
        assert!(matches!(eval_msd(&[3], 3), Err(BaseKError::DigitOutOfRange { .. })));
    }

    #[test]
    fn canonical_expansion_examples() {
        assert_eq!(canonical_expansion(22, 3), vec![2, 1, 1]);
        assert_eq!(canonical_expansion(0, 3), Vec::<u32>::new());
        for n in 0..2000u64 {
            assert_eq!(eval_msd(&canonical_expansion(n, 5), 5).unwrap(), n);
        }
    }

    #[test]
    fn membership_of_running_example_cycle_set() {
        let x = corpus::ternary_cycle_set();
        assert!(x.member(22)); // digits 2,1,1
        assert!(x.member(0)); // empty word
        assert!(!x.member(18)); // digits 2,0,0
    }

    #[test]
    fn member_matches_arithmetic_for_multiples() {
        let x = corpus::multiples_of(3, 2);
        for n in 0..1000u64 {
            assert_eq!(x.member(n), n % 3 == 0, "n = {n}");
        }
    }

    #[test]
    fn empty_language_has_no_members() {
        let a = Automaton::builder(2, 1).unwrap().states(1).initial([0]).build().unwrap();
        let x = BaseKSet::new(a).unwrap();
        assert!(x.enumerate(100).is_empty());
    }

    #[test]
    fn enumerate_powers() {
        let x = corpus::powers_of_base(2);
        assert_eq!(x.enumerate(100), vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn zero_closed_accepts_all_expansions() {
        let x = corpus::multiples_of(3, 2);
        let star = x.zero_closed();
        for n in 0..200u64 {
            for pad in 0..3usize {
                let mut w = vec![0u32; pad];
                w.extend(canonical_expansion(n, 2));
                assert_eq!(star.accepts(&w), n % 3 == 0, "n={n} pad={pad}");
            }
        }
    }

    #[test]
    fn base_power_transform_preserves_membership() {
        for i in [1u32, 2, 3] {
            let x = corpus::ternary_cycle_set();
            let y = x.base_power_transform(i).unwrap();
            assert_eq!(y.radix(), 3u32.pow(i));
            for n in 0..500u64 {
                assert_eq!(x.member(n), y.member(n), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn transform_requires_positive_exponent() {
        let x = corpus::powers_of_base(2);
        assert!(matches!(x.base_power_transform(0), Err(BaseKError::ZeroExponent)));
    }

    #[test]
    fn normalization_of_running_example() {
        let x = corpus::ternary_cycle_set();
        let norm = find_normalization(&x, 2, 12).unwrap();
        assert_eq!(norm.exponent, 1);
        assert_eq!(norm.letter, 1);
        assert_eq!(norm.state, 2);
    }

    #[test]
    fn normalization_with_two_step_loop() {
        // shortest loop word at p=0 has length 2: 0 -> 1 -> 0 on digits 1,1;
        // digit 0 dead everywhere keeps 0 idempotent
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([0])
            .edge(0, 1, 1)
            .edge(1, 1, 0)
            .build()
            .unwrap();
        let x = BaseKSet::new(a).unwrap();
        let norm = find_normalization(&x, 0, 12).unwrap();
        assert_eq!(norm.exponent, 2);
        // new radix 4, letter is the block "11" = 3
        assert_eq!(norm.letter, 3);
    }

    #[test]
    fn normalization_zero_loop_only() {
        // p loops on 0 only; the letter collapses to 0
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .build()
            .unwrap();
        let x = BaseKSet::new(a).unwrap();
        let norm = find_normalization(&x, 0, 12).unwrap();
        assert_eq!((norm.exponent, norm.letter), (1, 0));
    }

    #[test]
    fn normalization_rejects_trivial_cycle() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([1])
            .edge(0, 1, 1)
            .build()
            .unwrap();
        let x = BaseKSet::new(a).unwrap();
        assert!(matches!(
            find_normalization(&x, 0, 12),
            Err(NormalizationError::TrivialCycleLanguage(0))
        ));
    }
}
