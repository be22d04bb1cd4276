//! Cycle-set membership through the first-order formula route.
//!
//! For a set that is not eventually periodic, membership of `n` in the
//! cycle set of a state `q` of the trim minimal automaton can be expressed
//! with addition and membership in the set itself: pick a prefix word `u`
//! reaching `q`, words that separate the states by their acceptance
//! vectors, and a padding bound from the pumping argument; then `n` is in
//! the cycle set exactly when, for some padding below the bound, the
//! composite values `[u 0^i v w_s]` behave on every separator like
//! `[u w_s]` does. This module evaluates that condition arithmetically,
//! as an independent route to compare against direct membership.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::basek::{canonical_expansion, eval_msd, BaseKSet};
use crate::logic::is_eventually_periodic;

use super::DichotomyError;

/// Precomputed data for formula-route membership over one set.
#[derive(Debug, Clone)]
pub struct CycleSetFormula {
    set: BaseKSet,
    minimized: Automaton,
    separators: Vec<Vec<u32>>,
    pad_bound: u32,
}

impl CycleSetFormula {
    /// Validates the hypothesis: the set must not be eventually periodic.
    pub fn new(set: &BaseKSet) -> Result<Self, DichotomyError> {
        let (periodic, _) = is_eventually_periodic(set)?;
        if periodic {
            return Err(DichotomyError::EventuallyPeriodic);
        }
        let minimized = set.automaton().minimize();
        let separators = separating_words(&minimized);
        let pad_bound = minimized.state_count() as u32;
        Ok(CycleSetFormula { set: set.clone(), minimized, separators, pad_bound })
    }

    /// The trim minimal automaton the states refer to.
    pub fn automaton(&self) -> &Automaton {
        &self.minimized
    }

    /// Membership of `n` in the cycle set of `q`, by the formula route.
    pub fn formula_member(&self, q: StateId, n: u64) -> Result<bool, DichotomyError> {
        if q >= self.minimized.state_count() {
            return Err(DichotomyError::InvalidState(q));
        }
        let k = self.minimized.radix() as u128;
        let q0 = *self.minimized.initial().iter().next().expect("trim automaton has an initial state");
        let prefix = shortest_word_to(&self.minimized, q0, q).ok_or(DichotomyError::InvalidState(q))?;
        let prefix_value = eval_msd(&prefix, self.minimized.radix()).expect("short prefix fits") as u128;
        let expansion = canonical_expansion(n, self.minimized.radix());
        let digits = expansion.len() as u32;

        for pad in 0..self.pad_bound.max(1) {
            // ell = k^{pad + digits}: the power marking the padded length
            let ell = k.pow(pad + digits);
            let mut all_agree = true;
            for w in &self.separators {
                let w_value = eval_msd(w, self.minimized.radix()).expect("separators are short") as u128;
                let w_scale = k.pow(w.len() as u32);
                let composite = prefix_value * ell * w_scale + n as u128 * w_scale + w_value;
                let direct = prefix_value * w_scale + w_value;
                let lhs = u64::try_from(composite).ok().map(|v| self.set.member(v)).unwrap_or(false);
                let rhs = u64::try_from(direct).ok().map(|v| self.set.member(v)).unwrap_or(false);
                if lhs != rhs {
                    all_agree = false;
                    break;
                }
            }
            if all_agree {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Direct membership in the cycle set of `q`, for cross-checks.
    pub fn direct_member(&self, q: StateId, n: u64) -> Result<bool, DichotomyError> {
        if q >= self.minimized.state_count() {
            return Err(DichotomyError::InvalidState(q));
        }
        let cycle = self.minimized.path_language(q, q)?;
        Ok(BaseKSet::new(cycle).expect("single track").member(n))
    }
}

/// Shortest word from `from` to `to` (BFS in symbol order).
fn shortest_word_to(a: &Automaton, from: StateId, to: StateId) -> Option<Vec<u32>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut parent: BTreeMap<StateId, (StateId, u32)> = BTreeMap::new();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for sym in a.alphabet().symbols() {
            if let Some(d) = a.dfa_step(q, sym) {
                if seen.insert(d) {
                    parent.insert(d, (q, sym));
                    if d == to {
                        let mut word = Vec::new();
                        let mut at = to;
                        while at != from {
                            let (prev, sym) = parent[&at];
                            word.push(sym);
                            at = prev;
                        }
                        word.reverse();
                        return Some(word);
                    }
                    queue.push_back(d);
                }
            }
        }
    }
    None
}

/// Words separating every pair of states by acceptance.
fn separating_words(a: &Automaton) -> Vec<Vec<u32>> {
    let n = a.state_count();
    let mut words: BTreeSet<Vec<u32>> = BTreeSet::new();
    for s in 0..n {
        for t in s + 1..n {
            if let Some(w) = separator_for_pair(a, s, t) {
                words.insert(w);
            }
        }
    }
    words.into_iter().collect()
}

/// Shortest word on which exactly one of the two states accepts; `None`
/// when the states are equivalent (impossible on a minimal automaton).
fn separator_for_pair(a: &Automaton, s: StateId, t: StateId) -> Option<Vec<u32>> {
    let accepts = |q: Option<StateId>| q.map(|q| a.is_final(q)).unwrap_or(false);
    let start = (Some(s), Some(t));
    if accepts(start.0) != accepts(start.1) {
        return Some(Vec::new());
    }
    let mut parent: BTreeMap<(Option<StateId>, Option<StateId>), ((Option<StateId>, Option<StateId>), u32)> =
        BTreeMap::new();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        for sym in a.alphabet().symbols() {
            let next = (
                pair.0.and_then(|q| a.dfa_step(q, sym)),
                pair.1.and_then(|q| a.dfa_step(q, sym)),
            );
            if next == (None, None) {
                continue;
            }
            if seen.insert(next) {
                parent.insert(next, (pair, sym));
                if accepts(next.0) != accepts(next.1) {
                    let mut word = Vec::new();
                    let mut at = next;
                    while at != start {
                        let (prev, sym) = parent[&at];
                        word.push(sym);
                        at = prev;
                    }
                    word.reverse();
                    return Some(word);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn rejects_periodic_sets() {
        let x = corpus::multiples_of(3, 2);
        assert!(matches!(CycleSetFormula::new(&x), Err(DichotomyError::EventuallyPeriodic)));
    }

    #[test]
    fn running_example_agreement() {
        let x = BaseKSet::new(corpus::ternary_example()).unwrap();
        let checker = CycleSetFormula::new(&x).unwrap();
        let mm = checker.automaton();
        // the final state of the minimized automaton carries the cycle set
        let q = *mm.finals().iter().next().unwrap();
        assert!(checker.formula_member(q, 22).unwrap());
        assert!(checker.direct_member(q, 22).unwrap());
        assert!(!checker.formula_member(q, 2).unwrap());
        assert!(!checker.direct_member(q, 2).unwrap());
    }

    #[test]
    fn agreement_on_a_sample() {
        let x = corpus::evil_numbers();
        let checker = CycleSetFormula::new(&x).unwrap();
        let mm = checker.automaton().clone();
        for q in 0..mm.state_count() {
            for n in 0..200u64 {
                assert_eq!(
                    checker.formula_member(q, n).unwrap(),
                    checker.direct_member(q, n).unwrap(),
                    "state {q}, n {n}"
                );
            }
        }
    }
}
