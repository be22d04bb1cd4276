//! The suffix-run approximation on cycle-language sets.
//!
//! For a normalized cycle context (base-power transform applied, digits
//! `0` and `k-1` idempotent, a distinguished digit `a` looping at the
//! state `p`), the approximation assigns to every member `n` of the set
//! the largest power `k^i` with `k^{i-1} <= n` such that a family of
//! shift conditions holds for every shift up to a bound. The value
//! stabilizes once the shift bound reaches `(|Q| + 1)^2` and approximates
//! the suffix-run power `k^{length of the maximal a-suffix of n}` within
//! multiplicative constants computed here ([`CycleContext::lower_bound_exponent`],
//! [`CycleContext::witness_scale_exponent`]).

mod engine;
mod gbuild;
mod tilde;

pub use engine::Evaluator;
pub use gbuild::{build_sum_table, SumTable, SumTableRow};

use std::fmt;

use thiserror::Error;

use crate::automaton::{Automaton, StateId};
use crate::basek::{canonical_expansion, find_normalization, BaseKSet};
use crate::error::NormalizationError;


/// Case split on the zero digit at the distinguished state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateCase {
    /// `delta(p, 0) = {p}`.
    I,
    /// `delta(p, 0)` is empty or leaves the component of `p`.
    II,
    /// `delta(p, 0)` stays in the component but is not `p`.
    III,
}

impl fmt::Display for StateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateCase::I => write!(f, "I"),
            StateCase::II => write!(f, "II"),
            StateCase::III => write!(f, "III"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproxError {
    #[error("{0} is not a member of the context's set")]
    NotMember(u64),
    #[error("undefined at 0")]
    ZeroUndefined,
    #[error("word is not in the cycle language")]
    NotInCycleLanguage,
    #[error("the approximation is not computed in case III; reduce to the zero-target state first")]
    CaseThree,
    #[error("the context is only defined for cases with a zero-loop reduction; state has case {0}")]
    NotReducible(StateCase),
    #[error("shift precondition violated: need k^(i-1) <= n")]
    ExponentTooLarge,
    #[error("context too large for the condition engine (shift bound {0} exceeds 127)")]
    ShiftBoundTooLarge(u32),
    #[error("value overflow in base-k arithmetic")]
    Overflow,
    #[error(transparent)]
    Normalization(#[from] NormalizationError),
    #[error(transparent)]
    Automaton(#[from] crate::error::AutomatonError),
    #[error("the set must be neither sparse nor eventually periodic for this construction")]
    SparseOrPeriodic,
    #[error(transparent)]
    Logic(#[from] crate::logic::LogicError),
}

/// Which side of the shift condition a rejection witness comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Word longer than the shift: the subtractive form
    /// `k^r n - [a^{j-r} 0^r] + [v]`.
    High,
    /// Word of length at most the shift: the additive form
    /// `k^r n + [a^{r-j} v]`.
    Low,
}

/// A rejection of one candidate exponent, with the earliest failing shift
/// and the shortest (then lexicographically least) counterexample word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub exponent: u32,
    pub shift: u32,
    pub witness: Vec<u32>,
    pub side: Side,
    /// The subtractive form went negative for this witness; negative
    /// values count as outside the set, and such decisions are flagged
    /// for audit.
    pub negative_value: bool,
}

/// Full evidence for one approximation evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxTrace {
    pub n: u64,
    pub accepted_exponent: u32,
    pub rejections: Vec<Rejection>,
    /// The approximation value for every shift bound `0..=R`; monotone
    /// non-increasing.
    pub values_by_shift: Vec<u64>,
}

/// A normalized cycle-language context.
#[derive(Debug, Clone)]
pub struct CycleContext {
    automaton: Automaton,
    state: StateId,
    letter: u32,
    case: StateCase,
    set: BaseKSet,
    base_exponent: u32,
    original_radix: u32,
}

impl CycleContext {
    /// Build the context for the cycle language of `a` at `p`, applying
    /// the base-power normalization (exponent capped at 12).
    pub fn from_cycle(a: &Automaton, p: StateId) -> Result<Self, ApproxError> {
        Self::from_cycle_with_cap(a, p, 12)
    }

    pub fn from_cycle_with_cap(a: &Automaton, p: StateId, cap: u32) -> Result<Self, ApproxError> {
        let cycle_set = BaseKSet::new(a.with_initial_finals([p], [p])?)
            .map_err(|e| ApproxError::Normalization(NormalizationError::BaseK(e)))?;
        let norm = find_normalization(&cycle_set, p, cap)?;
        let blocked = norm.blocked;
        let scc = blocked.scc_decompose();
        let case = match blocked.dfa_step(p, 0) {
            Some(q) if q == p => StateCase::I,
            Some(q) if scc.component_of(q) == scc.component_of(p) => StateCase::III,
            _ => StateCase::II,
        };
        let set = BaseKSet::new(blocked.clone())
            .map_err(|e| ApproxError::Normalization(NormalizationError::BaseK(e)))?;
        Ok(CycleContext {
            automaton: blocked,
            state: p,
            letter: norm.letter,
            case,
            set,
            base_exponent: norm.exponent,
            original_radix: a.radix(),
        })
    }

    /// The normalized automaton (initial and final state are both `p`).
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// The distinguished state.
    pub fn state(&self) -> StateId {
        self.state
    }

    /// The distinguished digit `a`.
    pub fn letter(&self) -> u32 {
        self.letter
    }

    pub fn case(&self) -> StateCase {
        self.case
    }

    /// The denoted set (over the normalized radix).
    pub fn set(&self) -> &BaseKSet {
        &self.set
    }

    /// The normalized radix `k` (a power of the input automaton's radix).
    pub fn radix(&self) -> u32 {
        self.automaton.radix()
    }

    /// Exponent of the base-power normalization.
    pub fn base_exponent(&self) -> u32 {
        self.base_exponent
    }

    pub fn original_radix(&self) -> u32 {
        self.original_radix
    }

    /// The shift bound `(|Q| + 1)^2` past which the approximation is
    /// stable.
    pub fn stabilization_bound(&self) -> u32 {
        let q = self.automaton.state_count() as u32;
        (q + 1) * (q + 1)
    }

    /// Is the word in the cycle language at `p`?
    pub fn cycle_word(&self, word: &[u32]) -> bool {
        self.automaton.dfa_run(self.state, word) == Some(self.state)
    }

    /// The suffix-run power of `n` for this context's digit.
    pub fn suffix_power(&self, n: u64) -> Result<u64, ApproxError> {
        suffix_power(n, self.radix(), self.letter)
    }

    /// A batch evaluator sharing caches across many evaluations; the
    /// engine covers shift bounds up to `stabilization_bound() + 3` by
    /// default.
    pub fn evaluator(&self) -> Result<Evaluator<'_>, ApproxError> {
        Evaluator::new(self, self.stabilization_bound() + 3)
    }

    /// Evaluator covering shift bounds up to `max_shift`.
    pub fn evaluator_with_bound(&self, max_shift: u32) -> Result<Evaluator<'_>, ApproxError> {
        Evaluator::new(self, max_shift)
    }

    /// Does the shift condition hold at `(n, i, r)` for every word of
    /// length at most `r + i`? On failure the shortest counterexample is
    /// returned.
    pub fn condition_check(&self, n: u64, i: u32, r: u32) -> Result<(bool, Option<Rejection>), ApproxError> {
        let mut ev = self.evaluator_with_bound(r)?;
        ev.condition_check(n, i, r)
    }

    /// The approximation at shift bound `R`, with its trace.
    pub fn approx(&self, n: u64, shift_bound: u32) -> Result<(u64, ApproxTrace), ApproxError> {
        let mut ev = self.evaluator_with_bound(shift_bound.max(self.stabilization_bound() + 3))?;
        ev.approx(n, shift_bound)
    }

    /// The stabilized approximation, the value at shift bound
    /// `(|Q| + 1)^2`.
    pub fn approx_stable(&self, n: u64) -> Result<u64, ApproxError> {
        let mut ev = self.evaluator()?;
        ev.value(n, self.stabilization_bound())
    }

    /// The pigeonhole exponent: the least `r2` such that the vector of
    /// `a^r`-actions repeats at `r2`. The approximation is at least the
    /// suffix-run power divided by `k^lower_bound_exponent()`.
    pub fn lower_bound_exponent(&self) -> u32 {
        let mut seen: Vec<Vec<Option<StateId>>> = Vec::new();
        let mut current: Vec<Option<StateId>> =
            (0..self.automaton.state_count()).map(Some).collect();
        loop {
            seen.push(current.clone());
            current = current
                .iter()
                .map(|q| q.and_then(|q| self.automaton.dfa_step(q, self.letter)))
                .collect();
            if seen.iter().any(|v| v == &current) {
                return seen.len() as u32;
            }
        }
    }

    /// The witness-scale exponent `|Q| + 2`: whenever the approximation
    /// exceeds the suffix-run power at `n`, some member `n'` with the
    /// same suffix-run power and approximation at least as large satisfies
    /// `n' < k^alpha * approx(n')` for this exponent `alpha`.
    pub fn witness_scale_exponent(&self) -> u32 {
        self.automaton.state_count() as u32 + 2
    }

    /// Check the append-growth inequality: appending `count` copies of the
    /// distinguished digit to a cycle word multiplies the approximation by
    /// at least `k^count`.
    pub fn verify_append_growth(&self, word: &[u32], count: u32) -> Result<bool, ApproxError> {
        if !self.cycle_word(word) {
            return Err(ApproxError::NotInCycleLanguage);
        }
        let k = self.radix();
        let base = crate::basek::eval_msd(word, k).map_err(|_| ApproxError::Overflow)?;
        let mut appended = word.to_vec();
        appended.extend(std::iter::repeat(self.letter).take(count as usize));
        let value = crate::basek::eval_msd(&appended, k).map_err(|_| ApproxError::Overflow)?;
        let f_base = self.approx_stable(base)?;
        let f_appended = self.approx_stable(value)?;
        let scale = (k as u64).checked_pow(count).ok_or(ApproxError::Overflow)?;
        Ok(f_appended >= scale.checked_mul(f_base).ok_or(ApproxError::Overflow)?)
    }

    /// Reduce a case III context to the case I context at the zero
    /// target `p' = delta(p, 0)`.
    pub fn reduce_case_three(&self) -> Result<CycleContext, ApproxError> {
        match self.case {
            StateCase::III => {
                let p_prime = self.automaton.dfa_step(self.state, 0).expect("case III has a zero step");
                let reduced = CycleContext::from_cycle(&self.automaton, p_prime)?;
                debug_assert_eq!(reduced.case, StateCase::I);
                Ok(reduced)
            }
            other => Err(ApproxError::NotReducible(other)),
        }
    }
}

/// The suffix-run power: `k^i` where `i` is the length of the maximal
/// run of the digit `a` at the end of the canonical expansion of `n`.
/// Undefined at 0.
pub fn suffix_power(n: u64, radix: u32, digit: u32) -> Result<u64, ApproxError> {
    if n == 0 {
        return Err(ApproxError::ZeroUndefined);
    }
    let expansion = canonical_expansion(n, radix);
    let run = expansion.iter().rev().take_while(|&&d| d == digit).count();
    (radix as u64).checked_pow(run as u32).ok_or(ApproxError::Overflow)
}

/// Are two naturals related by appending or deleting a trailing run of
/// the digit `a`? Holds exactly when one is `k^i` times the other plus
/// `[a^i]`, for some `i >= 0`.
pub fn suffix_run_equivalent(n1: u64, n2: u64, radix: u32, digit: u32) -> bool {
    let (small, big) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
    let k = radix as u128;
    let a = digit as u128;
    let mut scale = 1u128;
    let mut run = 0u128; // [a^i] = a * (k^i - 1) / (k - 1)
    loop {
        let candidate = small as u128 * scale + run;
        if candidate == big as u128 {
            return true;
        }
        if candidate > big as u128 {
            return false;
        }
        scale *= k;
        run = run * k + a;
    }
}

pub use tilde::offset_value;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    pub(crate) fn running_example_context() -> CycleContext {
        CycleContext::from_cycle(&corpus::ternary_example(), 2).unwrap()
    }

    #[test]
    fn context_of_running_example() {
        let ctx = running_example_context();
        assert_eq!(ctx.radix(), 3);
        assert_eq!(ctx.letter(), 1);
        assert_eq!(ctx.case(), StateCase::I);
        assert_eq!(ctx.base_exponent(), 1);
        assert_eq!(ctx.stabilization_bound(), 16);
        assert_eq!(ctx.witness_scale_exponent(), 5);
        assert_eq!(ctx.lower_bound_exponent(), 2);
    }

    #[test]
    fn suffix_power_examples() {
        assert_eq!(suffix_power(22, 3, 1).unwrap(), 9); // digits 2,1,1
        assert_eq!(suffix_power(24, 2, 0).unwrap(), 8); // largest dividing power
        assert_eq!(suffix_power(5, 3, 1).unwrap(), 1); // digits 1,2: no suffix run
        assert!(matches!(suffix_power(0, 3, 1), Err(ApproxError::ZeroUndefined)));
    }

    #[test]
    fn suffix_run_equivalence_examples() {
        assert!(suffix_run_equivalent(22, 22, 3, 1));
        assert!(suffix_run_equivalent(22, 67, 3, 1)); // 67 = 3*22 + 1
        assert!(!suffix_run_equivalent(22, 23, 3, 1));
        // transitivity spot check: 22 ~ 67 ~ 202
        assert!(suffix_run_equivalent(67, 202, 3, 1));
        assert!(suffix_run_equivalent(22, 202, 3, 1));
    }

    #[test]
    fn case_three_reduction() {
        // p = 0 steps on 0 to p' = 1 inside the same component; p' loops on 0
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([0])
            .edge(0, 0, 1)
            .edge(1, 0, 1)
            .edge(1, 1, 0)
            .edge(0, 1, 0)
            .build()
            .unwrap();
        let ctx = CycleContext::from_cycle(&a, 0).unwrap();
        assert_eq!(ctx.case(), StateCase::III);
        let reduced = ctx.reduce_case_three().unwrap();
        assert_eq!(reduced.case(), StateCase::I);
        assert_eq!(reduced.state(), 1);
        assert!(matches!(reduced.reduce_case_three(), Err(ApproxError::NotReducible(_))));
    }
}
