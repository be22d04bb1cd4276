//! The headline classifier.
//!
//! Every base-k set falls into exactly one of three classes:
//!
//! - `PRESBURGER`: eventually periodic, hence definable from addition
//!   alone;
//! - `KN_INTERDEFINABLE`: not eventually periodic but definable from the
//!   powers of k; by structure, such a set and the power set define each
//!   other;
//! - `DEFINES_VK`: everything else; adjoining such a set to addition
//!   defines the dividing-power function and with it every k-automatic
//!   set.
//!
//! The decision runs on the trim minimal automaton: periodicity is decided
//! exactly by the logic engine; power-definability holds when every cycle
//! language of a non-leaf component is sparse and every leaf component's
//! cycle language is sparse or an exact congruence language. Only the
//! congruence search is bounded, so only a negative answer can be
//! bound-limited, and it is flagged as such.

mod congruence;
mod piecea;
mod semenov;

pub use congruence::{
    congruence_language, find_congruence_witness, search_congruence_witness, CongruenceWitness,
};
pub use piecea::CycleSetFormula;
pub use semenov::{semenov_decompose, Branch, Link, SemenovDecomposition};

use std::fmt;

use thiserror::Error;

use crate::automaton::{Automaton, StateId};
use crate::basek::BaseKSet;
use crate::logic::{is_eventually_periodic_with, CompileOptions, LogicError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DichotomyError {
    #[error("operation requires a set that is not eventually periodic")]
    EventuallyPeriodic,
    #[error("decomposition requires a power-definable set")]
    NotPowerDefinable,
    #[error("state {0} out of range")]
    InvalidState(StateId),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Automaton(#[from] crate::error::AutomatonError),
}

/// The trichotomy verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Presburger,
    KnInterdefinable,
    DefinesVk,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Presburger => write!(f, "PRESBURGER"),
            Verdict::KnInterdefinable => write!(f, "KN_INTERDEFINABLE"),
            Verdict::DefinesVk => write!(f, "DEFINES_VK"),
        }
    }
}

/// Case split on the zero digit at a state (shared shape with the
/// approximation module's context cases).
pub fn classify_state_case(a: &Automaton, p: StateId) -> Result<crate::approx::StateCase, DichotomyError> {
    if p >= a.state_count() {
        return Err(DichotomyError::InvalidState(p));
    }
    let scc = a.scc_decompose();
    Ok(match a.dfa_step(p, 0) {
        Some(q) if q == p => crate::approx::StateCase::I,
        Some(q) if scc.component_of(q) == scc.component_of(p) => crate::approx::StateCase::III,
        _ => crate::approx::StateCase::II,
    })
}

/// Per-component structural evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccEvidence {
    pub states: Vec<StateId>,
    pub leaf: bool,
    /// Within-component transition on every digit from every state?
    pub complete: bool,
    /// Sparseness of the representative cycle language.
    pub sparse: bool,
    /// Exact congruence witness, when one was searched for and found.
    pub congruence: Option<CongruenceWitness>,
    pub tested_state: StateId,
}

/// The classifier's full output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    /// Present exactly for `PRESBURGER`: `(period, start)`.
    pub periodicity_witness: Option<(u64, u64)>,
    pub scc_evidence: Vec<SccEvidence>,
    /// Present exactly for `DEFINES_VK`: a state whose cycle language is
    /// neither sparse nor congruence (within the bound).
    pub failing_state: Option<StateId>,
    /// True when the congruence search ran out of bound on some non-sparse
    /// leaf; only negative answers can be bound limited.
    pub bound_limited: bool,
    /// The trim minimal automaton the evidence refers to.
    pub minimized: Automaton,
}

/// Classifier knobs.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Congruence search bound: moduli and length periods up to this value.
    pub congruence_bound: u64,
    pub compile: CompileOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { congruence_bound: 24, compile: CompileOptions::default() }
    }
}

/// Power-definability with evidence: condition (a) every non-leaf cycle
/// language sparse, condition (b) every leaf cycle language sparse or an
/// exact congruence language within the bound.
pub fn is_kn_definable(
    set: &BaseKSet,
    options: &ClassifyOptions,
) -> Result<(bool, Vec<SccEvidence>, Option<StateId>, bool), DichotomyError> {
    let mm = set.automaton().minimize();
    let scc = mm.scc_decompose();
    let mut evidence = Vec::new();
    let mut failing = None;
    let mut bound_limited = false;
    for comp in &scc.components {
        let c = scc.component_of(comp[0]);
        let leaf = scc.is_leaf(c);
        let q = comp[0];
        let cycle = mm.path_language(q, q)?;
        let sparse = cycle.is_sparse();
        // one state per component suffices: sparseness of one cycle
        // language propagates through the component; in debug builds check
        // the rest agree
        #[cfg(debug_assertions)]
        for &other in comp.iter().skip(1) {
            debug_assert_eq!(mm.path_language(other, other)?.is_sparse(), sparse);
        }
        let complete = mm.is_complete_scc(comp)?;
        let mut congruence = None;
        if !sparse {
            if leaf {
                congruence = search_congruence_witness(&cycle, options.congruence_bound)?;
                if congruence.is_none() && failing.is_none() {
                    failing = Some(q);
                    bound_limited = true;
                }
            } else if failing.is_none() {
                failing = Some(q);
            }
        }
        evidence.push(SccEvidence { states: comp.clone(), leaf, complete, sparse, congruence, tested_state: q });
    }
    Ok((failing.is_none(), evidence, failing, bound_limited))
}

/// Classify a base-k set into the trichotomy with machine-checkable
/// evidence.
pub fn classify(set: &BaseKSet, options: &ClassifyOptions) -> Result<ClassificationReport, DichotomyError> {
    let minimized = set.automaton().minimize();
    let (periodic, witness) = is_eventually_periodic_with(set, &options.compile)?;
    if periodic {
        // structural evidence still reported, without congruence searches
        let scc = minimized.scc_decompose();
        let mut evidence = Vec::new();
        for comp in &scc.components {
            let c = scc.component_of(comp[0]);
            let q = comp[0];
            evidence.push(SccEvidence {
                states: comp.clone(),
                leaf: scc.is_leaf(c),
                complete: minimized.is_complete_scc(comp)?,
                sparse: minimized.path_language(q, q)?.is_sparse(),
                congruence: None,
                tested_state: q,
            });
        }
        return Ok(ClassificationReport {
            verdict: Verdict::Presburger,
            periodicity_witness: witness,
            scc_evidence: evidence,
            failing_state: None,
            bound_limited: false,
            minimized,
        });
    }
    let (definable, evidence, failing, bound_limited) = is_kn_definable(set, options)?;
    if definable {
        Ok(ClassificationReport {
            verdict: Verdict::KnInterdefinable,
            periodicity_witness: None,
            scc_evidence: evidence,
            failing_state: None,
            bound_limited: false,
            minimized,
        })
    } else {
        Ok(ClassificationReport {
            verdict: Verdict::DefinesVk,
            periodicity_witness: None,
            scc_evidence: evidence,
            failing_state: failing,
            bound_limited,
            minimized,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn state_case_examples() {
        let a = corpus::ternary_example();
        assert_eq!(classify_state_case(&a, 2).unwrap(), crate::approx::StateCase::I);
        // a state without a zero transition
        let b = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 1, 0)
            .build()
            .unwrap();
        assert_eq!(classify_state_case(&b, 0).unwrap(), crate::approx::StateCase::II);
        // zero goes to a different state of the same component
        let c = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([0])
            .edge(0, 0, 1)
            .edge(1, 0, 1)
            .edge(1, 1, 0)
            .build()
            .unwrap();
        assert_eq!(classify_state_case(&c, 0).unwrap(), crate::approx::StateCase::III);
    }

    #[test]
    fn corpus_verdicts() {
        let opts = ClassifyOptions::default();
        let mult3 = classify(&corpus::multiples_of(3, 2), &opts).unwrap();
        assert_eq!(mult3.verdict, Verdict::Presburger);
        assert_eq!(mult3.periodicity_witness, Some((3, 0)));

        let powers = classify(&corpus::powers_of_base(2), &opts).unwrap();
        assert_eq!(powers.verdict, Verdict::KnInterdefinable);
        assert!(powers.periodicity_witness.is_none());

        let evil = classify(&corpus::evil_numbers(), &opts).unwrap();
        assert_eq!(evil.verdict, Verdict::DefinesVk);
        assert!(evil.failing_state.is_some());
        assert!(evil.bound_limited);
    }

    #[test]
    fn report_invariants() {
        let opts = ClassifyOptions::default();
        for set in [
            corpus::multiples_of(3, 2),
            corpus::powers_of_base(2),
            corpus::evil_numbers(),
            corpus::ternary_cycle_set(),
        ] {
            let report = classify(&set, &opts).unwrap();
            assert_eq!(report.verdict == Verdict::Presburger, report.periodicity_witness.is_some());
            assert_eq!(report.verdict == Verdict::DefinesVk, report.failing_state.is_some());
        }
    }
}
