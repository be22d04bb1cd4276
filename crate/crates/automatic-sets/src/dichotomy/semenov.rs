//! The sparse-prefix decomposition of a power-definable set.
//!
//! On the trim minimal automaton, every accepted word follows a path
//! through the condensation: a run inside one component, one connecting
//! digit into the next, and so on. The language is thus a finite union of
//! branch languages
//!
//! ```text
//! L(p1, q1) s1 L(p2, q2) s2 ... L(pn, qn)
//! ```
//!
//! where the pieces before the tail live in non-leaf components and are
//! sparse. The decomposition is verified exactly: the reassembled union
//! must be language-equivalent to the input.

use std::collections::BTreeMap;

use crate::automaton::{Automaton, StateId};
use crate::basek::BaseKSet;

use super::{is_kn_definable, ClassifyOptions, DichotomyError};

/// One segment of a branch: the path language inside a component, plus
/// the digit connecting it to the next segment (absent for the tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub from: StateId,
    pub to: StateId,
    pub connector: Option<u32>,
    /// Sparseness certificate; true for every non-tail link.
    pub sparse: bool,
}

/// A chain of links from the initial state to a final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub links: Vec<Link>,
}

/// The full decomposition over the trim minimal automaton.
#[derive(Debug, Clone)]
pub struct SemenovDecomposition {
    pub automaton: Automaton,
    pub branches: Vec<Branch>,
}

impl SemenovDecomposition {
    /// Union automaton of all branch languages, built from disjoint copies
    /// of the base automaton chained with the connector digits.
    pub fn reassembled(&self) -> Automaton {
        let base = &self.automaton;
        let n = base.state_count();
        let copies: usize = self.branches.iter().map(|b| b.links.len()).sum();
        let mut builder = Automaton::builder(base.radix(), 1)
            .unwrap()
            .states(n * copies.max(1));
        let mut offset = 0usize;
        let mut initial = Vec::new();
        let mut finals = Vec::new();
        for branch in &self.branches {
            for (idx, link) in branch.links.iter().enumerate() {
                for (src, sym, dst) in base.transitions() {
                    builder = builder.edge(offset + src, sym, offset + dst);
                }
                if idx == 0 {
                    initial.push(offset + link.from);
                }
                match link.connector {
                    Some(digit) => {
                        // the next link's copy follows this one
                        builder = builder.edge(offset + link.to, digit, offset + n + branch.links[idx + 1].from);
                    }
                    None => finals.push(offset + link.to),
                }
                offset += n;
            }
        }
        builder.initial(initial).finals(finals).build().expect("reassembly is valid")
    }

    /// Exact equivalence of the branch union with the base language.
    pub fn verify(&self) -> Result<bool, DichotomyError> {
        Ok(self.reassembled().equivalent(&self.automaton)?)
    }
}

/// Decompose a power-definable set into sparse-prefixed branches.
/// Fails on sets that are not power definable.
pub fn semenov_decompose(
    set: &BaseKSet,
    options: &ClassifyOptions,
) -> Result<SemenovDecomposition, DichotomyError> {
    let (definable, _, _, _) = is_kn_definable(set, options)?;
    if !definable {
        return Err(DichotomyError::NotPowerDefinable);
    }
    let mm = set.automaton().minimize();
    if mm.state_count() == 0 {
        return Ok(SemenovDecomposition { automaton: mm, branches: Vec::new() });
    }
    let scc = mm.scc_decompose();
    let q0 = *mm.initial().iter().next().expect("trim minimal automaton has an initial state");

    // suffix branches from an entry state, memoized per state
    fn branches_from(
        mm: &Automaton,
        scc: &crate::scc::SccDecomposition,
        entry: StateId,
        memo: &mut BTreeMap<StateId, Vec<Branch>>,
    ) -> Vec<Branch> {
        if let Some(cached) = memo.get(&entry) {
            return cached.clone();
        }
        let mut out = Vec::new();
        let component = scc.component_of(entry);
        for &exit in &scc.components[component] {
            let is_tail = mm.is_final(exit);
            let sparse = mm
                .path_language(entry, exit)
                .expect("states are valid")
                .is_sparse();
            if is_tail {
                out.push(Branch {
                    links: vec![Link { from: entry, to: exit, connector: None, sparse }],
                });
            }
            for (sym, next) in mm.transitions_from(exit) {
                if scc.component_of(next) == component {
                    continue;
                }
                for suffix in branches_from(mm, scc, next, memo) {
                    let mut links = vec![Link { from: entry, to: exit, connector: Some(sym), sparse }];
                    links.extend(suffix.links);
                    out.push(Branch { links });
                }
            }
        }
        memo.insert(entry, out.clone());
        out
    }

    let mut memo = BTreeMap::new();
    let branches = branches_from(&mm, &scc, q0, &mut memo);
    let decomposition = SemenovDecomposition { automaton: mm, branches };
    debug_assert!(decomposition.verify()?, "branch union must equal the language");
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn powers_decompose_into_one_branch() {
        let set = corpus::powers_of_base(2);
        let d = semenov_decompose(&set, &ClassifyOptions::default()).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert_eq!(d.branches[0].links.len(), 2);
        assert!(d.branches[0].links[0].sparse);
        assert!(d.verify().unwrap());
    }

    #[test]
    fn multiples_decompose_within_one_component() {
        let set = corpus::multiples_of(3, 2);
        let d = semenov_decompose(&set, &ClassifyOptions::default()).unwrap();
        assert!(d.verify().unwrap());
    }

    #[test]
    fn refuses_vk_defining_sets() {
        let set = corpus::evil_numbers();
        assert!(matches!(
            semenov_decompose(&set, &ClassifyOptions::default()),
            Err(DichotomyError::NotPowerDefinable)
        ));
    }
}
