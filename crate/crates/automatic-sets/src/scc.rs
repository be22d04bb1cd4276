//! Strongly connected components, the condensation DAG and leaf detection.

use std::collections::BTreeSet;

use crate::alphabet::Symbol;
use crate::automaton::{Automaton, StateId};
use crate::error::AutomatonError;

/// The SCC structure of an automaton's digraph.
///
/// `components` partitions all states (including unreachable ones);
/// components are listed in a topological order of the condensation, so
/// every condensation edge goes from a lower to a higher component index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    pub components: Vec<Vec<StateId>>,
    pub condensation: BTreeSet<(usize, usize)>,
    pub leaf_flags: Vec<bool>,
    component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of(&self, q: StateId) -> usize {
        self.component_of[q]
    }

    pub fn is_leaf(&self, c: usize) -> bool {
        self.leaf_flags[c]
    }

    /// Indices of leaf components.
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.leaf_flags.iter().enumerate().filter(|(_, &l)| l).map(|(c, _)| c)
    }

    /// True when the component contains a cycle (more than one state, or a
    /// self-loop on its single state).
    pub fn has_cycle(&self, a: &Automaton, c: usize) -> bool {
        let comp = &self.components[c];
        if comp.len() > 1 {
            return true;
        }
        let q = comp[0];
        a.successors_any(q).any(|d| d == q)
    }
}

impl Automaton {
    /// Tarjan's algorithm, iterative, followed by a topological reorder of
    /// the components.
    pub fn scc_decompose(&self) -> SccDecomposition {
        let n = self.state_count();
        let mut succ: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (src, _, dst) in self.transitions() {
            succ[src].push(dst);
        }

        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<StateId> = Vec::new();
        let mut next_index = 0usize;
        let mut comps_rev: Vec<Vec<StateId>> = Vec::new();

        // call frames: (state, next child position)
        let mut frames: Vec<(StateId, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            frames.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut child)) = frames.last_mut() {
                if *child < succ[v].len() {
                    let w = succ[v][*child];
                    *child += 1;
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&mut (parent, _)) = frames.last_mut() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps_rev.push(comp);
                    }
                }
            }
        }

        // Tarjan emits components in reverse topological order
        let components: Vec<Vec<StateId>> = comps_rev.into_iter().rev().collect();
        let mut component_of = vec![0usize; n];
        for (c, comp) in components.iter().enumerate() {
            for &q in comp {
                component_of[q] = c;
            }
        }
        let mut condensation = BTreeSet::new();
        for (src, _, dst) in self.transitions() {
            let (a, b) = (component_of[src], component_of[dst]);
            if a != b {
                condensation.insert((a, b));
            }
        }
        let mut leaf_flags = vec![true; components.len()];
        for &(a, _) in &condensation {
            leaf_flags[a] = false;
        }
        SccDecomposition { components, condensation, leaf_flags, component_of }
    }

    /// Does every state of the component keep a transition on every symbol
    /// inside the component? Returns the first missing `(state, symbol)`
    /// pair as evidence, or `None` when the component is complete.
    pub fn scc_missing_transition(
        &self,
        component: &[StateId],
    ) -> Result<Option<(StateId, Symbol)>, AutomatonError> {
        let comp: BTreeSet<StateId> = component.iter().copied().collect();
        for &q in component {
            if q >= self.state_count() {
                return Err(AutomatonError::StateOutOfRange { state: q, states: self.state_count() });
            }
            for sym in self.alphabet().symbols() {
                if !self.successors(q, sym).any(|d| comp.contains(&d)) {
                    return Ok(Some((q, sym)));
                }
            }
        }
        Ok(None)
    }

    /// True iff the component has a within-component transition on every
    /// symbol from every state.
    pub fn is_complete_scc(&self, component: &[StateId]) -> Result<bool, AutomatonError> {
        Ok(self.scc_missing_transition(component)?.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn running_example_components_and_leaf() {
        let a = corpus::ternary_example();
        let scc = a.scc_decompose();
        assert_eq!(scc.component_count(), 2);
        assert_eq!(scc.components[0], vec![0]);
        assert_eq!(scc.components[1], vec![1, 2]);
        assert!(!scc.is_leaf(0));
        assert!(scc.is_leaf(1));
        // condensation is acyclic by the topological ordering invariant
        assert!(scc.condensation.iter().all(|&(a, b)| a < b));
    }

    #[test]
    fn self_loop_singleton_is_leaf() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .build()
            .unwrap();
        let scc = a.scc_decompose();
        assert_eq!(scc.component_count(), 1);
        assert!(scc.is_leaf(0));
        assert!(scc.has_cycle(&a, 0));
    }

    #[test]
    fn dag_automaton_has_singleton_components() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(3)
            .initial([0])
            .finals([2])
            .edge(0, 0, 1)
            .edge(1, 1, 2)
            .edge(0, 1, 2)
            .build()
            .unwrap();
        let scc = a.scc_decompose();
        assert_eq!(scc.component_count(), 3);
        assert!(scc.components.iter().all(|c| c.len() == 1));
        assert!(!scc.has_cycle(&a, 0));
    }

    #[test]
    fn leaf_of_running_example_is_complete() {
        let a = corpus::ternary_example();
        let scc = a.scc_decompose();
        let leaf = scc.leaves().next().unwrap();
        assert!(a.is_complete_scc(&scc.components[leaf]).unwrap());
        // the q0 component is missing nothing within itself? q0 loops on 0,2
        // but has no 1-transition staying inside, so it is incomplete
        assert_eq!(a.scc_missing_transition(&scc.components[0]).unwrap(), Some((0, 1)));
    }
}
