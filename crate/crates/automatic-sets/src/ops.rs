//! The automaton algebra: determinization, minimization, boolean products,
//! quotients, reversal, path languages, counting and sparseness.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::alphabet::{Symbol, Word};
use crate::automaton::{Automaton, StateId};
use crate::error::AutomatonError;

/// Pointwise boolean combinations of two languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
    Iff,
}

impl Automaton {
    /// Reachable subset construction. The result is deterministic and
    /// complete; the empty subset acts as the explicit sink.
    pub fn determinize(&self) -> Automaton {
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

        let start = intern(self.initial().clone(), &mut subsets);
        let mut builder = Automaton::builder(self.radix(), self.tracks()).unwrap().initial([start]);
        let mut finals = Vec::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = BTreeSet::from([start]);
        while let Some(id) = queue.pop_front() {
            let subset = subsets[id].clone();
            if subset.iter().any(|q| self.is_final(*q)) {
                finals.push(id);
            }
            for sym in self.alphabet().symbols() {
                let next = self.step_set(&subset, sym);
                let nid = intern(next, &mut subsets);
                builder = builder.edge(id, sym, nid);
                if seen.insert(nid) {
                    queue.push_back(nid);
                }
            }
        }
        builder.states(subsets.len()).finals(finals).build().expect("subset construction is valid")
    }

    /// Minimal trim deterministic automaton for the same language. The
    /// transition function of the result may be partial; the empty language
    /// minimizes to an automaton with no states at all.
    pub fn minimize(&self) -> Automaton {
        let dfa = if self.is_deterministic() { self.clone() } else { self.determinize() };
        let dfa = dfa.determinize(); // also completes an already-deterministic input
        let n = dfa.state_count();
        if n == 0 {
            return dfa;
        }

        // Moore partition refinement on the complete DFA.
        let mut class: Vec<usize> = (0..n).map(|q| usize::from(dfa.is_final(q))).collect();
        let mut class_count = 2;
        loop {
            let mut signature_ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next_class = vec![0usize; n];
            for q in 0..n {
                let sig: Vec<usize> = dfa
                    .alphabet()
                    .symbols()
                    .map(|sym| class[dfa.dfa_step(q, sym).expect("complete DFA")])
                    .collect();
                let key = (class[q], sig);
                let next_id = signature_ids.len();
                let id = *signature_ids.entry(key).or_insert(next_id);
                next_class[q] = id;
            }
            let next_count = signature_ids.len();
            if next_count == class_count {
                class = next_class;
                break;
            }
            class = next_class;
            class_count = next_count;
        }

        // Quotient, then trim away the dead part and renumber by BFS.
        let init_class = class[*dfa.initial().iter().next().expect("determinized automaton has an initial state")];
        let mut builder = Automaton::builder(self.radix(), self.tracks()).unwrap();
        let mut finals = BTreeSet::new();
        let mut edges: BTreeSet<(usize, Symbol, usize)> = BTreeSet::new();
        for q in 0..n {
            if dfa.is_final(q) {
                finals.insert(class[q]);
            }
            for sym in dfa.alphabet().symbols() {
                edges.insert((class[q], sym, class[dfa.dfa_step(q, sym).unwrap()]));
            }
        }
        let class_count = class.iter().copied().max().unwrap() + 1;
        for &(s, sym, d) in &edges {
            builder = builder.edge(s, sym, d);
        }
        let quotient = builder
            .states(class_count)
            .initial([init_class])
            .finals(finals)
            .build()
            .expect("quotient construction is valid");
        quotient.trim().bfs_renumbered()
    }

    /// Renumber states by BFS discovery order from the initial states,
    /// scanning symbols in increasing order. Unreachable states keep dense
    /// indices after all reachable ones.
    pub(crate) fn bfs_renumbered(&self) -> Automaton {
        let mut order: Vec<StateId> = Vec::new();
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &q in self.initial() {
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for sym in self.alphabet().symbols() {
                for d in self.successors(q, sym) {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        for q in 0..self.state_count() {
            if !seen[q] {
                order.push(q);
            }
        }
        let map: BTreeMap<StateId, StateId> =
            order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut builder = Automaton::builder(self.radix(), self.tracks()).unwrap().states(self.state_count());
        for (src, sym, dst) in self.transitions() {
            builder = builder.edge(map[&src], sym, map[&dst]);
        }
        builder
            .initial(self.initial().iter().map(|q| map[q]))
            .finals(self.finals().iter().map(|q| map[q]))
            .build()
            .expect("renumbering is valid")
    }

    /// Product construction for pointwise boolean combinations. Inputs are
    /// determinized (hence completed) first; the reachable product of an
    /// `iff` on machines with `m1` and `m2` states has at most `m1 * m2`
    /// states before trimming, which is asserted in test builds.
    pub fn boolean_combine(&self, other: &Automaton, op: BoolOp) -> Result<Automaton, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let a = self.determinize();
        let b = other.determinize();
        let keep = |fa: bool, fb: bool| match op {
            BoolOp::Union => fa || fb,
            BoolOp::Intersect => fa && fb,
            BoolOp::Difference => fa && !fb,
            BoolOp::Iff => fa == fb,
        };

        let mut ids: BTreeMap<(StateId, StateId), usize> = BTreeMap::new();
        let mut pairs: Vec<(StateId, StateId)> = Vec::new();
        let start = (
            *a.initial().iter().next().expect("complete DFA"),
            *b.initial().iter().next().expect("complete DFA"),
        );
        ids.insert(start, 0);
        pairs.push(start);
        let mut builder = Automaton::builder(self.radix(), self.tracks())?.initial([0usize]);
        let mut finals = Vec::new();
        let mut at = 0usize;
        while at < pairs.len() {
            let (qa, qb) = pairs[at];
            if keep(a.is_final(qa), b.is_final(qb)) {
                finals.push(at);
            }
            for sym in a.alphabet().symbols() {
                let next = (a.dfa_step(qa, sym).unwrap(), b.dfa_step(qb, sym).unwrap());
                let next_id = *ids.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                builder = builder.edge(at, sym, next_id);
            }
            at += 1;
        }
        debug_assert!(
            pairs.len() <= a.state_count() * b.state_count(),
            "product exceeded the m1*m2 state bound"
        );
        builder.states(pairs.len()).finals(finals).build()
    }

    /// The language `{v : uv in L}`. Follows the fresh-initial-state
    /// construction, so a deterministic input with `m` states yields at most
    /// `m + 1` states (asserted in test builds).
    pub fn left_quotient(&self, prefix: &[Symbol]) -> Automaton {
        let dfa = if self.is_deterministic() { self.clone() } else { self.determinize() };
        let m = dfa.state_count();
        let fresh = m;
        let mut builder = Automaton::builder(dfa.radix(), dfa.tracks())
            .unwrap()
            .states(m + 1)
            .initial([fresh]);
        let mut finals: BTreeSet<StateId> = dfa.finals().clone();
        if dfa.accepts(prefix) {
            finals.insert(fresh);
        }
        for (src, sym, dst) in dfa.transitions() {
            builder = builder.edge(src, sym, dst);
        }
        let landing = dfa.initial().iter().next().and_then(|&q0| dfa.dfa_run(q0, prefix));
        if let Some(q) = landing {
            for sym in dfa.alphabet().symbols() {
                if let Some(d) = dfa.dfa_step(q, sym) {
                    builder = builder.edge(fresh, sym, d);
                }
            }
        }
        let out = builder.finals(finals).build().expect("quotient construction is valid");
        debug_assert!(out.state_count() <= m + 1);
        out
    }

    /// The reversal: accepts exactly the reversed words of the language.
    pub fn reverse(&self) -> Automaton {
        let mut builder = Automaton::builder(self.radix(), self.tracks())
            .unwrap()
            .states(self.state_count())
            .initial(self.finals().iter().copied())
            .finals(self.initial().iter().copied());
        for (src, sym, dst) in self.transitions() {
            builder = builder.edge(dst, sym, src);
        }
        builder.build().expect("reversal is valid")
    }

    /// The path language `L_{p -> q}`: words labeling a run from `p` to `q`.
    /// For `p = q` this is the cycle language, which always contains the
    /// empty word and is closed under concatenation.
    pub fn path_language(&self, p: StateId, q: StateId) -> Result<Automaton, AutomatonError> {
        for s in [p, q] {
            if s >= self.state_count() {
                return Err(AutomatonError::StateOutOfRange { state: s, states: self.state_count() });
            }
        }
        self.with_initial_finals([p], [q])
    }

    /// Induced subautomaton on a state subset: transitions restricted to the
    /// subset, initial states are the inherited ones plus every state
    /// entered from outside. Returns the automaton together with the
    /// old-to-new state mapping.
    pub fn induced_subautomaton(
        &self,
        subset: &BTreeSet<StateId>,
    ) -> Result<(Automaton, BTreeMap<StateId, StateId>), AutomatonError> {
        for &q in subset {
            if q >= self.state_count() {
                return Err(AutomatonError::StateOutOfRange { state: q, states: self.state_count() });
            }
        }
        let (mut restricted, map) = self.restrict(subset);
        let mut initial: BTreeSet<StateId> =
            self.initial().iter().filter_map(|q| map.get(q)).copied().collect();
        for (src, _, dst) in self.transitions() {
            if !subset.contains(&src) {
                if let Some(&new) = map.get(&dst) {
                    initial.insert(new);
                }
            }
        }
        restricted = restricted.with_initial_finals(initial, restricted.finals().iter().copied())?;
        Ok((restricted, map))
    }

    /// Language equality, decided by product reachability on the
    /// determinized machines.
    pub fn equivalent(&self, other: &Automaton) -> Result<bool, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let a = self.determinize();
        let b = other.determinize();
        let start = (
            *a.initial().iter().next().unwrap(),
            *b.initial().iter().next().unwrap(),
        );
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((qa, qb)) = queue.pop_front() {
            if a.is_final(qa) != b.is_final(qb) {
                return Ok(false);
            }
            for sym in a.alphabet().symbols() {
                let next = (a.dfa_step(qa, sym).unwrap(), b.dfa_step(qb, sym).unwrap());
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(true)
    }

    /// True iff the language is finite: no cycle survives in the trim part.
    pub fn is_finite_language(&self) -> bool {
        let trim = self.trim();
        let scc = trim.scc_decompose();
        (0..scc.component_count()).all(|c| !scc.has_cycle(&trim, c))
    }

    /// Exact number of accepted words of length at most `n`, by layered
    /// dynamic programming on the determinized automaton.
    pub fn count_words_upto(&self, n: usize) -> BigUint {
        let dfa = if self.is_deterministic() { self.clone() } else { self.determinize() };
        let m = dfa.state_count();
        let mut layer: Vec<BigUint> = vec![BigUint::zero(); m];
        for &q in dfa.initial() {
            layer[q] += 1u32;
        }
        let mut total = BigUint::zero();
        let count_finals = |layer: &[BigUint]| -> BigUint {
            dfa.finals().iter().map(|&q| layer[q].clone()).sum()
        };
        total += count_finals(&layer);
        for _ in 0..n {
            let mut next: Vec<BigUint> = vec![BigUint::zero(); m];
            for q in 0..m {
                if layer[q].is_zero() {
                    continue;
                }
                for (_, d) in dfa.transitions_from(q) {
                    next[d] += &layer[q];
                }
            }
            layer = next;
            total += count_finals(&layer);
        }
        total
    }

    /// Structural sparseness: polynomial growth iff in the trim minimal DFA
    /// every strongly connected component is a simple cycle (at most one
    /// within-component edge per state, counted with symbol multiplicity).
    /// The alternative is growth `>= C^n` along a branching component.
    pub fn is_sparse(&self) -> bool {
        let m = self.minimize();
        let scc = m.scc_decompose();
        for comp in &scc.components {
            let inside: BTreeSet<StateId> = comp.iter().copied().collect();
            for &q in comp {
                let within = m.transitions_from(q).filter(|(_, d)| inside.contains(d)).count();
                if within > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// All words of length at most `max_len`, in length-lexicographic order.
    /// Exponential; meant for oracles and other desk-scale enumeration.
    pub fn words_upto(alphabet: crate::alphabet::Alphabet, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for sym in alphabet.symbols() {
                    let mut w2 = w.clone();
                    w2.push(sym);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn one_zero_star() -> Automaton {
        // 1 0* over radix 2
        Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([1])
            .edge(0, 1, 1)
            .edge(1, 0, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn determinize_preserves_empty_word_acceptance() {
        let nfa = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0, 1])
            .finals([1])
            .build()
            .unwrap();
        let dfa = nfa.determinize();
        assert!(dfa.is_deterministic());
        assert!(dfa.accepts(&[]));
    }

    #[test]
    fn determinize_is_idempotent_up_to_language() {
        let a = one_zero_star();
        let d = a.determinize();
        assert!(a.equivalent(&d).unwrap());
    }

    #[test]
    fn minimize_drops_unreachable_state() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(3) // state 2 unreachable
            .initial([0])
            .finals([1])
            .edge(0, 1, 1)
            .edge(1, 0, 1)
            .edge(2, 0, 2)
            .build()
            .unwrap();
        let m = a.minimize();
        assert_eq!(m.state_count(), 2);
        assert!(a.equivalent(&m).unwrap());
        assert_eq!(m.minimize().state_count(), 2);
    }

    #[test]
    fn minimize_empty_language_has_no_final_state() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([])
            .edge(0, 0, 1)
            .build()
            .unwrap();
        let m = a.minimize();
        assert_eq!(m.finals().len(), 0);
        assert_eq!(m.state_count(), 0);
    }

    #[test]
    fn iff_of_anything_with_itself_is_universal() {
        let a = one_zero_star();
        let u = a.boolean_combine(&a, BoolOp::Iff).unwrap();
        for w in Automaton::words_upto(a.alphabet(), 6) {
            assert!(u.accepts(&w));
        }
    }

    #[test]
    fn intersect_of_disjoint_sets_is_empty() {
        // evens end in 0, odds end in 1 (over canonical expansions this is
        // messy, so use plain last-digit languages)
        let evens = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .edge(0, 1, 1)
            .edge(1, 0, 0)
            .edge(1, 1, 1)
            .build()
            .unwrap();
        let odds = evens.with_initial_finals([0], [1]).unwrap();
        let both = evens.boolean_combine(&odds, BoolOp::Intersect).unwrap();
        assert!(both.minimize().state_count() == 0);
    }

    #[test]
    fn left_quotient_by_empty_word_preserves_language() {
        let a = one_zero_star();
        let q = a.left_quotient(&[]);
        assert!(a.equivalent(&q).unwrap());
        assert!(q.state_count() <= a.determinize().state_count() + 1);
    }

    #[test]
    fn reverse_of_one_zero_star() {
        let a = one_zero_star();
        let r = a.reverse();
        assert!(r.accepts(&[1]));
        assert!(r.accepts(&[0, 0, 1]));
        assert!(!r.accepts(&[1, 0]));
        assert!(r.reverse().equivalent(&a).unwrap());
    }

    #[test]
    fn cycle_language_of_running_example() {
        let a = corpus::ternary_example();
        let cyc = a.path_language(2, 2).unwrap();
        assert!(cyc.accepts(&[]));
        assert!(cyc.accepts(&[0]));
        assert!(cyc.accepts(&[1]));
        assert!(cyc.accepts(&[2, 1]));
        assert!(cyc.accepts(&[2, 0, 1]));
        assert!(!cyc.accepts(&[2]));
    }

    #[test]
    fn path_language_trivial_when_no_loops() {
        let a = Automaton::builder(2, 1)
            .unwrap()
            .states(2)
            .initial([0])
            .finals([1])
            .edge(0, 0, 1)
            .build()
            .unwrap();
        let cyc = a.path_language(0, 0).unwrap();
        assert!(cyc.accepts(&[]));
        for w in Automaton::words_upto(a.alphabet(), 4) {
            if !w.is_empty() {
                assert!(!cyc.accepts(&w), "unexpected cycle word {w:?}");
            }
        }
    }

    #[test]
    fn induced_subautomaton_entry_states() {
        let a = corpus::ternary_example();
        // the leaf component {q1, q2}: q2 is entered from q0 on digit 1
        let sub: BTreeSet<usize> = [1, 2].into_iter().collect();
        let (ind, map) = a.induced_subautomaton(&sub).unwrap();
        assert!(ind.initial().contains(&map[&2]));
        assert!(!ind.initial().contains(&map[&1]));

        // taking the whole state set keeps the initial states and transitions
        let all: BTreeSet<usize> = (0..3).collect();
        let (whole, _) = a.induced_subautomaton(&all).unwrap();
        assert!(whole.initial().is_superset(a.initial()));
        assert_eq!(whole.transitions().count(), a.transitions().count());
    }

    #[test]
    fn finite_language_detection() {
        let empty = Automaton::builder(2, 1).unwrap().states(1).initial([0]).build().unwrap();
        assert!(empty.is_finite_language());
        let zero_star = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .build()
            .unwrap();
        assert!(!zero_star.is_finite_language());
    }

    #[test]
    fn count_words_geometric() {
        let universal = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .edge(0, 1, 0)
            .build()
            .unwrap();
        assert_eq!(universal.count_words_upto(3), BigUint::from(15u32));
        assert_eq!(one_zero_star().count_words_upto(5), BigUint::from(5u32));
    }

    #[test]
    fn sparseness_of_simple_languages() {
        assert!(one_zero_star().is_sparse());
        let universal = Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .edge(0, 1, 0)
            .build()
            .unwrap();
        assert!(!universal.is_sparse());
    }
}
