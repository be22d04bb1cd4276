//! Nondeterministic finite automata over digit-tuple alphabets.
//!
//! States are dense indices `0..state_count`. Transitions are stored per
//! state as `symbol -> set of successors`; a missing entry means no
//! transition (partial automata are first class, the completion with an
//! explicit sink happens only inside the operations that need it).
//! Automata are immutable after construction and every operation on them is
//! a pure function, so values can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::AutomatonError;

/// Index of a state.
pub type StateId = usize;

/// A finite automaton over tuples of base-k digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    states: usize,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    delta: Vec<BTreeMap<Symbol, BTreeSet<StateId>>>,
    deterministic: bool,
}

/// Incremental construction of an [`Automaton`].
#[derive(Debug, Clone)]
pub struct Builder {
    alphabet: Alphabet,
    states: usize,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    transitions: Vec<(StateId, Symbol, StateId)>,
    first_error: Option<AutomatonError>,
}

impl Builder {
    pub fn states(mut self, n: usize) -> Self {
        self.states = n;
        self
    }

    pub fn initial<I: IntoIterator<Item = StateId>>(mut self, states: I) -> Self {
        self.initial.extend(states);
        self
    }

    pub fn finals<I: IntoIterator<Item = StateId>>(mut self, states: I) -> Self {
        self.finals.extend(states);
        self
    }

    /// Add a transition on a symbol id.
    pub fn edge(mut self, src: StateId, sym: Symbol, dst: StateId) -> Self {
        self.transitions.push((src, sym, dst));
        self
    }

    /// Add a transition on a digit tuple.
    pub fn edge_digits(mut self, src: StateId, digits: &[u32], dst: StateId) -> Self {
        match self.alphabet.encode(digits) {
            Ok(sym) => self.edge(src, sym, dst),
            Err(e) => {
                self.first_error.get_or_insert(e);
                self
            }
        }
    }

    pub fn build(self) -> Result<Automaton, AutomatonError> {
        if let Some(e) = self.first_error {
            return Err(e);
        }
        let mut delta: Vec<BTreeMap<Symbol, BTreeSet<StateId>>> = vec![BTreeMap::new(); self.states];
        let symbols = self.alphabet.symbol_count();
        for &(src, sym, dst) in &self.transitions {
            if src >= self.states {
                return Err(AutomatonError::StateOutOfRange { state: src, states: self.states });
            }
            if dst >= self.states {
                return Err(AutomatonError::StateOutOfRange { state: dst, states: self.states });
            }
            if sym >= symbols {
                return Err(AutomatonError::SymbolOutOfRange(sym));
            }
            delta[src].entry(sym).or_default().insert(dst);
        }
        for &q in self.initial.iter().chain(self.finals.iter()) {
            if q >= self.states {
                return Err(AutomatonError::StateOutOfRange { state: q, states: self.states });
            }
        }
        let deterministic = self.initial.len() == 1
            && delta.iter().all(|m| m.values().all(|s| s.len() <= 1));
        Ok(Automaton {
            alphabet: self.alphabet,
            states: self.states,
            initial: self.initial,
            finals: self.finals,
            delta,
            deterministic,
        })
    }
}

impl Automaton {
    pub fn builder(radix: u32, tracks: usize) -> Result<Builder, AutomatonError> {
        Ok(Builder {
            alphabet: Alphabet::new(radix, tracks)?,
            states: 0,
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            transitions: Vec::new(),
            first_error: None,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radix(&self) -> u32 {
        self.alphabet.radix()
    }

    pub fn tracks(&self) -> usize {
        self.alphabet.tracks()
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    /// Detected, never declared: one initial state and all transition
    /// images of size at most one.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// All transitions as `(src, symbol, dst)` triples in index order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(src, m)| {
            m.iter().flat_map(move |(&sym, dsts)| dsts.iter().map(move |&dst| (src, sym, dst)))
        })
    }

    pub fn successors(&self, q: StateId, sym: Symbol) -> impl Iterator<Item = StateId> + '_ {
        self.delta[q].get(&sym).into_iter().flatten().copied()
    }

    /// All `(symbol, dst)` transitions leaving a state.
    pub fn transitions_from(&self, q: StateId) -> impl Iterator<Item = (Symbol, StateId)> + '_ {
        self.delta[q].iter().flat_map(|(&sym, dsts)| dsts.iter().map(move |&d| (sym, d)))
    }

    /// All successor states of `q`, over every symbol.
    pub fn successors_any(&self, q: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.transitions_from(q).map(|(_, d)| d)
    }

    /// Deterministic step; `None` when the transition is missing.
    pub fn dfa_step(&self, q: StateId, sym: Symbol) -> Option<StateId> {
        self.delta[q].get(&sym).and_then(|s| s.first()).copied()
    }

    /// Deterministic run from a state; `None` once a transition is missing.
    pub fn dfa_run(&self, q: StateId, word: &[Symbol]) -> Option<StateId> {
        let mut cur = q;
        for &sym in word {
            cur = self.dfa_step(cur, sym)?;
        }
        Some(cur)
    }

    /// Image of a state set under one symbol.
    pub fn step_set(&self, set: &BTreeSet<StateId>, sym: Symbol) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        for &q in set {
            if let Some(dsts) = self.delta[q].get(&sym) {
                out.extend(dsts.iter().copied());
            }
        }
        out
    }

    /// Image of a state set under a word.
    pub fn run_set(&self, set: &BTreeSet<StateId>, word: &[Symbol]) -> BTreeSet<StateId> {
        let mut cur = set.clone();
        for &sym in word {
            if cur.is_empty() {
                break;
            }
            cur = self.step_set(&cur, sym);
        }
        cur
    }

    /// Does the automaton accept the word from its initial states?
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.run_set(&self.initial, word).iter().any(|q| self.finals.contains(q))
    }

    /// Acceptance starting from an explicit state set.
    pub fn accepts_from(&self, set: &BTreeSet<StateId>, word: &[Symbol]) -> bool {
        self.run_set(set, word).iter().any(|q| self.finals.contains(q))
    }

    /// States reachable from `from` by any word (including the empty one).
    pub fn reachable_from(&self, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut seen = from.clone();
        let mut queue: VecDeque<StateId> = from.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            for dsts in self.delta[q].values() {
                for &d in dsts {
                    if seen.insert(d) {
                        queue.push_back(d);
                    }
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> BTreeSet<StateId> {
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); self.states];
        for (src, _, dst) in self.transitions() {
            preds[dst].push(src);
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Restrict to reachable-and-coreachable states. Returns the trimmed
    /// automaton and the old-to-new state mapping.
    pub fn trim_with_map(&self) -> (Automaton, BTreeMap<StateId, StateId>) {
        let alive: BTreeSet<StateId> = self
            .reachable_from(&self.initial)
            .intersection(&self.coreachable())
            .copied()
            .collect();
        self.restrict(&alive)
    }

    /// Trimmed automaton (reachable and coreachable states only).
    pub fn trim(&self) -> Automaton {
        self.trim_with_map().0
    }

    /// Keep exactly the states in `keep` (transitions with both endpoints
    /// inside), renumbering densely. Initial/final sets are intersected.
    pub(crate) fn restrict(&self, keep: &BTreeSet<StateId>) -> (Automaton, BTreeMap<StateId, StateId>) {
        let map: BTreeMap<StateId, StateId> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut delta: Vec<BTreeMap<Symbol, BTreeSet<StateId>>> = vec![BTreeMap::new(); keep.len()];
        for (src, sym, dst) in self.transitions() {
            if let (Some(&s), Some(&d)) = (map.get(&src), map.get(&dst)) {
                delta[s].entry(sym).or_default().insert(d);
            }
        }
        let initial: BTreeSet<StateId> = self.initial.iter().filter_map(|q| map.get(q)).copied().collect();
        let finals: BTreeSet<StateId> = self.finals.iter().filter_map(|q| map.get(q)).copied().collect();
        let deterministic =
            initial.len() == 1 && delta.iter().all(|m| m.values().all(|s| s.len() <= 1));
        (
            Automaton {
                alphabet: self.alphabet,
                states: keep.len(),
                initial,
                finals,
                delta,
                deterministic,
            },
            map,
        )
    }

    /// Same automaton with different initial/final sets.
    pub fn with_initial_finals<I, F>(&self, initial: I, finals: F) -> Result<Automaton, AutomatonError>
    where
        I: IntoIterator<Item = StateId>,
        F: IntoIterator<Item = StateId>,
    {
        let initial: BTreeSet<StateId> = initial.into_iter().collect();
        let finals: BTreeSet<StateId> = finals.into_iter().collect();
        for &q in initial.iter().chain(finals.iter()) {
            if q >= self.states {
                return Err(AutomatonError::StateOutOfRange { state: q, states: self.states });
            }
        }
        let deterministic =
            initial.len() == 1 && self.delta.iter().all(|m| m.values().all(|s| s.len() <= 1));
        Ok(Automaton { initial, finals, deterministic, ..self.clone() })
    }

    /// The transition map of a word, as a function from states to state sets.
    pub fn word_action(&self, word: &[Symbol]) -> Vec<BTreeSet<StateId>> {
        (0..self.states)
            .map(|q| {
                let mut s = BTreeSet::new();
                s.insert(q);
                self.run_set(&s, word)
            })
            .collect()
    }

    /// A word `w` is idempotent when `delta(q, ww) = delta(q, w)` for every
    /// state `q`.
    pub fn is_idempotent_word(&self, word: &[Symbol]) -> bool {
        let once = self.word_action(word);
        (0..self.states).all(|q| {
            let twice = self.run_set(&once[q], word);
            twice == once[q]
        })
    }
}
