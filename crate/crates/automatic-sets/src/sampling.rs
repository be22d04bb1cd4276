//! Deterministic random generation for the property and acceptance suites.
//!
//! A self-contained SplitMix64 keeps sampled corpora identical across
//! platforms and independent of external crates.

use crate::automaton::Automaton;

/// SplitMix64 pseudorandom generator.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// Split off an independent stream.
    pub fn fork(&mut self) -> Rng {
        Rng(self.next_u64() ^ 0xA5A5_5A5A_DEAD_BEEF)
    }
}

/// A random NFA: each (state, symbol) pair gets 0, 1 or 2 successors.
pub fn random_nfa(rng: &mut Rng, radix: u32, states: usize) -> Automaton {
    let mut builder = Automaton::builder(radix, 1).unwrap().states(states);
    for q in 0..states {
        for d in 0..radix {
            let arity = match rng.below(10) {
                0..=2 => 0,
                3..=7 => 1,
                _ => 2,
            };
            for _ in 0..arity {
                builder = builder.edge(q, d, rng.below(states as u64) as usize);
            }
        }
    }
    let initial = rng.below(states as u64) as usize;
    let mut finals = Vec::new();
    for q in 0..states {
        if rng.chance(2, 5) {
            finals.push(q);
        }
    }
    if finals.is_empty() {
        finals.push(rng.below(states as u64) as usize);
    }
    builder.initial([initial]).finals(finals).build().unwrap()
}

/// A random DFA with a partial transition function.
pub fn random_partial_dfa(rng: &mut Rng, radix: u32, states: usize) -> Automaton {
    let mut builder = Automaton::builder(radix, 1).unwrap().states(states);
    for q in 0..states {
        for d in 0..radix {
            if rng.chance(4, 5) {
                builder = builder.edge(q, d, rng.below(states as u64) as usize);
            }
        }
    }
    let mut finals = Vec::new();
    for q in 0..states {
        if rng.chance(2, 5) {
            finals.push(q);
        }
    }
    if finals.is_empty() {
        finals.push(rng.below(states as u64) as usize);
    }
    builder
        .initial([rng.below(states as u64) as usize])
        .finals(finals)
        .build()
        .unwrap()
}

/// A random complete DFA.
pub fn random_total_dfa(rng: &mut Rng, radix: u32, states: usize) -> Automaton {
    let mut builder = Automaton::builder(radix, 1).unwrap().states(states);
    for q in 0..states {
        for d in 0..radix {
            builder = builder.edge(q, d, rng.below(states as u64) as usize);
        }
    }
    let mut finals = Vec::new();
    for q in 0..states {
        if rng.chance(2, 5) {
            finals.push(q);
        }
    }
    if finals.is_empty() {
        finals.push(rng.below(states as u64) as usize);
    }
    builder
        .initial([rng.below(states as u64) as usize])
        .finals(finals)
        .build()
        .unwrap()
}

/// A random word of the given length.
pub fn random_word(rng: &mut Rng, radix: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.below(radix as u64) as u32).collect()
}
