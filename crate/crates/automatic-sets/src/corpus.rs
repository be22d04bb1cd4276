//! Small named automata used throughout the tests, the guide and the CLI
//! fixtures.

use crate::automaton::Automaton;
use crate::basek::BaseKSet;

/// The running example over radix 3: three states, the cycle of interest at
/// state 2.
///
/// ```text
/// state 0: 0,2 -> 0     1 -> 2
/// state 1: 0,2 -> 1     1 -> 2
/// state 2: 0,1 -> 2     2 -> 1
/// ```
///
/// Initial state 0, accepting state 2.
pub fn ternary_example() -> Automaton {
    Automaton::builder(3, 1)
        .unwrap()
        .states(3)
        .initial([0])
        .finals([2])
        .edge(0, 0, 0)
        .edge(0, 2, 0)
        .edge(0, 1, 2)
        .edge(1, 0, 1)
        .edge(1, 2, 1)
        .edge(1, 1, 2)
        .edge(2, 0, 2)
        .edge(2, 1, 2)
        .edge(2, 2, 1)
        .build()
        .unwrap()
}

/// The cycle-language set of [`ternary_example`] at state 2: initial and
/// final state are both 2.
pub fn ternary_cycle_set() -> BaseKSet {
    let a = ternary_example().with_initial_finals([2], [2]).unwrap();
    BaseKSet::new(a).unwrap()
}

/// Base-k expansions of the multiples of `m`, as the residue automaton.
pub fn multiples_of(m: u64, k: u32) -> BaseKSet {
    assert!(m >= 1);
    let m_us = m as usize;
    let mut builder = Automaton::builder(k, 1)
        .unwrap()
        .states(m_us)
        .initial([0usize])
        .finals([0usize]);
    for r in 0..m_us {
        for d in 0..k {
            let next = ((r as u64 * k as u64 + d as u64) % m) as usize;
            builder = builder.edge(r, d, next);
        }
    }
    BaseKSet::new(builder.build().unwrap()).unwrap()
}

/// The set `{k^i : i >= 0}` via the language `1 0*`.
pub fn powers_of_base(k: u32) -> BaseKSet {
    let a = Automaton::builder(k, 1)
        .unwrap()
        .states(2)
        .initial([0])
        .finals([1])
        .edge(0, 1, 1)
        .edge(1, 0, 1)
        .build()
        .unwrap();
    BaseKSet::new(a).unwrap()
}

/// Evil numbers: naturals whose binary expansion has evenly many `1` digits.
pub fn evil_numbers() -> BaseKSet {
    let a = Automaton::builder(2, 1)
        .unwrap()
        .states(2)
        .initial([0])
        .finals([0])
        .edge(0, 0, 0)
        .edge(0, 1, 1)
        .edge(1, 0, 1)
        .edge(1, 1, 0)
        .build()
        .unwrap();
    BaseKSet::new(a).unwrap()
}

/// Naturals whose base-k digit sum is a multiple of `m`.
pub fn digit_sum_multiples(m: u32, k: u32) -> BaseKSet {
    assert!(m >= 1);
    let m_us = m as usize;
    let mut builder = Automaton::builder(k, 1)
        .unwrap()
        .states(m_us)
        .initial([0usize])
        .finals([0usize]);
    for r in 0..m {
        for d in 0..k {
            builder = builder.edge(r as usize, d, ((r + d) % m) as usize);
        }
    }
    BaseKSet::new(builder.build().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_members_are_deterministic() {
        assert!(ternary_example().is_deterministic());
        assert!(multiples_of(3, 2).automaton().is_deterministic());
        assert!(powers_of_base(2).automaton().is_deterministic());
        assert!(evil_numbers().automaton().is_deterministic());
        assert!(digit_sum_multiples(3, 2).automaton().is_deterministic());
    }
}
