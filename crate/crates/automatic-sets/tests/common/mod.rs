//! Shared oracle helpers for the integration suites.
//!
//! Everything here stays independent of the implementation paths it
//! checks: language agreement enumerates words and runs the definitional
//! acceptance; the condition oracle enumerates counterexample words and
//! evaluates the shift conditions by direct arithmetic.

#![allow(dead_code)]

use automatic_sets::approx::CycleContext;
use automatic_sets::basek::eval_msd;
use automatic_sets::sampling::Rng;
use automatic_sets::{Automaton, BaseKSet};

/// All words over the automaton's alphabet up to a length, shortest first.
pub fn words_upto(a: &Automaton, max_len: usize) -> Vec<Vec<u32>> {
    Automaton::words_upto(a.alphabet(), max_len)
}

/// Exact language agreement on all words of length at most `max_len`.
pub fn assert_same_language(a: &Automaton, b: &Automaton, max_len: usize, context: &str) {
    for w in words_upto(a, max_len) {
        assert_eq!(a.accepts(&w), b.accepts(&w), "{context}: word {w:?}");
    }
}

/// Assert `b` accepts exactly the words `f` selects from the enumeration.
pub fn assert_language_is(b: &Automaton, max_len: usize, f: impl Fn(&[u32]) -> bool, context: &str) {
    for w in words_upto(b, max_len) {
        assert_eq!(b.accepts(&w), f(&w), "{context}: word {w:?}");
    }
}

/// Sample normalized cycle contexts in cases I/II from random automata.
pub fn random_contexts(
    rng: &mut Rng,
    count: usize,
    max_states: usize,
    radices: &[u32],
) -> Vec<CycleContext> {
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count {
        guard += 1;
        assert!(guard < 100_000, "context sampling exhausted");
        let radix = radices[rng.below(radices.len() as u64) as usize];
        let states = 2 + rng.below(max_states as u64 - 1) as usize;
        let a = automatic_sets::sampling::random_partial_dfa(rng, radix, states);
        let p = rng.below(states as u64) as usize;
        let Ok(ctx) = CycleContext::from_cycle(&a, p) else { continue };
        if ctx.case() == automatic_sets::approx::StateCase::III {
            continue;
        }
        // skip contexts whose set is almost empty; they make trivial tests
        if ctx.set().enumerate(50).len() < 3 {
            continue;
        }
        out.push(ctx);
    }
    out
}

/// Members of the set in `[lo, hi]`, capped.
pub fn members_in(set: &BaseKSet, lo: u64, hi: u64, cap: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for n in lo..=hi {
        if set.member(n) {
            out.push(n);
            if out.len() == cap {
                break;
            }
        }
    }
    out
}

/// The shift condition at `(n, i, r)` by explicit word enumeration:
/// sound for instances with `r + i <= max_word_len`. Returns the first
/// counterexample word in shortest-then-lexicographic order.
pub fn condition_by_enumeration(
    ctx: &CycleContext,
    n: u64,
    i: u32,
    r: u32,
    max_word_len: u32,
) -> (bool, Option<Vec<u32>>) {
    assert!(r + i <= max_word_len, "oracle instance out of range");
    let k = ctx.radix() as i128;
    for j in 0..=(r + i) {
        let mut words = vec![Vec::new()];
        for _ in 0..j {
            let mut next = Vec::new();
            for w in &words {
                for d in 0..ctx.radix() {
                    let mut w2 = w.clone();
                    w2.push(d);
                    next.push(w2);
                }
            }
            words = next;
        }
        for v in words {
            let v_val = eval_msd(&v, ctx.radix()).unwrap() as i128;
            let a = ctx.letter() as i128;
            let run = |len: u32| -> i128 {
                let mut acc = 0i128;
                for _ in 0..len {
                    acc = acc * k + a;
                }
                acc
            };
            let kr = k.pow(r);
            let lhs: i128 = if j > r {
                kr * n as i128 - run(j - r) * kr + v_val
            } else {
                kr * n as i128 + run(r - j) * k.pow(j) + v_val
            };
            let in_x = lhs >= 0 && u64::try_from(lhs).map(|m| ctx.set().member(m)).unwrap_or(false);
            let in_l = ctx.cycle_word(&v);
            if in_x != in_l {
                return (false, Some(v));
            }
        }
    }
    (true, None)
}

/// Characteristic bits of a set on `[0, len)`.
pub fn characteristic(set: &BaseKSet, len: usize) -> Vec<bool> {
    (0..len as u64).map(|n| set.member(n)).collect()
}

/// Brute-force eventual-periodicity detection on a bit prefix: search
/// periods up to `max_period` and starts up to `max_start`, requiring the
/// period to hold on the whole remaining prefix.
pub fn prefix_periodic(bits: &[bool], max_period: usize, max_start: usize) -> Option<(usize, usize)> {
    for p in 1..=max_period {
        for s in 0..=max_start {
            if s + 2 * p >= bits.len() {
                break;
            }
            if (s..bits.len() - p).all(|n| bits[n] == bits[n + p]) {
                return Some((p, s));
            }
        }
    }
    None
}

/// Does the returned witness actually explain the prefix?
pub fn witness_holds(bits: &[bool], period: u64, start: u64) -> bool {
    let (p, s) = (period as usize, start as usize);
    if p == 0 || s >= bits.len() {
        return true; // nothing checkable in range
    }
    (s..bits.len().saturating_sub(p)).all(|n| bits[n] == bits[n + p])
}
