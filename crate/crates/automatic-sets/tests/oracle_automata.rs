//! Brute-force oracles for the automaton algebra: every operation that
//! returns an automaton is compared against word enumeration on random
//! inputs, and the state-count bounds are exercised.

mod common;

use automatic_sets::sampling::{self, Rng};
use automatic_sets::{Automaton, BoolOp};
use common::{assert_language_is, assert_same_language, words_upto};

#[test]
fn determinize_language_agreement() {
    let mut rng = Rng::new(0xD17A);
    for trial in 0..120 {
        let states = 1 + rng.below(5) as usize;
        let a = sampling::random_nfa(&mut rng, 2 + (trial % 2), states);
        let d = a.determinize();
        assert!(d.is_deterministic());
        assert_same_language(&a, &d, 7, "determinize");
    }
}

#[test]
fn determinize_reversal_of_running_example() {
    let a = automatic_sets::corpus::ternary_example();
    let rd = a.reverse().determinize();
    for w in words_upto(&a, 8) {
        let reversed: Vec<u32> = w.iter().rev().copied().collect();
        assert_eq!(a.accepts(&w), rd.accepts(&reversed), "word {w:?}");
    }
}

#[test]
fn minimize_language_agreement_and_minimality() {
    let mut rng = Rng::new(0x317);
    for _ in 0..120 {
        let states = 1 + rng.below(5) as usize;
        let a = sampling::random_nfa(&mut rng, 2, states);
        let m = a.minimize();
        assert_same_language(&a, &m, 7, "minimize");
        assert!(m.state_count() <= a.determinize().state_count());
        let mm = m.minimize();
        assert_eq!(mm.state_count(), m.state_count(), "minimize must be idempotent");
        // Myhill-Nerode check: distinct residual behaviors up to length 6
        let classes: std::collections::BTreeSet<Vec<bool>> = (0..m.state_count())
            .map(|q| {
                words_upto(&m, 6)
                    .iter()
                    .map(|w| {
                        let mut set = std::collections::BTreeSet::new();
                        set.insert(q);
                        m.accepts_from(&set, w)
                    })
                    .collect()
            })
            .collect();
        assert_eq!(classes.len(), m.state_count(), "minimized states must be pairwise distinguishable");
    }
}

#[test]
fn boolean_combinations_match_pointwise() {
    let mut rng = Rng::new(0xB001);
    for _ in 0..100 {
        let (sa, sb) = (1 + rng.below(4) as usize, 1 + rng.below(4) as usize);
        let a = sampling::random_nfa(&mut rng, 2, sa);
        let b = sampling::random_nfa(&mut rng, 2, sb);
        for (op, rule) in [
            (BoolOp::Union, (|x, y| x || y) as fn(bool, bool) -> bool),
            (BoolOp::Intersect, |x, y| x && y),
            (BoolOp::Difference, |x, y| x && !y),
            (BoolOp::Iff, |x, y| x == y),
        ] {
            let c = a.boolean_combine(&b, op).unwrap();
            assert_language_is(&c, 6, |w| rule(a.accepts(w), b.accepts(w)), "boolean_combine");
        }
    }
}

#[test]
fn iff_product_obeys_state_bound() {
    let mut rng = Rng::new(0x1FF);
    for _ in 0..500 {
        let (sa, sb) = (1 + rng.below(4) as usize, 1 + rng.below(4) as usize);
        let a = sampling::random_total_dfa(&mut rng, 2, sa);
        let b = sampling::random_total_dfa(&mut rng, 2, sb);
        let c = a.boolean_combine(&b, BoolOp::Iff).unwrap();
        // the inputs are complete DFAs already, so determinization inside
        // the product cannot grow them
        assert!(
            c.state_count() <= a.determinize().state_count() * b.determinize().state_count(),
            "iff bound violated: {} > {} * {}",
            c.state_count(),
            a.state_count(),
            b.state_count()
        );
    }
}

#[test]
fn iff_product_three_by_four() {
    let mut rng = Rng::new(0x34);
    let a = sampling::random_total_dfa(&mut rng, 2, 3);
    let b = sampling::random_total_dfa(&mut rng, 2, 4);
    let c = a.boolean_combine(&b, BoolOp::Iff).unwrap();
    assert!(c.state_count() <= 12);
}

#[test]
fn left_quotient_matches_definition_and_bound() {
    let mut rng = Rng::new(0x9807);
    for _ in 0..500 {
        let states = 1 + rng.below(5) as usize;
        let a = sampling::random_partial_dfa(&mut rng, 2, states);
        let prefix_len = rng.below(5) as usize;
        let prefix = sampling::random_word(&mut rng, 2, prefix_len);
        let q = a.left_quotient(&prefix);
        let m = if a.is_deterministic() { a.state_count() } else { a.determinize().state_count() };
        assert!(q.state_count() <= m + 1, "quotient bound violated");
        for v in words_upto(&a, 6) {
            let mut uv = prefix.clone();
            uv.extend(&v);
            assert_eq!(q.accepts(&v), a.accepts(&uv), "prefix {prefix:?} word {v:?}");
        }
    }
}

#[test]
fn left_quotient_arithmetic_oracle() {
    // base-2 expansions of multiples of 3, quotient by "1"
    let x = automatic_sets::corpus::multiples_of(3, 2);
    let q = x.automaton().left_quotient(&[1]);
    for v in words_upto(x.automaton(), 10) {
        let mut word = vec![1u32];
        word.extend(&v);
        let value = automatic_sets::basek::eval_msd(&word, 2).unwrap();
        assert_eq!(q.accepts(&v), value % 3 == 0, "v {v:?}");
    }
}

#[test]
fn reverse_agrees_with_enumeration() {
    let mut rng = Rng::new(0xEBE);
    for _ in 0..100 {
        let a = sampling::random_nfa(&mut rng, 2, 4);
        let r = a.reverse();
        for w in words_upto(&a, 8) {
            let rev: Vec<u32> = w.iter().rev().copied().collect();
            assert_eq!(a.accepts(&w), r.accepts(&rev));
        }
        assert!(r.reverse().equivalent(&a).unwrap());
    }
}

#[test]
fn equivalence_matches_enumeration() {
    let mut rng = Rng::new(0xE9);
    for _ in 0..120 {
        let a = sampling::random_nfa(&mut rng, 2, 3);
        let b = sampling::random_nfa(&mut rng, 2, 3);
        let same_by_words = words_upto(&a, 10).iter().all(|w| a.accepts(w) == b.accepts(w));
        assert_eq!(a.equivalent(&b).unwrap(), same_by_words);
        assert!(a.equivalent(&a).unwrap());
    }
}

#[test]
fn equivalence_detects_single_word_difference() {
    // L vs L + one extra word
    let a = automatic_sets::corpus::powers_of_base(2).automaton().clone();
    let extra = Automaton::builder(2, 1)
        .unwrap()
        .states(3)
        .initial([0])
        .finals([2])
        .edge(0, 1, 1)
        .edge(1, 1, 2)
        .build()
        .unwrap();
    let union = a.boolean_combine(&extra, BoolOp::Union).unwrap();
    assert!(!a.equivalent(&union).unwrap());
}

#[test]
fn finite_language_matches_pumping_oracle() {
    let mut rng = Rng::new(0xF1);
    for _ in 0..150 {
        let a = sampling::random_nfa(&mut rng, 2, 4);
        let dfa = a.determinize();
        let states = dfa.state_count();
        // infinite iff an accepted word exists with length in [states, 2*states)
        let mut has_pumpable = false;
        for w in words_upto(&a, 2 * states - 1) {
            if w.len() >= states && a.accepts(&w) {
                has_pumpable = true;
                break;
            }
        }
        assert_eq!(a.is_finite_language(), !has_pumpable);
    }
}

#[test]
fn word_counts_match_enumeration() {
    let mut rng = Rng::new(0xC0);
    for _ in 0..60 {
        let a = sampling::random_nfa(&mut rng, 2, 4);
        for n in [0usize, 3, 12] {
            let expected = words_upto(&a, n).iter().filter(|w| a.accepts(w)).count();
            assert_eq!(a.count_words_upto(n), num_bigint::BigUint::from(expected));
        }
    }
}

#[test]
fn path_language_cycles_concatenate() {
    let a = automatic_sets::corpus::ternary_example();
    let cyc = a.path_language(2, 2).unwrap();
    let mut rng = Rng::new(0x77);
    let members: Vec<Vec<u32>> =
        words_upto(&a, 6).into_iter().filter(|w| cyc.accepts(w)).collect();
    assert!(cyc.accepts(&[]));
    for _ in 0..200 {
        let u = &members[rng.below(members.len() as u64) as usize];
        let v = &members[rng.below(members.len() as u64) as usize];
        let mut uv = u.clone();
        uv.extend(v);
        assert!(cyc.accepts(&uv), "cycle language closed under concatenation: {u:?} {v:?}");
    }
}

#[test]
fn scc_condensation_is_acyclic_and_leaves_consistent() {
    let mut rng = Rng::new(0x5CC);
    for _ in 0..150 {
        let a = sampling::random_nfa(&mut rng, 2, 6);
        let scc = a.scc_decompose();
        // topological component order makes acyclicity visible directly
        assert!(scc.condensation.iter().all(|&(x, y)| x < y));
        for c in 0..scc.component_count() {
            let outgoing = scc.condensation.iter().any(|&(x, _)| x == c);
            assert_eq!(scc.is_leaf(c), !outgoing);
        }
        // components are maximal mutually reachable sets
        for c in 0..scc.component_count() {
            for &p in &scc.components[c] {
                let from_p = a.reachable_from(&std::iter::once(p).collect());
                for &q in &scc.components[c] {
                    assert!(from_p.contains(&q), "mutual reachability inside a component");
                }
            }
        }
    }
}

#[test]
fn sparseness_agrees_with_growth_probe() {
    let mut rng = Rng::new(0x5AB5);
    let mut sparse_seen = 0;
    let mut dense_seen = 0;
    for _ in 0..100 {
        let a = sampling::random_nfa(&mut rng, 2, 4);
        let trim = a.minimize();
        let d = trim.state_count().max(1);
        let verdict = a.is_sparse();
        if verdict {
            sparse_seen += 1;
            // polynomial envelope of degree at most the trim state count
            for n in [10usize, 20, 40] {
                let count = a.count_words_upto(n);
                let bound = num_bigint::BigUint::from(n as u64 + 1).pow(d as u32 + 1);
                assert!(count <= bound, "sparse language must stay under a polynomial envelope");
            }
        } else {
            dense_seen += 1;
            // the doubling ratio must exceed 1.2 somewhere before length 24
            let mut witnessed = false;
            for n in 1..=12usize {
                let a1 = a.count_words_upto(n);
                let a2 = a.count_words_upto(2 * n);
                if a1.bits() > 0 && a2 * 5u32 > a1 * 6u32 {
                    witnessed = true;
                    break;
                }
            }
            assert!(witnessed, "non-sparse language must show exponential doubling");
        }
    }
    assert!(sparse_seen > 10 && dense_seen > 10, "probe corpus must include both kinds");
}
