//! The exact eventual-periodicity decision.
//!
//! A set is eventually periodic when there are `N, p` with `n in X iff
//! n + p in X` for all `n >= N`; equivalently, when it is Presburger
//! definable. The decision compiles the two-variable relation over
//! `(start, period)` and reads off the least witness.

use crate::basek::BaseKSet;

use super::compile::{compile, Compiled, CompileOptions};
use super::macros::ge;
use super::{Formula, LogicError, SetEnv};

/// Decide eventual periodicity. On success returns the witness
/// `(period, start)` decoded from the lexicographically least shortest
/// accepted encoding, which minimizes the period first.
pub fn is_eventually_periodic(set: &BaseKSet) -> Result<(bool, Option<(u64, u64)>), LogicError> {
    is_eventually_periodic_with(set, &CompileOptions::default())
}

pub fn is_eventually_periodic_with(
    set: &BaseKSet,
    options: &CompileOptions,
) -> Result<(bool, Option<(u64, u64)>), LogicError> {
    let env = SetEnv::new().with("X", set.clone());
    // vars sorted: "n0" (start) is track 0, "p" (period) is track 1, so the
    // least witness minimizes the period digits first
    let in_x = |v: &str| Formula::InSet(v.into(), "X".into());
    let body = ge("n", "n0")
        .and(Formula::Add("n".into(), "p".into(), "m".into()))
        .implies(in_x("n").iff(in_x("m")));
    let formula = Formula::EqConst("p".into(), 0)
        .not()
        .and(Formula::forall("n", Formula::forall("m", body)));
    match compile(&formula, &env, options)? {
        Compiled::Constant(_) => unreachable!("formula has free variables n0, p"),
        Compiled::Relation(r) => {
            debug_assert_eq!(r.vars(), ["n0".to_string(), "p".to_string()]);
            match r.shortest_witness() {
                None => Ok((false, None)),
                Some(values) => {
                    let start = values[0];
                    let period = values[1];
                    debug_assert!(period >= 1);
                    Ok((true, Some((period, start))))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn multiples_are_periodic_with_least_period() {
        let x = corpus::multiples_of(3, 2);
        let (periodic, witness) = is_eventually_periodic(&x).unwrap();
        assert!(periodic);
        let (p, n0) = witness.unwrap();
        assert_eq!(p, 3);
        assert_eq!(n0, 0);
    }

    #[test]
    fn powers_are_not_periodic() {
        let x = corpus::powers_of_base(2);
        let (periodic, witness) = is_eventually_periodic(&x).unwrap();
        assert!(!periodic);
        assert!(witness.is_none());
    }

    #[test]
    fn finite_sets_are_periodic_past_their_maximum() {
        // the singleton {5}
        let a = crate::Automaton::builder(2, 1)
            .unwrap()
            .states(4)
            .initial([0])
            .finals([3])
            .edge(0, 1, 1)
            .edge(1, 0, 2)
            .edge(2, 1, 3)
            .build()
            .unwrap();
        let x = BaseKSet::new(a).unwrap();
        assert_eq!(x.enumerate(100), vec![5]);
        let (periodic, witness) = is_eventually_periodic(&x).unwrap();
        assert!(periodic);
        assert_eq!(witness, Some((1, 6)));
    }

    #[test]
    fn evil_numbers_are_not_periodic() {
        let x = corpus::evil_numbers();
        let (periodic, _) = is_eventually_periodic(&x).unwrap();
        assert!(!periodic);
    }
}
