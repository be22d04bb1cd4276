//! Bounded-domain evaluation, the cross-check oracle for the compiler.
//!
//! Quantifiers range over `[0, B]`, so the result equals true first-order
//! semantics only when every relevant witness is at most `B`. Existential
//! search first looks for a top-level conjunct that pins the quantified
//! variable to a single value (an equation whose other arguments are
//! already bound); this prunes the scan without changing the outcome,
//! since any other value falsifies that conjunct.

use std::collections::BTreeMap;

use super::{Formula, SetEnv, Var};

/// Evaluate under an assignment of the free variables, with quantifier
/// domain `[0, bound]`.
pub fn eval_bounded(formula: &Formula, env: &BTreeMap<Var, u64>, sets: &SetEnv, bound: u64) -> bool {
    let radix = sets.radix().ok().flatten();
    let mut scope = env.clone();
    eval(formula, &mut scope, sets, radix, bound)
}

fn eval(formula: &Formula, scope: &mut BTreeMap<Var, u64>, sets: &SetEnv, radix: Option<u32>, bound: u64) -> bool {
    match formula {
        Formula::Add(x, y, z) => {
            let (x, y, z) = (value(scope, x), value(scope, y), value(scope, z));
            x.checked_add(y) == Some(z)
        }
        Formula::Eq(x, y) => value(scope, x) == value(scope, y),
        Formula::EqConst(x, c) => value(scope, x) == *c,
        Formula::Lt(x, y) => value(scope, x) < value(scope, y),
        Formula::InSet(x, name) => {
            let set = sets.get(name).unwrap_or_else(|| panic!("unknown set `{name}` in bounded evaluation"));
            set.member(value(scope, x))
        }
        Formula::PowK(x) => {
            let k = radix.expect("PowK needs a radix; bind at least one set or evaluate without PowK") as u64;
            let mut p = 1u64;
            let target = value(scope, x);
            loop {
                if p == target {
                    return true;
                }
                if p > target / k {
                    return false;
                }
                p *= k;
            }
        }
        Formula::Not(inner) => !eval(inner, scope, sets, radix, bound),
        Formula::And(a, b) => eval(a, scope, sets, radix, bound) && eval(b, scope, sets, radix, bound),
        Formula::Or(a, b) => eval(a, scope, sets, radix, bound) || eval(b, scope, sets, radix, bound),
        Formula::Implies(a, b) => !eval(a, scope, sets, radix, bound) || eval(b, scope, sets, radix, bound),
        Formula::Iff(a, b) => eval(a, scope, sets, radix, bound) == eval(b, scope, sets, radix, bound),
        Formula::Exists(v, body) => {
            if let Some(candidate) = determined_value(body, v, scope) {
                if candidate > bound {
                    return false;
                }
                let saved = scope.insert(v.clone(), candidate);
                let holds = eval(body, scope, sets, radix, bound);
                restore(scope, v, saved);
                return holds;
            }
            for candidate in 0..=bound {
                let saved = scope.insert(v.clone(), candidate);
                let holds = eval(body, scope, sets, radix, bound);
                restore(scope, v, saved);
                if holds {
                    return true;
                }
            }
            false
        }
        Formula::Forall(v, body) => {
            for candidate in 0..=bound {
                let saved = scope.insert(v.clone(), candidate);
                let holds = eval(body, scope, sets, radix, bound);
                restore(scope, v, saved);
                if !holds {
                    return false;
                }
            }
            true
        }
    }
}

fn value(scope: &BTreeMap<Var, u64>, v: &Var) -> u64 {
    *scope.get(v).unwrap_or_else(|| panic!("unbound variable `{v}` in bounded evaluation"))
}

fn restore(scope: &mut BTreeMap<Var, u64>, v: &Var, saved: Option<u64>) {
    match saved {
        Some(old) => {
            scope.insert(v.clone(), old);
        }
        None => {
            scope.remove(v);
        }
    }
}

/// A value forced on `v` by some top-level conjunct of `body` whose other
/// arguments are bound. Any other value falsifies that conjunct, so an
/// existential needs to try only this one.
fn determined_value(body: &Formula, v: &Var, scope: &BTreeMap<Var, u64>) -> Option<u64> {
    match body {
        Formula::And(a, b) => determined_value(a, v, scope).or_else(|| determined_value(b, v, scope)),
        Formula::EqConst(x, c) if x == v => Some(*c),
        Formula::Eq(x, y) if x == v && y != v => scope.get(y).copied(),
        Formula::Eq(x, y) if y == v && x != v => scope.get(x).copied(),
        Formula::Add(x, y, z) => {
            let known = |w: &Var| if w == v { None } else { scope.get(w).copied() };
            match (known(x), known(y), known(z)) {
                (Some(a), Some(b), None) if z == v => a.checked_add(b),
                (Some(a), None, Some(c)) if y == v => c.checked_sub(a),
                (None, Some(b), Some(c)) if x == v => c.checked_sub(b),
                _ => None,
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::macros;
    use crate::logic::Formula;

    #[test]
    fn addition_with_zero_is_identity() {
        let sets = SetEnv::new().with("P", corpus::powers_of_base(2));
        // forall x (x + 0 = x), bounded
        let f = Formula::forall(
            "x",
            Formula::exists("z", Formula::EqConst("z".into(), 0).and(Formula::Add("x".into(), "z".into(), "x".into()))),
        );
        assert!(eval_bounded(&f, &BTreeMap::new(), &sets, 200));
    }

    #[test]
    fn truncation_makes_unbounded_witnesses_invisible() {
        let sets = SetEnv::new().with("P", corpus::powers_of_base(2));
        // exists x (b < x) is false under truncation at b = bound
        let f = Formula::exists("x", Formula::Lt("b".into(), "x".into()));
        let env: BTreeMap<_, _> = [("b".to_string(), 50u64)].into();
        assert!(!eval_bounded(&f, &env, &sets, 50));
        assert!(eval_bounded(&f, &env, &sets, 51));
    }

    #[test]
    fn determined_existentials_agree_with_scan() {
        let sets = SetEnv::new().with("M", corpus::multiples_of(3, 2));
        let mut fresh = crate::logic::Fresh::new();
        // x = 2 (mod 3) via the macro, which nests determined existentials
        let f = macros::mod_eq("x", 3, 2, &mut fresh);
        for x in 0..30u64 {
            let env: BTreeMap<_, _> = [("x".to_string(), x)].into();
            assert_eq!(eval_bounded(&f, &env, &sets, 64), x % 3 == 2, "x={x}");
        }
    }
}
