//! A small decision engine for first-order arithmetic over the naturals
//! extended with named automatic sets and the power-of-k predicate.
//!
//! Formulas are built from the atoms `x + y = z`, `x = y`, `x = c`,
//! `x < y`, `x in X` (a named base-k set) and `pow(x)` (x is a power of
//! the shared radix), closed under the usual connectives and quantifiers.
//! [`compile`] turns a formula into a synchronized multi-track relation
//! automaton over the free variables; [`decide`] evaluates sentences, and
//! [`eval_bounded`] is an independent bounded-domain evaluator used as a
//! cross-check oracle by the test suites.

mod compile;
mod eval;
pub mod ladder;
mod periodic;
mod relation;
mod sexpr;

pub use compile::{compile, decide, Compiled, CompileOptions, Decision};
pub use eval::eval_bounded;
pub use periodic::{is_eventually_periodic, is_eventually_periodic_with};
pub use relation::{addition_relation, Relation};
pub use sexpr::parse_formula;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::basek::BaseKSet;

/// A variable name. Names starting with `$` are reserved for fresh
/// variables introduced by macro expansion.
pub type Var = String;

/// First-order formulas over `(N, +, <, constants, named sets, powers)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    /// `x + y = z`
    Add(Var, Var, Var),
    /// `x = y`
    Eq(Var, Var),
    /// `x = c`
    EqConst(Var, u64),
    /// `x < y`
    Lt(Var, Var),
    /// `x` is a member of the named base-k set
    InSet(Var, String),
    /// `x` is a power of the radix
    PowK(Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn exists(var: impl Into<Var>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<Var>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Free variables in sorted order.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut std::collections::BTreeSet<Var>) {
        fn touch(v: &Var, bound: &[Var], out: &mut std::collections::BTreeSet<Var>) {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        match self {
            Formula::Add(x, y, z) => {
                touch(x, bound, out);
                touch(y, bound, out);
                touch(z, bound, out);
            }
            Formula::Eq(x, y) | Formula::Lt(x, y) => {
                touch(x, bound, out);
                touch(y, bound, out);
            }
            Formula::EqConst(x, _) | Formula::InSet(x, _) | Formula::PowK(x) => touch(x, bound, out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Add(x, y, z) => write!(f, "(= (+ {x} {y}) {z})"),
            Formula::Eq(x, y) => write!(f, "(= {x} {y})"),
            Formula::EqConst(x, c) => write!(f, "(= {x} {c})"),
            Formula::Lt(x, y) => write!(f, "(< {x} {y})"),
            Formula::InSet(x, s) => write!(f, "(in {x} {s})"),
            Formula::PowK(x) => write!(f, "(pow {x})"),
            Formula::Not(inner) => write!(f, "(not {inner})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Exists(v, body) => write!(f, "(exists {v} {body})"),
            Formula::Forall(v, body) => write!(f, "(forall {v} {body})"),
        }
    }
}

/// The named-set environment. All sets must share one radix.
#[derive(Debug, Clone, Default)]
pub struct SetEnv {
    sets: BTreeMap<String, BaseKSet>,
}

impl SetEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, set: BaseKSet) -> Self {
        self.sets.insert(name.into(), set);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, set: BaseKSet) {
        self.sets.insert(name.into(), set);
    }

    pub fn get(&self, name: &str) -> Option<&BaseKSet> {
        self.sets.get(name)
    }

    /// The shared radix, or an error when sets disagree.
    pub fn radix(&self) -> Result<Option<u32>, LogicError> {
        let mut radix = None;
        for set in self.sets.values() {
            match radix {
                None => radix = Some(set.radix()),
                Some(k) if k == set.radix() => {}
                Some(_) => return Err(LogicError::MixedRadix),
            }
        }
        Ok(radix)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("named sets use different radices")]
    MixedRadix,
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("formula has free variables: {0:?}")]
    NotClosed(Vec<Var>),
    #[error("determinization exceeded the state cap of {0}")]
    StateCapExceeded(usize),
    #[error("compilation needs an explicit radix: formula names no set and no radix was given")]
    NoRadix,
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error(transparent)]
    Automaton(#[from] crate::error::AutomatonError),
}

/// Fresh-variable source for macro expansion. Generated names start with
/// `$`, which the surface syntax rejects, so they cannot collide with user
/// variables.
#[derive(Debug, Default)]
pub struct Fresh(u64);

impl Fresh {
    pub fn new() -> Self {
        Fresh(0)
    }

    pub fn var(&mut self) -> Var {
        let v = format!("${}", self.0);
        self.0 += 1;
        v
    }
}

/// Derived relations, expanded into the core atoms.
pub mod macros {
    use super::{Formula, Fresh, Var};

    pub fn le(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Formula::Lt(y.into(), x.into()).not()
    }

    pub fn ge(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Formula::Lt(x.into(), y.into()).not()
    }

    pub fn gt(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Formula::Lt(y.into(), x.into())
    }

    pub fn ne(x: impl Into<Var>, y: impl Into<Var>) -> Formula {
        Formula::Eq(x.into(), y.into()).not()
    }

    /// `y = c * x`, by repeated addition.
    pub fn mul_const(c: u64, x: impl Into<Var>, y: impl Into<Var>, fresh: &mut Fresh) -> Formula {
        let x = x.into();
        let y = y.into();
        match c {
            0 => Formula::EqConst(y, 0),
            1 => Formula::Eq(y, x),
            _ => {
                // partial sums: t_2 = x + x, t_{i+1} = t_i + x, with t_c = y
                let mut sums: Vec<(Var, Var, Var)> = Vec::new();
                let mut acc = x.clone();
                for i in 2..=c {
                    let next = if i == c { y.clone() } else { fresh.var() };
                    sums.push((acc.clone(), x.clone(), next.clone()));
                    acc = next;
                }
                let mut body: Option<Formula> = None;
                for (a, b, t) in &sums {
                    let atom = Formula::Add(a.clone(), b.clone(), t.clone());
                    body = Some(match body {
                        None => atom,
                        Some(f) => f.and(atom),
                    });
                }
                let mut out = body.expect("c >= 2 yields at least one addition");
                for (_, _, t) in sums.iter().rev() {
                    if t != &y {
                        out = Formula::exists(t.clone(), out);
                    }
                }
                out
            }
        }
    }

    /// `y = x + c`.
    pub fn add_const(x: impl Into<Var>, c: u64, y: impl Into<Var>, fresh: &mut Fresh) -> Formula {
        let x = x.into();
        let y = y.into();
        if c == 0 {
            return Formula::Eq(y, x);
        }
        let cv = fresh.var();
        Formula::exists(cv.clone(), Formula::EqConst(cv.clone(), c).and(Formula::Add(x, cv, y)))
    }

    /// `x = r (mod m)`, for a constant modulus `m >= 1`.
    pub fn mod_eq(x: impl Into<Var>, m: u64, r: u64, fresh: &mut Fresh) -> Formula {
        assert!(m >= 1);
        let x = x.into();
        let q = fresh.var();
        let t = fresh.var();
        let product = mul_const(m, q.clone(), t.clone(), fresh);
        let sum = add_const(t.clone(), r % m, x, fresh);
        Formula::exists(q, Formula::exists(t, product.and(sum)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_respect_scope() {
        let f = Formula::exists("x", Formula::Add("x".into(), "y".into(), "z".into()));
        assert_eq!(f.free_vars(), vec!["y".to_string(), "z".to_string()]);
    }

    #[test]
    fn display_round_trips_through_parser() {
        let f = Formula::forall(
            "n",
            macros::ge("n", "m").implies(Formula::InSet("n".into(), "X".into())),
        );
        let printed = f.to_string();
        let reparsed = parse_formula(&printed).unwrap();
        assert_eq!(f, reparsed);
    }
}
