//! The definability ladder for the suffix-run approximation.
//!
//! These builders produce plain [`Formula`] values that express, step by
//! step, the graph of the approximation function of a normalized cycle
//! context using nothing but addition, order, the power predicate and
//! membership in the context's set. They exist for cross-checking the
//! automaton-level computation against the logical description; the
//! bounded evaluator runs them directly.
//!
//! Throughout, the context is described by its radix `k`, the
//! distinguished digit `a`, the case split on the zero digit (whether
//! words may start with zeros and stay in the language), and the name the
//! context's set is bound to in the environment.

use super::macros::{ge, gt, le, mul_const};
use super::{Formula, Fresh, Var};

/// Parameters of a normalized cycle context, as seen by the ladder.
#[derive(Debug, Clone)]
pub struct LadderParams {
    pub radix: u32,
    /// The distinguished digit `a`.
    pub letter: u32,
    /// True in the case `delta(p, 0) = {p}`: the language is closed under
    /// leading zeros, so a word of any length at least the canonical one
    /// witnesses membership. False in the dead-zero case, where only the
    /// canonical length does.
    pub zero_loops: bool,
    /// Name of the context's set in the environment.
    pub set: String,
}

impl LadderParams {
    fn in_set(&self, v: impl Into<Var>) -> Formula {
        Formula::InSet(v.into(), self.set.clone())
    }
}

/// `y = ell(x)`: `y` is the smallest power of `k` strictly above `x`.
pub fn power_above(x: impl Into<Var>, y: impl Into<Var>, fresh: &mut Fresh) -> Formula {
    let (x, y) = (x.into(), y.into());
    let q = fresh.var();
    Formula::PowK(y.clone()).and(Formula::forall(
        q.clone(),
        Formula::PowK(q.clone()).implies(gt(q.clone(), x).iff(ge(q, y.clone()))),
    ))
}

/// `L(x, y)`: some word `v` with `[v] = x` and `k^{|v|} = y` lies in the
/// cycle language.
pub fn word_membership(params: &LadderParams, x: impl Into<Var>, y: impl Into<Var>, fresh: &mut Fresh) -> Formula {
    let (x, y) = (x.into(), y.into());
    let e = fresh.var();
    let ell = power_above(x.clone(), e.clone(), fresh);
    let length_side = if params.zero_loops { ge(y, e.clone()) } else { Formula::Eq(y, e.clone()) };
    Formula::exists(e, ell.and(length_side)).and(params.in_set(x))
}

/// `z = [a^{i-j} 0^j]` where `x = k^i`, `y = k^j`, `y <= x`: the value of
/// the run padding between two powers, `(k-1) z = a (x - y)`.
pub fn run_padding(
    params: &LadderParams,
    x: impl Into<Var>,
    y: impl Into<Var>,
    z: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (x, y, z) = (x.into(), y.into(), z.into());
    let d = fresh.var();
    let lhs = fresh.var();
    let rhs = fresh.var();
    let diff = Formula::Add(y.clone(), d.clone(), x.clone());
    let scaled_z = mul_const(params.radix as u64 - 1, z.clone(), lhs.clone(), fresh);
    let scaled_d = mul_const(params.letter as u64, d.clone(), rhs.clone(), fresh);
    Formula::PowK(x)
        .and(Formula::PowK(y))
        .and(Formula::exists(
            d,
            Formula::exists(
                lhs.clone(),
                Formula::exists(rhs.clone(), diff.and(scaled_z).and(scaled_d).and(Formula::Eq(lhs, rhs))),
            ),
        ))
}

/// The high-side shift condition at constant shift `r`, for a candidate
/// word value `x` with length marker `y = k^j` and input `n`:
/// `k^r n + x - [a^{j-r} 0^r]  in X  iff  L(x, y)`, with a negative left
/// side counting as "not in X".
pub fn shift_condition_high(
    params: &LadderParams,
    r: u32,
    x: impl Into<Var>,
    y: impl Into<Var>,
    n: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (x, y, n) = (x.into(), y.into(), n.into());
    let e = fresh.var();
    let guard = Formula::exists(e.clone(), power_above(x.clone(), e.clone(), fresh).and(le(e, y.clone())));

    let kr = (params.radix as u64).pow(r);
    let kr_var = fresh.var();
    let pad = fresh.var();
    let scaled_n = fresh.var();
    let shifted = fresh.var();
    let member = fresh.var();
    // member + pad = k^r n + x, member in X
    let lhs_in_x = Formula::exists(
        kr_var.clone(),
        Formula::exists(
            pad.clone(),
            Formula::exists(
                scaled_n.clone(),
                Formula::exists(
                    shifted.clone(),
                    Formula::exists(
                        member.clone(),
                        Formula::EqConst(kr_var.clone(), kr)
                            .and(run_padding(params, y.clone(), kr_var.clone(), pad.clone(), fresh))
                            .and(mul_const(kr, n.clone(), scaled_n.clone(), fresh))
                            .and(Formula::Add(scaled_n.clone(), x.clone(), shifted.clone()))
                            .and(Formula::Add(member.clone(), pad.clone(), shifted.clone()))
                            .and(params.in_set(member)),
                    ),
                ),
            ),
        ),
    );
    guard.and(lhs_in_x.iff(word_membership(params, x, y, fresh)))
}

/// The low-side shift condition at constant shift `r`:
/// `k^r n + [a^{r-j} v] in X iff L(x, y)` where `[a^{r-j} v] =
/// [a^{r-j} 0^j] + x`.
pub fn shift_condition_low(
    params: &LadderParams,
    r: u32,
    x: impl Into<Var>,
    y: impl Into<Var>,
    n: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (x, y, n) = (x.into(), y.into(), n.into());
    let e = fresh.var();
    let guard = Formula::exists(e.clone(), power_above(x.clone(), e.clone(), fresh).and(le(e, y.clone())));

    let kr = (params.radix as u64).pow(r);
    let kr_var = fresh.var();
    let pad = fresh.var();
    let scaled_n = fresh.var();
    let partial = fresh.var();
    let total = fresh.var();
    let lhs_in_x = Formula::exists(
        kr_var.clone(),
        Formula::exists(
            pad.clone(),
            Formula::exists(
                scaled_n.clone(),
                Formula::exists(
                    partial.clone(),
                    Formula::exists(
                        total.clone(),
                        Formula::EqConst(kr_var.clone(), kr)
                            .and(run_padding(params, kr_var.clone(), y.clone(), pad.clone(), fresh))
                            .and(mul_const(kr, n.clone(), scaled_n.clone(), fresh))
                            .and(Formula::Add(scaled_n.clone(), pad.clone(), partial.clone()))
                            .and(Formula::Add(partial.clone(), x.clone(), total.clone()))
                            .and(params.in_set(total)),
                    ),
                ),
            ),
        ),
    );
    guard.and(lhs_in_x.iff(word_membership(params, x, y, fresh)))
}

/// The combined shift condition: high side when `y > k^r`, low side when
/// `y <= k^r`.
pub fn shift_condition(
    params: &LadderParams,
    r: u32,
    x: impl Into<Var>,
    y: impl Into<Var>,
    n: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (x, y, n) = (x.into(), y.into(), n.into());
    let kr = (params.radix as u64).pow(r);
    let c1 = fresh.var();
    let high = Formula::exists(
        c1.clone(),
        Formula::EqConst(c1.clone(), kr)
            .and(gt(y.clone(), c1.clone()))
            .and(shift_condition_high(params, r, x.clone(), y.clone(), n.clone(), fresh)),
    );
    let c2 = fresh.var();
    let low = Formula::exists(
        c2.clone(),
        Formula::EqConst(c2.clone(), kr)
            .and(le(y.clone(), c2.clone()))
            .and(shift_condition_low(params, r, x, y, n, fresh)),
    );
    high.or(low)
}

/// `A_r(n, z)`: `z = k^i` is a candidate at shift `r`, meaning
/// `k^{i-1} <= n` and the shift condition holds for every word value `x`
/// of every length `k^j = y <= k^r z`.
pub fn candidate_holds(
    params: &LadderParams,
    r: u32,
    n: impl Into<Var>,
    z: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (n, z) = (n.into(), z.into());
    let e = fresh.var();
    let size_guard = Formula::exists(e.clone(), power_above(n.clone(), e.clone(), fresh).and(ge(e, z.clone())));
    let x = fresh.var();
    let y = fresh.var();
    let e2 = fresh.var();
    let bound = fresh.var();
    let y_in_range = Formula::PowK(y.clone())
        .and(Formula::exists(
            e2.clone(),
            power_above(x.clone(), e2.clone(), fresh).and(le(e2, y.clone())),
        ))
        .and(Formula::exists(
            bound.clone(),
            mul_const((params.radix as u64).pow(r), z.clone(), bound.clone(), fresh).and(le(y.clone(), bound)),
        ));
    Formula::PowK(z.clone()).and(size_guard).and(Formula::forall(
        x.clone(),
        Formula::forall(
            y.clone(),
            y_in_range.implies(shift_condition(params, r, x, y, n, fresh)),
        ),
    ))
}

/// `A_{<=R}(n, z)`: the candidate condition for every shift `r <= R`.
pub fn candidate_holds_upto(
    params: &LadderParams,
    shift_bound: u32,
    n: impl Into<Var>,
    z: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (n, z) = (n.into(), z.into());
    let mut out = candidate_holds(params, 0, n.clone(), z.clone(), fresh);
    for r in 1..=shift_bound {
        out = out.and(candidate_holds(params, r, n.clone(), z.clone(), fresh));
    }
    out
}

/// The graph of the approximation at shift bound `R`: `z` is the largest
/// power of `k` with `z <= k n` satisfying `A_{<=R}(n, z)`.
pub fn approx_graph(
    params: &LadderParams,
    shift_bound: u32,
    n: impl Into<Var>,
    z: impl Into<Var>,
    fresh: &mut Fresh,
) -> Formula {
    let (n, z) = (n.into(), z.into());
    let kn = fresh.var();
    let size = Formula::exists(
        kn.clone(),
        mul_const(params.radix as u64, n.clone(), kn.clone(), fresh).and(le(z.clone(), kn)),
    );
    let z2 = fresh.var();
    let kn2 = fresh.var();
    let other_size = Formula::exists(
        kn2.clone(),
        mul_const(params.radix as u64, n.clone(), kn2.clone(), fresh).and(le(z2.clone(), kn2)),
    );
    let maximal = Formula::forall(
        z2.clone(),
        Formula::PowK(z2.clone())
            .and(other_size)
            .and(candidate_holds_upto(params, shift_bound, n.clone(), z2.clone(), fresh))
            .implies(le(z2, z.clone())),
    );
    Formula::PowK(z.clone())
        .and(size)
        .and(candidate_holds_upto(params, shift_bound, n, z, fresh))
        .and(maximal)
}
