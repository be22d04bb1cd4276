//! Compilation of formulas to relation automata.
//!
//! Atoms become base relations cylindrified to the joint variable set;
//! conjunction and disjunction are reachable products of complete DFAs;
//! negation flips final states; an existential projects the variable's
//! track away, restores padding closure by closing the initial states
//! under the all-zeros symbol, and determinizes (with a state cap, since
//! quantifier alternations can blow up). Universals are `not exists not`.

use std::collections::BTreeSet;

use crate::automaton::Automaton;

use super::relation::{
    addition_automaton, constant_automaton, determinize_capped, equality_automaton,
    less_than_automaton, power_automaton, set_automaton, Relation,
};
use super::{Formula, LogicError, SetEnv, Var};

/// Compilation limits.
#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    /// Hard cap on determinization size.
    pub state_cap: usize,
    /// Radix used when the formula mentions no named set.
    pub radix: Option<u32>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { state_cap: 1_000_000, radix: None }
    }
}

/// A compiled formula: either a closed truth value or a relation over the
/// free variables.
#[derive(Debug, Clone)]
pub enum Compiled {
    Constant(bool),
    Relation(Relation),
}

impl Compiled {
    pub fn relation(&self) -> Option<&Relation> {
        match self {
            Compiled::Relation(r) => Some(r),
            Compiled::Constant(_) => None,
        }
    }
}

/// Compile a formula over the named sets into a relation on its free
/// variables (or a truth value when the formula is closed).
///
/// Internally, sub-results may drop unconstrained tracks (for example
/// `x + y = x` reduces to `y = 0`); the final result is cylindrified back
/// to the formula's full free-variable set.
pub fn compile(formula: &Formula, env: &SetEnv, options: &CompileOptions) -> Result<Compiled, LogicError> {
    let radix = match env.radix()? {
        Some(k) => k,
        None => options.radix.ok_or(LogicError::NoRadix)?,
    };
    let ctx = Ctx { env, radix, cap: options.state_cap };
    let inner = ctx.compile(formula)?;
    let free = formula.free_vars();
    Ok(match inner {
        Compiled::Constant(b) if free.is_empty() => Compiled::Constant(b),
        Compiled::Constant(b) => Compiled::Relation(uniform_relation(radix, &free, b)),
        Compiled::Relation(r) if r.vars() == free.as_slice() => Compiled::Relation(r),
        Compiled::Relation(r) => Compiled::Relation(cylindrify(&r, &free)),
    })
}

/// The universal or empty relation over a variable set.
fn uniform_relation(radix: u32, vars: &[Var], full: bool) -> Relation {
    let alph = crate::alphabet::Alphabet::new(radix, vars.len()).expect("valid alphabet");
    let mut builder = Automaton::builder(radix, vars.len()).unwrap().states(1).initial([0usize]);
    for sym in alph.symbols() {
        builder = builder.edge(0, sym, 0);
    }
    if full {
        builder = builder.finals([0usize]);
    }
    Relation::from_parts(builder.build().expect("uniform relation is valid"), vars.to_vec())
}

struct Ctx<'a> {
    env: &'a SetEnv,
    radix: u32,
    cap: usize,
}

impl Ctx<'_> {
    fn compile(&self, formula: &Formula) -> Result<Compiled, LogicError> {
        match formula {
            Formula::Add(x, y, z) => self.atom3(x, y, z),
            Formula::Eq(x, y) => self.atom_eq(x, y),
            Formula::EqConst(x, c) => Ok(Compiled::Relation(Relation::from_parts(
                constant_automaton(self.radix, *c),
                vec![x.clone()],
            ))),
            Formula::Lt(x, y) => self.atom_lt(x, y),
            Formula::InSet(x, name) => {
                let set = self.env.get(name).ok_or_else(|| LogicError::UnknownSet(name.clone()))?;
                Ok(Compiled::Relation(Relation::from_parts(
                    set_automaton(set, self.cap)?,
                    vec![x.clone()],
                )))
            }
            Formula::PowK(x) => Ok(Compiled::Relation(Relation::from_parts(
                power_automaton(self.radix),
                vec![x.clone()],
            ))),
            Formula::Not(inner) => Ok(match self.compile(inner)? {
                Compiled::Constant(b) => Compiled::Constant(!b),
                Compiled::Relation(r) => Compiled::Relation(complement(&r)),
            }),
            Formula::And(a, b) => self.connective(a, b, |x, y| x && y),
            Formula::Or(a, b) => self.connective(a, b, |x, y| x || y),
            Formula::Implies(a, b) => self.connective(a, b, |x, y| !x || y),
            Formula::Iff(a, b) => self.connective(a, b, |x, y| x == y),
            Formula::Exists(v, body) => {
                let inner = self.compile(body)?;
                match inner {
                    // the domain is nonempty, so a vacuous quantifier is a no-op
                    Compiled::Constant(b) => Ok(Compiled::Constant(b)),
                    Compiled::Relation(r) => {
                        if !r.vars().contains(v) {
                            return Ok(Compiled::Relation(r));
                        }
                        if r.arity() == 1 {
                            return Ok(Compiled::Constant(!r.is_empty()));
                        }
                        Ok(Compiled::Relation(self.project(&r, v)?))
                    }
                }
            }
            Formula::Forall(v, body) => {
                let negated = Formula::Exists(v.clone(), Box::new(body.clone().not()));
                Ok(match self.compile(&negated)? {
                    Compiled::Constant(b) => Compiled::Constant(!b),
                    Compiled::Relation(r) => Compiled::Relation(complement(&r)),
                })
            }
        }
    }

    fn atom3(&self, x: &Var, y: &Var, z: &Var) -> Result<Compiled, LogicError> {
        let mut vars: Vec<Var> = vec![x.clone(), y.clone(), z.clone()];
        vars.sort();
        vars.dedup();
        match vars.len() {
            3 => {
                let track = |v: &Var| vars.iter().position(|w| w == v).unwrap();
                Ok(Compiled::Relation(Relation::from_parts(
                    addition_automaton(self.radix, track(x), track(y), track(z)),
                    vars,
                )))
            }
            // duplicated variables: reduce arithmetically
            _ => {
                if x == y && y == z {
                    // x + x = x iff x = 0
                    Ok(Compiled::Relation(Relation::from_parts(
                        constant_automaton(self.radix, 0),
                        vec![x.clone()],
                    )))
                } else if x == y {
                    // x + x = z: keep a 3-track automaton glued on two tracks
                    let glued = glue_tracks(&addition_automaton(self.radix, 0, 1, 2), 0, 1);
                    let mut vars = vec![x.clone(), z.clone()];
                    let flip = vars[0] > vars[1];
                    vars.sort();
                    let a = if flip { swap_tracks(&glued) } else { glued };
                    Ok(Compiled::Relation(Relation::from_parts(a, vars)))
                } else if x == z {
                    // x + y = x iff y = 0
                    Ok(Compiled::Relation(Relation::from_parts(
                        constant_automaton(self.radix, 0),
                        vec![y.clone()],
                    )))
                } else {
                    // y == z: x + y = y iff x = 0
                    Ok(Compiled::Relation(Relation::from_parts(
                        constant_automaton(self.radix, 0),
                        vec![x.clone()],
                    )))
                }
            }
        }
    }

    fn atom_eq(&self, x: &Var, y: &Var) -> Result<Compiled, LogicError> {
        if x == y {
            return Ok(Compiled::Constant(true));
        }
        let mut vars = vec![x.clone(), y.clone()];
        vars.sort();
        Ok(Compiled::Relation(Relation::from_parts(equality_automaton(self.radix), vars)))
    }

    fn atom_lt(&self, x: &Var, y: &Var) -> Result<Compiled, LogicError> {
        if x == y {
            return Ok(Compiled::Constant(false));
        }
        let mut vars = vec![x.clone(), y.clone()];
        vars.sort();
        let track = |v: &Var| vars.iter().position(|w| w == v).unwrap();
        Ok(Compiled::Relation(Relation::from_parts(
            less_than_automaton(self.radix, track(x), track(y)),
            vars,
        )))
    }

    fn connective(
        &self,
        a: &Formula,
        b: &Formula,
        rule: impl Fn(bool, bool) -> bool,
    ) -> Result<Compiled, LogicError> {
        let ca = self.compile(a)?;
        let cb = self.compile(b)?;
        match (ca, cb) {
            (Compiled::Constant(x), Compiled::Constant(y)) => Ok(Compiled::Constant(rule(x, y))),
            (Compiled::Constant(x), Compiled::Relation(r)) => {
                Ok(Compiled::Relation(apply_constant(&r, |fb| rule(x, fb))))
            }
            (Compiled::Relation(r), Compiled::Constant(y)) => {
                Ok(Compiled::Relation(apply_constant(&r, |fa| rule(fa, y))))
            }
            (Compiled::Relation(ra), Compiled::Relation(rb)) => {
                let joint: Vec<Var> = {
                    let mut v: Vec<Var> = ra.vars().iter().chain(rb.vars()).cloned().collect();
                    v.sort();
                    v.dedup();
                    v
                };
                let ea = cylindrify(&ra, &joint);
                let eb = cylindrify(&rb, &joint);
                Ok(Compiled::Relation(product(&ea, &eb, rule)))
            }
        }
    }

    /// Project a variable's track away, then restore padding closure and
    /// determinize.
    fn project(&self, r: &Relation, v: &Var) -> Result<Relation, LogicError> {
        let track = r.vars().iter().position(|w| w == v).expect("projected var is present");
        let a = r.automaton();
        let alph = a.alphabet();
        let mut builder = Automaton::builder(a.radix(), a.tracks() - 1)
            .unwrap()
            .states(a.state_count())
            .finals(a.finals().iter().copied());
        for (src, sym, dst) in a.transitions() {
            builder = builder.edge(src, alph.project_symbol(sym, track), dst);
        }
        // close the initial states under the all-zero symbol of the
        // projected alphabet: witnesses may need more digits than the
        // remaining tracks
        let raw = builder.initial(a.initial().iter().copied()).build()?;
        let mut initial: BTreeSet<usize> = raw.initial().clone();
        loop {
            let step = raw.step_set(&initial, raw.alphabet().zero_symbol());
            let before = initial.len();
            initial.extend(step);
            if initial.len() == before {
                break;
            }
        }
        let nfa = raw.with_initial_finals(initial, raw.finals().iter().copied())?;
        let dfa = determinize_capped(&nfa, self.cap)?;
        let vars: Vec<Var> = r.vars().iter().filter(|w| *w != v).cloned().collect();
        Ok(Relation::from_parts(dfa, vars))
    }
}

/// Complement of a complete DFA relation.
fn complement(r: &Relation) -> Relation {
    let a = r.automaton();
    let finals: Vec<usize> = (0..a.state_count()).filter(|&q| !a.is_final(q)).collect();
    let flipped = a
        .with_initial_finals(a.initial().iter().copied(), finals)
        .expect("complement keeps states");
    Relation::from_parts(flipped, r.vars().to_vec())
}

/// Rewrite final states by a boolean function of the old final flag.
fn apply_constant(r: &Relation, rule: impl Fn(bool) -> bool) -> Relation {
    let a = r.automaton();
    let finals: Vec<usize> = (0..a.state_count()).filter(|&q| rule(a.is_final(q))).collect();
    let rewritten = a
        .with_initial_finals(a.initial().iter().copied(), finals)
        .expect("finals rewrite keeps states");
    Relation::from_parts(rewritten, r.vars().to_vec())
}

/// Extend a relation to a superset of variables by inserting unconstrained
/// tracks.
fn cylindrify(r: &Relation, joint: &[Var]) -> Relation {
    if r.vars() == joint {
        return r.clone();
    }
    let a = r.automaton();
    let big = crate::alphabet::Alphabet::new(a.radix(), joint.len()).expect("joint alphabet is valid");
    // positions of the original vars inside the joint layout
    let keep: Vec<usize> = r
        .vars()
        .iter()
        .map(|v| joint.iter().position(|w| w == v).expect("joint contains all vars"))
        .collect();
    let mut builder = Automaton::builder(a.radix(), joint.len())
        .unwrap()
        .states(a.state_count())
        .initial(a.initial().iter().copied())
        .finals(a.finals().iter().copied());
    for q in 0..a.state_count() {
        for sym in big.symbols() {
            let digits = big.decode(sym);
            let small: Vec<u32> = keep.iter().map(|&pos| digits[pos]).collect();
            let small_sym = a.alphabet().encode(&small).expect("projected digits are in range");
            if let Some(d) = a.dfa_step(q, small_sym) {
                builder = builder.edge(q, sym, d);
            }
        }
    }
    Relation::from_parts(builder.build().expect("cylindrification is valid"), joint.to_vec())
}

/// Reachable product of two complete DFA relations over identical variable
/// layouts.
fn product(a: &Relation, b: &Relation, rule: impl Fn(bool, bool) -> bool) -> Relation {
    debug_assert_eq!(a.vars(), b.vars());
    let (aa, ab) = (a.automaton(), b.automaton());
    let mut ids = std::collections::BTreeMap::new();
    let mut pairs = Vec::new();
    let start = (
        *aa.initial().iter().next().expect("complete DFA"),
        *ab.initial().iter().next().expect("complete DFA"),
    );
    ids.insert(start, 0usize);
    pairs.push(start);
    let mut builder = Automaton::builder(aa.radix(), aa.tracks()).unwrap().initial([0usize]);
    let mut finals = Vec::new();
    let mut at = 0;
    while at < pairs.len() {
        let (qa, qb) = pairs[at];
        if rule(aa.is_final(qa), ab.is_final(qb)) {
            finals.push(at);
        }
        for sym in aa.alphabet().symbols() {
            let next = (
                aa.dfa_step(qa, sym).expect("complete DFA"),
                ab.dfa_step(qb, sym).expect("complete DFA"),
            );
            let next_id = *ids.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            builder = builder.edge(at, sym, next_id);
        }
        at += 1;
    }
    Relation::from_parts(
        builder.states(pairs.len()).finals(finals).build().expect("product is valid"),
        a.vars().to_vec(),
    )
}

/// Keep only transitions whose digits agree on two tracks, then drop the
/// second one. The result is completed with an explicit sink so that the
/// product and complement machinery can assume totality.
fn glue_tracks(a: &Automaton, t1: usize, t2: usize) -> Automaton {
    let alph = a.alphabet();
    let sink = a.state_count();
    let small = crate::alphabet::Alphabet::new(a.radix(), a.tracks() - 1).unwrap();
    let mut builder = Automaton::builder(a.radix(), a.tracks() - 1)
        .unwrap()
        .states(sink + 1)
        .initial(a.initial().iter().copied())
        .finals(a.finals().iter().copied());
    let mut present = vec![std::collections::BTreeSet::new(); sink];
    for (src, sym, dst) in a.transitions() {
        if alph.track_digit(sym, t1) == alph.track_digit(sym, t2) {
            let projected = alph.project_symbol(sym, t2);
            builder = builder.edge(src, projected, dst);
            present[src].insert(projected);
        }
    }
    for q in 0..sink {
        for sym in small.symbols() {
            if !present[q].contains(&sym) {
                builder = builder.edge(q, sym, sink);
            }
        }
    }
    for sym in small.symbols() {
        builder = builder.edge(sink, sym, sink);
    }
    builder.build().expect("gluing is valid")
}

/// Swap the two tracks of a binary relation automaton.
fn swap_tracks(a: &Automaton) -> Automaton {
    let alph = a.alphabet();
    let mut builder = Automaton::builder(a.radix(), 2)
        .unwrap()
        .states(a.state_count())
        .initial(a.initial().iter().copied())
        .finals(a.finals().iter().copied());
    for (src, sym, dst) in a.transitions() {
        let d = alph.decode(sym);
        let swapped = alph.encode(&[d[1], d[0]]).unwrap();
        builder = builder.edge(src, swapped, dst);
    }
    builder.build().expect("swap is valid")
}

/// Outcome of deciding a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub truth: bool,
    /// Values for the outermost existential block, when the sentence is
    /// true and starts with existentials: the lexicographically least
    /// shortest accepted encoding.
    pub witness: Option<Vec<(Var, u64)>>,
}

/// Decide a closed formula. When the sentence starts with an existential
/// block and holds, a witness assignment for that block is extracted.
pub fn decide(formula: &Formula, env: &SetEnv, options: &CompileOptions) -> Result<Decision, LogicError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(LogicError::NotClosed(free));
    }
    // peel the outermost existential block
    let mut exists_vars: Vec<Var> = Vec::new();
    let mut matrix = formula;
    while let Formula::Exists(v, body) = matrix {
        exists_vars.push(v.clone());
        matrix = body;
    }
    if exists_vars.is_empty() {
        let truth = match compile(formula, env, options)? {
            Compiled::Constant(b) => b,
            Compiled::Relation(r) => !r.is_empty(),
        };
        return Ok(Decision { truth, witness: None });
    }
    match compile(matrix, env, options)? {
        Compiled::Constant(b) => Ok(Decision {
            truth: b,
            witness: b.then(|| exists_vars.iter().map(|v| (v.clone(), 0)).collect()),
        }),
        Compiled::Relation(r) => {
            let witness = r.shortest_witness();
            let truth = witness.is_some();
            let assignment = witness.map(|values| {
                let mut out: Vec<(Var, u64)> = Vec::new();
                for v in &exists_vars {
                    let value = r
                        .vars()
                        .iter()
                        .position(|w| w == v)
                        .map(|t| values[t])
                        .unwrap_or(0);
                    out.push((v.clone(), value));
                }
                out
            });
            Ok(Decision { truth, witness: assignment })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::macros;

    fn opts() -> CompileOptions {
        CompileOptions { radix: Some(2), ..Default::default() }
    }

    #[test]
    fn powers_below_nine() {
        // x in k^N and x < 9, k = 2
        let env = SetEnv::new();
        let f = Formula::PowK("x".into())
            .and(Formula::exists("c", Formula::EqConst("c".into(), 9).and(Formula::Lt("x".into(), "c".into()))));
        let r = compile(&f, &env, &opts()).unwrap();
        let r = r.relation().unwrap();
        let members: Vec<u64> = (0..20).filter(|&n| r.accepts_tuple(&[n])).collect();
        assert_eq!(members, vec![1, 2, 4, 8]);
    }

    #[test]
    fn exists_y_x_plus_y_equals_x_is_universal() {
        let env = SetEnv::new();
        let f = Formula::exists("y", Formula::Add("x".into(), "y".into(), "x".into()));
        let r = compile(&f, &env, &opts()).unwrap();
        let r = r.relation().unwrap();
        for n in 0..50 {
            assert!(r.accepts_tuple(&[n]));
        }
    }

    #[test]
    fn sentences_decide() {
        let env = SetEnv::new().with("P", corpus::powers_of_base(2));
        // forall x exists y (x < y and y in k^N)
        let f = Formula::forall(
            "x",
            Formula::exists("y", Formula::Lt("x".into(), "y".into()).and(Formula::PowK("y".into()))),
        );
        assert!(decide(&f, &env, &opts()).unwrap().truth);

        // exists x (x in P and x < 1) is false: the least power is 1
        let f = Formula::exists(
            "x",
            Formula::InSet("x".into(), "P".into())
                .and(Formula::exists("o", Formula::EqConst("o".into(), 1).and(Formula::Lt("x".into(), "o".into())))),
        );
        let d = decide(&f, &env, &opts()).unwrap();
        assert!(!d.truth);
    }

    #[test]
    fn witness_extraction_picks_least() {
        let env = SetEnv::new().with("P", corpus::powers_of_base(2));
        let f = Formula::exists("x", Formula::InSet("x".into(), "P".into()));
        let d = decide(&f, &env, &opts()).unwrap();
        assert!(d.truth);
        assert_eq!(d.witness, Some(vec![("x".to_string(), 1)]));
    }

    #[test]
    fn mul_const_macro_compiles() {
        let env = SetEnv::new();
        let mut fresh = super::super::Fresh::new();
        // y = 3x
        let f = macros::mul_const(3, "x", "y", &mut fresh);
        let r = compile(&f, &env, &opts()).unwrap();
        let r = r.relation().unwrap();
        for x in 0..40u64 {
            assert!(r.accepts_tuple(&[x, 3 * x]));
            assert!(!r.accepts_tuple(&[x, 3 * x + 1]));
        }
    }

    #[test]
    fn mod_eq_macro() {
        let env = SetEnv::new();
        let mut fresh = super::super::Fresh::new();
        let f = macros::mod_eq("x", 3, 2, &mut fresh);
        let r = compile(&f, &env, &opts()).unwrap();
        let r = r.relation().unwrap();
        for x in 0..60u64 {
            assert_eq!(r.accepts_tuple(&[x]), x % 3 == 2, "x={x}");
        }
    }
}
