//! S-expression surface syntax for formulas.
//!
//! ```text
//! (forall n (implies (>= n N) (iff (in n X) (in (+ n p) X))))
//! ```
//!
//! Atoms: `(= t1 t2)`, `(< t1 t2)`, `(<= t1 t2)`, `(> t1 t2)`,
//! `(>= t1 t2)`, `(!= t1 t2)`, `(in t SET)`, `(pow t)`. Terms are
//! variables, decimal constants, and `(+ t1 t2)`; compound terms are
//! lowered to fresh existentials. Connectives: `and`, `or`, `not`,
//! `implies`, `iff`, `exists`, `forall` (the latter two take a variable
//! and a body).

use super::macros;
use super::{Formula, Fresh, LogicError, Var};

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

fn parse_err<T>(at: usize, message: impl Into<String>) -> Result<T, LogicError> {
    Err(LogicError::Parse { at, message: message.into() })
}

fn tokenize(text: &str) -> Result<Vec<(usize, String)>, LogicError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        match c {
            '(' | ')' => {
                tokens.push((at, c.to_string()));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                let start = at;
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                tokens.push((start, atom));
            }
        }
    }
    Ok(tokens)
}

fn parse_sexp(tokens: &[(usize, String)], pos: &mut usize) -> Result<Sexp, LogicError> {
    if *pos >= tokens.len() {
        return parse_err(usize::MAX, "unexpected end of input");
    }
    let (at, tok) = &tokens[*pos];
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                if *pos >= tokens.len() {
                    return parse_err(*at, "unclosed parenthesis");
                }
                if tokens[*pos].1 == ")" {
                    *pos += 1;
                    return Ok(Sexp::List(items, *at));
                }
                items.push(parse_sexp(tokens, pos)?);
            }
        }
        ")" => parse_err(*at, "unexpected `)`"),
        _ => Ok(Sexp::Atom(tok.clone(), *at)),
    }
}

/// Parse the surface syntax into a [`Formula`].
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let sexp = parse_sexp(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return parse_err(tokens[pos].0, "trailing input after formula");
    }
    let mut fresh = Fresh::new();
    formula(&sexp, &mut fresh)
}

/// A lowered term: the variable holding its value, plus definitions that
/// must be existentially wrapped around the consuming atom.
struct Lowered {
    var: Var,
    defs: Vec<Formula>,
    fresh_vars: Vec<Var>,
}

fn lower_term(sexp: &Sexp, fresh: &mut Fresh) -> Result<Lowered, LogicError> {
    match sexp {
        Sexp::Atom(tok, at) => {
            if let Ok(value) = tok.parse::<u64>() {
                let v = fresh.var();
                Ok(Lowered { var: v.clone(), defs: vec![Formula::EqConst(v.clone(), value)], fresh_vars: vec![v] })
            } else {
                check_var(tok, *at)?;
                Ok(Lowered { var: tok.clone(), defs: Vec::new(), fresh_vars: Vec::new() })
            }
        }
        Sexp::List(items, at) => match items.as_slice() {
            [Sexp::Atom(op, _), lhs, rhs] if op == "+" => {
                let mut a = lower_term(lhs, fresh)?;
                let mut b = lower_term(rhs, fresh)?;
                let v = fresh.var();
                let mut defs = Vec::new();
                defs.append(&mut a.defs);
                defs.append(&mut b.defs);
                defs.push(Formula::Add(a.var, b.var, v.clone()));
                let mut fresh_vars = vec![v.clone()];
                fresh_vars.extend(a.fresh_vars);
                fresh_vars.extend(b.fresh_vars);
                Ok(Lowered { var: v, defs, fresh_vars })
            }
            _ => parse_err(*at, "expected a term: variable, constant, or (+ t1 t2)"),
        },
    }
}

fn check_var(tok: &str, at: usize) -> Result<(), LogicError> {
    if tok.starts_with('$') {
        return parse_err(at, "variable names starting with `$` are reserved");
    }
    if tok.parse::<u64>().is_ok() {
        return parse_err(at, format!("expected a variable, got constant `{tok}`"));
    }
    Ok(())
}

/// Wrap an atom over lowered terms in the existentials its definitions
/// need.
fn close_atom(atom: Formula, lowered: Vec<Lowered>) -> Formula {
    let mut body = atom;
    let mut all_fresh = Vec::new();
    for item in lowered.into_iter().rev() {
        for def in item.defs.into_iter().rev() {
            body = def.and(body);
        }
        all_fresh.extend(item.fresh_vars);
    }
    for v in all_fresh.into_iter().rev() {
        body = Formula::exists(v, body);
    }
    body
}

fn binary_term_atom(
    lhs: &Sexp,
    rhs: &Sexp,
    fresh: &mut Fresh,
    make: impl Fn(Var, Var) -> Formula,
) -> Result<Formula, LogicError> {
    // a bare `(= (+ x y) z)` with plain variables maps straight to the
    // addition atom, keeping parse/display round trips exact
    let a = lower_term(lhs, fresh)?;
    let b = lower_term(rhs, fresh)?;
    let atom = make(a.var.clone(), b.var.clone());
    Ok(close_atom(atom, vec![a, b]))
}

fn formula(sexp: &Sexp, fresh: &mut Fresh) -> Result<Formula, LogicError> {
    let Sexp::List(items, at) = sexp else {
        let at = match sexp {
            Sexp::Atom(_, at) => *at,
            Sexp::List(_, at) => *at,
        };
        return parse_err(at, "expected a formula list");
    };
    let Some(Sexp::Atom(op, _)) = items.first() else {
        return parse_err(*at, "expected an operator");
    };
    let args = &items[1..];
    let expect_args = |n: usize| -> Result<(), LogicError> {
        if args.len() == n {
            Ok(())
        } else {
            parse_err(*at, format!("`{op}` takes {n} arguments, got {}", args.len()))
        }
    };
    match op.as_str() {
        "and" | "or" | "implies" | "iff" => {
            expect_args(2)?;
            let a = formula(&args[0], fresh)?;
            let b = formula(&args[1], fresh)?;
            Ok(match op.as_str() {
                "and" => a.and(b),
                "or" => a.or(b),
                "implies" => a.implies(b),
                _ => a.iff(b),
            })
        }
        "not" => {
            expect_args(1)?;
            Ok(formula(&args[0], fresh)?.not())
        }
        "exists" | "forall" => {
            expect_args(2)?;
            let Sexp::Atom(v, vat) = &args[0] else {
                return parse_err(*at, format!("`{op}` expects a variable name"));
            };
            check_var(v, *vat)?;
            let body = formula(&args[1], fresh)?;
            Ok(if op == "exists" { Formula::exists(v.clone(), body) } else { Formula::forall(v.clone(), body) })
        }
        "=" => {
            expect_args(2)?;
            // special forms first: (= (+ x y) z) and (= x c)
            if let (Sexp::List(plus, _), Sexp::Atom(z, zat)) = (&args[0], &args[1]) {
                if let [Sexp::Atom(op2, _), Sexp::Atom(x, xat), Sexp::Atom(y, yat)] = plus.as_slice() {
                    if op2 == "+"
                        && x.parse::<u64>().is_err()
                        && y.parse::<u64>().is_err()
                        && z.parse::<u64>().is_err()
                    {
                        check_var(x, *xat)?;
                        check_var(y, *yat)?;
                        check_var(z, *zat)?;
                        return Ok(Formula::Add(x.clone(), y.clone(), z.clone()));
                    }
                }
            }
            if let (Sexp::Atom(x, xat), Sexp::Atom(c, _)) = (&args[0], &args[1]) {
                if let (Err(_), Ok(value)) = (x.parse::<u64>(), c.parse::<u64>()) {
                    check_var(x, *xat)?;
                    return Ok(Formula::EqConst(x.clone(), value));
                }
            }
            binary_term_atom(&args[0], &args[1], fresh, Formula::Eq)
        }
        "<" => {
            expect_args(2)?;
            binary_term_atom(&args[0], &args[1], fresh, Formula::Lt)
        }
        "<=" => {
            expect_args(2)?;
            binary_term_atom(&args[0], &args[1], fresh, |a, b| macros::le(a, b))
        }
        ">" => {
            expect_args(2)?;
            binary_term_atom(&args[0], &args[1], fresh, |a, b| macros::gt(a, b))
        }
        ">=" => {
            expect_args(2)?;
            binary_term_atom(&args[0], &args[1], fresh, |a, b| macros::ge(a, b))
        }
        "!=" => {
            expect_args(2)?;
            binary_term_atom(&args[0], &args[1], fresh, |a, b| macros::ne(a, b))
        }
        "in" => {
            expect_args(2)?;
            let Sexp::Atom(set, _) = &args[1] else {
                return parse_err(*at, "`in` expects a set name");
            };
            let lowered = lower_term(&args[0], fresh)?;
            let atom = Formula::InSet(lowered.var.clone(), set.clone());
            Ok(close_atom(atom, vec![lowered]))
        }
        "pow" => {
            expect_args(1)?;
            let lowered = lower_term(&args[0], fresh)?;
            let atom = Formula::PowK(lowered.var.clone());
            Ok(close_atom(atom, vec![lowered]))
        }
        other => parse_err(*at, format!("unknown operator `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::{compile, decide, CompileOptions, SetEnv};

    #[test]
    fn parses_the_periodicity_shape() {
        let f = parse_formula("(forall n (implies (>= n N) (iff (in n X) (in (+ n p) X))))").unwrap();
        assert_eq!(f.free_vars(), vec!["N".to_string(), "p".to_string()]);
    }

    #[test]
    fn compound_terms_lower_to_existentials() {
        let f = parse_formula("(in (+ x 3) M)").unwrap();
        let env = SetEnv::new().with("M", corpus::multiples_of(3, 2));
        let r = compile(&f, &env, &CompileOptions::default()).unwrap();
        let r = r.relation().unwrap();
        for x in 0..40u64 {
            assert_eq!(r.accepts_tuple(&[x]), (x + 3) % 3 == 0, "x={x}");
        }
    }

    #[test]
    fn decide_parsed_sentence() {
        let env = SetEnv::new().with("M", corpus::multiples_of(3, 2));
        let f = parse_formula(
            "(exists p (and (!= p 0) (forall n (iff (in n M) (in (+ n p) M)))))",
        )
        .unwrap();
        let d = decide(&f, &env, &CompileOptions::default()).unwrap();
        assert!(d.truth);
        assert_eq!(d.witness, Some(vec![("p".to_string(), 3)]));
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(parse_formula("(pow $x)").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("(and (pow x)").unwrap_err();
        match err {
            LogicError::Parse { at, .. } => assert_eq!(at, 0),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
