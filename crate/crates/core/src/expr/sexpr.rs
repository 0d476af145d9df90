//! Canonical s-expression text form, one polynomial per line.
//!
//! Grammar (canonical output, parser is more permissive):
//!
//! ```text
//! poly  := (+ term*)
//! term  := (* (q RAT) (c K)? factor*)      ; (c 0) omitted
//! factor:= atom | (^ atom EXP)             ; exponent 1 printed bare
//! atom  := (S i) | (Om i j) | (Nu a i) | (Al a b) | (P4 i j) | (X i)
//! ```
//!
//! A coefficient polynomial in `c` expands into one term per `c`-degree, so
//! serialisation of a canonical polynomial is deterministic and
//! `parse(render(p)) == p`.

use num::{BigInt, BigRational};
use std::fmt::Write as _;
use std::str::FromStr;

use super::atom::Atom;
use super::coeff::Coefficient;
use super::poly::{FormalPolynomial, Monomial};
use crate::error::ExprError;

pub fn to_sexpr(p: &FormalPolynomial) -> String {
    let mut out = String::from("(+");
    for (m, coeff) in p.iter() {
        for (deg, q) in coeff.iter() {
            out.push_str(" (* ");
            let _ = write!(out, "(q {q})");
            if deg > 0 {
                let _ = write!(out, " (c {deg})");
            }
            for (atom, exp) in m.factors() {
                out.push(' ');
                if *exp == 1 {
                    let _ = write!(out, "{atom}");
                } else {
                    let _ = write!(out, "(^ {atom} {exp})");
                }
            }
            out.push(')');
        }
    }
    out.push(')');
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Sym(String),
    List(Vec<Sexp>),
}

fn tokenize(input: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, ExprError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| ExprError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                    None => return Err(ExprError::Parse("unbalanced parenthesis".into())),
                }
            }
        }
        ")" => Err(ExprError::Parse("unexpected ')'".into())),
        sym => Ok(Sexp::Sym(sym.to_string())),
    }
}

fn sym(s: &Sexp) -> Result<&str, ExprError> {
    match s {
        Sexp::Sym(s) => Ok(s),
        Sexp::List(_) => Err(ExprError::Parse("expected symbol, found list".into())),
    }
}

fn parse_u8(s: &Sexp) -> Result<u8, ExprError> {
    sym(s)?
        .parse()
        .map_err(|_| ExprError::Parse(format!("expected small integer, found `{:?}`", s)))
}

fn parse_atom(list: &[Sexp]) -> Result<Atom, ExprError> {
    let head = sym(list.first().ok_or_else(|| ExprError::Parse("empty list".into()))?)?;
    let arity_err = || ExprError::Parse(format!("wrong arity for atom `{head}`"));
    match (head, list.len()) {
        ("S", 2) => Ok(Atom::s(parse_u8(&list[1])?)),
        ("Om", 3) => Atom::om(parse_u8(&list[1])?, parse_u8(&list[2])?),
        ("Nu", 3) => Ok(Atom::nu(parse_u8(&list[1])?, parse_u8(&list[2])?)),
        ("Al", 3) => Ok(Atom::alpha(parse_u8(&list[1])?, parse_u8(&list[2])?)),
        ("P4", 3) => Ok(Atom::p4(parse_u8(&list[1])?, parse_u8(&list[2])?)),
        ("X", 2) => Ok(Atom::x(parse_u8(&list[1])?)),
        ("S" | "Om" | "Nu" | "Al" | "P4" | "X", _) => Err(arity_err()),
        _ => Err(ExprError::Parse(format!("unknown atom head `{head}`"))),
    }
}

fn parse_term(items: &[Sexp]) -> Result<(Monomial, Coefficient), ExprError> {
    let mut rational = BigRational::from_integer(BigInt::from(1));
    let mut c_deg: u32 = 0;
    let mut factors: Vec<(Atom, u32)> = Vec::new();
    for item in items {
        let Sexp::List(list) = item else {
            return Err(ExprError::Parse(format!("stray symbol in term: {:?}", item)));
        };
        let head = sym(list.first().ok_or_else(|| ExprError::Parse("empty list".into()))?)?;
        match head {
            "q" => {
                if list.len() != 2 {
                    return Err(ExprError::Parse("(q r) takes one argument".into()));
                }
                let r = sym(&list[1])?;
                rational = &rational
                    * BigRational::from_str(r)
                        .map_err(|_| ExprError::Parse(format!("bad rational `{r}`")))?;
            }
            "c" => {
                if list.len() != 2 {
                    return Err(ExprError::Parse("(c k) takes one argument".into()));
                }
                let k: u32 = sym(&list[1])?
                    .parse()
                    .map_err(|_| ExprError::Parse("bad c-power".into()))?;
                c_deg += k;
            }
            "^" => {
                if list.len() != 3 {
                    return Err(ExprError::Parse("(^ atom e) takes two arguments".into()));
                }
                let Sexp::List(atom_list) = &list[1] else {
                    return Err(ExprError::Parse("(^ ...) expects an atom list".into()));
                };
                let exp: u32 = sym(&list[2])?
                    .parse()
                    .map_err(|_| ExprError::Parse("bad exponent".into()))?;
                factors.push((parse_atom(atom_list)?, exp));
            }
            _ => factors.push((parse_atom(list)?, 1)),
        }
    }
    Ok((
        Monomial::from_factors(factors),
        Coefficient::monomial(c_deg, rational),
    ))
}

pub fn from_sexpr(input: &str) -> Result<FormalPolynomial, ExprError> {
    let tokens = tokenize(input);
    let mut pos = 0;
    let root = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(ExprError::Parse("trailing input after polynomial".into()));
    }
    let Sexp::List(items) = root else {
        return Err(ExprError::Parse("expected (+ ...) form".into()));
    };
    if items.first().map(|s| sym(s).ok()) != Some(Some("+")) {
        return Err(ExprError::Parse("polynomial must start with (+".into()));
    }
    let mut poly = FormalPolynomial::zero();
    for term in &items[1..] {
        let Sexp::List(list) = term else {
            return Err(ExprError::Parse("term must be a (* ...) list".into()));
        };
        if list.first().map(|s| sym(s).ok()) != Some(Some("*")) {
            return Err(ExprError::Parse("term must start with (*".into()));
        }
        let (m, c) = parse_term(&list[1..])?;
        poly.add_term(m, c);
    }
    Ok(poly)
}

/// LaTeX rendering for human inspection. `Alpha` atoms render as
/// `\partial_{\Omega_{ab}}` per the operator reinterpretation. Formatting is
/// non-contractual.
pub fn to_latex(p: &FormalPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (m, coeff) in p.iter() {
        for (deg, q) in coeff.iter() {
            use num::Signed;
            if first {
                if q.is_negative() {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if q.is_negative() { " - " } else { " + " });
            }
            let q = q.abs();
            let (num, den) = (q.numer(), q.denom());
            let c_part = match deg {
                0 => String::new(),
                1 => "c".to_string(),
                d => format!("c^{{{d}}}"),
            };
            use num::One;
            let numerator = match (num.is_one(), c_part.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => c_part,
                (false, true) => num.to_string(),
                (false, false) => format!("{num}{c_part}"),
            };
            let coeff_tex = if den.is_one() {
                if numerator == "1" && !m.is_one() {
                    String::new()
                } else {
                    numerator
                }
            } else {
                format!("\\frac{{{numerator}}}{{{den}}}")
            };
            out.push_str(&coeff_tex);
            for (atom, exp) in m.factors() {
                if !out.ends_with(' ') && !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(&atom_latex(atom));
                if *exp > 1 {
                    let _ = write!(out, "^{{{exp}}}");
                }
            }
        }
    }
    out
}

fn atom_latex(atom: &Atom) -> String {
    match *atom {
        Atom::S(i) => format!("s(z_{{{i}}})"),
        Atom::Om(i, j) => format!("\\omega(z_{{{i}}},z_{{{j}}})"),
        Atom::Nu(a, i) => format!("\\nu_{{{a}}}(z_{{{i}}})"),
        Atom::Alpha(a, b) => format!("\\partial_{{\\Omega_{{{a}{b}}}}}"),
        Atom::P4(i, j) => format!("\\mathcal{{P}}_4(z_{{{i}}},z_{{{j}}})"),
        Atom::X(i) => format!("\\{{\\phi(z_{{{i}}}),z_{{{i}}}\\}}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_renders_as_empty_product() {
        assert_eq!(to_sexpr(&FormalPolynomial::one()), "(+ (* (q 1)))");
    }

    #[test]
    fn roundtrip_simple() {
        let text = "(+ (* (q 1/12) (c 1) (S 1)) (* (q 1) (Al 1 1)))";
        let p = from_sexpr(text).unwrap();
        assert_eq!(to_sexpr(&p), text);
    }

    #[test]
    fn parser_canonicalises_input() {
        // unsorted pair, repeated atoms, explicit (c 0)
        let p = from_sexpr("(+ (* (q 1) (c 0) (Om 2 1) (Om 1 2)))").unwrap();
        assert_eq!(to_sexpr(&p), "(+ (* (q 1) (^ (Om 1 2) 2)))");
    }

    #[test]
    fn parser_rejects_diagonal_omega() {
        assert!(from_sexpr("(+ (* (q 1) (Om 1 1)))").is_err());
    }

    #[test]
    fn latex_golden_bits() {
        let p = from_sexpr("(+ (* (q 1/12) (c 1) (S 1)) (* (q 1) (Al 1 1) (Nu 1 1) (Nu 1 1)))")
            .unwrap();
        let tex = to_latex(&p);
        assert!(tex.contains("\\frac{c}{12}"), "{tex}");
        assert!(tex.contains("s(z_{1})"), "{tex}");
        assert!(tex.contains("\\partial_{\\Omega_{11}}"), "{tex}");
    }
}
