//! Element expressions such as `13+9θ`, `(1+t)^2`, `1/2 - phi/2`.
//!
//! Grammar: sums of products of powers; atoms are integers, `p/q`
//! rationals, a generator name, or a parenthesised expression. Juxtaposition
//! multiplies, so `9θ` is `9*θ`. Division is only by constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational_core::RationalPoly;

/// Names accepted for the generator of l.
pub const THETA_NAMES: &[&str] = &["θ", "theta", "t"];
/// Names accepted for the generator of k.
pub const PHI_NAMES: &[&str] = &["φ", "phi"];

/// A variable name and the polynomial (in the output variable) it stands for.
pub type Binding<'a> = (&'a [&'a str], RationalPoly);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn bad(src: &str, why: &str) -> Error {
    Error::input(format!("cannot parse element {src:?}: {why}"))
}

fn lex(src: &str, vars: &[Binding]) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut rest = src;
    'outer: while let Some(c) = rest.chars().next() {
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c.is_ascii_digit() {
            let end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            out.push(Tok::Num(rest[..end].parse().map_err(|_| bad(src, "bad integer"))?));
            rest = &rest[end..];
            continue;
        }
        let tok = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = tok {
            out.push(t);
            rest = &rest[c.len_utf8()..];
            continue;
        }
        let end = rest.find(|ch: char| !ch.is_alphanumeric() || ch.is_ascii_digit()).unwrap_or(rest.len());
        let word = &rest[..end.max(c.len_utf8())];
        for (i, (names, _)) in vars.iter().enumerate() {
            if names.contains(&word) {
                out.push(Tok::Var(i));
                rest = &rest[word.len()..];
                continue 'outer;
            }
        }
        return Err(bad(src, &format!("unknown symbol {word:?}")));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [Binding<'a>],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.degree() {
                        Some(0) => d.coeff(0),
                        _ => return Err(bad(self.src, "division only by nonzero constants")),
                    };
                    acc = acc.scale(&(BigRational::one() / c));
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::Open) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.next() {
            Some(Tok::Num(n)) => {
                let n: u32 = n.try_into().map_err(|_| bad(self.src, "exponent too large"))?;
                Ok(base.pow(n))
            }
            _ => Err(bad(self.src, "exponent must be a nonnegative integer")),
        }
    }

    fn atom(&mut self) -> Result<RationalPoly> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(RationalPoly::constant(BigRational::from_integer(n))),
            Some(Tok::Var(i)) => Ok(self.vars[i].1.clone()),
            Some(Tok::Open) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::Close) => Ok(e),
                    _ => Err(bad(self.src, "unbalanced parenthesis")),
                }
            }
            Some(Tok::Minus) => Ok(self.atom()?.neg()),
            _ => Err(bad(self.src, "unexpected end or operator")),
        }
    }
}

/// Parses `src` into a polynomial, substituting each bound name.
pub fn parse_expr(src: &str, vars: &[Binding]) -> Result<RationalPoly> {
    let toks = lex(src, vars)?;
    if toks.is_empty() {
        return Err(bad(src, "empty"));
    }
    let mut p = Parser { src, toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(bad(src, "trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_core::rational::ratio;

    fn theta() -> Vec<Binding<'static>> {
        vec![(THETA_NAMES, RationalPoly::x())]
    }

    #[test]
    fn parses_common_forms() {
        let v = theta();
        assert_eq!(parse_expr("13+9θ", &v).unwrap(), RationalPoly::from_ints(&[13, 9]));
        assert_eq!(parse_expr("13 + 9*theta", &v).unwrap(), RationalPoly::from_ints(&[13, 9]));
        assert_eq!(parse_expr("(1+t)^2", &v).unwrap(), RationalPoly::from_ints(&[1, 2, 1]));
        assert_eq!(parse_expr("-1+2θ", &v).unwrap(), RationalPoly::from_ints(&[-1, 2]));
        assert_eq!(parse_expr("θ^3 - θ", &v).unwrap(), RationalPoly::from_ints(&[0, -1, 0, 1]));
        assert_eq!(parse_expr("2θ - 1", &v).unwrap(), RationalPoly::from_ints(&[-1, 2]));
        let half = parse_expr("1/2 + θ/2", &v).unwrap();
        assert_eq!(half, RationalPoly::new(vec![ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn substitutes_bindings() {
        let v = vec![(THETA_NAMES, RationalPoly::x()), (PHI_NAMES, RationalPoly::from_ints(&[0, 0, 1]))];
        assert_eq!(parse_expr("1 + φ", &v).unwrap(), RationalPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn rejects_garbage() {
        let v = theta();
        for s in ["", "1+", "(1+θ", "θ/θ", "1/0", "x", "2^θ", "1 2 )"] {
            assert!(parse_expr(s, &v).is_err(), "{s}");
        }
    }
}
