//! Parser for function-field elements written as text, e.g.
//! `w2*y/(x^2+x+w) + (w2*x + 1)/(x^2 + x + w)`.
//!
//! Atoms are `x`, `y`, integer element codes, `w` (the generator of `F_q`
//! over its prime field) with `w2 = w^2`, and any names bound in `defs`.
//! Juxtaposition multiplies; `^` takes an integer exponent, possibly negative.

use std::collections::BTreeMap;

use crate::algebra::{Elem, Poly};
use crate::curve::{Curve, CurveFunction, RatFn};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("bad number {text}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    curve: &'a Curve,
    defs: &'a BTreeMap<String, CurveFunction>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<CurveFunction> {
        let f = self.curve.field().clone();
        let mut acc = if self.eat('-') { self.term()?.neg(&f) } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?, &f);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<CurveFunction> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = self.curve.mul(&acc, &self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                acc = self.curve.div(&acc, &d)?;
            } else if self.starts_factor() {
                acc = self.curve.mul(&acc, &self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<CurveFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(e)) => *e as u32,
            _ => return Err(Error::Parse("exponent must be an integer".into())),
        };
        self.pos += 1;
        let p = self.curve.pow(&base, e);
        if neg {
            self.curve.inv(&p)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<CurveFunction> {
        let f = self.curve.field();
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => {
                let e = f.elem(u32::try_from(n).map_err(|_| Error::Parse(format!("{n} too large")))?)?;
                Ok(CurveFunction::constant(e))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Op('-') => Ok(self.power()?.neg(f)),
            Tok::Ident(name) => {
                if let Some(d) = self.defs.get(&name) {
                    return Ok(d.clone());
                }
                match name.as_str() {
                    "x" => Ok(CurveFunction::x()),
                    "y" if !self.curve.is_line() => Ok(CurveFunction::y()),
                    "w" | "w2" => {
                        let g = generator(f)?;
                        Ok(CurveFunction::constant(if name == "w" { g } else { f.mul(g, g) }))
                    }
                    _ => Err(Error::Parse(format!("unknown name {name:?}"))),
                }
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

fn generator(f: &crate::algebra::Field) -> Result<Elem> {
    f.generator()
        .ok_or_else(|| Error::Parse("`w` needs a non-prime constant field".into()))
}

/// Parse an expression into a function on `curve`.
pub fn parse_function(text: &str, curve: &Curve, defs: &BTreeMap<String, CurveFunction>) -> Result<CurveFunction> {
    let mut p = Parser { toks: lex(text)?, pos: 0, curve, defs };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {text:?}")));
    }
    Ok(out)
}

/// Parse a polynomial in `x`.
pub fn parse_poly(text: &str, curve: &Curve) -> Result<Poly> {
    let g = parse_function(text, curve, &BTreeMap::new())?;
    if !g.b.is_zero() || !g.a.den().is_one() {
        return Err(Error::Parse(format!("{text:?} is not a polynomial in x")));
    }
    Ok(g.a.num().clone())
}

/// Parse named definitions in order; later ones may refer to earlier ones.
pub fn parse_defs(defs: &[(String, String)], curve: &Curve) -> Result<BTreeMap<String, CurveFunction>> {
    let mut out = BTreeMap::new();
    for (name, text) in defs {
        let v = parse_function(text, curve, &out)?;
        out.insert(name.clone(), v);
    }
    Ok(out)
}

/// A rational function of `x` alone, for convenience in tests and tools.
pub fn rational(num: &[u32], den: &[u32], curve: &Curve) -> Result<CurveFunction> {
    let f = curve.field();
    Ok(CurveFunction::from_rational(RatFn::new(Poly::from_codes(num), Poly::from_codes(den), f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{case_study_curve, f4};

    #[test]
    fn parses_and_renders_round_trip() {
        let c = case_study_curve();
        let f = f4();
        let defs = parse_defs(&[("f".into(), "x^2+x+w".into())], &c).unwrap();
        let g = parse_function("w2*y/f + (w2*x + 1)/f", &c, &defs).unwrap();
        let again = parse_function(&g.render(&f), &c, &BTreeMap::new()).unwrap();
        assert_eq!(g, again);
        let h = parse_function("1/f^2", &c, &defs).unwrap();
        assert_eq!(h, parse_function("f^-2", &c, &defs).unwrap());
        assert_eq!(parse_function("2 x", &c, &defs).unwrap(), parse_function("w*x", &c, &defs).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        let c = case_study_curve();
        let none = BTreeMap::new();
        assert!(parse_function("x +", &c, &none).is_err());
        assert!(parse_function("z", &c, &none).is_err());
        assert!(parse_function("7", &c, &none).is_err());
        assert!(parse_function("1/(x-x)", &c, &none).is_err());
        assert!(parse_poly("1/x", &c).is_err());
    }
}
