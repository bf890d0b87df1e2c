//! Rational functions in `x` and elements `a(x) + b(x)*y` of the function field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};

/// A reduced fraction `num/den` of polynomials over the constant field, with
/// a monic denominator coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, f: &Field) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(&den, f);
        let mut num = num.div_exact(&g, f)?;
        let mut den = den.div_exact(&g, f)?;
        let lead = den.leading();
        if !lead.is_one() {
            let li = f.inv(lead).expect("nonzero leading coefficient");
            num = num.scale(li, f);
            den = den.scale(li, f);
        }
        Ok(RatFn { num, den })
    }

    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFn {
        RatFn { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: Elem) -> RatFn {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.deg_i() - self.den.deg_i())
        }
    }

    pub fn add(&self, other: &RatFn, f: &Field) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFn::new(self.num.add(&other.num, f), self.den.clone(), f).expect("nonzero den");
        }
        let num = self.num.mul(&other.den, f).add(&other.num.mul(&self.den, f), f);
        RatFn::new(num, self.den.mul(&other.den, f), f).expect("nonzero den")
    }

    pub fn neg(&self, f: &Field) -> RatFn {
        RatFn { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFn, f: &Field) -> RatFn {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &RatFn, f: &Field) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        RatFn::new(self.num.mul(&other.num, f), self.den.mul(&other.den, f), f).expect("nonzero den")
    }

    pub fn mul_poly(&self, p: &Poly, f: &Field) -> RatFn {
        self.mul(&RatFn::from_poly(p.clone()), f)
    }

    pub fn scale(&self, c: Elem, f: &Field) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c, f), den: self.den.clone() }
    }

    pub fn inv(&self, f: &Field) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone(), f)
    }

    pub fn div(&self, other: &RatFn, f: &Field) -> Result<RatFn> {
        Ok(self.mul(&other.inv(f)?, f))
    }

    pub fn render(&self, f: &Field) -> String {
        over(group(&render_poly(&self.num, f)), &self.den, f)
    }
}

fn group(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn over(num: String, den: &Poly, f: &Field) -> String {
    if den.is_one() {
        num
    } else {
        format!("{num}/{}", group(&render_poly(den, f)))
    }
}

/// A function `a(x) + b(x)*y`. On the projective line `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveFunction {
    pub a: RatFn,
    pub b: RatFn,
}

impl fmt::Debug for CurveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}*y", self.a, self.b)
    }
}

impl CurveFunction {
    pub fn new(a: RatFn, b: RatFn) -> CurveFunction {
        CurveFunction { a, b }
    }

    pub fn zero() -> CurveFunction {
        CurveFunction { a: RatFn::zero(), b: RatFn::zero() }
    }

    pub fn one() -> CurveFunction {
        CurveFunction { a: RatFn::one(), b: RatFn::zero() }
    }

    pub fn constant(c: Elem) -> CurveFunction {
        CurveFunction { a: RatFn::constant(c), b: RatFn::zero() }
    }

    pub fn x() -> CurveFunction {
        CurveFunction { a: RatFn::from_poly(Poly::x()), b: RatFn::zero() }
    }

    pub fn y() -> CurveFunction {
        CurveFunction { a: RatFn::zero(), b: RatFn::one() }
    }

    pub fn from_rational(a: RatFn) -> CurveFunction {
        CurveFunction { a, b: RatFn::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &CurveFunction, f: &Field) -> CurveFunction {
        CurveFunction { a: self.a.add(&other.a, f), b: self.b.add(&other.b, f) }
    }

    pub fn sub(&self, other: &CurveFunction, f: &Field) -> CurveFunction {
        CurveFunction { a: self.a.sub(&other.a, f), b: self.b.sub(&other.b, f) }
    }

    pub fn neg(&self, f: &Field) -> CurveFunction {
        CurveFunction { a: self.a.neg(f), b: self.b.neg(f) }
    }

    pub fn scale(&self, c: Elem, f: &Field) -> CurveFunction {
        CurveFunction { a: self.a.scale(c, f), b: self.b.scale(c, f) }
    }

    /// Linear combination `sum coeffs[i] * fns[i]`.
    pub fn combine(coeffs: &[Elem], fns: &[CurveFunction], f: &Field) -> CurveFunction {
        coeffs
            .iter()
            .zip(fns)
            .filter(|(c, _)| !c.is_zero())
            .fold(CurveFunction::zero(), |acc, (&c, g)| acc.add(&g.scale(c, f), f))
    }

    /// Write the function as `(A(x) + B(x)*y) / Den(x)` with polynomials.
    pub fn polynomial_form(&self, f: &Field) -> (Poly, Poly, Poly) {
        let a = &self.a;
        let b = &self.b;
        if a.den == b.den {
            return (a.num.clone(), b.num.clone(), a.den.clone());
        }
        let big_a = a.num.mul(&b.den, f);
        let big_b = b.num.mul(&a.den, f);
        (big_a, big_b, a.den.mul(&b.den, f))
    }

    /// Text form accepted by the expression parser, e.g. `x/(x^2 + x + w) + y/(x^2 + x + w)`.
    pub fn render(&self, f: &Field) -> String {
        let ypart = || {
            let n = &self.b.num;
            let num = if n.is_one() { "y".to_string() } else { format!("{}*y", group(&render_poly(n, f))) };
            over(num, &self.b.den, f)
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => self.a.render(f),
            (true, false) => ypart(),
            (false, false) => format!("{} + {}", self.a.render(f), ypart()),
        }
    }
}

pub(crate) fn render_poly(p: &Poly, f: &Field) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coeff = f.symbol(c);
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c.is_one(), i) {
            (_, 0) => coeff,
            (true, _) => mono,
            (false, _) => format!("{coeff}*{mono}"),
        });
    }
    terms.join(" + ")
}
