//! Curves over a finite field: the projective line (genus 0) and nonsingular
//! Weierstrass models (genus 1), with their places, valuations and evaluation.

mod divisor;
mod function;
mod place;
mod series;

pub use divisor::Divisor;
pub use function::{CurveFunction, RatFn};
pub use place::{Place, PlaceId, PlaceKind};

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum Model {
    ProjectiveLine,
    /// `y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6`, stored as `[a1, a2, a3, a4, a6]`.
    Weierstrass { a: [Elem; 5] },
}

#[derive(Clone, Debug)]
pub struct Curve {
    field: Field,
    model: Model,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.model == other.model
    }
}

impl Curve {
    pub fn projective_line(field: Field) -> Curve {
        Curve { field, model: Model::ProjectiveLine }
    }

    /// Weierstrass model from `[a1, a2, a3, a4, a6]`; rejects singular models.
    pub fn weierstrass(field: Field, a: [Elem; 5]) -> Result<Curve> {
        if let Some(c) = a.iter().find(|c| !field.contains(**c)) {
            return Err(Error::InvalidElement { code: c.0, order: field.order() });
        }
        let curve = Curve { field, model: Model::Weierstrass { a } };
        if curve.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    pub fn from_model(field: Field, model: Model) -> Result<Curve> {
        match model {
            Model::ProjectiveLine => Ok(Curve::projective_line(field)),
            Model::Weierstrass { a } => Curve::weierstrass(field, a),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn genus(&self) -> u32 {
        match self.model {
            Model::ProjectiveLine => 0,
            Model::Weierstrass { .. } => 1,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self.model, Model::ProjectiveLine)
    }

    fn coeffs(&self) -> [Elem; 5] {
        match self.model {
            Model::ProjectiveLine => [Elem::ZERO; 5],
            Model::Weierstrass { a } => a,
        }
    }

    /// `x^3 + a2*x^2 + a4*x + a6`.
    pub fn h(&self) -> Poly {
        let [_, a2, _, a4, a6] = self.coeffs();
        Poly::new(vec![a6, a4, a2, Elem::ONE])
    }

    /// `a1*x + a3`.
    pub fn s(&self) -> Poly {
        let [a1, _, a3, _, _] = self.coeffs();
        Poly::new(vec![a3, a1])
    }

    /// Standard discriminant of the Weierstrass model.
    pub fn discriminant(&self) -> Elem {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.coeffs();
        let n = |k: i64| f.from_int(k);
        let m = |a: Elem, b: Elem| f.mul(a, b);
        let b2 = f.add(m(a1, a1), m(n(4), a2));
        let b4 = f.add(m(n(2), a4), m(a1, a3));
        let b6 = f.add(m(a3, a3), m(n(4), a6));
        let b8 = [
            m(m(a1, a1), a6),
            m(n(4), m(a2, a6)),
            f.neg(m(a1, m(a3, a4))),
            m(a2, m(a3, a3)),
            f.neg(m(a4, a4)),
        ]
        .into_iter()
        .fold(Elem::ZERO, |acc, t| f.add(acc, t));
        let terms = [
            f.neg(m(m(b2, b2), b8)),
            f.neg(m(n(8), m(b4, m(b4, b4)))),
            f.neg(m(n(27), m(b6, b6))),
            m(n(9), m(b2, m(b4, b6))),
        ];
        terms.into_iter().fold(Elem::ZERO, |acc, t| f.add(acc, t))
    }

    /// `F(x, y) = y^2 + s(x)*y - h(x)` evaluated in an extension `k` of the constant field.
    pub fn equation(&self, x: Elem, y: Elem, k: &Field) -> Elem {
        let sx = self.s().eval(x, k);
        let hx = self.h().eval(x, k);
        k.sub(k.add(k.mul(y, y), k.mul(sx, y)), hx)
    }

    pub fn is_on_curve(&self, x: Elem, y: Elem, k: &Field) -> bool {
        self.equation(x, y, k).is_zero()
    }

    // ---- function field arithmetic ----

    pub fn mul(&self, u: &CurveFunction, v: &CurveFunction) -> CurveFunction {
        let f = &self.field;
        if self.is_line() {
            return CurveFunction::from_rational(u.a.mul(&v.a, f));
        }
        // (a + by)(c + dy) = (ac + bd*h) + (ad + bc - bd*s) y
        let (a, b, c, d) = (&u.a, &u.b, &v.a, &v.b);
        let bd = b.mul(d, f);
        let new_a = a.mul(c, f).add(&bd.mul_poly(&self.h(), f), f);
        let new_b = a.mul(d, f).add(&b.mul(c, f), f).sub(&bd.mul_poly(&self.s(), f), f);
        CurveFunction::new(new_a, new_b)
    }

    /// Norm to `F_q(x)`: `a^2 - a*b*s - b^2*h`.
    pub fn norm(&self, u: &CurveFunction) -> RatFn {
        let f = &self.field;
        if self.is_line() {
            return u.a.clone();
        }
        let (a, b) = (&u.a, &u.b);
        let aa = a.mul(a, f);
        let abs = a.mul(b, f).mul_poly(&self.s(), f);
        let bbh = b.mul(b, f).mul_poly(&self.h(), f);
        aa.sub(&abs, f).sub(&bbh, f)
    }

    pub fn inv(&self, u: &CurveFunction) -> Result<CurveFunction> {
        let f = &self.field;
        if u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_line() {
            return Ok(CurveFunction::from_rational(u.a.inv(f)?));
        }
        let n_inv = self.norm(u).inv(f)?;
        // conjugate of a + b*y is (a - b*s) - b*y
        let conj_a = u.a.sub(&u.b.mul_poly(&self.s(), f), f);
        let conj_b = u.b.neg(f);
        Ok(CurveFunction::new(conj_a.mul(&n_inv, f), conj_b.mul(&n_inv, f)))
    }

    pub fn div(&self, u: &CurveFunction, v: &CurveFunction) -> Result<CurveFunction> {
        Ok(self.mul(u, &self.inv(v)?))
    }

    pub fn pow(&self, u: &CurveFunction, e: u32) -> CurveFunction {
        let mut acc = CurveFunction::one();
        for _ in 0..e {
            acc = self.mul(&acc, u);
        }
        acc
    }

    /// Validates a function for use on this curve (no `y` part on the line).
    pub fn check_function(&self, u: &CurveFunction) -> Result<()> {
        if self.is_line() && !u.b.is_zero() {
            return Err(Error::InvalidArgument("functions on the projective line have no y part".into()));
        }
        for p in [u.a.num(), u.a.den(), u.b.num(), u.b.den()] {
            if p.coeffs().iter().any(|c| !self.field.contains(*c)) {
                return Err(Error::InvalidArgument("coefficient outside the constant field".into()));
            }
        }
        Ok(())
    }

    /// Number of points over the extension `k` of the constant field, by
    /// exhaustive search over the affine plane plus the point at infinity.
    pub fn count_points_brute_force(&self, k: &Field) -> u64 {
        if self.is_line() {
            return k.order() as u64 + 1;
        }
        let mut count = 1u64;
        for x in k.elements() {
            for y in k.elements() {
                if self.is_on_curve(x, y, k) {
                    count += 1;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{case_study_curve, f4};

    #[test]
    fn singular_model_is_rejected() {
        // y^2 = x^3 has a cusp
        let f = Field::prime(5).unwrap();
        assert!(matches!(Curve::weierstrass(f, [Elem(0); 5]), Err(Error::SingularCurve)));
    }

    #[test]
    fn case_study_model_is_nonsingular() {
        let c = case_study_curve();
        assert!(!c.discriminant().is_zero());
        assert_eq!(c.genus(), 1);
    }

    #[test]
    fn inverse_and_product() {
        let c = case_study_curve();
        let f = f4();
        let x = CurveFunction::x();
        let y = CurveFunction::y();
        let g = x.add(&y.scale(Elem(2), &f), &f);
        let gi = c.inv(&g).unwrap();
        assert_eq!(c.mul(&g, &gi), CurveFunction::one());
        // y^2 = x^3 + 1 - y on y^2 + y = x^3 + 1
        let y2 = c.mul(&y, &y);
        let expected = CurveFunction::new(RatFn::from_poly(c.h()), RatFn::constant(Elem::ONE));
        assert_eq!(y2, expected);
    }
}
