//! Places of a curve: identifiers, enumeration, valuations and evaluation.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::series::Local;
use super::{Curve, CurveFunction};
use crate::algebra::{solve_artin_schreier, Elem, Field, Poly};
use crate::error::{Error, Result};

/// Stable place label. Finite places are named by the minimal polynomial of
/// their x-coordinate and a branch index; branches above a split polynomial
/// are ordered by the code of `y0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "PlaceRepr", into = "PlaceRepr")]
pub enum PlaceId {
    Infinity,
    Finite { poly: Poly, branch: u8 },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PlaceRepr {
    Named(Infinity),
    Finite {
        poly: Poly,
        #[serde(default)]
        branch: u8,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Infinity {
    Infinity,
}

impl From<PlaceRepr> for PlaceId {
    fn from(r: PlaceRepr) -> Self {
        match r {
            PlaceRepr::Named(Infinity::Infinity) => PlaceId::Infinity,
            PlaceRepr::Finite { poly, branch } => PlaceId::Finite { poly, branch },
        }
    }
}

impl From<PlaceId> for PlaceRepr {
    fn from(id: PlaceId) -> Self {
        match id {
            PlaceId::Infinity => PlaceRepr::Named(Infinity::Infinity),
            PlaceId::Finite { poly, branch } => PlaceRepr::Finite { poly, branch },
        }
    }
}

impl fmt::Debug for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceId::Infinity => write!(f, "P_inf"),
            PlaceId::Finite { poly, branch } => write!(f, "P[{:?}#{}]", poly.codes(), branch),
        }
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Ord for PlaceId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PlaceId::Infinity, PlaceId::Infinity) => Ordering::Equal,
            (PlaceId::Infinity, _) => Ordering::Less,
            (_, PlaceId::Infinity) => Ordering::Greater,
            (PlaceId::Finite { poly: a, branch: ba }, PlaceId::Finite { poly: b, branch: bb }) => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
                .then(ba.cmp(bb)),
        }
    }
}

impl PartialOrd for PlaceId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Infinite,
    Split,
    Inert,
    Ramified,
    /// A place of the projective line.
    Line,
}

struct PlaceData {
    id: PlaceId,
    kind: PlaceKind,
    degree: usize,
    residue: Field,
    point: Option<(Elem, Elem)>,
    local: OnceLock<Local>,
}

/// A place of a [`Curve`]. Cheap to clone.
#[derive(Clone)]
pub struct Place(Arc<PlaceData>);

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.id)
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Place {}

impl Place {
    fn new(id: PlaceId, kind: PlaceKind, degree: usize, residue: Field, point: Option<(Elem, Elem)>) -> Place {
        Place(Arc::new(PlaceData { id, kind, degree, residue, point, local: OnceLock::new() }))
    }

    pub fn id(&self) -> &PlaceId {
        &self.0.id
    }

    pub fn kind(&self) -> PlaceKind {
        self.0.kind
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_infinite(&self) -> bool {
        self.0.kind == PlaceKind::Infinite
    }

    /// Residue field: `F_q` for rational places, `F_q[X]/p(X)` for split and
    /// ramified places, and a quadratic extension of that for inert ones.
    pub fn residue_field(&self) -> &Field {
        &self.0.residue
    }

    /// Representative point `(x0, y0)` over the residue field (finite places only;
    /// on the projective line `y0` is zero).
    pub fn point(&self) -> Option<(Elem, Elem)> {
        self.0.point
    }

    /// Minimal polynomial of the x-coordinate.
    pub fn poly(&self) -> Option<&Poly> {
        match &self.0.id {
            PlaceId::Finite { poly, .. } => Some(poly),
            PlaceId::Infinity => None,
        }
    }

    /// Ramification index over the corresponding place of `F_q(x)`.
    pub fn ramification(&self, curve: &Curve) -> i64 {
        match self.0.kind {
            PlaceKind::Ramified => 2,
            PlaceKind::Infinite if !curve.is_line() => 2,
            _ => 1,
        }
    }

    fn local(&self, curve: &Curve) -> &Local {
        self.0.local.get_or_init(|| {
            let (x0, y0) = self.0.point.expect("finite place");
            if curve.is_line() {
                Local::Line { x0 }
            } else {
                Local::weierstrass(&curve.s(), &curve.h(), x0, y0, &self.0.residue)
            }
        })
    }

    /// Order of vanishing of `a(x) + b(x) y`, together with the leading
    /// coefficient in the local parameter (at infinity: in `1/x` on the line,
    /// in `x/y` on a Weierstrass model).
    fn order_of(&self, curve: &Curve, a: &Poly, b: &Poly) -> Result<(i64, Elem)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if self.is_infinite() {
            if curve.is_line() {
                return Ok((-a.deg_i(), a.leading()));
            }
            // v(x) = -2, v(y) = -3: the two terms never cancel
            let va = if a.is_zero() { i64::MAX } else { -2 * a.deg_i() };
            let vb = if b.is_zero() { i64::MAX } else { -2 * b.deg_i() - 3 };
            return Ok(if va < vb { (va, a.leading()) } else { (vb, b.leading()) });
        }
        let k = &self.0.residue;
        self.local(curve)
            .order(a, b, k)
            .map(|(i, c)| (i as i64, c))
            .ok_or_else(|| Error::PrecisionExhausted(format!("{:?}", self.0.id)))
    }

    /// `v_P(f)`.
    pub fn valuation(&self, curve: &Curve, f: &CurveFunction) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let field = curve.field();
        let (a, b, den) = f.polynomial_form(field);
        let (vn, _) = self.order_of(curve, &a, &b)?;
        let (vd, _) = self.order_of(curve, &den, &Poly::zero())?;
        Ok(vn - vd)
    }

    /// `f(P)` in the residue field.
    pub fn evaluate(&self, curve: &Curve, f: &CurveFunction) -> Result<Elem> {
        if f.is_zero() {
            return Ok(Elem::ZERO);
        }
        let field = curve.field();
        let k = &self.0.residue;
        let (a, b, den) = f.polynomial_form(field);
        if let Some((x0, y0)) = self.0.point {
            let d = den.eval(x0, k);
            if !d.is_zero() {
                let num = k.add(a.eval(x0, k), k.mul(b.eval(x0, k), y0));
                return k.div(num, d);
            }
        }
        let (vn, cn) = self.order_of(curve, &a, &b)?;
        let (vd, cd) = self.order_of(curve, &den, &Poly::zero())?;
        match vn.cmp(&vd) {
            Ordering::Greater => Ok(Elem::ZERO),
            Ordering::Less => Err(Error::Pole(format!("{:?}", self.0.id))),
            Ordering::Equal => k.div(cn, cd),
        }
    }

    /// Coefficients `0..count` of the expansion of `a(x) + b(x) y` in the
    /// local parameter (finite places only).
    pub(crate) fn expansion(&self, curve: &Curve, a: &Poly, b: &Poly, count: usize) -> Vec<Elem> {
        if count == 0 {
            return Vec::new();
        }
        self.local(curve).expand(a, b, count, &self.0.residue)
    }

    /// True when the orbit of the representative point under the `q`-power
    /// Frobenius has exactly `degree` elements.
    pub fn orbit_matches_degree(&self, curve: &Curve) -> bool {
        let Some((x0, y0)) = self.0.point else {
            return self.0.degree == 1;
        };
        let k = &self.0.residue;
        let q = curve.field();
        let mut pt = (x0, y0);
        let mut size = 0;
        loop {
            pt = (k.frobenius(pt.0, q), k.frobenius(pt.1, q));
            size += 1;
            if pt == (x0, y0) || size > self.0.degree {
                break;
            }
        }
        size == self.0.degree
    }
}

impl Curve {
    pub fn infinity(&self) -> Place {
        Place::new(PlaceId::Infinity, PlaceKind::Infinite, 1, self.field().clone(), None)
    }

    /// Places lying over the place `p(x)` of `F_q(x)`.
    pub fn places_above(&self, p: &Poly) -> Result<Vec<Place>> {
        let fq = self.field();
        if !p.is_monic() || !p.is_irreducible(fq)? {
            return Err(Error::InvalidArgument(format!("{:?} is not monic irreducible", p)));
        }
        if p.coeffs().iter().any(|c| !fq.contains(*c)) {
            return Err(Error::InvalidArgument("polynomial coefficient outside the field".into()));
        }
        let k_deg = p.degree().expect("nonzero");
        let (k, x0) = if k_deg == 1 {
            (fq.clone(), fq.neg(p.coeff(0)))
        } else {
            let k = fq.extension(p)?;
            let x0 = k.generator().expect("proper extension");
            (k, x0)
        };
        if self.is_line() {
            let id = PlaceId::Finite { poly: p.clone(), branch: 0 };
            return Ok(vec![Place::new(id, PlaceKind::Line, k_deg, k, Some((x0, Elem::ZERO)))]);
        }
        let c = self.s().eval(x0, &k);
        let d = self.h().eval(x0, &k);
        let roots = solve_artin_schreier(c, d, &k);
        let id = |branch| PlaceId::Finite { poly: p.clone(), branch };
        Ok(match roots.len() {
            2 => roots
                    .iter()
                    .enumerate()
                    .map(|(i, &y0)| Place::new(id(i as u8), PlaceKind::Split, k_deg, k.clone(), Some((x0, y0))))
                    .collect(),
            1 => vec![Place::new(id(0), PlaceKind::Ramified, k_deg, k, Some((x0, roots[0])))],
            _ => {
                // y^2 + c y - d is irreducible over k
                let modulus = Poly::new(vec![k.neg(d), c, Elem::ONE]);
                let l = k.extension(&modulus)?;
                let y0 = l.generator().expect("quadratic extension");
                vec![Place::new(id(0), PlaceKind::Inert, 2 * k_deg, l, Some((x0, y0)))]
            }
        })
    }

    pub fn place(&self, id: &PlaceId) -> Result<Place> {
        match id {
            PlaceId::Infinity => Ok(self.infinity()),
            PlaceId::Finite { poly, branch } => self
                .places_above(poly)?
                .into_iter()
                .nth(*branch as usize)
                .ok_or_else(|| Error::UnknownPlace(format!("{:?}", id))),
        }
    }

    /// The rational place with affine coordinates `(x, y)`.
    pub fn place_at(&self, x: Elem, y: Elem) -> Result<Place> {
        let fq = self.field();
        let p = Poly::new(vec![fq.neg(x), Elem::ONE]);
        self.places_above(&p)?
            .into_iter()
            .find(|pl| pl.degree() == 1 && pl.point().map(|(_, y0)| y0) == Some(y))
            .ok_or_else(|| Error::UnknownPlace(format!("no rational point ({x}, {y})")))
    }

    /// Degree-1 places: infinity first, then by x code, then by y code.
    pub fn rational_places(&self) -> Vec<Place> {
        let fq = self.field();
        let mut out = vec![self.infinity()];
        for x in fq.elements() {
            let p = Poly::new(vec![fq.neg(x), Elem::ONE]);
            let above = self.places_above(&p).expect("linear polynomials are irreducible");
            out.extend(above.into_iter().filter(|pl| pl.degree() == 1));
        }
        out
    }

    /// All places of degree exactly `k`.
    pub fn places_of_degree(&self, k: usize) -> Vec<Place> {
        let fq = self.field();
        let mut out = Vec::new();
        if k == 1 {
            out.push(self.infinity());
        }
        for p in Poly::irreducibles_of_degree(k, fq) {
            let above = self.places_above(&p).expect("irreducible");
            out.extend(above.into_iter().filter(|pl| pl.degree() == k));
        }
        if k % 2 == 0 && !self.is_line() {
            for p in Poly::irreducibles_of_degree(k / 2, fq) {
                let above = self.places_above(&p).expect("irreducible");
                out.extend(above.into_iter().filter(|pl| pl.degree() == k));
            }
        }
        out
    }

    /// Number of places of degree `k` (the count `N_k`).
    pub fn count_places_of_degree(&self, k: usize) -> usize {
        self.places_of_degree(k).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::RatFn;
    use crate::test_support::{case_study_curve, f4};

    fn w() -> Elem {
        Elem(2)
    }
    fn w2() -> Elem {
        Elem(3)
    }

    #[test]
    fn nine_rational_places_in_order() {
        let c = case_study_curve();
        let pts: Vec<Option<(Elem, Elem)>> = c.rational_places().iter().map(|p| p.point()).collect();
        let expected = vec![
            None,
            Some((Elem(0), w())),
            Some((Elem(0), w2())),
            Some((Elem(1), Elem(0))),
            Some((Elem(1), Elem(1))),
            Some((w(), Elem(0))),
            Some((w(), Elem(1))),
            Some((w2(), Elem(0))),
            Some((w2(), Elem(1))),
        ];
        assert_eq!(pts, expected);
    }

    #[test]
    fn three_rational_places_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let c = Curve::weierstrass(f2, [Elem(0), Elem(0), Elem(1), Elem(0), Elem(1)]).unwrap();
        let pts: Vec<_> = c.rational_places().iter().map(|p| p.point()).collect();
        assert_eq!(pts, vec![None, Some((Elem(1), Elem(0))), Some((Elem(1), Elem(1)))]);
    }

    #[test]
    fn splitting_behaviour() {
        let c = case_study_curve();
        let q = c.places_above(&Poly::from_codes(&[2, 2, 2, 1, 1])).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.iter().all(|p| p.kind() == PlaceKind::Split && p.degree() == 4));
        assert_eq!(q[0].residue_field().order(), 256);
        let d = c.places_above(&Poly::from_codes(&[2, 1, 1])).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind(), PlaceKind::Inert);
        assert_eq!(d[0].degree(), 4);
        let at_zero = c.places_above(&Poly::x()).unwrap();
        let ys: Vec<Elem> = at_zero.iter().map(|p| p.point().unwrap().1).collect();
        assert_eq!(ys, vec![w(), w2()]);
        for p in q.iter().chain(d.iter()) {
            assert!(p.orbit_matches_degree(&c));
            let (x0, y0) = p.point().unwrap();
            assert!(c.is_on_curve(x0, y0, p.residue_field()));
        }
    }

    #[test]
    fn reducible_polynomial_is_rejected() {
        let c = case_study_curve();
        assert!(c.places_above(&Poly::from_codes(&[0, 1, 1])).is_err());
    }

    #[test]
    fn pole_orders_at_infinity() {
        let c = case_study_curve();
        let inf = c.infinity();
        assert_eq!(inf.valuation(&c, &CurveFunction::x()).unwrap(), -2);
        assert_eq!(inf.valuation(&c, &CurveFunction::y()).unwrap(), -3);
    }

    #[test]
    fn d_polynomial_vanishes_simply_at_its_place() {
        let c = case_study_curve();
        let dpoly = Poly::from_codes(&[2, 1, 1]);
        let d = &c.places_above(&dpoly).unwrap()[0];
        let g = CurveFunction::from_rational(RatFn::from_poly(dpoly));
        assert_eq!(d.valuation(&c, &g).unwrap(), 1);
    }

    #[test]
    fn evaluation_examples() {
        let c = case_study_curve();
        let f = f4();
        let dpoly = Poly::from_codes(&[2, 1, 1]);
        let x2 = RatFn::new(Poly::from_codes(&[0, 0, 1]), dpoly.clone(), &f).unwrap();
        let f4fn = CurveFunction::from_rational(x2);
        assert_eq!(c.infinity().evaluate(&c, &f4fn).unwrap(), Elem::ONE);
        let f1 = CurveFunction::from_rational(RatFn::new(Poly::one(), dpoly, &f).unwrap());
        let p3 = c.place_at(Elem(1), Elem(0)).unwrap();
        assert_eq!(p3.evaluate(&c, &f1).unwrap(), w2());
        assert_eq!(p3.evaluate(&c, &CurveFunction::constant(w())).unwrap(), w());
    }

    #[test]
    fn pole_is_reported() {
        let c = case_study_curve();
        let p1 = c.place_at(Elem(0), w()).unwrap();
        let f = f4();
        let inv_x = CurveFunction::from_rational(RatFn::new(Poly::one(), Poly::x(), &f).unwrap());
        assert!(matches!(p1.evaluate(&c, &inv_x), Err(Error::Pole(_))));
    }

    #[test]
    fn ramified_places_in_odd_characteristic() {
        // y^2 = x^3 - x over F_5 is ramified over its 2-torsion x-values
        let f5 = Field::prime(5).unwrap();
        let c = Curve::weierstrass(f5.clone(), [Elem(0), Elem(0), Elem(0), Elem(4), Elem(0)]).unwrap();
        let above = c.places_above(&Poly::x()).unwrap();
        assert_eq!(above.len(), 1);
        assert_eq!(above[0].kind(), PlaceKind::Ramified);
        // y has a simple zero there, x a double one
        assert_eq!(above[0].valuation(&c, &CurveFunction::y()).unwrap(), 1);
        assert_eq!(above[0].valuation(&c, &CurveFunction::x()).unwrap(), 2);
    }

    #[test]
    fn place_ids_round_trip_through_json() {
        let ids = vec![PlaceId::Infinity, PlaceId::Finite { poly: Poly::from_codes(&[2, 1, 1]), branch: 1 }];
        let s = serde_json::to_string(&ids).unwrap();
        assert_eq!(s, r#"["infinity",{"poly":[2,1,1],"branch":1}]"#);
        let back: Vec<PlaceId> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ids);
    }
}
