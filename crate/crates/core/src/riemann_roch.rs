//! Bases of Riemann-Roch spaces `L(D)` for divisors `a*P + b*P_inf`, and the
//! supplement of `L(D)` in `L(2D)` given by the kernel of evaluation at `Q`.

use crate::algebra::{Elem, Matrix, Poly};
use crate::curve::{Curve, CurveFunction, Divisor, Place, PlaceId, RatFn};
use crate::error::{Error, Result};

/// An ordered basis of `L(D)`.
#[derive(Clone, Debug)]
pub struct RrBasis {
    pub divisor: Divisor,
    pub functions: Vec<CurveFunction>,
}

impl RrBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }
}

/// Numerator monomial `x^i` or `x^i y`.
#[derive(Clone, Copy, Debug)]
struct Monomial {
    i: usize,
    with_y: bool,
}

impl Monomial {
    fn parts(self) -> (Poly, Poly) {
        let xi = Poly::monomial(Elem::ONE, self.i);
        if self.with_y {
            (Poly::zero(), xi)
        } else {
            (xi, Poly::zero())
        }
    }

    /// Pole order at infinity, used to order the candidate monomials.
    fn weight(self, line: bool) -> i64 {
        if line {
            self.i as i64
        } else if self.with_y {
            2 * self.i as i64 + 3
        } else {
            2 * self.i as i64
        }
    }
}

/// Splits `D` into its finite part `(place, order)` and its order at infinity.
fn shape(d: &Divisor) -> Result<(Option<(Place, i64)>, i64)> {
    if !d.is_effective() {
        return Err(Error::UnsupportedDivisor("divisor must be effective".into()));
    }
    let mut finite = None;
    let mut at_inf = 0;
    for (p, m) in d.terms() {
        if p.is_infinite() {
            at_inf = m;
        } else if finite.is_some() {
            return Err(Error::UnsupportedDivisor("more than one finite place in the support".into()));
        } else {
            finite = Some((p.clone(), m));
        }
    }
    Ok((finite, at_inf))
}

/// Basis of `L(D)` in reduced echelon form with respect to the candidate
/// monomials `x^i / p^m`, `x^i y / p^m` ordered by pole order at infinity.
pub fn rr_space(curve: &Curve, d: &Divisor) -> Result<RrBasis> {
    let fq = curve.field();
    let line = curve.is_line();
    let (finite, b) = shape(d)?;
    let (p, m, above) = match &finite {
        Some((place, a)) => {
            let poly = place.poly().expect("finite place").clone();
            let e = place.ramification(curve);
            let m = (a + e - 1) / e;
            let above = curve.places_above(&poly)?;
            (poly, m, above)
        }
        None => (Poly::one(), 0, Vec::new()),
    };
    let budget = m * p.deg_i().max(0);
    let mut monos: Vec<Monomial> = Vec::new();
    if line {
        let top = budget + b;
        monos.extend((0..=top.max(-1)).map(|i| Monomial { i: i as usize, with_y: false }));
    } else {
        let top_a = budget + b.div_euclid(2);
        let top_b = budget + (b - 3).div_euclid(2);
        for i in 0..=top_a.max(-1) {
            monos.push(Monomial { i: i as usize, with_y: false });
        }
        for i in 0..=top_b.max(-1) {
            monos.push(Monomial { i: i as usize, with_y: true });
        }
    }
    monos.sort_by_key(|mo| mo.weight(line));

    // v_P(numerator) >= e_P * m - ord_P(D) at every place above p
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for place in &above {
        let need = place.ramification(curve) * m - d.order(place.id());
        if need <= 0 {
            continue;
        }
        let k = place.residue_field();
        let cols: Vec<Vec<Elem>> = monos
            .iter()
            .map(|mo| {
                let (a, bb) = mo.parts();
                place
                    .expansion(curve, &a, &bb, need as usize)
                    .into_iter()
                    .flat_map(|c| k.coords_over(fq, c))
                    .collect()
            })
            .collect();
        let block = Matrix::from_columns(&cols)?;
        rows.extend(block.to_rows());
    }
    let coeffs = if rows.is_empty() {
        Matrix::identity(monos.len())
    } else {
        Matrix::from_rows(&rows)?.null_space(fq)
    };
    let den = p.pow(m as u32, fq);
    let functions: Vec<CurveFunction> = (0..coeffs.rows())
        .map(|r| {
            let mut a = Poly::zero();
            let mut bpart = Poly::zero();
            for (mo, &c) in monos.iter().zip(coeffs.row(r)) {
                if c.is_zero() {
                    continue;
                }
                let term = Poly::monomial(c, mo.i);
                if mo.with_y {
                    bpart = bpart.add(&term, fq);
                } else {
                    a = a.add(&term, fq);
                }
            }
            CurveFunction::new(
                RatFn::new(a, den.clone(), fq).expect("nonzero denominator"),
                RatFn::new(bpart, den.clone(), fq).expect("nonzero denominator"),
            )
        })
        .collect();
    let g = curve.genus() as i64;
    let deg = d.degree();
    if deg > 2 * g - 2 && functions.len() as i64 != deg + 1 - g {
        return Err(Error::DimensionMismatch(format!(
            "L(D) has dimension {} but deg D = {deg}, g = {g}",
            functions.len()
        )));
    }
    Ok(RrBasis { divisor: d.clone(), functions })
}

/// True when `div(f) + D >= 0`.
pub fn in_rr_space(curve: &Curve, f: &CurveFunction, d: &Divisor) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let div = curve.divisor_of(f)?;
    Ok(div.add(d).is_effective())
}

/// Columns are the coordinates over `F_q` of `f(Q)` in the power basis of
/// the residue field of `Q`.
pub fn ev_q_power(curve: &Curve, fns: &[CurveFunction], q: &Place) -> Result<Matrix> {
    let fq = curve.field();
    let k = q.residue_field();
    let cols = fns
        .iter()
        .map(|f| Ok(k.coords_over(fq, q.evaluate(curve, f)?)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(&cols)
}

/// Columns are the coordinates of `f(Q)` in the basis `Ev_Q(basis)` of the
/// residue field. `basis` must evaluate to a basis of it.
pub fn ev_q_matrix(curve: &Curve, fns: &[CurveFunction], q: &Place, basis: &[CurveFunction]) -> Result<Matrix> {
    let fq = curve.field();
    let e = ev_q_power(curve, basis, q)?;
    let e_inv = e
        .inverse(fq)
        .ok_or_else(|| Error::Hypothesis("evaluation at Q is not bijective on the given basis".into()))?;
    e_inv.mul(&ev_q_power(curve, fns, q)?, fq)
}

/// Basis of `{f in L(2D) : f(Q) = 0}`, in echelon form over `b2d`.
pub fn kernel_supplement(
    curve: &Curve,
    q: &Place,
    bd: &[CurveFunction],
    b2d: &[CurveFunction],
) -> Result<Vec<CurveFunction>> {
    let fq = curve.field();
    let n = q.degree();
    let m = ev_q_power(curve, b2d, q)?;
    if m.rank(fq) != n {
        return Err(Error::Hypothesis("evaluation at Q is not surjective on L(2D)".into()));
    }
    if ev_q_power(curve, bd, q)?.rank(fq) != bd.len() {
        return Err(Error::Hypothesis("L(D) meets the kernel of evaluation at Q".into()));
    }
    let ker = m.null_space(fq);
    let expected = b2d.len() - n;
    if ker.rows() != expected {
        return Err(Error::DimensionMismatch(format!("kernel has dimension {}, expected {expected}", ker.rows())));
    }
    Ok((0..ker.rows()).map(|r| CurveFunction::combine(ker.row(r), b2d, fq)).collect())
}

/// Convenience: the divisor `order * P` for a place given by id.
pub fn divisor_at(curve: &Curve, id: &PlaceId, order: i64) -> Result<Divisor> {
    Ok(Divisor::single(curve.place(id)?, order))
}
