//! Truncated power series in a local parameter at a finite place.

use crate::algebra::{Elem, Field, Poly};

/// Hard cap on the number of series terms.
pub(crate) const MAX_PRECISION: usize = 64;
pub(crate) const START_PRECISION: usize = 8;

/// Parametrization of the curve near a finite point, precomputed to
/// [`MAX_PRECISION`] terms over the residue field.
#[derive(Clone, Debug)]
pub(crate) enum Local {
    /// `t = x - x0`, `y = y(t)`.
    Unramified { x0: Elem, y: Vec<Elem> },
    /// `t = y - y0`, `x = x(t)`.
    Ramified { y0: Elem, x: Vec<Elem> },
    /// Projective line: `t = x - x0`.
    Line { x0: Elem },
}

pub(crate) fn mul_trunc(a: &[Elem], b: &[Elem], prec: usize, k: &Field) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; prec];
    for (i, &ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(prec - i) {
            out[i + j] = k.add(out[i + j], k.mul(ai, bj));
        }
    }
    out
}

fn add_into(acc: &mut [Elem], b: &[Elem], k: &Field) {
    for (a, &b) in acc.iter_mut().zip(b) {
        *a = k.add(*a, b);
    }
}

/// `p(s(t))` truncated to `prec` terms.
pub(crate) fn compose(p: &Poly, s: &[Elem], prec: usize, k: &Field) -> Vec<Elem> {
    let mut acc = vec![Elem::ZERO; prec];
    for &c in p.coeffs().iter().rev() {
        acc = mul_trunc(&acc, s, prec, k);
        acc[0] = k.add(acc[0], c);
    }
    acc
}

fn truncated(s: &[Elem], prec: usize) -> Vec<Elem> {
    let mut v: Vec<Elem> = s.iter().copied().take(prec).collect();
    v.resize(prec, Elem::ZERO);
    v
}

/// `y^2 + s(x) y - h(x)` for series `x`, `y`.
fn equation(s_poly: &Poly, h: &Poly, x: &[Elem], y: &[Elem], prec: usize, k: &Field) -> Vec<Elem> {
    let mut out = mul_trunc(y, y, prec, k);
    let sx = compose(s_poly, x, prec, k);
    add_into(&mut out, &mul_trunc(&sx, y, prec, k), k);
    let hx = compose(h, x, prec, k);
    for (o, hv) in out.iter_mut().zip(hx) {
        *o = k.sub(*o, hv);
    }
    out
}

impl Local {
    /// Expansion at `(x0, y0)` on `y^2 + s(x) y = h(x)`.
    pub(crate) fn weierstrass(s_poly: &Poly, h: &Poly, x0: Elem, y0: Elem, k: &Field) -> Local {
        let sx0 = s_poly.eval(x0, k);
        let fy = k.add(k.add(y0, y0), sx0);
        if !fy.is_zero() {
            let mut x = vec![Elem::ZERO; MAX_PRECISION];
            x[0] = x0;
            if MAX_PRECISION > 1 {
                x[1] = Elem::ONE;
            }
            let mut y = vec![Elem::ZERO; MAX_PRECISION];
            y[0] = y0;
            let inv = k.inv(fy).expect("nonzero");
            for i in 1..MAX_PRECISION {
                let g = equation(s_poly, h, &x, &y, i + 1, k);
                y[i] = k.neg(k.mul(g[i], inv));
            }
            return Local::Unramified { x0, y };
        }
        // F_x = s'(x) y - h'(x); nonzero at a nonsingular point where F_y vanishes
        let fx = k.sub(k.mul(s_poly.derivative(k).eval(x0, k), y0), h.derivative(k).eval(x0, k));
        let inv = k.inv(fx).expect("nonsingular point");
        let mut y = vec![Elem::ZERO; MAX_PRECISION];
        y[0] = y0;
        y[1] = Elem::ONE;
        let mut x = vec![Elem::ZERO; MAX_PRECISION];
        x[0] = x0;
        for i in 1..MAX_PRECISION {
            let g = equation(s_poly, h, &x, &y, i + 1, k);
            x[i] = k.neg(k.mul(g[i], inv));
        }
        Local::Ramified { y0, x }
    }

    fn coordinates(&self, prec: usize) -> (Vec<Elem>, Vec<Elem>) {
        match self {
            Local::Unramified { x0, y } => {
                let mut x = vec![Elem::ZERO; prec];
                x[0] = *x0;
                if prec > 1 {
                    x[1] = Elem::ONE;
                }
                (x, truncated(y, prec))
            }
            Local::Ramified { y0, x } => {
                let mut y = vec![Elem::ZERO; prec];
                y[0] = *y0;
                if prec > 1 {
                    y[1] = Elem::ONE;
                }
                (truncated(x, prec), y)
            }
            Local::Line { x0 } => {
                let mut x = vec![Elem::ZERO; prec];
                x[0] = *x0;
                if prec > 1 {
                    x[1] = Elem::ONE;
                }
                (x, vec![Elem::ZERO; prec])
            }
        }
    }

    /// Series of `a(x) + b(x) y` to `prec` terms.
    pub(crate) fn expand(&self, a: &Poly, b: &Poly, prec: usize, k: &Field) -> Vec<Elem> {
        let (x, y) = self.coordinates(prec);
        let mut out = compose(a, &x, prec, k);
        if !b.is_zero() {
            let bx = compose(b, &x, prec, k);
            add_into(&mut out, &mul_trunc(&bx, &y, prec, k), k);
        }
        out
    }

    /// Order of vanishing of `a(x) + b(x) y`, or `None` if it exceeds the cap.
    pub(crate) fn order(&self, a: &Poly, b: &Poly, k: &Field) -> Option<(usize, Elem)> {
        let mut prec = START_PRECISION;
        loop {
            let s = self.expand(a, b, prec, k);
            if let Some(i) = s.iter().position(|c| !c.is_zero()) {
                return Some((i, s[i]));
            }
            if prec >= MAX_PRECISION {
                return None;
            }
            prec = (prec * 2).min(MAX_PRECISION);
        }
    }
}
