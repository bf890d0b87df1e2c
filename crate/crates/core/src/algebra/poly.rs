//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Elem, Field};
use crate::error::{Error, Result};

/// Little-endian coefficient vector without trailing zeros. The zero
/// polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct Poly(Vec<Elem>);

impl From<Vec<Elem>> for Poly {
    fn from(v: Vec<Elem>) -> Self {
        Poly::new(v)
    }
}

impl From<Poly> for Vec<Elem> {
    fn from(p: Poly) -> Self {
        p.0
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<u32> = self.0.iter().map(|c| c.0).collect();
        write!(f, "Poly{:?}", codes)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_codes(codes: &[u32]) -> Poly {
        Poly::new(codes.iter().map(|&c| Elem(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Elem::ONE])
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Elem, k: usize) -> Poly {
        let mut v = vec![Elem::ZERO; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Poly {
        Poly(vec![Elem::ZERO, Elem::ONE])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn codes(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.0).collect()
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree as a signed integer, with `-1` standing in for the zero polynomial.
    pub fn deg_i(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn leading(&self) -> Elem {
        self.0.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u32, f: &Field) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading()).ok_or(Error::DivisionByZero)?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = r[top];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            q[top - dd] = factor;
            for (i, &dc) in d.0.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = f.sub(r[idx], f.mul(factor, dc));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Result<Poly> {
        Ok(self.div_rem(d, f)?.1)
    }

    /// Exact division; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly, f: &Field) -> Result<Poly> {
        let (q, r) = self.div_rem(d, f)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!("{:?} does not divide {:?}", d, self)));
        }
        Ok(q)
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.leading()) {
            Some(li) => self.scale(li, f),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Evaluate at a point of any field `k` that has the coefficient field as a subfield.
    pub fn eval(&self, x: Elem, k: &Field) -> Elem {
        let mut acc = Elem::ZERO;
        for &c in self.0.iter().rev() {
            acc = k.add(k.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly, f: &Field) -> Result<Poly> {
        let mut acc = Poly::one().rem(m, f)?;
        let mut base = self.rem(m, f)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f)?;
            }
            base = base.mul(&base, f).rem(m, f)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Irreducibility over `f` via `gcd(self, x^(q^i) - x)` for `i <= deg/2`.
    pub fn is_irreducible(&self, f: &Field) -> Result<bool> {
        let d = match self.degree() {
            None => return Err(Error::InvalidArgument("zero polynomial".into())),
            Some(0) => return Ok(false),
            Some(1) => return Ok(true),
            Some(d) => d,
        };
        let q = f.order() as u64;
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.pow_mod(q, self, f)?;
            let g = self.gcd(&h.sub(&x, f), f);
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Roots in the extension field `k`, by exhaustive evaluation.
    pub fn roots_in(&self, k: &Field) -> Vec<Elem> {
        if self.is_zero() {
            return k.elements().collect();
        }
        k.elements().filter(|&a| self.eval(a, k).is_zero()).collect()
    }

    /// The monic polynomial of degree `m` with lower coefficients given by the
    /// base-`q` digits of `index`.
    pub fn monic_from_index(index: u64, m: usize, f: &Field) -> Poly {
        let q = f.order() as u64;
        let mut x = index;
        let mut v: Vec<Elem> = (0..m)
            .map(|_| {
                let d = x % q;
                x /= q;
                Elem(d as u32)
            })
            .collect();
        v.push(Elem::ONE);
        Poly::new(v)
    }

    pub fn monic_of_degree(m: usize, f: &Field) -> impl Iterator<Item = Poly> + '_ {
        let count = (f.order() as u64).pow(m as u32);
        (0..count).map(move |i| Poly::monic_from_index(i, m, f))
    }

    pub fn irreducibles_of_degree(m: usize, f: &Field) -> impl Iterator<Item = Poly> + '_ {
        Poly::monic_of_degree(m, f).filter(move |p| p.is_irreducible(f).unwrap_or(false))
    }

    pub fn smallest_irreducible(f: &Field, m: usize) -> Result<Poly> {
        Poly::irreducibles_of_degree(m, f)
            .next()
            .ok_or_else(|| Error::InvalidArgument(format!("no irreducible of degree {m}")))
    }

    /// Factor a nonzero polynomial into monic irreducibles with multiplicities,
    /// by trial division. Suitable for small fields and degrees only.
    pub fn factor(&self, f: &Field) -> Result<(Elem, Vec<(Poly, u32)>)> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("cannot factor zero".into()));
        }
        let lead = self.leading();
        let mut rest = self.monic(f);
        let mut out = Vec::new();
        let mut d = 1usize;
        while rest.degree().unwrap_or(0) >= 1 {
            if 2 * d > rest.degree().unwrap() {
                out.push((rest.clone(), 1));
                break;
            }
            for p in Poly::irreducibles_of_degree(d, f) {
                let mut mult = 0u32;
                loop {
                    let (q, r) = rest.div_rem(&p, f)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((p, mult));
                }
            }
            d += 1;
        }
        out.sort();
        // merge duplicates that can arise when the remainder is a repeated factor
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (p, m) in out {
            match merged.last_mut() {
                Some((lp, lm)) if *lp == p => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        Ok((lead, merged))
    }

    /// Multiplicity of `p` as a factor of `self` (nonzero).
    pub fn multiplicity_of(&self, p: &Poly, f: &Field) -> u32 {
        let mut rest = self.clone();
        let mut m = 0;
        while !rest.is_zero() {
            match rest.div_rem(p, f) {
                Ok((q, r)) if r.is_zero() => {
                    rest = q;
                    m += 1;
                }
                _ => break,
            }
        }
        m
    }
}
