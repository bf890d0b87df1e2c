//! Finite fields `F_p`, `F_p[X]/m(X)` and towers of such extensions.
//!
//! Elements are plain integer codes. An element of `B[X]/m(X)` with power-basis
//! coefficients `c_0, .., c_{k-1}` (each an element of `B`) has code
//! `sum c_i * |B|^i`. Applied recursively, the base-`p` digits of a code are the
//! coordinates of the element over the prime field, and the base-`|F|` digits
//! are its coordinates over any subfield `F` of the tower. Subfield elements
//! keep their code when embedded, so values can move up a tower untouched.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Fields up to this order get exp/log tables; larger ones fall back to
/// schoolbook multiplication in the power basis.
const TABLE_LIMIT: u64 = 1 << 20;
const MAX_ORDER: u64 = 1 << 31;

/// A field element, identified by its canonical integer code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    characteristic: u32,
    order: u32,
    /// Degree over the immediate base (1 for a prime field).
    degree: usize,
    /// Degree over the prime field.
    absolute_degree: usize,
    base: Option<Field>,
    /// Monic defining polynomial over `base`; empty for prime fields.
    modulus: Vec<Elem>,
    tables: Option<Tables>,
}

/// A finite field. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.base {
            None => write!(f, "F_{}", self.order()),
            Some(base) => write!(f, "F_{}[X]/{:?} over {:?}", self.order(), self.0.modulus, base),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.order == other.0.order
            && self.0.characteristic == other.0.characteristic
            && self.0.modulus == other.0.modulus
            && self.0.base == other.0.base
    }
}

impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut inner = Inner {
            characteristic: p,
            order: p,
            degree: 1,
            absolute_degree: 1,
            base: None,
            modulus: Vec::new(),
            tables: None,
        };
        if (p as u64) <= TABLE_LIMIT && p > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// `F_{p^m}` as `F_p[X]/modulus`, or with the lexicographically smallest
    /// monic irreducible of degree `m` when `modulus` is `None`.
    pub fn make_extension(p: u32, m: usize, modulus: Option<&Poly>) -> Result<Field> {
        let prime = Field::prime(p)?;
        if m == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        match modulus {
            Some(f) => {
                if f.degree() != Some(m) {
                    return Err(Error::InvalidModulus(format!(
                        "modulus {:?} does not have degree {m}",
                        f
                    )));
                }
                if m == 1 {
                    if !f.is_monic() {
                        return Err(Error::InvalidModulus("modulus is not monic".into()));
                    }
                    return Ok(prime);
                }
                prime.extension(f)
            }
            None if m == 1 => Ok(prime),
            None => prime.extension_auto(m),
        }
    }

    /// Extension `self[X]/modulus`. The modulus must be monic and irreducible.
    pub fn extension(&self, modulus: &Poly) -> Result<Field> {
        let degree = match modulus.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidModulus("modulus must have positive degree".into())),
        };
        if !modulus.is_monic() {
            return Err(Error::InvalidModulus(format!("modulus {:?} is not monic", modulus)));
        }
        if modulus.coeffs().iter().any(|c| c.0 >= self.order()) {
            return Err(Error::InvalidModulus("modulus coefficient outside base field".into()));
        }
        if !modulus.is_irreducible(self)? {
            return Err(Error::InvalidModulus(format!("modulus {:?} is reducible", modulus)));
        }
        let order = (self.order() as u64).checked_pow(degree as u32).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let mut inner = Inner {
            characteristic: self.characteristic(),
            order: order as u32,
            degree,
            absolute_degree: degree * self.absolute_degree(),
            base: Some(self.clone()),
            modulus: modulus.coeffs().to_vec(),
            tables: None,
        };
        if order <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Extension of degree `m` by the smallest monic irreducible polynomial
    /// under the integer encoding of its lower coefficients.
    pub fn extension_auto(&self, m: usize) -> Result<Field> {
        let modulus = Poly::smallest_irreducible(self, m)?;
        self.extension(&modulus)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.characteristic
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Degree over the immediate base field.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn absolute_degree(&self) -> usize {
        self.0.absolute_degree
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    /// Defining polynomial over the immediate base (empty for `F_p`).
    pub fn modulus(&self) -> Poly {
        Poly::new(self.0.modulus.clone())
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// True when `sub` is `self` or one of the fields below it in the tower.
    pub fn has_subfield(&self, sub: &Field) -> bool {
        let mut cur = Some(self);
        while let Some(f) = cur {
            if f == sub {
                return true;
            }
            cur = f.base();
        }
        false
    }

    /// Number of coordinates of an element over the subfield `sub`.
    pub fn degree_over(&self, sub: &Field) -> usize {
        let mut d = 0usize;
        let mut acc = 1u64;
        while acc < self.order() as u64 {
            acc *= sub.order() as u64;
            d += 1;
        }
        d
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order()).map(Elem)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order()
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.order() {
            Ok(Elem(code))
        } else {
            Err(Error::InvalidElement { code, order: self.order() })
        }
    }

    /// Image of the integer `n` under `Z -> F_p`.
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.characteristic() as i64;
        Elem(n.rem_euclid(p) as u32)
    }

    /// The class of `X` in `self = base[X]/m(X)`; the generator of the power basis.
    pub fn generator(&self) -> Option<Elem> {
        match &self.0.base {
            Some(base) if self.0.degree > 1 => Some(Elem(base.order())),
            Some(_) => None,
            None => None,
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.characteristic;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.0.base.is_none() {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.characteristic;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.order - 1;
            let s = t.log[a.0 as usize] + t.log[b.0 as usize];
            let s = if s >= n { s - n } else { s };
            return Elem(t.exp[s as usize]);
        }
        mul_slow(&self.0, a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.order - 1;
            let l = t.log[a.0 as usize];
            return Some(Elem(t.exp[((n - l) % n) as usize]));
        }
        Some(self.pow(a, self.0.order as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(|sub|)`, the Frobenius of the extension `self / sub`.
    pub fn frobenius(&self, a: Elem, sub: &Field) -> Elem {
        self.pow(a, sub.order() as u64)
    }

    /// Coordinates over the subfield `sub` (base-`|sub|` digits of the code).
    pub fn coords_over(&self, sub: &Field, a: Elem) -> Vec<Elem> {
        let k = self.degree_over(sub);
        let q = sub.order();
        let mut x = a.0;
        (0..k)
            .map(|_| {
                let d = x % q;
                x /= q;
                Elem(d)
            })
            .collect()
    }

    pub fn from_coords_over(&self, sub: &Field, coords: &[Elem]) -> Elem {
        let q = sub.order();
        let mut code = 0u32;
        for c in coords.iter().rev() {
            code = code * q + c.0;
        }
        Elem(code)
    }

    /// Display symbol for an element: `0, 1, w, w2` in `F_4`, the integer
    /// code otherwise.
    pub fn symbol(&self, a: Elem) -> String {
        if self.order() == 4 && self.characteristic() == 2 {
            ["0", "1", "w", "w2"][a.0 as usize].to_string()
        } else {
            a.0.to_string()
        }
    }

    /// Square root when one exists.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(Elem::ZERO);
        }
        let q = self.order() as u64;
        if self.characteristic() == 2 {
            return Some(self.pow(a, q / 2));
        }
        // Euler's criterion, then Tonelli-Shanks.
        let minus_one = self.neg(Elem::ONE);
        if self.pow(a, (q - 1) / 2) != Elem::ONE {
            return None;
        }
        let mut s = 0u32;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(2)
            .find(|&z| self.pow(z, (q - 1) / 2) == minus_one)
            .expect("odd-order field has a non-residue");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut r = self.pow(a, (t + 1) / 2);
        let mut tt = self.pow(a, t);
        while tt != Elem::ONE {
            let mut i = 0u32;
            let mut probe = tt;
            while probe != Elem::ONE {
                probe = self.mul(probe, probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

fn mul_slow(inner: &Inner, a: Elem, b: Elem) -> Elem {
    let p = inner.characteristic;
    let base = match &inner.base {
        None => return Elem(((a.0 as u64 * b.0 as u64) % p as u64) as u32),
        Some(b) => b,
    };
    let q = base.order();
    let k = inner.degree;
    let digits = |mut x: u32| -> Vec<Elem> {
        (0..k)
            .map(|_| {
                let d = x % q;
                x /= q;
                Elem(d)
            })
            .collect()
    };
    let (da, db) = (digits(a.0), digits(b.0));
    let mut prod = vec![Elem::ZERO; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(x, y));
        }
    }
    // Reduce by the monic modulus from the top.
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c.is_zero() {
            continue;
        }
        prod[top] = Elem::ZERO;
        for (i, &m) in inner.modulus[..k].iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = base.sub(prod[idx], base.mul(c, m));
        }
    }
    let mut code = 0u32;
    for c in prod[..k].iter().rev() {
        code = code * q + c.0;
    }
    Elem(code)
}

fn build_tables(inner: &Inner) -> Tables {
    let order = inner.order as u64;
    let n = order - 1;
    let factors = prime_factors(n);
    let pow_slow = |a: Elem, mut e: u64| -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_slow(inner, acc, base);
            }
            base = mul_slow(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let generator = (1..inner.order)
        .map(Elem)
        .find(|&g| factors.iter().all(|&r| pow_slow(g, n / r) != Elem::ONE))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; order as usize];
    let mut cur = Elem::ONE;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = cur.0;
        log[cur.0 as usize] = i as u32;
        cur = mul_slow(inner, cur, generator);
    }
    Tables { exp, log }
}
