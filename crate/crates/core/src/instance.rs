//! Assembled multiplication algorithms: the evaluation matrices, the
//! interpolation step, execution with operation counts, and the metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, Matrix, Poly};
use crate::curve::{Curve, CurveFunction, Divisor, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::riemann_roch::{ev_q_power, in_rr_space, kernel_supplement, rr_space};

/// The executable part of an algorithm: `T_D`, `R` and the change of basis
/// between `B_Q` coordinates and the power basis of `F_q[X]/Q(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Algorithm {
    field: Field,
    modulus: Poly,
    td: Matrix,
    r: Matrix,
    bq: Matrix,
    bq_inv: Matrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    /// Multiplications by a matrix coefficient outside `{0, 1}`.
    pub scalar: usize,
    /// Hadamard products.
    pub bilinear: usize,
    pub additions: usize,
}

impl Algorithm {
    pub fn new(field: Field, modulus: Poly, td: Matrix, r: Matrix, bq: Matrix) -> Result<Algorithm> {
        let n = modulus.degree().unwrap_or(0);
        if td.cols() != n || r.rows() != n || r.cols() != td.rows() || bq.rows() != n || bq.cols() != n {
            return Err(Error::Shape("algorithm matrices do not fit together".into()));
        }
        let bq_inv = bq
            .inverse(&field)
            .ok_or_else(|| Error::Hypothesis("B_Q is not a basis of the residue field".into()))?;
        Ok(Algorithm { field, modulus, td, r, bq, bq_inv })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.td.cols()
    }

    pub fn big_n(&self) -> usize {
        self.td.rows()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn td(&self) -> &Matrix {
        &self.td
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// Columns: power-basis coordinates of the elements of `B_Q`.
    pub fn bq(&self) -> &Matrix {
        &self.bq
    }

    /// Product of two elements given by their coordinates in `B_Q`.
    pub fn multiply(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let xs = self.td.mul_vec(x, f);
        let ys = self.td.mul_vec(y, f);
        let z: Vec<Elem> = xs.iter().zip(&ys).map(|(&a, &b)| f.mul(a, b)).collect();
        self.r.mul_vec(&z, f)
    }

    /// Same as [`Algorithm::multiply`], tallying the operations performed.
    pub fn instrumented_multiply(&self, x: &[Elem], y: &[Elem]) -> (Vec<Elem>, OpCounts) {
        let f = &self.field;
        let mut counts = OpCounts::default();
        let apply = |m: &Matrix, v: &[Elem], counts: &mut OpCounts| -> Vec<Elem> {
            (0..m.rows())
                .map(|i| {
                    let mut acc: Option<Elem> = None;
                    for (&a, &b) in m.row(i).iter().zip(v) {
                        if a.is_zero() {
                            continue;
                        }
                        let term = if a.is_one() {
                            b
                        } else {
                            counts.scalar += 1;
                            f.mul(a, b)
                        };
                        acc = Some(match acc {
                            None => term,
                            Some(s) => {
                                counts.additions += 1;
                                f.add(s, term)
                            }
                        });
                    }
                    acc.unwrap_or(Elem::ZERO)
                })
                .collect()
        };
        let xs = apply(&self.td, x, &mut counts);
        let ys = apply(&self.td, y, &mut counts);
        let z: Vec<Elem> = xs
            .iter()
            .zip(&ys)
            .map(|(&a, &b)| {
                counts.bilinear += 1;
                f.mul(a, b)
            })
            .collect();
        let out = apply(&self.r, &z, &mut counts);
        (out, counts)
    }

    pub fn to_power(&self, coords: &[Elem]) -> Vec<Elem> {
        self.bq.mul_vec(coords, &self.field)
    }

    pub fn from_power(&self, coords: &[Elem]) -> Vec<Elem> {
        self.bq_inv.mul_vec(coords, &self.field)
    }

    /// Multiply two elements given in the power basis.
    pub fn multiply_power(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        self.to_power(&self.multiply(&self.from_power(a), &self.from_power(b)))
    }

    /// Compare against schoolbook multiplication on all pairs (when `samples`
    /// is `None`) or on the given pairs. Returns the first mismatch.
    pub fn find_mismatch(&self, pairs: impl Iterator<Item = (Vec<Elem>, Vec<Elem>)>) -> Option<Mismatch> {
        let mut checked = 0usize;
        for (a, b) in pairs {
            checked += 1;
            let got = self.multiply_power(&a, &b);
            let want = direct_oracle(&a, &b, &self.modulus, &self.field);
            if got != want {
                return Some(Mismatch { x: a, y: b, got, want, checked });
            }
        }
        None
    }

    /// Every pair of elements of `F_{q^n}`, in power-basis coordinates.
    pub fn all_pairs(&self) -> impl Iterator<Item = (Vec<Elem>, Vec<Elem>)> + '_ {
        let total = (self.field.order() as u64).pow(self.n() as u32);
        (0..total).flat_map(move |i| (0..total).map(move |j| (self.vector(i), self.vector(j))))
    }

    /// `count` uniformly random pairs, reproducible from `seed`.
    pub fn random_pairs(&self, count: usize, seed: u64) -> impl Iterator<Item = (Vec<Elem>, Vec<Elem>)> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = (self.field.order() as u64).pow(self.n() as u32);
        (0..count).map(move |_| (self.vector(rng.gen_range(0..total)), self.vector(rng.gen_range(0..total))))
    }

    fn vector(&self, index: u64) -> Vec<Elem> {
        let q = self.field.order() as u64;
        let mut x = index;
        (0..self.n())
            .map(|_| {
                let d = x % q;
                x /= q;
                Elem(d as u32)
            })
            .collect()
    }

    pub fn metrics(&self, rule: CountRule) -> ComplexityReport {
        ComplexityReport::compute(&self.td, &self.r, &self.field, rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub x: Vec<Elem>,
    pub y: Vec<Elem>,
    pub got: Vec<Elem>,
    pub want: Vec<Elem>,
    pub checked: usize,
}

/// Schoolbook product of two power-basis vectors modulo `modulus`.
pub fn direct_oracle(a: &[Elem], b: &[Elem], modulus: &Poly, f: &Field) -> Vec<Elem> {
    let n = modulus.degree().unwrap_or(0);
    let prod = Poly::new(a.to_vec()).mul(&Poly::new(b.to_vec()), f);
    let r = prod.rem(modulus, f).expect("nonzero modulus");
    (0..n).map(|i| r.coeff(i)).collect()
}

/// Which coefficients count as free multipliers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRule {
    /// Also treat `-1` as free (only matters in odd characteristic).
    #[serde(default)]
    pub free_minus_one: bool,
}

impl CountRule {
    pub fn is_unit_like(&self, a: Elem, f: &Field) -> bool {
        a.is_one() || (self.free_minus_one && a == f.neg(Elem::ONE))
    }
}

/// Zero and one counts of `T_D` and `R` and the complexities derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub n: usize,
    pub big_n: usize,
    pub nz_td: usize,
    pub n1_td: usize,
    pub nz_r: usize,
    pub n1_r: usize,
    pub nz: usize,
    pub n1: usize,
    /// `3 n N`, the count with no free coefficient at all.
    pub worst: usize,
    pub mu_s: usize,
    pub mu_s0: usize,
    pub mu_s1: usize,
    pub mu_b: usize,
    pub mu_m: usize,
    pub mu_s_ua: usize,
    pub mu_s_ur: usize,
    pub mu_s0_ua: usize,
    pub mu_s0_ur: usize,
    pub mu_s1_ua: usize,
    pub mu_s1_ur: usize,
    pub additions: usize,
}

impl ComplexityReport {
    pub fn compute(td: &Matrix, r: &Matrix, f: &Field, rule: CountRule) -> ComplexityReport {
        let n = td.cols();
        let big_n = td.rows();
        let ones = |m: &Matrix| m.entries().iter().filter(|&&a| rule.is_unit_like(a, f)).count();
        let adds = |m: &Matrix| -> usize {
            (0..m.rows())
                .map(|i| m.row(i).iter().filter(|a| !a.is_zero()).count().saturating_sub(1))
                .sum()
        };
        let nz_td = td.count_zeros();
        let n1_td = ones(td);
        let nz_r = r.count_zeros();
        let n1_r = ones(r);
        let nn = n * big_n;
        let nz = 2 * nz_td + nz_r;
        let n1 = 2 * n1_td + n1_r;
        let worst = 3 * nn;
        let mu_s = worst - nz - n1;
        ComplexityReport {
            n,
            big_n,
            nz_td,
            n1_td,
            nz_r,
            n1_r,
            nz,
            n1,
            worst,
            mu_s,
            mu_s0: worst - nz,
            mu_s1: worst - n1,
            mu_b: big_n,
            mu_m: mu_s + big_n,
            mu_s_ua: 2 * (nn - nz_td - n1_td),
            mu_s_ur: nn - nz_r - n1_r,
            mu_s0_ua: 2 * (nn - nz_td),
            mu_s0_ur: nn - nz_r,
            mu_s1_ua: 2 * (nn - n1_td),
            mu_s1_ur: nn - n1_r,
            additions: 2 * adds(td) + adds(r),
        }
    }
}

/// Outcome of the existence conditions for an algorithm over `F_{q^n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub q: u32,
    pub n: usize,
    pub genus: u32,
    pub rational_places: usize,
    pub degree_n_places: usize,
    /// `2n + 2g - 2`.
    pub required: usize,
    pub has_degree_n_place: bool,
    pub enough_rational_places: bool,
    pub feasible: bool,
    pub epsilon: u32,
    /// `q/2 + 1 < n <= (q + 1 + eps(q))/2`.
    pub in_elliptic_window: bool,
    /// `n <= q/2 + 1`, where `2n - 1` multiplications are optimal.
    pub small_n_regime: bool,
    pub notes: Vec<String>,
}

/// `2 sqrt(q)` for square `q`, else the largest integer `<= 2 sqrt(q)` prime to `p`.
pub fn epsilon(q: u32, p: u32) -> u32 {
    let r = (q as f64).sqrt().round() as u32;
    if r * r == q {
        return 2 * r;
    }
    let mut e = 0u32;
    while ((e + 1) as u64).pow(2) <= 4 * q as u64 {
        e += 1;
    }
    while e > 0 && e % p == 0 {
        e -= 1;
    }
    e
}

pub fn feasibility_check(q: u32, p: u32, n: usize, genus: u32, n1: usize, nn: usize) -> FeasibilityReport {
    let required = 2 * n + 2 * genus as usize - 2;
    let has_place = nn > 0;
    // for genus 1 the inequality on rational places may be an equality
    let enough = if genus == 1 { n1 >= required } else { n1 > required };
    let eps = epsilon(q, p);
    let lo = q as f64 / 2.0 + 1.0;
    let hi = (q as f64 + 1.0 + eps as f64) / 2.0;
    let nf = n as f64;
    let mut notes = Vec::new();
    if !has_place {
        notes.push(format!("no place of degree {n}"));
    }
    if !enough {
        let op = if genus == 1 { "<" } else { "<=" };
        notes.push(format!("N1 = {n1} {op} 2n+2g-2 = {required}"));
    }
    let small = nf <= lo;
    if small {
        notes.push("2n-1 regime: n <= q/2 + 1".into());
    }
    FeasibilityReport {
        q,
        n,
        genus,
        rational_places: n1,
        degree_n_places: nn,
        required,
        has_degree_n_place: has_place,
        enough_rational_places: enough,
        feasible: has_place && enough,
        epsilon: eps,
        in_elliptic_window: lo < nf && nf <= hi,
        small_n_regime: small,
        notes,
    }
}

/// Feasibility for a concrete curve, counting its places.
pub fn curve_feasibility(curve: &Curve, n: usize) -> FeasibilityReport {
    let f = curve.field();
    let n1 = curve.rational_places().len();
    let nn = curve.count_places_of_degree(n);
    feasibility_check(f.order(), f.characteristic(), n, curve.genus(), n1, nn)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub nz_td: usize,
    /// `n (n + g - 1)`.
    pub nz_td_bound: usize,
    pub mu_s0_ua: usize,
    pub mu_s0: usize,
    /// `2 n^2`.
    pub two_n_squared: usize,
    pub min_weight: Option<usize>,
    /// `N - deg D`.
    pub weight_bound: usize,
}

/// A fully assembled algorithm together with the geometric data it came from.
#[derive(Clone, Debug)]
pub struct CcmaInstance {
    curve: Curve,
    divisor: Divisor,
    q: Place,
    places: Vec<Place>,
    basis_d: Vec<CurveFunction>,
    supplement: Vec<CurveFunction>,
    t2d: Matrix,
    c: Matrix,
    algorithm: Algorithm,
}

impl CcmaInstance {
    /// Assemble an instance, checking every hypothesis of the construction.
    pub fn build(
        curve: &Curve,
        divisor: &Divisor,
        q: &Place,
        places: &[Place],
        basis_d: &[CurveFunction],
        supplement: &[CurveFunction],
    ) -> Result<CcmaInstance> {
        CcmaInstance::assemble(curve, divisor, q, places, basis_d, supplement, true)
    }

    /// `check_spaces` off skips the membership tests, for bases obtained from
    /// already checked ones by linear combination.
    fn assemble(
        curve: &Curve,
        divisor: &Divisor,
        q: &Place,
        places: &[Place],
        basis_d: &[CurveFunction],
        supplement: &[CurveFunction],
        check_spaces: bool,
    ) -> Result<CcmaInstance> {
        let fq = curve.field();
        let g = curve.genus() as usize;
        let n = q.degree();
        let big_n = 2 * n + g - 1;
        if q.is_infinite() || q.kind() == PlaceKind::Inert {
            return Err(Error::Hypothesis(
                "Q must be a split, ramified or line place so that its residue field is F_q[X]/Q(X)".into(),
            ));
        }
        if !divisor.is_effective() {
            return Err(Error::Hypothesis("D is not effective".into()));
        }
        if divisor.degree() != (n + g) as i64 - 1 {
            return Err(Error::Hypothesis(format!("deg D = {} but n + g - 1 = {}", divisor.degree(), n + g - 1)));
        }
        for p in divisor.support() {
            if p == q || places.contains(p) {
                return Err(Error::Hypothesis(format!("{:?} lies in the support of D", p.id())));
            }
        }
        if places.len() != big_n {
            return Err(Error::Hypothesis(format!("{} evaluation places given, need {big_n}", places.len())));
        }
        for (i, p) in places.iter().enumerate() {
            if p.degree() != 1 {
                return Err(Error::Hypothesis(format!("{:?} is not rational", p.id())));
            }
            if places[..i].contains(p) {
                return Err(Error::Hypothesis(format!("{:?} is repeated", p.id())));
            }
        }
        if basis_d.len() != n || supplement.len() != big_n - n {
            return Err(Error::DimensionMismatch(format!(
                "basis sizes {} + {}, expected {n} + {}",
                basis_d.len(),
                supplement.len(),
                big_n - n
            )));
        }
        let d2 = divisor.scale(2);
        for f in basis_d.iter().filter(|_| check_spaces) {
            curve.check_function(f)?;
            if !in_rr_space(curve, f, divisor)? {
                return Err(Error::Hypothesis(format!("{} is not in L(D)", f.render(fq))));
            }
        }
        for f in supplement.iter().filter(|_| check_spaces) {
            curve.check_function(f)?;
            if !in_rr_space(curve, f, &d2)? {
                return Err(Error::Hypothesis(format!("{} is not in L(2D)", f.render(fq))));
            }
        }
        let modulus = q.poly().expect("finite place").clone();
        let mut all = basis_d.to_vec();
        all.extend_from_slice(supplement);
        let bq = ev_q_power(curve, basis_d, q)?;
        let bq_inv = bq
            .inverse(fq)
            .ok_or_else(|| Error::Hypothesis("evaluation at Q is not bijective on L(D)".into()))?;
        let c = bq_inv.mul(&ev_q_power(curve, &all, q)?, fq)?;
        let rows = places
            .iter()
            .map(|p| all.iter().map(|f| p.evaluate(curve, f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let t2d = Matrix::from_rows(&rows)?;
        let t2d_inv = t2d
            .inverse(fq)
            .ok_or_else(|| Error::Hypothesis("evaluation on the places is not an isomorphism".into()))?;
        let r = c.mul(&t2d_inv, fq)?;
        let td = t2d.columns(0..n);
        let algorithm = Algorithm::new(fq.clone(), modulus, td, r, bq)?;
        Ok(CcmaInstance {
            curve: curve.clone(),
            divisor: divisor.clone(),
            q: q.clone(),
            places: places.to_vec(),
            basis_d: basis_d.to_vec(),
            supplement: supplement.to_vec(),
            t2d,
            c,
            algorithm,
        })
    }

    /// Instance with the echelon basis of `L(D)` and the kernel supplement.
    pub fn kernel_type(curve: &Curve, divisor: &Divisor, q: &Place, places: &[Place]) -> Result<CcmaInstance> {
        let bd = rr_space(curve, divisor)?;
        let b2d = rr_space(curve, &divisor.scale(2))?;
        let sup = kernel_supplement(curve, q, &bd.functions, &b2d.functions)?;
        CcmaInstance::build(curve, divisor, q, places, &bd.functions, &sup)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn q(&self) -> &Place {
        &self.q
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn basis_d(&self) -> &[CurveFunction] {
        &self.basis_d
    }

    pub fn supplement(&self) -> &[CurveFunction] {
        &self.supplement
    }

    pub fn n(&self) -> usize {
        self.q.degree()
    }

    pub fn big_n(&self) -> usize {
        self.places.len()
    }

    pub fn t2d(&self) -> &Matrix {
        &self.t2d
    }

    pub fn td(&self) -> &Matrix {
        self.algorithm.td()
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    /// `C T_2D^{-1}`.
    pub fn r(&self) -> &Matrix {
        self.algorithm.r()
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn is_kernel_type(&self) -> bool {
        let n = self.n();
        self.c.columns(0..n) == Matrix::identity(n) && self.c.columns(n..self.big_n()).is_zero()
    }

    pub fn multiply(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.algorithm.multiply(x, y)
    }

    pub fn metrics(&self) -> ComplexityReport {
        self.algorithm.metrics(CountRule::default())
    }

    /// Same construction with `B_D` replaced by `sigma * B_D`.
    pub fn rebase(&self, sigma: &Matrix) -> Result<CcmaInstance> {
        let f = self.field();
        if sigma.rows() != self.n() || sigma.inverse(f).is_none() {
            return Err(Error::InvalidArgument("basis change must be an invertible n x n matrix".into()));
        }
        let basis: Vec<CurveFunction> =
            (0..sigma.rows()).map(|i| CurveFunction::combine(sigma.row(i), &self.basis_d, f)).collect();
        CcmaInstance::assemble(&self.curve, &self.divisor, &self.q, &self.places, &basis, &self.supplement, false)
    }

    pub fn with_supplement(&self, supplement: &[CurveFunction]) -> Result<CcmaInstance> {
        CcmaInstance::build(&self.curve, &self.divisor, &self.q, &self.places, &self.basis_d, supplement)
    }

    /// Reorder the evaluation places: new place `i` is old place `perm[i]`.
    pub fn permute_places(&self, perm: &[usize]) -> Result<CcmaInstance> {
        let places: Vec<Place> = perm.iter().map(|&i| self.places[i].clone()).collect();
        CcmaInstance::assemble(&self.curve, &self.divisor, &self.q, &places, &self.basis_d, &self.supplement, false)
    }

    /// Minimum Hamming weight of the nonzero columns combinations of `T_D`,
    /// by enumeration (skipped above a million codewords).
    pub fn min_codeword_weight(&self) -> Option<usize> {
        let f = self.field();
        let q = f.order() as u64;
        let total = q.checked_pow(self.n() as u32)?;
        if total > 1 << 20 {
            return None;
        }
        let td = self.td();
        (1..total)
            .map(|i| {
                let mut x = i;
                let s: Vec<Elem> = (0..self.n())
                    .map(|_| {
                        let d = x % q;
                        x /= q;
                        Elem(d as u32)
                    })
                    .collect();
                td.mul_vec(&s, f).iter().filter(|e| !e.is_zero()).count()
            })
            .min()
    }

    pub fn bounds_check(&self) -> Result<BoundsReport> {
        let m = self.metrics();
        let n = self.n();
        let g = self.curve.genus() as usize;
        let report = BoundsReport {
            nz_td: m.nz_td,
            nz_td_bound: n * (n + g - 1),
            mu_s0_ua: m.mu_s0_ua,
            mu_s0: m.mu_s0,
            two_n_squared: 2 * n * n,
            min_weight: self.min_codeword_weight(),
            weight_bound: self.big_n() - self.divisor.degree() as usize,
        };
        if report.nz_td > report.nz_td_bound {
            return Err(Error::BoundViolated(format!("N_z(T_D) = {} > {}", report.nz_td, report.nz_td_bound)));
        }
        if report.mu_s0_ua < report.two_n_squared || report.mu_s0 <= report.two_n_squared {
            return Err(Error::BoundViolated(format!(
                "scalar complexity {} / {} below 2n^2 = {}",
                report.mu_s0_ua, report.mu_s0, report.two_n_squared
            )));
        }
        if let Some(w) = report.min_weight {
            if w < report.weight_bound {
                return Err(Error::BoundViolated(format!("codeword of weight {w} < {}", report.weight_bound)));
            }
        }
        Ok(report)
    }
}
