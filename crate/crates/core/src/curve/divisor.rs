//! Divisors as finite integer combinations of places.

use std::collections::BTreeMap;

use super::{Curve, CurveFunction, Place, PlaceId};
use crate::algebra::Poly;
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: BTreeMap<PlaceId, (Place, i64)>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn single(place: Place, order: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_term(place, order);
        d
    }

    pub fn add_term(&mut self, place: Place, order: i64) {
        let id = place.id().clone();
        let entry = self.terms.entry(id.clone()).or_insert((place, 0));
        entry.1 += order;
        if entry.1 == 0 {
            self.terms.remove(&id);
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, m) in other.terms.values() {
            out.add_term(p.clone(), *m);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut out = Divisor::zero();
        for (p, m) in self.terms.values() {
            out.add_term(p.clone(), m * k);
        }
        out
    }

    pub fn order(&self, id: &PlaceId) -> i64 {
        self.terms.get(id).map_or(0, |(_, m)| *m)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().map(|(p, m)| m * p.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|(_, m)| *m >= 0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.values().map(|(p, _)| p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.values().map(|(p, m)| (p, *m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Curve {
    /// Principal divisor of a nonzero function. Zeros and poles can only sit
    /// above factors of the denominator and of the norm of the numerator, or
    /// at infinity.
    pub fn divisor_of(&self, f: &CurveFunction) -> Result<Divisor> {
        let field = self.field();
        let (a, b, den) = f.polynomial_form(field);
        let num = CurveFunction::from_rational(super::RatFn::from_poly(a))
            .add(&CurveFunction::new(super::RatFn::zero(), super::RatFn::from_poly(b)), field);
        let norm = self.norm(&num);
        let mut candidates: Vec<Poly> = Vec::new();
        for p in [norm.num().clone(), den] {
            if p.degree().unwrap_or(0) == 0 {
                continue;
            }
            let (_, factors) = p.factor(field)?;
            candidates.extend(factors.into_iter().map(|(q, _)| q));
        }
        candidates.sort();
        candidates.dedup();
        let mut d = Divisor::zero();
        let mut places = vec![self.infinity()];
        for p in &candidates {
            places.extend(self.places_above(p)?);
        }
        for pl in places {
            let v = pl.valuation(self, f)?;
            if v != 0 {
                d.add_term(pl, v);
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Elem, Field};
    use crate::curve::RatFn;
    use crate::test_support::{case_study_curve, f4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, deg: usize, q: u32) -> Poly {
        Poly::new((0..=deg).map(|_| Elem(rng.gen_range(0..q))).collect())
    }

    fn random_function(rng: &mut ChaCha8Rng, f: &Field) -> CurveFunction {
        loop {
            let (da, db, dd) = (rng.gen_range(0..4), rng.gen_range(0..3), rng.gen_range(0..3));
            let a = random_poly(rng, da, 4);
            let b = random_poly(rng, db, 4);
            let mut den = random_poly(rng, dd, 4);
            if den.is_zero() {
                den = Poly::one();
            }
            let g = CurveFunction::new(
                RatFn::new(a, den.clone(), f).unwrap(),
                RatFn::new(b, den, f).unwrap(),
            );
            if !g.is_zero() {
                return g;
            }
        }
    }

    #[test]
    fn divisor_arithmetic() {
        let c = case_study_curve();
        let inf = c.infinity();
        let d = c.places_above(&Poly::from_codes(&[2, 1, 1])).unwrap()[0].clone();
        let a = Divisor::single(d.clone(), 2).add(&Divisor::single(inf.clone(), 1));
        assert_eq!(a.degree(), 9);
        assert!(a.is_effective());
        let b = a.add(&Divisor::single(d, -2));
        assert_eq!(b, Divisor::single(inf, 1));
        assert_eq!(a.scale(2).degree(), 18);
    }

    #[test]
    fn principal_divisors_have_degree_zero() {
        let c = case_study_curve();
        let f = f4();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let g = random_function(&mut rng, &f);
            let d = c.divisor_of(&g).unwrap();
            assert_eq!(d.degree(), 0, "{:?}", g);
        }
        let dx = c.divisor_of(&CurveFunction::x()).unwrap();
        assert_eq!(dx.order(&PlaceId::Infinity), -2);
    }

    #[test]
    fn valuation_is_additive() {
        let c = case_study_curve();
        let f = f4();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut places = c.rational_places();
        places.extend(c.places_above(&Poly::from_codes(&[2, 2, 2, 1, 1])).unwrap());
        places.extend(c.places_above(&Poly::from_codes(&[2, 1, 1])).unwrap());
        for _ in 0..100 {
            let g = random_function(&mut rng, &f);
            let h = random_function(&mut rng, &f);
            let gh = c.mul(&g, &h);
            let pl = &places[rng.gen_range(0..places.len())];
            let lhs = pl.valuation(&c, &gh).unwrap();
            let rhs = pl.valuation(&c, &g).unwrap() + pl.valuation(&c, &h).unwrap();
            assert_eq!(lhs, rhs);
            if let (Ok(eg), Ok(eh)) = (pl.evaluate(&c, &g), pl.evaluate(&c, &h)) {
                let k = pl.residue_field();
                assert_eq!(pl.evaluate(&c, &gh).unwrap(), k.mul(eg, eh));
            }
        }
    }

    #[test]
    fn place_degrees_match_point_counts() {
        let c = case_study_curve();
        let fq = c.field().clone();
        for k in 1..=4usize {
            let ext = if k == 1 { fq.clone() } else { fq.extension_auto(k).unwrap() };
            let brute = c.count_points_brute_force(&ext);
            let by_places: u64 = (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| d as u64 * c.count_places_of_degree(d) as u64)
                .sum();
            assert_eq!(by_places, brute, "k = {k}");
        }
    }
}
