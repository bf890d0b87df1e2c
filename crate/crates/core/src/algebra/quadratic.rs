//! Roots of `y^2 + c*y = d`, the equation met when lifting an x-coordinate to
//! a point of a Weierstrass curve.

use super::field::{Elem, Field};

/// All solutions of `y^2 + c*y = d` in `k`, sorted by code.
///
/// In characteristic 2 with `c != 0` this is an Artin-Schreier equation; it is
/// reduced to `z^2 + z = d/c^2` and solved as an `F_2`-linear system. There are
/// either no solutions or two, differing by `c`. With `c = 0` the unique square
/// root is returned. In odd characteristic the usual discriminant formula is
/// used; a double root is reported once.
pub fn solve_artin_schreier(c: Elem, d: Elem, k: &Field) -> Vec<Elem> {
    if k.characteristic() == 2 {
        if c.is_zero() {
            return vec![k.sqrt(d).expect("squaring is bijective in characteristic 2")];
        }
        let c2 = k.mul(c, c);
        let e = k.div(d, c2).expect("c is nonzero");
        let Some(z) = solve_z2_plus_z(e, k) else {
            return Vec::new();
        };
        let y0 = k.mul(z, c);
        let y1 = k.add(y0, c);
        let mut out = vec![y0, y1];
        out.sort();
        return out;
    }
    // y = (-c +- sqrt(c^2 + 4d)) / 2
    let four = k.from_int(4);
    let disc = k.add(k.mul(c, c), k.mul(four, d));
    let Some(s) = k.sqrt(disc) else {
        return Vec::new();
    };
    let half = k.inv(k.from_int(2)).expect("odd characteristic");
    let minus_c = k.neg(c);
    let y0 = k.mul(k.add(minus_c, s), half);
    let y1 = k.mul(k.sub(minus_c, s), half);
    let mut out = vec![y0, y1];
    out.sort();
    out.dedup();
    out
}

/// One solution of `z^2 + z = e` in a field of characteristic 2, if any.
fn solve_z2_plus_z(e: Elem, k: &Field) -> Option<Elem> {
    let bits = k.absolute_degree();
    // Column j of the F_2-linear map z -> z^2 + z, applied to the basis vector 2^j.
    let cols: Vec<u32> = (0..bits)
        .map(|j| {
            let b = Elem(1 << j);
            k.add(k.mul(b, b), b).0
        })
        .collect();
    // Row-reduce the augmented system, one row per output bit.
    let mut rows: Vec<(u64, bool)> = (0..bits)
        .map(|i| {
            let mut mask = 0u64;
            for (j, &col) in cols.iter().enumerate() {
                if (col >> i) & 1 == 1 {
                    mask |= 1 << j;
                }
            }
            (mask, (e.0 >> i) & 1 == 1)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..bits {
        let Some(p) = (r..rows.len()).find(|&i| (rows[i].0 >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && (row.0 >> col) & 1 == 1 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return None;
    }
    let mut z = 0u32;
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i].1 {
            z |= 1 << col;
        }
    }
    Some(Elem(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(c: Elem, d: Elem, k: &Field) -> Vec<Elem> {
        k.elements().filter(|&y| k.add(k.mul(y, y), k.mul(c, y)) == d).collect()
    }

    #[test]
    fn y2_plus_y_zero_in_f4() {
        let f4 = Field::make_extension(2, 2, None).unwrap();
        assert_eq!(solve_artin_schreier(Elem::ONE, Elem::ZERO, &f4), vec![Elem(0), Elem(1)]);
    }

    #[test]
    fn lifting_x_over_the_quartic_gives_two_roots_differing_by_one() {
        let f4 = Field::make_extension(2, 2, None).unwrap();
        let k = f4.extension(&Poly::from_codes(&[2, 2, 2, 1, 1])).unwrap();
        let x0 = k.generator().unwrap();
        let rhs = k.add(k.pow(x0, 3), Elem::ONE);
        let roots = solve_artin_schreier(Elem::ONE, rhs, &k);
        assert_eq!(roots.len(), 2);
        assert_eq!(k.add(roots[0], roots[1]), Elem::ONE);
        for y in roots {
            assert_eq!(k.add(k.mul(y, y), y), rhs);
        }
    }

    #[test]
    fn agrees_with_exhaustive_search_over_f16() {
        let f16 = Field::make_extension(2, 4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = Elem(rng.gen_range(1..16));
            let d = Elem(rng.gen_range(0..16));
            assert_eq!(solve_artin_schreier(c, d, &f16), brute(c, d, &f16));
        }
    }

    #[test]
    fn odd_characteristic_and_towers() {
        let f9 = Field::make_extension(3, 2, None).unwrap();
        let f16 = Field::make_extension(2, 2, None).unwrap().extension_auto(2).unwrap();
        for k in [Field::prime(5).unwrap(), f9, f16] {
            for c in k.elements() {
                for d in k.elements() {
                    if k.characteristic() == 2 && c.is_zero() {
                        continue;
                    }
                    assert_eq!(solve_artin_schreier(c, d, &k), brute(c, d, &k), "{c:?} {d:?}");
                }
            }
        }
    }
}
