//! Clebsch–Gordan coefficients from the Racah formula, summed in exact
//! rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::halfint::{signed_sqrt_rational, HalfInt};

fn factorial(n: i64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn int(h: HalfInt) -> i64 {
    h.to_integer().expect("integer combination of angular momenta")
}

/// `⟨j1 m1; j2 m2 | J M⟩` in the Condon–Shortley convention.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m1 + m2 != m
        || m1.abs() > j1
        || m2.abs() > j2
        || m.abs() > j
        || j > j1 + j2
        || j < (j1 - j2).abs()
        || !(j1 + j2 - j).is_integer()
        || !(j1 - m1).is_integer()
        || !(j2 - m2).is_integer()
        || !(j - m).is_integer()
    {
        return 0.0;
    }
    let a = int(j1 + j2 - j);
    let b = int(j1 - m1);
    let c = int(j2 + m2);
    let d = int(j - j2 + m1);
    let e = int(j - j1 - m2);

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(b - k)
            * factorial(c - k)
            * factorial(d + k)
            * factorial(e + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let pref_num = BigInt::from(j.twice() + 1)
        * factorial(int(j + j1 - j2))
        * factorial(int(j - j1 + j2))
        * factorial(a)
        * factorial(int(j + m))
        * factorial(int(j - m))
        * factorial(b)
        * factorial(int(j1 + m1))
        * factorial(int(j2 - m2))
        * factorial(c);
    let pref_den = factorial(int(j1 + j2 + j) + 1);
    let squared = &sum * &sum * BigRational::new(pref_num, pref_den);
    let signed = if sum < BigRational::zero() { -squared } else { squared };
    signed_sqrt_rational(&signed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn known_values() {
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((clebsch_gordan(h(1), h(1), h(1), h(-1), h(2), h(0)) - r2).abs() < 1e-15);
        assert!((clebsch_gordan(h(1), h(-1), h(1), h(1), h(0), h(0)) + r2).abs() < 1e-15);
        assert!((clebsch_gordan(h(1), h(1), h(1), h(1), h(2), h(2)) - 1.0).abs() < 1e-15);
        // ⟨1 0; 1 0 | 0 0⟩ = -1/√3
        assert!((clebsch_gordan(h(2), h(0), h(2), h(0), h(0), h(0)) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // ⟨1 0; 1 0 | 1 0⟩ = 0
        assert_eq!(clebsch_gordan(h(2), h(0), h(2), h(0), h(2), h(0)), 0.0);
        // ⟨j j; 1 0 | j j⟩ = sqrt(j/(j+1))
        let j = h(7);
        let want = (3.5f64 / 4.5).sqrt();
        assert!((clebsch_gordan(j, j, h(2), h(0), j, j) - want).abs() < 1e-14);
    }

    #[test]
    fn selection_rules() {
        assert_eq!(clebsch_gordan(h(1), h(1), h(2), h(0), h(3), h(3)), 0.0);
        assert_eq!(clebsch_gordan(h(1), h(1), h(2), h(0), h(7), h(1)), 0.0);
    }

    #[test]
    fn orthonormal_columns() {
        // Σ_{m1,m2} ⟨j1 m1; j2 m2|J M⟩⟨j1 m1; j2 m2|J' M⟩ = δ_{JJ'}
        let (j1, j2) = (h(5), h(2));
        for jt in [3, 5, 7] {
            for jt2 in [3, 5, 7] {
                let m = h(1);
                let mut acc = 0.0;
                let mut m1 = -j1;
                while m1 <= j1 {
                    let m2 = m - m1;
                    acc += clebsch_gordan(j1, m1, j2, m2, h(jt), m)
                        * clebsch_gordan(j1, m1, j2, m2, h(jt2), m);
                    m1 += HalfInt::ONE;
                }
                let want = if jt == jt2 { 1.0 } else { 0.0 };
                assert!((acc - want).abs() < 1e-14, "J={jt} J'={jt2}: {acc}");
            }
        }
    }
}
