//! Wigner small-d functions `d^j_{m,m'}(θ) = ⟨j m| e^{−iθJ_y/ħ} |j m'⟩`.
//!
//! Evaluated by the three-term recurrence in `j` at fixed `(m, m')`, seeded
//! at `j = max(|m|, |m'|)` where Wigner's sum has a single term. The
//! recurrence only multiplies bounded quantities, so it is stable for all
//! `θ` and large `j`.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Wigner's explicit sum. Used to seed the recurrence at
/// `j = max(|m|, |m'|)`, where exactly one term survives.
fn wigner_sum(tj: i64, tm: i64, tmp: i64, theta: f64) -> f64 {
    let jp_m = (tj + tm) / 2;
    let jm_m = (tj - tm) / 2;
    let jp_mp = (tj + tmp) / 2;
    let jm_mp = (tj - tmp) / 2;
    let d = (tm - tmp) / 2;
    let (sh, ch) = (0.5 * theta).sin_cos();
    let pref = 0.5 * (ln_factorial(jp_m) + ln_factorial(jm_m) + ln_factorial(jp_mp) + ln_factorial(jm_mp));
    let mut sum = 0.0;
    for k in 0.max(-d)..=jp_mp.min(jm_m) {
        let den = ln_factorial(jp_mp - k) + ln_factorial(k) + ln_factorial(jm_m - k) + ln_factorial(k + d);
        let sign = if (k + d) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (pref - den).exp() * ch.powi((tj - 2 * k - d) as i32) * sh.powi((2 * k + d) as i32);
    }
    sum
}

/// `d^j_{m,m'}(θ)` for every `j` from `max(|m|,|m'|)` to `jmax`, in order.
pub fn wigner_small_d_column(jmax: HalfInt, m: HalfInt, mp: HalfInt, theta: f64) -> Vec<f64> {
    let tm = m.twice();
    let tmp = mp.twice();
    let tj0 = tm.abs().max(tmp.abs());
    if jmax.twice() < tj0 || (jmax.twice() - tj0) % 2 != 0 {
        return Vec::new();
    }
    let (mf, mpf) = (m.value(), mp.value());
    let cb = theta.cos();
    let mut out = Vec::with_capacity(((jmax.twice() - tj0) / 2 + 1) as usize);
    let mut prev = 0.0;
    let mut cur = wigner_sum(tj0, tm, tmp, theta);
    out.push(cur);
    let mut tj = tj0;
    while tj < jmax.twice() {
        let j = tj as f64 / 2.0;
        let j1 = j + 1.0;
        let denom = ((j1 * j1 - mf * mf) * (j1 * j1 - mpf * mpf)).sqrt();
        let mix = if tj == 0 { 0.0 } else { mf * mpf / (j * j1) };
        let a = j1 * (2.0 * j + 1.0) / denom * (cb - mix);
        let b = if tj == 0 {
            0.0
        } else {
            ((j * j - mf * mf) * (j * j - mpf * mpf)).max(0.0).sqrt() * j1 / (j * denom)
        };
        let next = a * cur - b * prev;
        prev = cur;
        cur = next;
        out.push(cur);
        tj += 2;
    }
    out
}

pub fn wigner_small_d(j: HalfInt, m: HalfInt, mp: HalfInt, theta: f64) -> Result<f64> {
    if j.is_negative() || m.abs() > j || mp.abs() > j || !(j - m).is_integer() || !(j - mp).is_integer() {
        return Err(Error::InvalidIndex(format!("d^{j}_{{{m},{mp}}} is undefined")));
    }
    Ok(*wigner_small_d_column(j, m, mp, theta).last().expect("j >= max(|m|,|m'|)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn explicit(j: HalfInt, m: HalfInt, mp: HalfInt, theta: f64) -> f64 {
        wigner_sum(j.twice(), m.twice(), mp.twice(), theta)
    }

    #[test]
    fn closed_forms() {
        for &t in &[0.0, 0.3, 1.2, 2.9, std::f64::consts::PI] {
            let d = wigner_small_d(h(1), h(1), h(1), t).unwrap();
            assert!((d - (t / 2.0).cos()).abs() < 1e-15);
            let d = wigner_small_d(h(1), h(1), h(-1), t).unwrap();
            assert!((d + (t / 2.0).sin()).abs() < 1e-15);
            let d = wigner_small_d(h(2), h(0), h(0), t).unwrap();
            assert!((d - t.cos()).abs() < 1e-15);
            let d = wigner_small_d(h(2), h(2), h(0), t).unwrap();
            assert!((d + t.sin() / 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_at_zero() {
        for tj in 0..8 {
            let mut tm = -tj;
            while tm <= tj {
                let mut tmp = -tj;
                while tmp <= tj {
                    let d = wigner_small_d(h(tj), h(tm), h(tmp), 0.0).unwrap();
                    let want = if tm == tmp { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-14);
                    tmp += 2;
                }
                tm += 2;
            }
        }
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for tj in 0i64..24 {
            for tm in (-tj..=tj).step_by(2) {
                for tmp in [-tj, tj % 2, tj] {
                    if tmp.abs() > tj {
                        continue;
                    }
                    for &t in &[0.1, 0.9, 1.7, 2.6, 3.1] {
                        let got = wigner_small_d(h(tj), h(tm), h(tmp), t).unwrap();
                        let want = explicit(h(tj), h(tm), h(tmp), t);
                        assert!((got - want).abs() < 1e-12, "j={tj}/2 m={tm}/2 m'={tmp}/2 θ={t}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let (x, w) = crate::bundlegrid::grid::gauss_legendre(40);
        let (m, mp) = (h(1), h(-3));
        for tj in [3, 5, 7, 9] {
            for tj2 in [3, 5, 7, 9] {
                let s: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(c, wi)| {
                        let t = c.acos();
                        wi * wigner_small_d(h(tj), m, mp, t).unwrap() * wigner_small_d(h(tj2), m, mp, t).unwrap()
                    })
                    .sum();
                let want = if tj == tj2 { 2.0 / (tj as f64 + 1.0) } else { 0.0 };
                assert!((s - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(wigner_small_d(h(2), h(4), h(0), 0.1).is_err());
        assert!(wigner_small_d(h(2), h(1), h(0), 0.1).is_err());
    }
}
