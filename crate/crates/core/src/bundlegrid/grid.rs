//! Gauss–Legendre (in `cosθ`) × uniform (in `φ`) product quadrature on S².

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Gauss–Legendre nodes in `cosθ`, ascending.
    pub cos_theta: Vec<f64>,
    pub theta: Vec<f64>,
    pub weights_theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// `2π / n_phi`
    pub weight_phi: f64,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

pub fn build_grid(n_theta: usize, n_phi: usize) -> Result<Grid> {
    if n_theta < 2 || n_phi < 4 {
        return Err(Error::GridTooSmall(format!(
            "need n_theta >= 2 and n_phi >= 4, got ({n_theta}, {n_phi})"
        )));
    }
    let (cos_theta, weights_theta) = gauss_legendre(n_theta);
    let theta = cos_theta.iter().map(|c| c.acos()).collect();
    let weight_phi = 2.0 * PI / n_phi as f64;
    let phi = (0..n_phi).map(|k| k as f64 * weight_phi).collect();
    Ok(Grid {
        n_theta,
        n_phi,
        cos_theta,
        theta,
        weights_theta,
        phi,
        weight_phi,
    })
}

impl Grid {
    /// Smallest grid that integrates products `Ȳ f Y` exactly for harmonics
    /// up to `jmax` and a multiplier of degree `l_extra`.
    pub fn for_band_limit(two_jmax: i64, l_extra: usize) -> Result<Grid> {
        let jmax_ceil = (two_jmax as usize).div_ceil(2);
        build_grid(jmax_ceil + l_extra + 2, 2 * two_jmax as usize + 2 * l_extra + 1)
    }

    /// Fails when products of two harmonics up to `jmax` with a multiplier
    /// of degree `l_extra` are not integrated exactly.
    pub fn check_band_limit(&self, two_jmax: i64, l_extra: usize) -> Result<()> {
        let degree = two_jmax as usize + l_extra;
        let need_theta = degree / 2 + 1;
        let need_phi = degree + 1;
        if self.n_theta < need_theta || self.n_phi < need_phi {
            return Err(Error::GridTooSmall(format!(
                "degree {degree} integrand needs n_theta >= {need_theta} and n_phi >= {need_phi}, grid is ({}, {})",
                self.n_theta, self.n_phi
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node index for `(θ_i, φ_k)`; samples are stored θ-major.
    pub fn node(&self, i: usize, k: usize) -> usize {
        i * self.n_phi + k
    }

    /// Unit vector at node `(i, k)`.
    pub fn point(&self, i: usize, k: usize) -> [f64; 3] {
        let st = (1.0 - self.cos_theta[i] * self.cos_theta[i]).max(0.0).sqrt();
        let (sp, cp) = self.phi[k].sin_cos();
        [st * cp, st * sp, self.cos_theta[i]]
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            for k in 0..self.n_phi {
                out.push(self.point(i, k));
            }
        }
        out
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights_theta[i] * self.weight_phi
    }

    /// `∫ f dΩ` over θ-major samples, with compensated summation.
    pub fn integrate(&self, samples: &[Complex64]) -> Complex64 {
        assert_eq!(samples.len(), self.len(), "sample count must match grid");
        let mut acc = Kahan::default();
        for i in 0..self.n_theta {
            let w = self.weight(i);
            for k in 0..self.n_phi {
                acc.add(samples[self.node(i, k)] * w);
            }
        }
        acc.sum()
    }

    pub fn integrate_real(&self, samples: &[f64]) -> f64 {
        let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.integrate(&c).re
    }

    /// Samples of `f(x)` at every node.
    pub fn sample<T>(&self, f: impl Fn([f64; 3]) -> T) -> Vec<T> {
        self.points().into_iter().map(f).collect()
    }

    /// `(w_φ Σ_k f(θ_i, φ_k) e^{iqφ_k})` for `q ∈ [−q_max, q_max]`, one row per θ node.
    /// This is the φ part of the product quadrature, reorganized so that
    /// matrix elements between azimuthal modes need no further φ sums.
    pub fn azimuthal_moments(&self, samples: &[Complex64], q_max: usize) -> Vec<Vec<Complex64>> {
        assert_eq!(samples.len(), self.len(), "sample count must match grid");
        let width = 2 * q_max + 1;
        let mut out = vec![vec![Complex64::new(0.0, 0.0); width]; self.n_theta];
        let twiddle: Vec<Complex64> = self.phi.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
        for (i, row) in out.iter_mut().enumerate() {
            for (slot, q) in (-(q_max as i64)..=q_max as i64).enumerate() {
                let mut acc = Kahan::default();
                for k in 0..self.n_phi {
                    let e = twiddle[(q.rem_euclid(self.n_phi as i64) as usize * k) % self.n_phi];
                    acc.add(samples[self.node(i, k)] * e);
                }
                row[slot] = acc.sum() * self.weight_phi;
            }
        }
        out
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
pub(crate) struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    pub fn add(&mut self, x: Complex64) {
        let (s_re, c_re) = two_sum(self.sum.re, x.re);
        let (s_im, c_im) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(s_re, s_im);
        self.comp += Complex64::new(c_re, c_im);
    }

    pub fn sum(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        for deg in 0..14 {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "deg {deg}: {got}");
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sphere_integrals() {
        let g = build_grid(16, 32).unwrap();
        let one = g.integrate_real(&vec![1.0; g.len()]);
        assert!((one - 4.0 * PI).abs() < 1e-13);
        let c2 = g.integrate_real(&g.sample(|x| x[2] * x[2]));
        assert!((c2 - 4.0 * PI / 3.0).abs() < 1e-13);
        let y10 = (3.0 / (4.0 * PI)).sqrt();
        assert!(g.integrate_real(&g.sample(|x| y10 * x[2])).abs() < 1e-13);
    }

    #[test]
    fn too_small_is_rejected() {
        assert!(matches!(build_grid(1, 8), Err(Error::GridTooSmall(_))));
        assert!(matches!(build_grid(4, 3), Err(Error::GridTooSmall(_))));
        let g = build_grid(4, 8).unwrap();
        assert!(g.check_band_limit(10, 4).is_err());
        assert!(Grid::for_band_limit(10, 4).unwrap().check_band_limit(10, 4).is_ok());
    }

    #[test]
    fn azimuthal_moments_match_direct_sum() {
        let g = build_grid(5, 12).unwrap();
        let f: Vec<Complex64> = g.sample(|x| Complex64::new(x[0] * x[1] + x[2], x[0]));
        let mom = g.azimuthal_moments(&f, 3);
        for i in 0..g.n_theta {
            for q in -3i64..=3 {
                let direct: Complex64 = (0..g.n_phi)
                    .map(|k| f[g.node(i, k)] * Complex64::from_polar(g.weight_phi, q as f64 * g.phi[k]))
                    .sum();
                assert!((mom[i][(q + 3) as usize] - direct).norm() < 1e-14);
            }
        }
    }
}
