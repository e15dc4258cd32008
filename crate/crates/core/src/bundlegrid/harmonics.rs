//! Monopole harmonics as two-patch sections of the charge-`n` line bundle.
//!
//! North patch (regular at `θ = 0`):
//! `Y_N = η √((2j+1)/4π) d^j_{m,s}(θ) e^{i(m−s)φ}`.
//! South patch (regular at `θ = π`): `Y_S = Y_N e^{inφ}` with `n = 2s`.
//! Both azimuthal orders `m ∓ s` are integers, so each patch function is
//! single valued on the circle even for half-integer `m`. The phase
//! `η = (−1)^{j−|s|}` aligns the harmonics with the ladder-built basis, whose
//! `N₊` edge elements are positive.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, Kahan};
use super::wigner_d::{wigner_small_d, wigner_small_d_column};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::repkit::basis::RepBasis;
use crate::repkit::operator::{CMatrix, Operator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Patch {
    North,
    South,
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Patch::North => "north",
            Patch::South => "south",
        })
    }
}

/// Samples of one section on one patch, θ-major over the grid.
#[derive(Clone, Debug)]
pub struct SectionField {
    pub patch: Patch,
    /// Bundle index `n = 2s`.
    pub n: i64,
    pub samples: Vec<Complex64>,
}

#[derive(Serialize)]
struct SectionRow {
    theta: f64,
    phi: f64,
    re: f64,
    im: f64,
    patch: Patch,
}

impl SectionField {
    /// CSV with columns `theta, phi, re, im, patch`.
    pub fn write_csv<W: Write>(&self, grid: &Grid, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for i in 0..grid.n_theta {
            for k in 0..grid.n_phi {
                let z = self.samples[grid.node(i, k)];
                w.serialize(SectionRow {
                    theta: grid.theta[i],
                    phi: grid.phi[k],
                    re: z.re,
                    im: z.im,
                    patch: self.patch,
                })
                .map_err(std::io::Error::other)?;
            }
        }
        w.flush()
    }

    /// `⟨self, other⟩ = ∫ conj(self) other dΩ`; both must be on the same patch.
    pub fn inner(&self, other: &SectionField, grid: &Grid) -> Result<Complex64> {
        if self.patch != other.patch || self.n != other.n {
            return Err(Error::BasisMismatch(format!(
                "sections on ({}, n={}) and ({}, n={})",
                self.patch, self.n, other.patch, other.n
            )));
        }
        let prod: Vec<Complex64> = self.samples.iter().zip(&other.samples).map(|(a, b)| a.conj() * b).collect();
        Ok(grid.integrate(&prod))
    }
}

/// Phase aligning the harmonics with the ladder-built basis.
pub(crate) fn basis_phase(s: HalfInt, j: HalfInt) -> f64 {
    (j - s.abs()).parity_sign()
}

fn check_indices(s: HalfInt, j: HalfInt, m: HalfInt) -> Result<()> {
    if j < s.abs() || m.abs() > j || !(j - s).is_integer() || !(j - m).is_integer() {
        return Err(Error::InvalidIndex(format!(
            "monopole harmonic needs j >= |s|, |m| <= j on the same lattice; got s={s}, j={j}, m={m}"
        )));
    }
    Ok(())
}

/// Azimuthal order of the patch function.
pub fn azimuthal_order(s: HalfInt, m: HalfInt, patch: Patch) -> i64 {
    let q = match patch {
        Patch::North => m - s,
        Patch::South => m + s,
    };
    q.to_integer().expect("m - s is an integer")
}

pub fn monopole_harmonic(s: HalfInt, j: HalfInt, m: HalfInt, patch: Patch, grid: &Grid) -> Result<SectionField> {
    check_indices(s, j, m)?;
    let norm = ((2.0 * j.value() + 1.0) / (4.0 * PI)).sqrt() * basis_phase(s, j);
    let q = azimuthal_order(s, m, patch) as f64;
    let mut samples = Vec::with_capacity(grid.len());
    for i in 0..grid.n_theta {
        let d = wigner_small_d(j, m, s, grid.theta[i])?;
        for k in 0..grid.n_phi {
            samples.push(Complex64::from_polar(norm * d, q * grid.phi[k]));
        }
    }
    Ok(SectionField {
        patch,
        n: s.twice(),
        samples,
    })
}

/// Transition `g(φ) = e^{inφ}` with `Y_S = g Y_N`.
pub fn transition(n: i64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, n as f64 * phi)
}

/// θ profiles `η √((2j+1)/4π) d^j_{m,s}(θ_i)` of every basis state, one row
/// per state in basis order. The φ dependence `e^{i(m−s)φ}` is handled in
/// closed form by [`mult_matrix`].
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    basis: Arc<RepBasis>,
    profiles: Vec<Vec<f64>>,
}

impl HarmonicTable {
    pub fn new(basis: &Arc<RepBasis>, grid: &Grid) -> Self {
        let s = basis.s();
        let mut profiles = vec![Vec::with_capacity(grid.n_theta); basis.dim()];
        let mut m = -basis.jmax();
        while m <= basis.jmax() {
            for &theta in &grid.theta {
                let column = wigner_small_d_column(basis.jmax(), m, s, theta);
                let tj_first = m.twice().abs().max(s.twice().abs());
                for (k, d) in column.into_iter().enumerate() {
                    let j = HalfInt::from_twice(tj_first + 2 * k as i64);
                    if let Some(idx) = basis.index_of(j, m) {
                        let norm = ((2.0 * j.value() + 1.0) / (4.0 * PI)).sqrt() * basis_phase(s, j);
                        profiles[idx].push(norm * d);
                    }
                }
            }
            m += HalfInt::ONE;
        }
        HarmonicTable {
            basis: basis.clone(),
            profiles,
        }
    }

    pub fn basis(&self) -> &Arc<RepBasis> {
        &self.basis
    }
}

/// Matrix of multiplication by `f` between basis harmonics:
/// `⟨Y_a| f |Y_b⟩ = ∫ conj(Y_a) f Y_b dΩ` by product quadrature.
///
/// `f` is a scalar (patch independent), sampled θ-major on `grid`. The
/// quadrature is exact when `f` has degree `≤ l_band` and the grid passes
/// [`Grid::check_band_limit`]; otherwise an error is returned rather than an
/// aliased matrix.
pub fn mult_matrix(f: &[Complex64], l_band: usize, table: &HarmonicTable, grid: &Grid) -> Result<Operator> {
    let basis = table.basis();
    grid.check_band_limit(basis.jmax().twice(), l_band)?;
    Ok(quadrature_matrix(f, Some(l_band as i64), table, grid))
}

/// As [`mult_matrix`] without the band-limit check, for multipliers such as
/// phases `e^{−ieσ/ħ}` that are not polynomials but decay fast in degree.
pub fn mult_matrix_unchecked(f: &[Complex64], table: &HarmonicTable, grid: &Grid) -> Operator {
    quadrature_matrix(f, None, table, grid)
}

/// `N_i` as multiplication by the embedding coordinate `x_i`, by quadrature.
pub fn position_operators(table: &HarmonicTable, grid: &Grid) -> Result<[Operator; 3]> {
    let mut out = Vec::with_capacity(3);
    for axis in 0..3 {
        let f = grid.sample(|x| Complex64::new(x[axis], 0.0));
        out.push(mult_matrix(&f, 1, table, grid)?);
    }
    Ok(out.try_into().expect("three components"))
}

/// With a band limit `L`, entries with `|m' − m| > L` or `|j' − j| > L`
/// vanish by the selection rules and are set to exact zeros instead of
/// being summed to rounding noise.
fn quadrature_matrix(f: &[Complex64], band: Option<i64>, table: &HarmonicTable, grid: &Grid) -> Operator {
    let basis = table.basis();
    let n = basis.dim();
    let q_max = band.unwrap_or(basis.jmax().twice()).min(basis.jmax().twice());
    let moments = grid.azimuthal_moments(f, q_max as usize);
    let mut m = CMatrix::zeros(n, n);
    for a in 0..n {
        let (ja, ma) = basis.state(a);
        for b in 0..n {
            let (jb, mb) = basis.state(b);
            // φ integrand: e^{−i(m_a−s)φ} f e^{i(m_b−s)φ}
            let q = (mb - ma).to_integer().expect("integer difference");
            if q.abs() > q_max {
                continue;
            }
            if let Some(l) = band {
                if (jb - ja).abs().twice() > 2 * l {
                    continue;
                }
            }
            let slot = (q + q_max) as usize;
            let mut acc = Kahan::default();
            for i in 0..grid.n_theta {
                let w = grid.weights_theta[i] * table.profiles[a][i] * table.profiles[b][i];
                acc.add(moments[i][slot] * w);
            }
            m[(a, b)] = acc.sum();
        }
    }
    Operator::new(basis.clone(), m).expect("square by construction")
}
