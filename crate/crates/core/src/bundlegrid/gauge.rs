//! Band-limited gauge scalars and globally defined one-forms on S², and the
//! gauge phase `T = e^{−ieσ/ħ}` as a matrix on the harmonic basis.
//!
//! Scalars are polynomials in the embedding coordinates `(x, y, z)`
//! restricted to the unit sphere; a polynomial of total degree `L` is a
//! combination of spherical harmonics of degree `≤ L`. A one-form is stored
//! through its Hodge split `A = dσ + ⋆dτ`, which makes it globally defined
//! and flux free (`∫ dA = ∫ Δτ ε = 0`) by construction.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::harmonics::{mult_matrix, mult_matrix_unchecked, HarmonicTable};
use crate::error::Result;
use crate::repkit::operator::Operator;

/// `Σ c_{abc} x^a y^b z^c`
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaugeScalar {
    terms: BTreeMap<[u32; 3], f64>,
}

impl GaugeScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    /// `c·cosθ = c·z`
    pub fn cos_theta(c: f64) -> Self {
        Self::monomial(c, [0, 0, 1])
    }

    pub fn monomial(c: f64, powers: [u32; 3]) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(powers, c);
        }
        GaugeScalar { terms }
    }

    pub fn plus(&self, other: &GaugeScalar) -> GaugeScalar {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            *terms.entry(*k).or_insert(0.0) += v;
        }
        terms.retain(|_, v| *v != 0.0);
        GaugeScalar { terms }
    }

    pub fn scaled(&self, c: f64) -> GaugeScalar {
        GaugeScalar {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| *v != 0.0).collect(),
        }
    }

    /// Total polynomial degree, an upper bound on the harmonic degree.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|p| (p[0] + p[1] + p[2]) as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c * x[0].powi(p[0] as i32) * x[1].powi(p[1] as i32) * x[2].powi(p[2] as i32))
            .sum()
    }

    /// Ambient gradient of the polynomial.
    pub fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (p, c) in &self.terms {
            for (axis, slot) in g.iter_mut().enumerate() {
                if p[axis] == 0 {
                    continue;
                }
                let mut term = c * p[axis] as f64;
                for (b, &pb) in p.iter().enumerate() {
                    let e = if b == axis { pb - 1 } else { pb };
                    term *= x[b].powi(e as i32);
                }
                *slot += term;
            }
        }
        g
    }

    /// Gradient along the sphere: `∇f − (x·∇f) x`.
    pub fn tangential_gradient(&self, x: [f64; 3]) -> [f64; 3] {
        let g = self.gradient(x);
        let r = dot(x, g);
        [g[0] - r * x[0], g[1] - r * x[1], g[2] - r * x[2]]
    }

    pub fn samples(&self, grid: &Grid) -> Vec<f64> {
        grid.sample(|x| self.eval(x))
    }
}

/// `A = dσ + ⋆dτ`, evaluated on tangent vectors `v` at `x` as
/// `A(v) = ∇σ·v + (∇τ × x)·v`.
///
/// `λ sin²θ dφ` is `τ = λ cosθ`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaugeField {
    pub exact: GaugeScalar,
    pub coexact: GaugeScalar,
}

impl GaugeField {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `λ sin²θ dφ`
    pub fn azimuthal(lambda: f64) -> Self {
        GaugeField {
            exact: GaugeScalar::zero(),
            coexact: GaugeScalar::cos_theta(lambda),
        }
    }

    /// Pure gauge `dσ`.
    pub fn pure_gauge(sigma: &GaugeScalar) -> Self {
        GaugeField {
            exact: sigma.clone(),
            coexact: GaugeScalar::zero(),
        }
    }

    /// `A + dσ`
    pub fn gauge_transformed(&self, sigma: &GaugeScalar) -> Self {
        GaugeField {
            exact: self.exact.plus(sigma),
            coexact: self.coexact.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.exact.degree().max(self.coexact.degree())
    }

    /// `A(X_i)` at `x`, with `X_i(x) = e_i × x`.
    pub fn contract(&self, x: [f64; 3]) -> [f64; 3] {
        // ∇σ·(e_i × x) = (x × ∇σ)_i;  (∇τ × x)·(e_i × x) = (∇_tan τ)_i on |x| = 1.
        let gs = self.exact.gradient(x);
        let x_cross = cross(x, gs);
        let gt = self.coexact.tangential_gradient(x);
        [x_cross[0] + gt[0], x_cross[1] + gt[1], x_cross[2] + gt[2]]
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Samples of `A(X₁), A(X₂), A(X₃)` on the grid.
pub fn one_form_contract(a: &GaugeField, grid: &Grid) -> [Vec<f64>; 3] {
    let vals = grid.sample(|x| a.contract(x));
    [0, 1, 2].map(|i| vals.iter().map(|v| v[i]).collect())
}

/// Multiplication matrices of `A(X_i)`. The contraction of a degree-`L`
/// field has polynomial degree `≤ L + 1`.
pub fn gauge_field_operators(a: &GaugeField, table: &HarmonicTable, grid: &Grid) -> Result<[Operator; 3]> {
    let [a1, a2, a3] = one_form_contract(a, grid);
    let band = a.degree() + 1;
    let to_c = |v: Vec<f64>| -> Vec<Complex64> { v.into_iter().map(|x| Complex64::new(x, 0.0)).collect() };
    Ok([
        mult_matrix(&to_c(a1), band, table, grid)?,
        mult_matrix(&to_c(a2), band, table, grid)?,
        mult_matrix(&to_c(a3), band, table, grid)?,
    ])
}

/// Matrix of multiplication by `e^{−ieσ/ħ}` between basis harmonics.
///
/// The phase is not a polynomial, so the quadrature is exact only up to the
/// tail of its harmonic expansion beyond the grid's band limit; for
/// `|eσ/ħ| ≲ 1` that tail decays faster than geometrically.
pub fn gauge_phase_matrix(sigma: &GaugeScalar, e: f64, hbar: f64, table: &HarmonicTable, grid: &Grid) -> Operator {
    let f: Vec<Complex64> = sigma
        .samples(grid)
        .into_iter()
        .map(|v| Complex64::from_polar(1.0, -e * v / hbar))
        .collect();
    mult_matrix_unchecked(&f, table, grid)
}
