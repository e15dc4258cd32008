//! First Chern number of the charge-`n` bundle by two independent routes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::harmonics::transition;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChernReport {
    pub route: String,
    pub value: f64,
    pub rounded: i64,
    /// `|value − rounded|`
    pub residual: f64,
}

impl ChernReport {
    fn new(route: &str, value: f64) -> Self {
        let rounded = value.round() as i64;
        ChernReport {
            route: route.to_string(),
            value,
            rounded,
            residual: (value - rounded as f64).abs(),
        }
    }
}

/// Winding number of the equatorial transition `e^{inφ}`: the sum of
/// principal-branch phase increments over one loop, divided by `2π`.
pub fn chern_winding(n: i64, samples: usize) -> Result<i64> {
    if samples < 8 {
        return Err(Error::Undersampled(format!("need at least 8 samples, got {samples}")));
    }
    let mut total = 0.0;
    let step = 2.0 * PI / samples as f64;
    let mut prev = transition(n, 0.0);
    for k in 1..=samples {
        let next = transition(n, k as f64 * step);
        let dphase = (next * prev.conj()).arg();
        // An increment this close to ±π cannot be told apart from its alias.
        if dphase.abs() >= PI * (1.0 - 1e-9) || 2 * n.unsigned_abs() as usize >= samples {
            return Err(Error::Undersampled(format!(
                "phase increment {dphase:.3} rad between samples; n = {n} needs more than {} samples",
                2 * n.unsigned_abs()
            )));
        }
        total += dphase;
        prev = next;
    }
    let w = total / (2.0 * PI);
    let rounded = w.round();
    debug_assert!((w - rounded).abs() < 1e-9);
    Ok(rounded as i64)
}

pub fn chern_winding_report(n: i64, samples: usize) -> Result<ChernReport> {
    Ok(ChernReport::new("winding", chern_winding(n, samples)? as f64))
}

/// `(1/2π) ∫ (N·J/ħ) ε` over the grid, with the value of `N·J` supplied
/// (for example the Casimir measured on a truncated representation).
pub fn chern_curvature_from_casimir(n_dot_j_over_hbar: f64, grid: &Grid) -> f64 {
    let area = grid.integrate_real(&vec![1.0; grid.len()]);
    n_dot_j_over_hbar * area / (2.0 * PI)
}

/// `C₁ = ∫ (i/2π) F` with `F = (1/iħ) ε N·J` and `N·J = sħ`.
pub fn chern_curvature(s: HalfInt, grid: &Grid) -> f64 {
    chern_curvature_from_casimir(s.value(), grid)
}

pub fn chern_curvature_report(s: HalfInt, grid: &Grid) -> ChernReport {
    ChernReport::new("curvature", chern_curvature(s, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundlegrid::grid::build_grid;

    #[test]
    fn winding_examples() {
        assert_eq!(chern_winding(3, 64).unwrap(), 3);
        assert_eq!(chern_winding(0, 8).unwrap(), 0);
        assert_eq!(chern_winding(-2, 64).unwrap(), -2);
    }

    #[test]
    fn undersampling_is_an_error() {
        assert!(chern_winding(1, 7).is_err());
        assert!(chern_winding(4, 8).is_err());
        assert!(chern_winding(5, 8).is_err());
        assert_eq!(chern_winding(3, 8).unwrap(), 3);
    }

    #[test]
    fn curvature_examples() {
        let g = build_grid(16, 32).unwrap();
        assert!((chern_curvature(HalfInt::ONE, &g) - 2.0).abs() < 1e-12);
        assert_eq!(chern_curvature(HalfInt::ZERO, &g), 0.0);
        let r = chern_curvature_report(HalfInt::from_twice(-3), &g);
        assert!((r.value + 3.0).abs() < 1e-12);
        assert_eq!(r.rounded, chern_winding(-3, 64).unwrap());
        let json = serde_json::to_value(&r).unwrap();
        for key in ["route", "value", "rounded", "residual"] {
            assert!(json.get(key).is_some());
        }
    }
}
