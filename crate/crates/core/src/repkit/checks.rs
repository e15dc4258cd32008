//! Algebra, Casimir and curvature checks on the interior of a truncation.
//!
//! `N` couples `j` to `j ± 1` only, so every product of two generators is
//! exact on states with `j ≤ jmax − 1`. All identities below are asserted
//! after compressing with the interior projector `P`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::basis::RepBasis;
use super::generators::Generators;
use super::operator::Operator;
use crate::linalg::hermitian_eigenvalues;

/// Sign `c` in `[M₁, M₂] = c·iħ N² J₃` with `M = N × J`.
///
/// Frozen from [`audit_curvature_sign`] on `(s = 1/2, jmax = 5/2)`: the
/// residual is at rounding level for `c = −1` and of order `ħ‖N²J₃‖` for
/// `c = +1`.
pub const CURVATURE_SIGN: f64 = -1.0;

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Orthogonal projector onto states with `j ≤ jmax − 1`. Rank 0 when the
/// truncation has a single shell.
pub fn interior_projector(basis: &Arc<RepBasis>) -> Operator {
    Operator::from_diagonal(basis, |i| {
        Complex64::new(if basis.is_interior(i) { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `(N², N·J)` as matrices on the full truncated space.
pub fn casimirs(g: &Generators) -> (Operator, Operator) {
    let mut n2 = Operator::zeros(g.basis());
    let mut nj = Operator::zeros(g.basis());
    for i in 0..3 {
        n2 = n2.add(&g.n[i].mul(&g.n[i]));
        nj = nj.add(&g.n[i].mul(&g.j[i]));
    }
    (n2, nj)
}

#[derive(Clone, Debug, Serialize)]
pub struct CasimirSpectra {
    /// Interior eigenvalues of `N²`.
    pub n_squared: Vec<f64>,
    /// Interior eigenvalues of `N·J`.
    pub n_dot_j: Vec<f64>,
    /// `max |λ − 1|` over the `N²` spectrum.
    pub n_squared_deviation: f64,
    /// `max |λ − sħ|` over the `N·J` spectrum.
    pub n_dot_j_deviation: f64,
}

pub fn casimir_spectra(g: &Generators) -> CasimirSpectra {
    let (n2, nj) = casimirs(g);
    let n_squared = hermitian_eigenvalues(&n2.interior_block());
    let n_dot_j = hermitian_eigenvalues(&nj.interior_block());
    let target = g.basis().s().value() * g.hbar();
    let dev = |v: &[f64], t: f64| v.iter().fold(0.0_f64, |a, x| a.max((x - t).abs()));
    CasimirSpectra {
        n_squared_deviation: dev(&n_squared, 1.0),
        n_dot_j_deviation: dev(&n_dot_j, target),
        n_squared,
        n_dot_j,
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct CommutatorResiduals {
    /// `max ‖[J_i, J_j] − iħ ε_ijk J_k‖`, no projector.
    pub jj: f64,
    /// `max ‖P([J_i, N_j] − iħ ε_ijk N_k)P‖`
    pub jn: f64,
    /// `max ‖P[N_i, N_j]P‖`
    pub nn: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.jj.max(self.jn).max(self.nn)
    }
}

fn family_residual(a: &[Operator; 3], b: &[Operator; 3], rhs: Option<&[Operator; 3]>, hbar: f64, project: bool) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut r = a[i].commutator(&b[j]);
            if let Some(c) = rhs {
                for (k, ck) in c.iter().enumerate() {
                    let eps = levi_civita(i, j, k);
                    if eps != 0.0 {
                        r = r.sub(&ck.scale(Complex64::new(0.0, hbar * eps)));
                    }
                }
            }
            if project {
                r = r.interior();
            }
            worst = worst.max(r.max_norm());
        }
    }
    worst
}

pub fn commutator_residuals(g: &Generators) -> CommutatorResiduals {
    let hbar = g.hbar();
    CommutatorResiduals {
        jj: family_residual(&g.j, &g.j, Some(&g.j), hbar, false),
        jn: family_residual(&g.j, &g.n, Some(&g.n), hbar, true),
        nn: family_residual(&g.n, &g.n, None, hbar, true),
    }
}

/// `max_cyclic ‖P([M_a, M_b] − c·iħ N² J_c)P‖` with `M = N × J`.
pub fn curvature_identity_residual_with_sign(g: &Generators, sign: f64) -> f64 {
    let m = g.n_cross_j();
    let (n2, _) = casimirs(g);
    let hbar = g.hbar();
    let mut worst = 0.0_f64;
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = m[a].commutator(&m[b]);
        let rhs = n2.mul(&g.j[c]).scale(Complex64::new(0.0, sign * hbar));
        worst = worst.max(lhs.sub(&rhs).interior().max_norm());
    }
    worst
}

pub fn curvature_identity_residual(g: &Generators) -> f64 {
    curvature_identity_residual_with_sign(g, CURVATURE_SIGN)
}

/// Residuals for `c = +1` and `c = −1`, and the sign that wins.
pub fn audit_curvature_sign(g: &Generators) -> (f64, f64, f64) {
    let plus = curvature_identity_residual_with_sign(g, 1.0);
    let minus = curvature_identity_residual_with_sign(g, -1.0);
    let best = if minus < plus { -1.0 } else { 1.0 };
    (plus, minus, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::repkit::basis::{build_basis, RepLabel};
    use crate::repkit::generators::NRoute;

    fn gens(s2: i64, jmax2: i64) -> Generators {
        let b = Arc::new(build_basis(RepLabel::unit(HalfInt::from_twice(s2), HalfInt::from_twice(jmax2)).unwrap()).unwrap());
        Generators::build(&b, NRoute::EdgeRecursion)
    }

    #[test]
    fn projector_rank_and_axioms() {
        let g = gens(1, 5);
        let p = interior_projector(g.basis());
        let rank: f64 = (0..p.dim()).map(|i| p.get(i, i).re).sum();
        assert_eq!(rank, 6.0);
        assert_eq!(p.mul(&p).sub(&p).max_norm(), 0.0);
        assert_eq!(p.hermiticity_defect(), 0.0);

        let g = gens(0, 2);
        let p = interior_projector(g.basis());
        assert_eq!((0..p.dim()).map(|i| p.get(i, i).re).sum::<f64>(), 1.0);

        let g = gens(3, 3);
        assert_eq!(g.basis().interior_dim(), 0);
        assert_eq!(interior_projector(g.basis()).max_norm(), 0.0);
    }

    #[test]
    fn residuals_small_half_integer() {
        let g = gens(1, 21);
        let r = commutator_residuals(&g);
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn casimir_values() {
        let g = gens(2, 12);
        let c = casimir_spectra(&g);
        assert!(c.n_squared_deviation < 1e-10);
        assert!(c.n_dot_j_deviation < 1e-10);
        assert!(c.n_dot_j.iter().all(|x| (x - 1.0).abs() < 1e-10));

        let g = gens(0, 10);
        let (_, nj) = casimirs(&g);
        assert!(nj.interior().max_norm() < 1e-12);
    }

    #[test]
    fn self_adjointness() {
        let g = gens(-3, 13);
        let (n2, nj) = casimirs(&g);
        for op in g.j.iter().chain(g.n.iter()).chain([&n2, &nj]) {
            assert!(op.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn nn_commutator_exact_for_real_entries() {
        let g = gens(2, 10);
        // N₁ and N₃ are real, so [N₁, N₃] on the interior is a difference of
        // identical real products.
        let r = g.n[0].commutator(&g.n[2]).interior().max_norm();
        assert!(r < 1e-15, "{r}");
    }

    #[test]
    fn curvature_sign_audit() {
        let g = gens(1, 5);
        let (plus, minus, best) = audit_curvature_sign(&g);
        assert_eq!(best, CURVATURE_SIGN, "plus={plus} minus={minus}");
        let wrong = if CURVATURE_SIGN > 0.0 { minus } else { plus };
        let right = if CURVATURE_SIGN > 0.0 { plus } else { minus };
        assert!(right < 1e-12);
        assert!(wrong > 0.1);
    }
}
