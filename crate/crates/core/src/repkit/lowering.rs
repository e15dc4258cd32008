//! The shell-lowering operator `L⁽ʲ⁾` and the analytic norm chain that
//! decides whether a value of `s` admits a Hilbert space.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::basis::RepBasis;
use super::generators::Generators;
use super::operator::Operator;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// `L⁽ʲ⁾ = N₋ − s/(j(j+1)) J₋/ħ + 1/(2(2j+1)(j+1)) (J₋/ħ)² N₊`.
///
/// The ladder identities that define `L⁽ʲ⁾` use `J₋` with `ħ = 1`; dividing
/// by `ħ` makes the operator dimensionless for any `ħ`. As an operator it is
/// basis independent, so the orthonormal matrices are used directly: the
/// unnormalized ladder states differ from `|j,m⟩` only by positive factors.
pub fn lowering_operator(j: HalfInt, g: &Generators) -> Result<Operator> {
    let basis = g.basis();
    if !basis.contains_shell(j) {
        return Err(Error::InvalidIndex(format!(
            "lowering operator needs |s| <= j <= jmax on the shell lattice, got j = {j} (s = {}, jmax = {})",
            basis.s(),
            basis.jmax()
        )));
    }
    let hbar = g.hbar();
    let jv = j.value();
    let s = basis.s().value();
    let jm = g.j_minus.scale_re(1.0 / hbar);
    let mut l = g.n_minus.clone();
    if j.twice() != 0 {
        l = l.sub(&jm.scale_re(s / (jv * (jv + 1.0))));
    }
    let quad = jm.mul(&jm).mul(&g.n_plus);
    Ok(l.add(&quad.scale_re(1.0 / (2.0 * (2.0 * jv + 1.0) * (jv + 1.0)))))
}

/// `‖L⁽ʲ⁾|j,j⟩‖² / ‖|j,j⟩‖² = (2j/(2j+1))(1 − s²/j²)` for real `s`.
///
/// At `j = 0` the ratio is `0` for `s = 0` and diverges to `−∞` otherwise.
pub fn lowering_norm_ratio(s: f64, j: f64) -> f64 {
    if j == 0.0 {
        return if s == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    2.0 * (j * j - s * s) / (j * (2.0 * j + 1.0))
}

/// Chain entries with `|ratio|` below this count as an exact zero.
pub const CHAIN_ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChainLink {
    /// Shell `j` being lowered from (may be negative once the chain has
    /// overshot the allowed range).
    pub j: f64,
    /// Squared-norm ratio of the lowered state relative to `|j,j⟩`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Chain {
    /// `0` for the integer-`j` family, `1/2` for the half-integer family.
    pub family: f64,
    pub links: Vec<ChainLink>,
    /// Shell where the ratio vanished.
    pub terminated_at: Option<f64>,
    /// Shell whose lowering produced a negative squared norm.
    pub negative_at: Option<f64>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConsistencyReport {
    pub s: f64,
    pub consistent: bool,
    pub j0: Option<HalfInt>,
    pub first_negative_norm_j: Option<f64>,
    /// Chain of the deciding family: the terminating one if consistent,
    /// otherwise the one whose negative norm appears highest.
    pub chain: Vec<ChainLink>,
    pub families: [Chain; 2],
}

fn run_chain(s: f64, family: f64) -> Chain {
    let a = s.abs();
    // Trial top: the first family member at least one unit above |s|.
    let mut j = family + (a - family + 1.0).max(0.0).ceil();
    let mut links = Vec::new();
    let mut terminated_at = None;
    let mut negative_at = None;
    loop {
        // Below j = 0 there is no lowering operator; the would-be state
        // |j,j⟩ with j < 0 already has ‖J₋|j,j⟩‖² = 2j‖|j,j⟩‖² < 0.
        let ratio = if j < 0.0 { 2.0 * j } else { lowering_norm_ratio(s, j) };
        links.push(ChainLink { j, ratio });
        if ratio.abs() <= CHAIN_ZERO_TOL {
            terminated_at = Some(j);
            break;
        }
        if ratio < 0.0 {
            negative_at = Some(j);
            break;
        }
        j -= 1.0;
    }
    Chain {
        family,
        links,
        terminated_at,
        negative_at,
    }
}

/// Walks the analytic norm chain downward from a trial top shell in both the
/// integer and half-integer `j` families.
///
/// The representation exists iff one family terminates with a vanishing
/// ratio at `j = |s|`; this happens exactly when `2s ∈ ℤ`. Otherwise each
/// family runs into a negative squared norm.
pub fn dirac_consistency(s: f64) -> ConsistencyReport {
    let families = [run_chain(s, 0.0), run_chain(s, 0.5)];
    let terminating = families
        .iter()
        .find(|c| c.terminated_at.is_some_and(|j| (j - s.abs()).abs() <= CHAIN_ZERO_TOL.sqrt()));
    match terminating {
        Some(chain) => ConsistencyReport {
            s,
            consistent: true,
            j0: Some(HalfInt::from_twice((2.0 * chain.terminated_at.unwrap()).round() as i64)),
            first_negative_norm_j: None,
            chain: chain.links.clone(),
            families,
        },
        None => {
            let decisive = families
                .iter()
                .max_by(|a, b| {
                    let ja = a.negative_at.unwrap_or(f64::NEG_INFINITY);
                    let jb = b.negative_at.unwrap_or(f64::NEG_INFINITY);
                    ja.total_cmp(&jb)
                })
                .expect("two families");
            ConsistencyReport {
                s,
                consistent: false,
                j0: None,
                first_negative_norm_j: decisive.negative_at,
                chain: decisive.links.clone(),
                families: families.clone(),
            }
        }
    }
}

/// Builds the lowering operator and applies it to `|j,j⟩`.
pub fn lower_edge(j: HalfInt, g: &Generators) -> Result<(Operator, nalgebra::DVector<Complex64>)> {
    let l = lowering_operator(j, g)?;
    let basis: &Arc<RepBasis> = g.basis();
    let idx = basis.index_of(j, j).expect("edge state in basis");
    let mut e = nalgebra::DVector::zeros(basis.dim());
    e[idx] = Complex64::new(1.0, 0.0);
    let out = l.apply(&e);
    Ok((l, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkit::basis::{build_basis, RepLabel};
    use crate::repkit::generators::NRoute;

    fn gens(s2: i64, jmax2: i64, hbar: f64) -> Generators {
        let b = Arc::new(build_basis(RepLabel::new(HalfInt::from_twice(s2), HalfInt::from_twice(jmax2), hbar).unwrap()).unwrap());
        Generators::build(&b, NRoute::EdgeRecursion)
    }

    #[test]
    fn annihilates_ground_edge() {
        for (s2, hbar) in [(1, 1.0), (2, 0.7), (-3, 1.0), (0, 2.0)] {
            let g = gens(s2, s2.abs() + 6, hbar);
            let j0 = HalfInt::from_twice(s2.abs());
            let (_, v) = lower_edge(j0, &g).unwrap();
            assert!(v.norm() < 1e-12, "s2={s2}: {}", v.norm());
        }
    }

    #[test]
    fn lowers_by_one_shell_with_analytic_norm() {
        let g = gens(1, 9, 1.0);
        let (_, v) = lower_edge(HalfInt::from_twice(3), &g).unwrap();
        assert!((v.norm_squared() - 2.0 / 3.0).abs() < 1e-12);
        let idx = g.basis().index_of(HalfInt::HALF, HalfInt::HALF).unwrap();
        assert!((v[idx].norm_sqr() - v.norm_squared()).abs() < 1e-12);

        for tj in [5, 7] {
            let j = HalfInt::from_twice(tj);
            let (_, v) = lower_edge(j, &g).unwrap();
            let want = lowering_norm_ratio(0.5, j.value());
            assert!((v.norm_squared() - want).abs() < 1e-12);
            let j2v = g.j_squared().apply(&v);
            let lam = (j - HalfInt::ONE).casimir();
            assert!((j2v - v.scale(lam)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_shell_outside_range() {
        let g = gens(2, 6, 1.0);
        assert!(lowering_operator(HalfInt::ZERO, &g).is_err());
        assert!(lowering_operator(HalfInt::from_int(4), &g).is_err());
        assert!(lowering_operator(HalfInt::from_twice(3), &g).is_err());
    }

    #[test]
    fn consistency_examples() {
        let r = dirac_consistency(0.5);
        assert!(r.consistent);
        assert_eq!(r.j0, Some(HalfInt::HALF));
        let r = dirac_consistency(-2.0);
        assert!(r.consistent);
        assert_eq!(r.j0, Some(HalfInt::from_int(2)));
        let r = dirac_consistency(0.0);
        assert!(r.consistent && r.j0 == Some(HalfInt::ZERO));

        let r = dirac_consistency(0.3);
        assert!(!r.consistent);
        let j = r.first_negative_norm_j.unwrap();
        assert!(j < 1.3);
        assert!(r.chain.last().unwrap().ratio < 0.0);
        let r = dirac_consistency(1.3);
        assert_eq!(r.first_negative_norm_j, Some(1.0));
    }

    #[test]
    fn chain_positive_above_abs_s() {
        for k in 1..=60 {
            let s = 0.05 * k as f64;
            let r = dirac_consistency(s);
            for c in &r.families {
                for l in &c.links[..c.links.len() - 1] {
                    assert!(l.ratio > 0.0);
                }
            }
        }
    }
}
