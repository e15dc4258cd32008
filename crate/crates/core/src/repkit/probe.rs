//! Pole-localized states in a finite truncation.

use serde::Serialize;

use super::generators::Generators;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::hermitian_eigen;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ContractionProbe {
    pub n3_expect: f64,
    pub j3_expect: f64,
    /// Magnetic sector that carries the most localized state.
    pub m: HalfInt,
}

/// Top eigenvector of `N₃` within each fixed-`m` sector (where `N₃` is block
/// diagonal); returns the one with the largest `⟨N₃⟩`.
pub fn contraction_probe(g: &Generators) -> Result<ContractionProbe> {
    let basis = g.basis();
    if (basis.jmax() - basis.j0()).twice() < 4 {
        return Err(Error::InvalidTruncation {
            jmax: basis.jmax(),
            abs_s: basis.j0(),
            reason: "contraction probe needs jmax - |s| >= 2",
        });
    }
    let n3 = &g.n[2];
    let j3 = &g.j[2];
    let mut best: Option<ContractionProbe> = None;
    let mut m = -basis.jmax();
    while m <= basis.jmax() {
        let block = n3.block(|i| basis.state(i).1 == m);
        if let Some((lam, v)) = hermitian_eigen(&block).pop() {
            let idx: Vec<usize> = (0..basis.dim()).filter(|&i| basis.state(i).1 == m).collect();
            let mut full = nalgebra::DVector::zeros(basis.dim());
            for (k, &i) in idx.iter().enumerate() {
                full[i] = v[k];
            }
            let norm2 = full.norm_squared();
            let n3e = full.dotc(&n3.apply(&full)).re / norm2;
            let j3e = full.dotc(&j3.apply(&full)).re / norm2;
            debug_assert!((n3e - lam).abs() < 1e-10);
            if best.as_ref().is_none_or(|b| n3e > b.n3_expect + 1e-14) {
                best = Some(ContractionProbe {
                    n3_expect: n3e,
                    j3_expect: j3e,
                    m,
                });
            }
        }
        m += HalfInt::ONE;
    }
    Ok(best.expect("basis is non-empty"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::repkit::basis::{build_basis, RepLabel};
    use crate::repkit::generators::NRoute;

    fn probe(s2: i64, depth: i64) -> ContractionProbe {
        let label = RepLabel::with_depth(HalfInt::from_twice(s2), depth, 1.0).unwrap();
        let b = Arc::new(build_basis(label).unwrap());
        contraction_probe(&Generators::build(&b, NRoute::EdgeRecursion)).unwrap()
    }

    #[test]
    fn localizes_toward_pole() {
        let mut prev = 0.0;
        for depth in [5, 10, 20] {
            let p = probe(1, depth);
            assert!(p.n3_expect > prev && p.n3_expect < 1.0);
            assert!((p.j3_expect - 0.5).abs() < 0.05);
            prev = p.n3_expect;
        }
    }

    #[test]
    fn scalar_case_has_zero_j3() {
        for depth in [2, 5, 9] {
            assert_eq!(probe(0, depth).j3_expect, 0.0);
        }
    }

    #[test]
    fn needs_two_shells_headroom() {
        let b = Arc::new(build_basis(RepLabel::with_depth(HalfInt::HALF, 1, 1.0).unwrap()).unwrap());
        assert!(contraction_probe(&Generators::build(&b, NRoute::EdgeRecursion)).is_err());
    }
}
