//! Truncated matrices of the E(3) generators on the ladder-built basis.

pub mod basis;
pub mod checks;
pub mod clebsch;
pub mod generators;
pub mod lowering;
pub mod operator;
pub mod probe;

pub use basis::{build_basis, RepBasis, RepLabel};
pub use checks::{
    audit_curvature_sign, casimir_spectra, casimirs, commutator_residuals, curvature_identity_residual,
    curvature_identity_residual_with_sign, interior_projector, CasimirSpectra, CommutatorResiduals, CURVATURE_SIGN,
};
pub use clebsch::clebsch_gordan;
pub use generators::{op_j, op_n, Component, Generators, NRoute};
pub use lowering::{dirac_consistency, lowering_norm_ratio, lowering_operator, ConsistencyReport};
pub use operator::{CMatrix, CVector, Operator, OperatorJson};
pub use probe::{contraction_probe, ContractionProbe};
