//! The Hilbert space as sections of the charge-`2s` line bundle over S².

pub mod chern;
pub mod gauge;
pub mod grid;
pub mod harmonics;
pub mod wigner_d;

pub use chern::{chern_curvature, chern_curvature_from_casimir, chern_winding, ChernReport};
pub use gauge::{gauge_field_operators, gauge_phase_matrix, one_form_contract, GaugeField, GaugeScalar};
pub use grid::{build_grid, Grid};
pub use harmonics::{monopole_harmonic, mult_matrix, position_operators, HarmonicTable, Patch, SectionField};
pub use wigner_d::wigner_small_d;
