//! Free and minimally coupled Hamiltonians, Landau-level tables, and the
//! eigensolver harness that matches spectra against the closed form.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundlegrid::gauge::{gauge_field_operators, gauge_phase_matrix, GaugeField, GaugeScalar};
use crate::bundlegrid::grid::Grid;
use crate::bundlegrid::harmonics::HarmonicTable;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::hermitian_eigenvalues;
use crate::repkit::basis::{build_basis, RepBasis, RepLabel};
use crate::repkit::generators::Generators;
use crate::repkit::operator::Operator;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub radius: f64,
    pub e: f64,
    pub g: f64,
    pub hbar: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            mass: 1.0,
            radius: 1.0,
            e: 0.0,
            g: 0.0,
            hbar: 1.0,
        }
    }
}

impl PhysicalParams {
    /// Unit mass, radius and `ħ`, with `e = 1` and `g = −s` so that
    /// `−eg/ħ = s`. For `s = 0` the electric charge stays 1 (it still
    /// matters for gauge phases).
    pub fn unit_for(s: HalfInt) -> Self {
        PhysicalParams {
            e: 1.0,
            g: -s.value(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mass", self.mass), ("radius", self.radius), ("hbar", self.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.e.is_finite() || !self.g.is_finite() {
            return Err(Error::InvalidParameter("e and g must be finite".into()));
        }
        Ok(())
    }

    pub fn eg(&self) -> f64 {
        self.e * self.g
    }

    /// `s = −eg/ħ`, rejected unless it is a half-integer.
    pub fn s(&self) -> Result<HalfInt> {
        self.validate()?;
        let s = -self.eg() / self.hbar;
        let twice = (2.0 * s).round();
        if (2.0 * s - twice).abs() > 1e-12 {
            return Err(Error::DiracViolation { s: s.to_string() });
        }
        Ok(HalfInt::from_twice(twice as i64))
    }

    /// `ħ²/(2mr²)`
    pub fn energy_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.radius * self.radius)
    }

    fn matches(&self, basis: &RepBasis) -> Result<()> {
        let s = self.s()?;
        if s != basis.s() {
            return Err(Error::BasisMismatch(format!(
                "parameters give s = -eg/hbar = {s}, basis has s = {}",
                basis.s()
            )));
        }
        if (self.hbar - basis.hbar()).abs() > 1e-15 * self.hbar {
            return Err(Error::BasisMismatch(format!(
                "parameters have hbar = {}, basis has hbar = {}",
                self.hbar,
                basis.hbar()
            )));
        }
        Ok(())
    }
}

/// `H = (J² − (eg)²)/(2mr²)`, diagonal with entries `ħ²/(2mr²)·(j(j+1) − s²)`.
pub fn hamiltonian_free(basis: &Arc<RepBasis>, params: &PhysicalParams) -> Result<Operator> {
    params.matches(basis)?;
    let scale = params.energy_scale();
    let s2 = basis.s().value().powi(2);
    Ok(Operator::from_diagonal(basis, |i| {
        Complex64::new(scale * (basis.state(i).0.casimir() - s2), 0.0)
    }))
}

/// `Σ_i Π_i²/(2mr²)` with `Π_i = J_i + eg N_i`, formed from the generator
/// matrices and restricted to the interior shells, where the truncation
/// does not reach. Returned on the basis with `jmax − 1`.
pub fn hamiltonian_algebraic(g: &Generators, params: &PhysicalParams) -> Result<Operator> {
    let basis = g.basis();
    params.matches(basis)?;
    if basis.jmax() == basis.j0() {
        return Err(Error::InvalidTruncation {
            jmax: basis.jmax(),
            abs_s: basis.j0(),
            reason: "no interior shell",
        });
    }
    let mut sum = Operator::zeros(basis);
    for i in 0..3 {
        let pi = g.j[i].add(&g.n[i].scale_re(params.eg()));
        sum = sum.add(&pi.mul(&pi));
    }
    let scale = 1.0 / (2.0 * params.mass * params.radius * params.radius);
    let inner = Arc::new(build_basis(RepLabel::new(basis.s(), basis.jmax() - HalfInt::ONE, basis.hbar())?)?);
    Operator::new(inner, sum.interior_block() * Complex64::new(scale, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub k: u32,
    pub j_twice: i64,
    pub energy: f64,
    pub degeneracy: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTable {
    pub s: HalfInt,
    pub rows: Vec<LevelRow>,
}

impl LevelTable {
    /// CSV with columns `k, j_twice, energy, degeneracy`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r).map_err(std::io::Error::other)?;
        }
        w.flush()
    }
}

/// `E_k = ħ²/(2mr²)[k(k+1) + |s|(2k+1)]` with degeneracy `2(k+|s|)+1`.
pub fn landau_table(s: HalfInt, kmax: u32, params: &PhysicalParams) -> LevelTable {
    let scale = params.energy_scale();
    let a = s.abs();
    let rows = (0..=kmax)
        .map(|k| {
            let kf = k as f64;
            let j = a + HalfInt::from_int(k as i64);
            LevelRow {
                k,
                j_twice: j.twice(),
                energy: scale * (kf * (kf + 1.0) + a.value() * (2.0 * kf + 1.0)),
                degeneracy: (j.twice() + 1) as u32,
            }
        })
        .collect();
    LevelTable { s, rows }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelMatch {
    pub k: u32,
    pub expected_energy: f64,
    pub expected_degeneracy: u32,
    /// Mean of the matched eigenvalue cluster.
    pub found_energy: Option<f64>,
    pub found_degeneracy: u32,
    /// Largest `|λ − E_k|` within the cluster.
    pub deviation: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchReport {
    pub levels: Vec<LevelMatch>,
    pub max_deviation: f64,
    pub all_ok: bool,
}

/// Relative clustering tolerance on the level-spacing scale `ħ²/(2mr²)`.
pub const CLUSTER_REL_TOL: f64 = 1e-8;

/// Groups sorted eigenvalues whose neighbours differ by at most `tol`.
pub fn cluster(eigs: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &e in eigs {
        match out.last_mut() {
            Some(c) if (e - c[c.len() - 1]).abs() <= tol => c.push(e),
            _ => out.push(vec![e]),
        }
    }
    out
}

/// Diagonalizes `h` and compares its eigenvalue clusters, in ascending
/// order, with the table rows whose shell lies strictly inside the
/// truncation. Mismatches are reported, never thrown.
pub fn diagonalize_and_match(h: &Operator, table: &LevelTable, params: &PhysicalParams, tol: f64) -> MatchReport {
    let basis = h.basis();
    let eigs = hermitian_eigenvalues(h.entries());
    let clusters = cluster(&eigs, CLUSTER_REL_TOL * params.energy_scale());
    let mut levels = Vec::new();
    for (idx, row) in table.rows.iter().enumerate() {
        if HalfInt::from_twice(row.j_twice) > basis.jmax() - HalfInt::ONE {
            continue;
        }
        let found = clusters.get(idx);
        let (found_energy, found_degeneracy, deviation) = match found {
            Some(c) => (
                Some(c.iter().sum::<f64>() / c.len() as f64),
                c.len() as u32,
                c.iter().fold(0.0_f64, |m, x| m.max((x - row.energy).abs())),
            ),
            None => (None, 0, f64::INFINITY),
        };
        levels.push(LevelMatch {
            k: row.k,
            expected_energy: row.energy,
            expected_degeneracy: row.degeneracy,
            found_energy,
            found_degeneracy,
            deviation,
            ok: found.is_some() && found_degeneracy == row.degeneracy && deviation <= tol,
        });
    }
    let max_deviation = levels.iter().fold(0.0_f64, |m, l| m.max(l.deviation));
    let all_ok = !levels.is_empty() && levels.iter().all(|l| l.ok);
    MatchReport {
        levels,
        max_deviation,
        all_ok,
    }
}

/// `H_A = (1/2mr²) Σ_i (Π_i − e Â_i)²` with `Π_i = J_i + eg N_i`, expanded as
/// `H_free + (1/2mr²)(−e Σ{Π_i, Â_i} + e² Σ Â_i²)`.
///
/// `Σ Π_i² = J² − (eg)²` holds exactly in the representation; it is inserted
/// in closed form so that the truncation only touches the coupling terms and
/// `A = 0` reproduces [`hamiltonian_free`] entrywise.
pub fn hamiltonian_coupled(g: &Generators, params: &PhysicalParams, a_ops: &[Operator; 3]) -> Result<Operator> {
    let basis = g.basis();
    for a in a_ops {
        if **a.basis() != **basis {
            return Err(Error::BasisMismatch(format!(
                "gauge-field operator on s={} jmax={}, Hamiltonian on s={} jmax={}",
                a.basis().s(),
                a.basis().jmax(),
                basis.s(),
                basis.jmax()
            )));
        }
    }
    let mut h = hamiltonian_free(basis, params)?;
    let pref = 1.0 / (2.0 * params.mass * params.radius * params.radius);
    let e = params.e;
    for i in 0..3 {
        if a_ops[i].max_norm() == 0.0 {
            continue;
        }
        let pi = g.j[i].add(&g.n[i].scale_re(params.eg()));
        let anti = pi.mul(&a_ops[i]).add(&a_ops[i].mul(&pi));
        let sq = a_ops[i].mul(&a_ops[i]);
        h = h.add(&anti.scale_re(-e * pref)).add(&sq.scale_re(e * e * pref));
    }
    Ok(h)
}

/// Degree bound used to size grids for a gauge computation.
fn band_for(a: &GaugeField, sigma: &GaugeScalar) -> usize {
    a.degree().max(sigma.degree()) + 1
}

/// Grid and harmonic table sized for the basis and a field band limit.
pub fn grid_for(basis: &Arc<RepBasis>, band: usize) -> Result<(Grid, HarmonicTable)> {
    let grid = Grid::for_band_limit(basis.jmax().twice(), band)?;
    let table = HarmonicTable::new(basis, &grid);
    Ok((grid, table))
}

pub fn hamiltonian_for_field(g: &Generators, params: &PhysicalParams, a: &GaugeField) -> Result<Operator> {
    let (grid, table) = grid_for(g.basis(), a.degree() + 1)?;
    let ops = gauge_field_operators(a, &table, &grid)?;
    hamiltonian_coupled(g, params, &ops)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugePairSpectra {
    pub eigs: Vec<f64>,
    pub eigs_primed: Vec<f64>,
    pub max_gap: f64,
}

/// Lowest `n_levels` eigenvalues of `H_A` and `H_{A+dσ}`.
pub fn gauge_pair_spectra(
    g: &Generators,
    params: &PhysicalParams,
    a: &GaugeField,
    sigma: &GaugeScalar,
    n_levels: usize,
) -> Result<GaugePairSpectra> {
    let (grid, table) = grid_for(g.basis(), band_for(a, sigma))?;
    let h = hamiltonian_coupled(g, params, &gauge_field_operators(a, &table, &grid)?)?;
    let primed = a.gauge_transformed(sigma);
    let hp = hamiltonian_coupled(g, params, &gauge_field_operators(&primed, &table, &grid)?)?;
    let mut eigs = hermitian_eigenvalues(h.entries());
    let mut eigs_primed = hermitian_eigenvalues(hp.entries());
    eigs.truncate(n_levels);
    eigs_primed.truncate(n_levels);
    let max_gap = eigs
        .iter()
        .zip(&eigs_primed)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(GaugePairSpectra {
        eigs,
        eigs_primed,
        max_gap,
    })
}

/// `‖P_deep (T† H_A T − H_{A+dσ}) P_deep‖` with `T = e^{−ieσ/ħ}` and
/// `P_deep` keeping shells `j ≤ jmax − depth`.
pub fn gauge_covariance_defect(
    g: &Generators,
    params: &PhysicalParams,
    a: &GaugeField,
    sigma: &GaugeScalar,
    depth: i64,
) -> Result<f64> {
    let basis = g.basis();
    let (grid, table) = grid_for(basis, band_for(a, sigma))?;
    let h = hamiltonian_coupled(g, params, &gauge_field_operators(a, &table, &grid)?)?;
    let hp = hamiltonian_coupled(g, params, &gauge_field_operators(&a.gauge_transformed(sigma), &table, &grid)?)?;
    let t = gauge_phase_matrix(sigma, params.e, params.hbar, &table, &grid);
    let conj = t.adjoint().mul(&h).mul(&t);
    let b = basis.clone();
    Ok(conj.sub(&hp).compress(|i| b.is_deep(i, depth)).max_norm())
}
