//! One function per subcommand; each writes its data and reports mismatches
//! through the exit code.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use clap::ValueEnum;
use monopole::bundlegrid::chern::{chern_curvature_from_casimir, chern_winding_report};
use monopole::bundlegrid::{build_grid, position_operators, ChernReport, Grid, HarmonicTable};
use monopole::classical::{integrate, ClassicalState, Scheme, Vec3};
use monopole::halfint::parse_rational;
use monopole::liecohom::{h2_report, StructureConstants};
use monopole::repkit::{
    build_basis, casimir_spectra, commutator_residuals, curvature_identity_residual, dirac_consistency, Generators,
    NRoute, RepBasis, RepLabel,
};
use monopole::spectrumkit::{diagonalize_and_match, hamiltonian_algebraic, landau_table};
use monopole::{Error, HalfInt};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::config::{jmax_or, parse_vec3, Format, Output, Physics};

#[derive(Debug)]
pub enum CliError {
    Config(Error),
    Mismatch(String),
    Io(io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Mismatch(m) => write!(f, "verification failed: {m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult = Result<(), CliError>;

fn write_json<T: Serialize>(out: &Output, value: &T) -> CliResult {
    let mut w = out.writer()?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn basis(s: HalfInt, jmax: HalfInt, hbar: f64) -> Result<Arc<RepBasis>, Error> {
    Ok(Arc::new(build_basis(RepLabel::new(s, jmax, hbar)?)?))
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    s: HalfInt,
    jmax: HalfInt,
    table: &'a monopole::spectrumkit::LevelTable,
    #[serde(rename = "match")]
    report: &'a monopole::spectrumkit::MatchReport,
}

pub fn spectrum(physics: &Physics, jmax: &Option<String>, tol: f64, out: &Output) -> CliResult {
    let r = physics.resolve()?;
    let jmax = jmax_or(jmax, r.s, 10)?;
    let b = basis(r.s, jmax, r.params.hbar)?;
    if (jmax - b.j0()).twice() < 4 {
        return Err(Error::InvalidTruncation {
            jmax,
            abs_s: b.j0(),
            reason: "spectrum needs jmax - |s| >= 2",
        }
        .into());
    }
    let kmax = ((jmax - b.j0()).twice() / 2) as u32;
    let table = landau_table(r.s, kmax, &r.params);
    let g = Generators::build(&b, NRoute::EdgeRecursion);
    let h = hamiltonian_algebraic(&g, &r.params)?;
    let report = diagonalize_and_match(&h, &table, &r.params, tol);
    match out.format {
        Format::Csv => table.write_csv(out.writer()?)?,
        Format::Json => write_json(
            out,
            &SpectrumOut {
                s: r.s,
                jmax,
                table: &table,
                report: &report,
            },
        )?,
    }
    eprintln!(
        "{} interior levels matched, max deviation {:.3e}",
        report.levels.iter().filter(|l| l.ok).count(),
        report.max_deviation
    );
    if !report.all_ok {
        let bad: Vec<String> = report.levels.iter().filter(|l| !l.ok).map(|l| format!("k={}", l.k)).collect();
        return Err(CliError::Mismatch(format!("landau_spectrum at {}", bad.join(", "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    ok: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    s: HalfInt,
    jmax: HalfInt,
    injected_sign_flip: bool,
    checks: Vec<Check>,
    all_ok: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check {
        name,
        value,
        tolerance,
        ok: value.is_finite() && value < tolerance,
    }
}

pub fn verify(physics: &Physics, jmax: &Option<String>, inject: bool, out: &Output) -> CliResult {
    let r = physics.resolve()?;
    let jmax = jmax_or(jmax, r.s, 8)?;
    let b = basis(r.s, jmax, r.params.hbar)?;
    if (jmax - b.j0()).twice() < 4 {
        return Err(Error::InvalidTruncation {
            jmax,
            abs_s: b.j0(),
            reason: "verify needs jmax - |s| >= 2",
        }
        .into());
    }
    let mut g = Generators::build(&b, NRoute::EdgeRecursion);
    if inject {
        g = g.with_n_plus(g.n_plus.scale_re(-1.0));
    }
    let we = Generators::build(&b, NRoute::WignerEckart);
    let grid = Grid::for_band_limit(jmax.twice(), 1)?;
    let quad = position_operators(&HarmonicTable::new(&b, &grid), &grid)?;
    let diff = |a: &[monopole::repkit::Operator; 3], c: &[monopole::repkit::Operator; 3]| {
        (0..3).fold(0.0_f64, |m, i| m.max(a[i].sub(&c[i]).interior().max_norm()))
    };

    let comm = commutator_residuals(&g);
    let cas = casimir_spectra(&g);
    let kmax = ((jmax - b.j0()).twice() / 2) as u32;
    let table = landau_table(r.s, kmax, &r.params);
    let levels = diagonalize_and_match(&hamiltonian_algebraic(&g, &r.params)?, &table, &r.params, 1e-10);
    let nj_mean = cas.n_dot_j.iter().sum::<f64>() / cas.n_dot_j.len().max(1) as f64;
    let curvature = chern_curvature_from_casimir(nj_mean / r.params.hbar, &grid);
    let winding = chern_winding_report(r.s.twice(), 4 * r.s.twice().unsigned_abs() as usize + 16)?;
    let consistency = dirac_consistency(r.s.value());

    let checks = vec![
        check("commutator_jj", comm.jj, 1e-12),
        check("commutator_jn", comm.jn, 1e-12),
        check("commutator_nn", comm.nn, 1e-12),
        check("casimir_n_squared", cas.n_squared_deviation, 1e-10),
        check("casimir_n_dot_j", cas.n_dot_j_deviation, 1e-10),
        check("curvature_identity", curvature_identity_residual(&g), 1e-12),
        check("realization_wigner_eckart", diff(&g.n, &we.n), 1e-10),
        check("realization_quadrature", diff(&g.n, &quad), 1e-10),
        check("landau_spectrum", levels.max_deviation, 1e-10),
        check("chern_curvature_vs_winding", (curvature - winding.value).abs(), 1e-6),
        check("dirac_chain", if consistency.consistent { 0.0 } else { 1.0 }, 0.5),
    ];
    let all_ok = checks.iter().all(|c| c.ok);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
    let report = VerifyOut {
        s: r.s,
        jmax,
        injected_sign_flip: inject,
        checks,
        all_ok,
    };
    match out.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.writer()?);
            w.write_record(["name", "value", "tolerance", "ok"])?;
            for c in &report.checks {
                w.write_record([c.name.to_string(), format!("{:e}", c.value), format!("{:e}", c.tolerance), c.ok.to_string()])?;
            }
            w.flush()?;
        }
    }
    if !all_ok {
        return Err(CliError::Mismatch(failed.join(", ")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanRow {
    s: String,
    consistent: bool,
    j0: Option<HalfInt>,
    first_negative_norm_j: Option<f64>,
}

pub fn dirac_scan(min: &str, max: &str, step: &str, out: &Output) -> CliResult {
    let min = parse_rational(min)?;
    let max = parse_rational(max)?;
    let step = parse_rational(step)?;
    if step <= BigRational::zero() || max < min {
        return Err(Error::InvalidParameter("need step > 0 and max >= min".into()).into());
    }
    let mut rows = Vec::new();
    let mut s = min;
    while s <= max {
        let rep = dirac_consistency(s.to_f64().unwrap_or(f64::NAN));
        rows.push(ScanRow {
            s: s.to_string(),
            consistent: rep.consistent,
            j0: rep.j0,
            first_negative_norm_j: rep.first_negative_norm_j,
        });
        s += &step;
    }
    match out.format {
        Format::Json => write_json(out, &rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.writer()?);
            w.write_record(["s", "consistent", "j0", "first_negative_norm_j"])?;
            for r in &rows {
                w.write_record([
                    r.s.clone(),
                    r.consistent.to_string(),
                    r.j0.map(|j| j.to_string()).unwrap_or_default(),
                    r.first_negative_norm_j.map(|j| j.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ChernOut {
    s: HalfInt,
    curvature: f64,
    winding: i64,
    reports: Vec<ChernReport>,
}

pub fn chern(
    physics: &Physics,
    n_theta: Option<usize>,
    n_phi: Option<usize>,
    samples: Option<usize>,
    out: &Output,
) -> CliResult {
    let r = physics.resolve()?;
    let n = r.s.twice();
    let grid = build_grid(n_theta.unwrap_or(16), n_phi.unwrap_or(32))?;
    let g = Generators::build(&basis(r.s, r.s.abs() + HalfInt::from_int(2), r.params.hbar)?, NRoute::EdgeRecursion);
    let cas = casimir_spectra(&g);
    let nj = cas.n_dot_j.iter().sum::<f64>() / cas.n_dot_j.len() as f64;
    let value = chern_curvature_from_casimir(nj / r.params.hbar, &grid);
    let curvature = ChernReport {
        route: "curvature".into(),
        value,
        rounded: value.round() as i64,
        residual: (value - value.round()).abs(),
    };
    let winding = chern_winding_report(n, samples.unwrap_or(64.max(4 * n.unsigned_abs() as usize + 8)))?;
    let agree = curvature.rounded == winding.rounded && curvature.residual < 1e-6;
    let result = ChernOut {
        s: r.s,
        curvature: value,
        winding: winding.rounded,
        reports: vec![curvature, winding],
    };
    match out.format {
        Format::Json => write_json(out, &result)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.writer()?);
            for rep in &result.reports {
                w.serialize(rep)?;
            }
            w.flush()?;
        }
    }
    if !agree {
        return Err(CliError::Mismatch(format!(
            "chern routes disagree: curvature {value}, winding {}",
            result.winding
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn classical(
    physics: &Physics,
    x: &str,
    p: &str,
    dt: f64,
    t_end: f64,
    scheme: &str,
    stride: usize,
    out: &Output,
) -> CliResult {
    let params = physics.classical()?;
    let scheme: Scheme = scheme.parse()?;
    let state = ClassicalState::projected(Vec3::from(parse_vec3("x", x)?), Vec3::from(parse_vec3("p", p)?))?;
    let tr = integrate(&state, &params, dt, t_end, scheme, stride)?;
    match out.format {
        Format::Csv => tr.write_csv(out.writer()?)?,
        Format::Json => write_json(out, &tr)?,
    }
    let d = tr.drift;
    eprintln!(
        "{} steps: ||x|-1| {:.2e}, |x.p| {:.2e}, dE/E {:.2e}, dJ {:.2e}, |x.J+eg| {:.2e}",
        tr.steps, d.norm_x, d.x_dot_p, d.energy_rel, d.j_abs, d.casimir
    );
    if !tr.stable {
        return Err(CliError::Mismatch("invariant drift exceeds bounds; reduce --dt".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    E3,
    So3,
    E2,
    Abelian6,
}

pub fn cocycle(algebra: Algebra, out: &Output) -> CliResult {
    let sc = match algebra {
        Algebra::E3 => StructureConstants::e3(),
        Algebra::So3 => StructureConstants::so3(),
        Algebra::E2 => StructureConstants::e2(),
        Algebra::Abelian6 => StructureConstants::abelian(6),
    };
    let report = h2_report(&sc).map_err(|e| CliError::Mismatch(e.to_string()))?;
    match out.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.writer()?);
            w.serialize(&report)?;
            w.flush()?;
        }
    }
    Ok(())
}
