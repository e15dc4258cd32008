//! `monopole`: spectra, invariant suites, Dirac scans, Chern numbers,
//! classical trajectories and the central-extension computation as CSV/JSON.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 a
//! verification mismatch. Data goes to stdout or `--output`; diagnostics to
//! stderr.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Output, Physics};

#[derive(Parser, Debug)]
#[command(name = "monopole", version, about = "Charged particle on a sphere around a magnetic monopole")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Landau-level table and eigensolver match.
    Spectrum {
        #[command(flatten)]
        physics: Physics,
        /// Top shell (exact half-integer); default |s| + 10.
        #[arg(long)]
        jmax: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant suite on one truncated representation.
    Verify {
        #[command(flatten)]
        physics: Physics,
        /// Top shell; default |s| + 8.
        #[arg(long)]
        jmax: Option<String>,
        /// Flip the sign of N+ before checking (harness sanity test).
        #[arg(long)]
        inject_sign_flip: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Norm-chain consistency over a range of s.
    DiracScan {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        min: String,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        max: String,
        #[arg(long, default_value = "1/20")]
        step: String,
        #[command(flatten)]
        out: Output,
    },
    /// First Chern number by curvature integration and transition winding.
    Chern {
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        n_theta: Option<usize>,
        #[arg(long)]
        n_phi: Option<usize>,
        /// Samples on the equator for the winding number.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Integrate a classical trajectory.
    Classical {
        #[command(flatten)]
        physics: Physics,
        /// Initial position, normalized onto the sphere.
        #[arg(long, default_value = "0.3,-0.5,0.8", allow_hyphen_values = true)]
        x: String,
        /// Initial momentum, projected tangent to the sphere.
        #[arg(long, default_value = "0.7,0.2,-0.4", allow_hyphen_values = true)]
        p: String,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value = "strang_rotation")]
        scheme: String,
        /// Record every n-th step.
        #[arg(long, default_value_t = 1000)]
        stride: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Dimension of the second Lie-algebra cohomology.
    Cocycle {
        #[arg(long, value_enum, default_value = "e3")]
        algebra: commands::Algebra,
        #[command(flatten)]
        out: Output,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum { physics, jmax, tol, out } => commands::spectrum(&physics, &jmax, tol, &out),
        Command::Verify {
            physics,
            jmax,
            inject_sign_flip,
            out,
        } => commands::verify(&physics, &jmax, inject_sign_flip, &out),
        Command::DiracScan { min, max, step, out } => commands::dirac_scan(&min, &max, &step, &out),
        Command::Chern {
            physics,
            n_theta,
            n_phi,
            samples,
            out,
        } => commands::chern(&physics, n_theta, n_phi, samples, &out),
        Command::Classical {
            physics,
            x,
            p,
            dt,
            t_end,
            scheme,
            stride,
            out,
        } => commands::classical(&physics, &x, &p, dt, t_end, &scheme, stride, &out),
        Command::Cocycle { algebra, out } => commands::cocycle(algebra, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
