//! Flag parsing and resolution of the physical parameters.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use monopole::halfint::parse_rational;
use monopole::spectrumkit::PhysicalParams;
use monopole::{Error, HalfInt};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct Physics {
    /// Monopole number s = -eg/hbar as an exact rational ("3/2", "-1", "0.5").
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Electric charge (exact rational).
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<String>,
    /// Magnetic charge (exact rational).
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, default_value = "1")]
    pub hbar: String,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Args, Clone, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; stdout when absent. Relative paths are placed under
    /// $MONOPOLE_OUTPUT_DIR when that is set.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl Output {
    pub fn writer(&self) -> io::Result<Box<dyn Write>> {
        match &self.output {
            None => Ok(Box::new(io::stdout().lock())),
            Some(path) => {
                let path = match std::env::var_os("MONOPOLE_OUTPUT_DIR") {
                    Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                    _ => path.clone(),
                };
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                Ok(Box::new(File::create(path)?))
            }
        }
    }
}

fn rational(flag: &str, v: &str) -> Result<BigRational, Error> {
    parse_rational(v).map_err(|e| match e {
        Error::Parse { input, reason } => Error::Parse {
            input: format!("--{flag} {input}"),
            reason,
        },
        other => other,
    })
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact `s` and the floating-point parameters it was resolved with.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub s: HalfInt,
    pub params: PhysicalParams,
}

impl Physics {
    fn hbar(&self) -> Result<BigRational, Error> {
        let hbar = rational("hbar", &self.hbar)?;
        if hbar <= BigRational::zero() {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {}", self.hbar)));
        }
        Ok(hbar)
    }

    /// Floating-point parameters without the Dirac condition, for the
    /// classical side where any product `eg` is allowed.
    pub fn classical(&self) -> Result<PhysicalParams, Error> {
        match (&self.s, &self.e, &self.g) {
            (Some(_), _, _) => Ok(self.resolve()?.params),
            (None, e, g) => {
                let e = e.as_deref().map(|v| rational("e", v)).transpose()?.unwrap_or_else(BigRational::zero);
                let g = g.as_deref().map(|v| rational("g", v)).transpose()?.unwrap_or_else(BigRational::zero);
                let p = PhysicalParams {
                    mass: self.mass,
                    radius: self.radius,
                    e: to_f64(&e),
                    g: to_f64(&g),
                    hbar: to_f64(&self.hbar()?),
                };
                p.validate()?;
                Ok(p)
            }
        }
    }

    /// Resolves `s` exactly. `s` alone implies `e = 1`, `g = −sħ`; `e` and
    /// `g` alone imply `s = −eg/ħ`; all three must agree.
    pub fn resolve(&self) -> Result<Resolved, Error> {
        let hbar = self.hbar()?;
        let e = self.e.as_deref().map(|v| rational("e", v)).transpose()?;
        let g = self.g.as_deref().map(|v| rational("g", v)).transpose()?;
        let from_eg = match (&e, &g) {
            (None, None) => None,
            _ => {
                let e = e.clone().unwrap_or_else(BigRational::zero);
                let g = g.clone().unwrap_or_else(BigRational::zero);
                Some(-(e * g) / hbar.clone())
            }
        };
        let s_rat = match (&self.s, &from_eg) {
            (Some(v), Some(eg)) => {
                let s = rational("s", v)?;
                if &s != eg {
                    return Err(Error::InvalidParameter(format!(
                        "--s {v} contradicts -e*g/hbar = {eg} from --e/--g/--hbar"
                    )));
                }
                s
            }
            (Some(v), None) => rational("s", v)?,
            (None, Some(eg)) => eg.clone(),
            (None, None) => BigRational::zero(),
        };
        let s = HalfInt::try_from_rational(&s_rat).ok_or_else(|| Error::DiracViolation { s: s_rat.to_string() })?;
        let (e, g) = match (e, g) {
            (None, None) => (BigRational::from_integer(1.into()), -(s.to_rational() * hbar.clone())),
            (e, g) => (e.unwrap_or_else(BigRational::zero), g.unwrap_or_else(BigRational::zero)),
        };
        let params = PhysicalParams {
            mass: self.mass,
            radius: self.radius,
            e: to_f64(&e),
            g: to_f64(&g),
            hbar: to_f64(&hbar),
        };
        params.validate()?;
        Ok(Resolved { s, params })
    }
}

/// `jmax` flag, defaulting to `|s| + depth`.
pub fn jmax_or(flag: &Option<String>, s: HalfInt, depth: i64) -> Result<HalfInt, Error> {
    match flag {
        Some(v) => v.parse::<HalfInt>().map_err(|e| match e {
            Error::Parse { input, reason } => Error::Parse {
                input: format!("--jmax {input}"),
                reason,
            },
            other => other,
        }),
        None => Ok(s.abs() + HalfInt::from_int(depth)),
    }
}

pub fn parse_vec3(flag: &str, v: &str) -> Result<[f64; 3], Error> {
    let parts: Vec<&str> = v.split(',').collect();
    let bad = || Error::InvalidParameter(format!("--{flag} expects three comma-separated numbers, got {v:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn physics(s: Option<&str>, e: Option<&str>, g: Option<&str>) -> Physics {
        Physics {
            s: s.map(String::from),
            e: e.map(String::from),
            g: g.map(String::from),
            hbar: "1".into(),
            mass: 1.0,
            radius: 1.0,
        }
    }

    #[test]
    fn s_from_charges() {
        let r = physics(None, Some("1"), Some("1/2")).resolve().unwrap();
        assert_eq!(r.s, HalfInt::from_twice(-1));
        let r2 = physics(Some("-1/2"), None, None).resolve().unwrap();
        assert_eq!(r.params, r2.params);
    }

    #[test]
    fn contradictions_and_dirac() {
        assert!(physics(Some("1"), Some("1"), Some("1")).resolve().is_err());
        assert!(physics(Some("-1"), Some("1"), Some("1")).resolve().is_ok());
        let err = physics(Some("0.3"), None, None).resolve().unwrap_err();
        assert!(matches!(err, Error::DiracViolation { .. }));
        assert!(physics(None, Some("1"), Some("0.3")).classical().is_ok());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vec3("x", "1, 0,-2").unwrap(), [1.0, 0.0, -2.0]);
        assert!(parse_vec3("x", "1,2").is_err());
    }
}
