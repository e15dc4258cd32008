use std::collections::HashMap;
use std::ops::Range;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{integer_steps, HalfInt};

/// Representation label `(N² = 1, N·J = sħ)` plus the truncation `jmax`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepLabel {
    pub s: HalfInt,
    pub jmax: HalfInt,
    pub hbar: f64,
}

impl RepLabel {
    pub fn new(s: HalfInt, jmax: HalfInt, hbar: f64) -> Result<Self> {
        let abs_s = s.abs();
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if jmax < abs_s {
            return Err(Error::InvalidTruncation {
                jmax,
                abs_s,
                reason: "jmax must be at least |s|",
            });
        }
        if !(jmax - abs_s).is_integer() {
            return Err(Error::InvalidTruncation {
                jmax,
                abs_s,
                reason: "jmax - |s| must be a non-negative integer",
            });
        }
        Ok(RepLabel { s, jmax, hbar })
    }

    /// Label with `ħ = 1`.
    pub fn unit(s: HalfInt, jmax: HalfInt) -> Result<Self> {
        Self::new(s, jmax, 1.0)
    }

    /// Accepts an arbitrary rational `s`, rejecting it unless `2s ∈ ℤ`.
    pub fn from_rational(s: &BigRational, jmax: HalfInt, hbar: f64) -> Result<Self> {
        let s = HalfInt::try_from_rational(s).ok_or_else(|| Error::DiracViolation { s: s.to_string() })?;
        Self::new(s, jmax, hbar)
    }

    /// Accepts a real `s`; anything that is not a half-integer to 1e-12 is rejected.
    pub fn from_real(s: f64, jmax: HalfInt, hbar: f64) -> Result<Self> {
        let twice = (2.0 * s).round();
        if !s.is_finite() || (2.0 * s - twice).abs() > 1e-12 {
            return Err(Error::DiracViolation { s: s.to_string() });
        }
        Self::new(HalfInt::from_twice(twice as i64), jmax, hbar)
    }

    /// Lowest shell `j0 = |s|`.
    pub fn j0(&self) -> HalfInt {
        self.s.abs()
    }

    /// `jmax = |s| + k` helper.
    pub fn with_depth(s: HalfInt, depth: i64, hbar: f64) -> Result<Self> {
        Self::new(s, s.abs() + HalfInt::from_int(depth), hbar)
    }
}

/// Orthonormal truncated basis `{|j,m⟩ : |s| ≤ j ≤ jmax, |m| ≤ j}`.
///
/// Ordering is ascending `j`, then descending `m` within a shell, so the
/// edge state `|j,j⟩` opens each shell.
#[derive(Clone, Debug)]
pub struct RepBasis {
    label: RepLabel,
    states: Vec<(HalfInt, HalfInt)>,
    index: HashMap<(HalfInt, HalfInt), usize>,
    shell_starts: Vec<usize>,
}

impl PartialEq for RepBasis {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

impl RepBasis {
    pub fn label(&self) -> &RepLabel {
        &self.label
    }

    pub fn s(&self) -> HalfInt {
        self.label.s
    }

    pub fn jmax(&self) -> HalfInt {
        self.label.jmax
    }

    pub fn hbar(&self) -> f64 {
        self.label.hbar
    }

    pub fn j0(&self) -> HalfInt {
        self.label.j0()
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(HalfInt, HalfInt)] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> (HalfInt, HalfInt) {
        self.states[idx]
    }

    pub fn index_of(&self, j: HalfInt, m: HalfInt) -> Option<usize> {
        self.index.get(&(j, m)).copied()
    }

    pub fn shells(&self) -> impl Iterator<Item = HalfInt> + '_ {
        integer_steps(self.j0(), self.jmax())
    }

    pub fn contains_shell(&self, j: HalfInt) -> bool {
        j >= self.j0() && j <= self.jmax() && (j - self.j0()).is_integer()
    }

    /// Row range of shell `j`.
    pub fn shell_range(&self, j: HalfInt) -> Option<Range<usize>> {
        if !self.contains_shell(j) {
            return None;
        }
        let k = ((j - self.j0()).twice() / 2) as usize;
        let start = self.shell_starts[k];
        Some(start..start + (j.twice() + 1) as usize)
    }

    /// States with `j ≤ jmax − 1`; these are untouched by truncation.
    pub fn is_interior(&self, idx: usize) -> bool {
        self.states[idx].0 < self.jmax()
    }

    /// States with `j ≤ jmax − depth`.
    pub fn is_deep(&self, idx: usize, depth: i64) -> bool {
        self.states[idx].0 <= self.jmax() - HalfInt::from_int(depth)
    }

    pub fn interior_dim(&self) -> usize {
        (0..self.dim()).filter(|&i| self.is_interior(i)).count()
    }
}

/// Builds the ladder-ordered basis. Fails for invalid truncations; the
/// Dirac condition is already enforced by `HalfInt` (see
/// [`RepLabel::from_rational`] for the checked entry point).
pub fn build_basis(label: RepLabel) -> Result<RepBasis> {
    let label = RepLabel::new(label.s, label.jmax, label.hbar)?;
    let mut states = Vec::new();
    let mut shell_starts = Vec::new();
    for j in integer_steps(label.j0(), label.jmax) {
        shell_starts.push(states.len());
        let mut m = j;
        while m >= -j {
            states.push((j, m));
            m -= HalfInt::ONE;
        }
    }
    let index = states.iter().enumerate().map(|(i, &jm)| (jm, i)).collect();
    Ok(RepBasis {
        label,
        states,
        index,
        shell_starts,
    })
}
