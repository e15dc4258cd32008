//! The classical phase space `T*S²` with the monopole symplectic form,
//! realized in the embedding `|x| = 1`, `x·p = 0`.
//!
//! Units: `x` is dimensionless and `p` carries units of action, so that
//! `x × p` is the mechanical angular momentum and `H = |p|²/(2mr²)`. The
//! physical position is `r·x` and the physical velocity `ẋ·r = p/(mr)`.

use std::io::Write;

use nalgebra::{Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::spectrumkit::PhysicalParams as ClassicalParams;

pub const STATE_TOL: f64 = 1e-12;

pub type Vec3 = Vector3<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub x: Vec3,
    pub p: Vec3,
}

impl ClassicalState {
    pub fn new(x: Vec3, p: Vec3) -> Result<Self> {
        let s = ClassicalState { x, p };
        s.check(STATE_TOL)?;
        Ok(s)
    }

    /// Normalizes `x` and removes the normal part of `p`.
    pub fn projected(x: Vec3, p: Vec3) -> Result<Self> {
        let n = x.norm();
        if !(n > 0.0 && n.is_finite()) || !p.iter().all(|v| v.is_finite()) {
            return Err(Error::StateInvariant(format!("cannot project x = {x:?}, p = {p:?}")));
        }
        let x = x / n;
        Ok(ClassicalState { x, p: p - x * x.dot(&p) })
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        let dn = (self.x.norm() - 1.0).abs();
        let xp = self.x.dot(&self.p).abs();
        if dn > tol || xp > tol * (1.0 + self.p.norm()) || !dn.is_finite() || !xp.is_finite() {
            return Err(Error::StateInvariant(format!("||x| - 1| = {dn:e}, |x.p| = {xp:e}")));
        }
        Ok(())
    }

    pub fn energy(&self, params: &ClassicalParams) -> f64 {
        self.p.norm_squared() / (2.0 * params.mass * params.radius * params.radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Charges {
    pub j: Vec3,
    pub n: Vec3,
}

/// `J = x × p − eg x`, `N = x`.
pub fn charges(state: &ClassicalState, params: &ClassicalParams) -> Result<Charges> {
    state.check(1e-9)?;
    Ok(charges_unchecked(state, params))
}

fn charges_unchecked(state: &ClassicalState, params: &ClassicalParams) -> Charges {
    Charges {
        j: state.x.cross(&state.p) - state.x * params.eg(),
        n: state.x,
    }
}

fn rotation(axis_angle: Vec3) -> Rotation3<f64> {
    Rotation3::new(axis_angle)
}

/// `x → Rx`, `p → Rp` with `R = exp(t n×)`.
pub fn flow_rotation(state: &ClassicalState, n: Vec3, t: f64) -> ClassicalState {
    let r = rotation(n * t);
    ClassicalState {
        x: r * state.x,
        p: r * state.p,
    }
}

/// `p → p − t α_tan(x)`.
pub fn flow_boost(state: &ClassicalState, alpha: Vec3, t: f64) -> ClassicalState {
    let tan = alpha - state.x * state.x.dot(&alpha);
    ClassicalState {
        x: state.x,
        p: state.p - tan * t,
    }
}

/// `(α, R)` acting by `(x, p) → (Rx, Rp − α_tan(Rx))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    pub alpha: Vec3,
    pub rot: Rotation3<f64>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            alpha: Vec3::zeros(),
            rot: Rotation3::identity(),
        }
    }

    pub fn rotation(n: Vec3, t: f64) -> Self {
        GroupElement {
            alpha: Vec3::zeros(),
            rot: rotation(n * t),
        }
    }

    pub fn boost(alpha: Vec3, t: f64) -> Self {
        GroupElement {
            alpha: alpha * t,
            rot: Rotation3::identity(),
        }
    }

    /// `(α, R)(α′, R′) = (α + Rα′, RR′)`
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            alpha: self.alpha + self.rot * other.alpha,
            rot: self.rot * other.rot,
        }
    }

    pub fn act(&self, state: &ClassicalState) -> ClassicalState {
        flow_boost(
            &ClassicalState {
                x: self.rot * state.x,
                p: self.rot * state.p,
            },
            self.alpha,
            1.0,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Charge {
    J(usize),
    N(usize),
}

impl Charge {
    pub fn value(self, state: &ClassicalState, params: &ClassicalParams) -> f64 {
        let c = charges_unchecked(state, params);
        match self {
            Charge::J(i) => c.j[i],
            Charge::N(i) => c.n[i],
        }
    }

    /// The Hamiltonian flow of this charge for time `t`.
    pub fn flow(self, state: &ClassicalState, t: f64) -> ClassicalState {
        match self {
            Charge::J(i) => flow_rotation(state, Vec3::ith(i, 1.0), t),
            Charge::N(i) => flow_boost(state, Vec3::ith(i, 1.0), t),
        }
    }
}

/// `{Q1, Q2}` as the centered difference of `Q1` along the flow of `Q2`.
pub fn poisson_bracket_fd(q1: Charge, q2: Charge, state: &ClassicalState, params: &ClassicalParams, h: f64) -> f64 {
    let fwd = q1.value(&q2.flow(state, h), params);
    let bwd = q1.value(&q2.flow(state, -h), params);
    (fwd - bwd) / (2.0 * h)
}

/// The bracket predicted by the algebra:
/// `{J_i, J_j} = ε_ijk J_k`, `{J_i, N_j} = ε_ijk N_k`, `{N_i, N_j} = 0`.
pub fn poisson_bracket_exact(q1: Charge, q2: Charge, state: &ClassicalState, params: &ClassicalParams) -> f64 {
    let c = charges_unchecked(state, params);
    let eps = |i: usize, j: usize, v: &Vec3| -> f64 {
        (0..3).map(|k| levi_civita(i, j, k) * v[k]).sum()
    };
    match (q1, q2) {
        (Charge::J(i), Charge::J(j)) => eps(i, j, &c.j),
        (Charge::J(i), Charge::N(j)) | (Charge::N(i), Charge::J(j)) => eps(i, j, &c.n),
        (Charge::N(_), Charge::N(_)) => 0.0,
    }
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Rk4Project,
    StrangRotation,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4_project" | "rk4-project" => Ok(Scheme::Rk4Project),
            "strang_rotation" | "strang-rotation" => Ok(Scheme::StrangRotation),
            _ => Err(Error::InvalidParameter(format!(
                "unknown scheme {s:?}; expected rk4_project or strang_rotation"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: ClassicalState,
    pub j: Vec3,
    pub energy: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    /// `max ||x| − 1|`
    pub norm_x: f64,
    /// `max |x·p|`
    pub x_dot_p: f64,
    /// `max |E − E₀| / E₀` (absolute when `E₀ = 0`)
    pub energy_rel: f64,
    /// `max_i max |J_i − J_i(0)|`
    pub j_abs: f64,
    /// `max |x·J + eg|`
    pub casimir: f64,
}

impl DriftReport {
    pub fn within(&self, j0_norm: f64) -> bool {
        self.norm_x < 1e-9
            && self.x_dot_p < 1e-9
            && self.energy_rel < 1e-8
            && self.j_abs < 1e-8 * (j0_norm + 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub scheme: Scheme,
    pub dt: f64,
    pub steps: usize,
    /// Every `stride`-th step, plus the final state.
    pub points: Vec<TrajectoryPoint>,
    pub drift: DriftReport,
    /// `false` when the invariant drift exceeds the acceptance bounds.
    pub stable: bool,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory has its initial point")
    }

    /// Columns `t, x1..x3, p1..p3, J1..J3, energy`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x1", "x2", "x3", "p1", "p2", "p3", "J1", "J2", "J3", "energy"])?;
        for pt in &self.points {
            let mut rec = vec![pt.t];
            rec.extend(pt.state.x.iter());
            rec.extend(pt.state.p.iter());
            rec.extend(pt.j.iter());
            rec.push(pt.energy);
            w.write_record(rec.iter().map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `ẋ = p/(mr²)`, `ṗ = −|p|²/(mr²) x − eg/(mr²) x × p`.
fn vector_field(s: &ClassicalState, params: &ClassicalParams) -> (Vec3, Vec3) {
    let k = 1.0 / (params.mass * params.radius * params.radius);
    let xd = s.p * k;
    let pd = -s.x * (s.p.norm_squared() * k) - s.x.cross(&s.p) * (params.eg() * k);
    (xd, pd)
}

fn rk4_step(s: &ClassicalState, params: &ClassicalParams, dt: f64) -> ClassicalState {
    let stage = |base: &ClassicalState, d: (Vec3, Vec3), h: f64| ClassicalState {
        x: base.x + d.0 * h,
        p: base.p + d.1 * h,
    };
    let k1 = vector_field(s, params);
    let k2 = vector_field(&stage(s, k1, dt / 2.0), params);
    let k3 = vector_field(&stage(s, k2, dt / 2.0), params);
    let k4 = vector_field(&stage(s, k3, dt), params);
    let x = s.x + (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (dt / 6.0);
    let p = s.p + (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (dt / 6.0);
    let x = x / x.norm();
    ClassicalState { x, p: p - x * x.dot(&p) }
}

/// Magnetic half: `p` rotates about `x` at rate `−eg/(mr²)`.
fn magnetic_step(s: &ClassicalState, params: &ClassicalParams, dt: f64) -> ClassicalState {
    let rate = -params.eg() / (params.mass * params.radius * params.radius);
    ClassicalState {
        x: s.x,
        p: rotation(s.x * (rate * dt)) * s.p,
    }
}

/// Free half: rigid rotation of `(x, p)` about `x × p` along the great circle.
fn geodesic_step(s: &ClassicalState, params: &ClassicalParams, dt: f64) -> ClassicalState {
    let l = s.x.cross(&s.p);
    let speed = 1.0 / (params.mass * params.radius * params.radius);
    match Unit::try_new(l, 0.0) {
        Some(axis) => {
            let r = Rotation3::from_axis_angle(&axis, l.norm() * speed * dt);
            ClassicalState { x: r * s.x, p: r * s.p }
        }
        None => *s,
    }
}

fn strang_step(s: &ClassicalState, params: &ClassicalParams, dt: f64) -> ClassicalState {
    let a = magnetic_step(s, params, dt / 2.0);
    let b = geodesic_step(&a, params, dt);
    let c = magnetic_step(&b, params, dt / 2.0);
    // Both halves are exact rotations; this only removes rounding drift.
    let x = c.x / c.x.norm();
    ClassicalState { x, p: c.p - x * x.dot(&c.p) }
}

/// Integrates the Lorentz-force motion on the sphere to `t_end`, recording
/// every `stride`-th step.
pub fn integrate(
    state: &ClassicalState,
    params: &ClassicalParams,
    dt: f64,
    t_end: f64,
    scheme: Scheme,
    stride: usize,
) -> Result<Trajectory> {
    params.validate()?;
    state.check(STATE_TOL)?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}")));
    }
    let stride = stride.max(1);
    let steps = (t_end / dt).round() as usize;
    let step = |s: &ClassicalState| match scheme {
        Scheme::Rk4Project => rk4_step(s, params, dt),
        Scheme::StrangRotation => strang_step(s, params, dt),
    };
    let point = |t: f64, s: &ClassicalState| TrajectoryPoint {
        t,
        state: *s,
        j: charges_unchecked(s, params).j,
        energy: s.energy(params),
    };
    let first = point(0.0, state);
    let mut drift = DriftReport::default();
    let mut track = |pt: &TrajectoryPoint| {
        let s = &pt.state;
        drift.norm_x = drift.norm_x.max((s.x.norm() - 1.0).abs());
        drift.x_dot_p = drift.x_dot_p.max(s.x.dot(&s.p).abs());
        let de = (pt.energy - first.energy).abs();
        drift.energy_rel = drift.energy_rel.max(if first.energy > 0.0 { de / first.energy } else { de });
        drift.j_abs = drift.j_abs.max((pt.j - first.j).amax());
        drift.casimir = drift.casimir.max((s.x.dot(&pt.j) + params.eg()).abs());
    };
    let mut points = vec![first];
    let mut cur = *state;
    for n in 1..=steps {
        cur = step(&cur);
        let pt = point(n as f64 * dt, &cur);
        track(&pt);
        if n % stride == 0 || n == steps {
            points.push(pt);
        }
    }
    let stable = drift.within(first.j.norm());
    Ok(Trajectory {
        scheme,
        dt,
        steps,
        points,
        drift,
        stable,
    })
}

/// Exact motion: rigid rotation about `Ĵ` at angular rate `|J|/(mr²)`, so `x`
/// stays on the cone `x·Ĵ = −eg/|J|`.
pub fn cone_oracle(state: &ClassicalState, params: &ClassicalParams, t: f64) -> ClassicalState {
    let j = charges_unchecked(state, params).j;
    flow_rotation(state, j / (params.mass * params.radius * params.radius), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(eg: f64) -> ClassicalParams {
        ClassicalParams {
            e: 1.0,
            g: eg,
            ..Default::default()
        }
    }

    fn sample_state() -> ClassicalState {
        ClassicalState::projected(Vec3::new(0.3, -0.5, 0.8), Vec3::new(0.7, 0.2, -0.4)).unwrap()
    }

    #[test]
    fn charges_at_the_pole() {
        let s = ClassicalState::new(Vec3::z(), Vec3::zeros()).unwrap();
        let c = charges(&s, &params(0.5)).unwrap();
        assert_eq!(c.j, Vec3::new(0.0, 0.0, -0.5));
        assert_eq!(c.n, Vec3::z());
        let st = sample_state();
        let c = charges(&st, &params(0.7)).unwrap();
        assert!((st.x.dot(&c.j) + 0.7).abs() < 1e-15);
    }

    #[test]
    fn invalid_state_rejected() {
        assert!(ClassicalState::new(Vec3::new(0.0, 0.0, 1.1), Vec3::zeros()).is_err());
        assert!(ClassicalState::new(Vec3::z(), Vec3::z()).is_err());
        assert!(ClassicalState::projected(Vec3::zeros(), Vec3::x()).is_err());
    }

    #[test]
    fn flows_are_exact() {
        let s = sample_state();
        assert_eq!(flow_rotation(&s, Vec3::new(1.0, 2.0, 3.0), 0.0), s);
        let n = Vec3::new(0.0, 0.6, 0.8);
        let back = flow_rotation(&s, n, 2.0 * PI);
        assert!((back.x - s.x).amax() < 1e-12 && (back.p - s.p).amax() < 1e-12);
        let b = flow_boost(&s, s.x * 3.0, 1.7);
        assert!((b.p - s.p).amax() < 1e-15);
        assert_eq!(flow_boost(&s, Vec3::x(), 2.0).x, s.x);
    }

    #[test]
    fn group_law_matches_sequential_flows() {
        let s = sample_state();
        let g1 = GroupElement::rotation(Vec3::new(0.2, -0.4, 0.9), 0.8);
        let g2 = GroupElement::boost(Vec3::new(1.0, 0.5, -0.3), 0.6);
        let g3 = GroupElement::rotation(Vec3::new(-0.7, 0.1, 0.3), 1.3);
        let seq = g1.act(&g2.act(&g3.act(&s)));
        let comp = g1.compose(&g2).compose(&g3).act(&s);
        assert!((seq.x - comp.x).amax() < 1e-12 && (seq.p - comp.p).amax() < 1e-12);
        assert_eq!(GroupElement::identity().act(&s), s);
    }

    #[test]
    fn brackets_at_a_point_without_central_shift() {
        let s = ClassicalState::new(Vec3::x(), Vec3::zeros()).unwrap();
        let p = params(0.0);
        let v = poisson_bracket_fd(Charge::J(0), Charge::J(1), &s, &p, 1e-3);
        assert!(v.abs() < 1e-12);
        assert!(Charge::J(2).value(&s, &p).abs() < 1e-15);
        let st = sample_state();
        assert!(poisson_bracket_fd(Charge::N(0), Charge::N(1), &st, &p, 1e-3).abs() < 1e-10);
    }

    #[test]
    fn strang_matches_cone_oracle() {
        let p = params(-0.5);
        let s = sample_state();
        let tr = integrate(&s, &p, 1e-4, 5.0, Scheme::StrangRotation, 1000).unwrap();
        let exact = cone_oracle(&s, &p, 5.0);
        assert!((tr.last().state.x - exact.x).amax() < 1e-6);
        assert!(tr.stable, "{:?}", tr.drift);
    }

    #[test]
    fn rk4_matches_cone_oracle() {
        let p = params(0.8);
        let s = sample_state();
        let tr = integrate(&s, &p, 1e-3, 3.0, Scheme::Rk4Project, 100).unwrap();
        let exact = cone_oracle(&s, &p, 3.0);
        assert!((tr.last().state.x - exact.x).amax() < 1e-9);
        assert!(tr.drift.casimir < 1e-12);
    }

    #[test]
    fn free_great_circle_period() {
        let p = ClassicalParams {
            mass: 2.0,
            radius: 1.5,
            ..Default::default()
        };
        let s = ClassicalState::new(Vec3::x(), Vec3::new(0.0, 0.9, 0.0)).unwrap();
        let period = 2.0 * PI * p.mass * p.radius * p.radius / 0.9;
        let tr = integrate(&s, &p, period / 2000.0, period, Scheme::StrangRotation, 2000).unwrap();
        let end = tr.last().state;
        assert!((end.x - s.x).amax() < 1e-12);
        assert!(end.x.z.abs() < 1e-15);
    }

    #[test]
    fn rest_is_stationary() {
        let s = ClassicalState::new(Vec3::y(), Vec3::zeros()).unwrap();
        for scheme in [Scheme::Rk4Project, Scheme::StrangRotation] {
            let tr = integrate(&s, &params(1.0), 0.01, 1.0, scheme, 10).unwrap();
            assert_eq!(tr.last().state, s);
        }
    }

    #[test]
    fn rejects_bad_step() {
        assert!(integrate(&sample_state(), &params(0.0), 0.0, 1.0, Scheme::Rk4Project, 1).is_err());
        assert!("leapfrog".parse::<Scheme>().is_err());
        assert_eq!("strang_rotation".parse::<Scheme>().unwrap(), Scheme::StrangRotation);
    }

    #[test]
    fn trajectory_csv_columns() {
        let tr = integrate(&sample_state(), &params(0.5), 0.1, 0.3, Scheme::StrangRotation, 1).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x1,x2,x3,p1,p2,p3,J1,J2,J3,energy\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
