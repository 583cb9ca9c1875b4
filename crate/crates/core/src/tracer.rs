//! Level curves of `Im F̂` for rank-one actions, traced as trajectories of
//! `τ′ = conj(F(τ))`.
//!
//! `F̂` is holomorphic with `F̂′ = F`, so along this field
//! `d/ds F̂(τ) = F · conj(F) = |F|²` is real and `Im F̂` is conserved exactly in
//! continuous time. The residual `Im(F τ′)` vanishes identically along the
//! flow, which makes the traced curve a solution of the special Lagrangian
//! ODE by construction; [`verify_curve`] checks this independently.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::calibration::{AxisSamples, Calibration, CurveMeta, ProfileCurve};
use crate::error::{Error, Result};

pub const DEFAULT_STOP_SPEED: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub step: f64,
    pub max_steps: usize,
    /// Newton projection is applied when `|Im F̂ − L₀|` exceeds this.
    /// `f64::INFINITY` disables it.
    pub correction_tol: f64,
    /// Halt once `|F|` drops to this value.
    pub stop_speed: f64,
    /// Integrate `conj(F)/|F|` instead of `conj(F)`.
    pub normalize: bool,
    /// Integrate the negated field.
    pub reverse: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_steps: 2000,
            correction_tol: 1e-12,
            stop_speed: DEFAULT_STOP_SPEED,
            normalize: true,
            reverse: false,
        }
    }
}

impl TraceOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::domain(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.correction_tol > 0.0) {
            return Err(Error::domain(format!(
                "correction_tol must be positive, got {}",
                self.correction_tol
            )));
        }
        if !(self.stop_speed >= 0.0) {
            return Err(Error::domain(format!(
                "stop_speed must be nonnegative, got {}",
                self.stop_speed
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxSteps,
    /// `|F|` fell to `stop_speed` (a zero of a sine or cosine factor).
    Singular,
    /// The state overflowed or became NaN.
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub curve: ProfileCurve,
    pub stop: StopReason,
    pub corrections: usize,
}

enum Field {
    Ok(C64),
    Stop(StopReason),
}

fn field(cal: &Calibration, tau: C64, opts: &TraceOptions) -> Field {
    let f = cal.f(&[tau]);
    if !f.is_finite() || !tau.is_finite() {
        return Field::Stop(StopReason::NonFinite);
    }
    let speed = f.norm();
    if speed <= opts.stop_speed {
        return Field::Stop(StopReason::Singular);
    }
    let mut v = f.conj();
    if opts.normalize {
        v /= speed;
    }
    if opts.reverse {
        v = -v;
    }
    Field::Ok(v)
}

fn rk4_step(
    cal: &Calibration,
    tau: C64,
    h: f64,
    opts: &TraceOptions,
) -> std::result::Result<C64, StopReason> {
    let eval = |z: C64| match field(cal, z, opts) {
        Field::Ok(v) => Ok(v),
        Field::Stop(r) => Err(r),
    };
    let k1 = eval(tau)?;
    let k2 = eval(tau + k1 * (h / 2.0))?;
    let k3 = eval(tau + k2 * (h / 2.0))?;
    let k4 = eval(tau + k3 * h)?;
    Ok(tau + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0))
}

/// Traces the level curve through `seed`, returning the curve and why it stopped.
pub fn trace(cal: &Calibration, seed: C64, opts: &TraceOptions) -> Result<Trace> {
    opts.validate()?;
    if cal.rank() != 1 {
        return Err(Error::domain(format!(
            "level-curve tracing needs a rank-one action, got rank {}",
            cal.rank()
        )));
    }
    let v0 = match field(cal, seed, opts) {
        Field::Ok(v) => v,
        Field::Stop(_) => {
            return Err(Error::Seed(format!(
                "|F| = {:e} at seed {seed} is at or below stop_speed {:e}",
                cal.f(&[seed]).norm(),
                opts.stop_speed
            )))
        }
    };
    let level = cal.f_hat(&[seed]).im;
    let h = opts.step;
    let mut axis = AxisSamples {
        s: vec![0.0],
        tau: vec![seed],
        dtau: vec![v0],
    };
    let mut tau = seed;
    let mut stop = StopReason::MaxSteps;
    let mut corrections = 0;
    for k in 1..=opts.max_steps {
        let mut next = match rk4_step(cal, tau, h, opts) {
            Ok(z) => z,
            Err(r) => {
                stop = r;
                break;
            }
        };
        let offset = cal.f_hat(&[next]).im - level;
        if offset.abs() > opts.correction_tol {
            let f = cal.f(&[next]);
            if f.norm() > opts.stop_speed {
                next -= C64::i() * offset / f;
                corrections += 1;
            }
        }
        let v = match field(cal, next, opts) {
            Field::Ok(v) => v,
            Field::Stop(r) => {
                stop = r;
                break;
            }
        };
        tau = next;
        axis.s.push(k as f64 * h);
        axis.tau.push(tau);
        axis.dtau.push(v);
    }
    if axis.len() < 2 {
        return Err(Error::Seed(format!(
            "trace from {seed} stopped before the first step ({stop:?})"
        )));
    }
    let curve = ProfileCurve {
        axes: vec![axis],
        meta: CurveMeta {
            action: cal.spec().action.name.clone(),
            theta: cal.theta(),
            seed: vec![seed],
            step: h,
            level,
        },
    };
    Ok(Trace {
        curve,
        stop,
        corrections,
    })
}

/// Traces the level curve of `Im F̂` through `seed` with RK4 and Newton projection.
pub fn trace_level_curve(
    cal: &Calibration,
    seed: C64,
    opts: &TraceOptions,
) -> Result<ProfileCurve> {
    trace(cal, seed, opts).map(|t| t.curve)
}

/// Walks back half of `opts.max_steps` from `base` along the level curve and
/// returns the endpoint, so that a forward trace of `opts.max_steps` from it
/// passes through `base` near its middle.
///
/// `|F̂|` grows like `e^{k|Im τ|}`, so centring keeps the excursion in
/// `Im τ` short and the round-off floor of `Im F̂` low.
pub fn centered_seed(cal: &Calibration, base: C64, opts: &TraceOptions) -> Result<C64> {
    let back = TraceOptions {
        reverse: !opts.reverse,
        max_steps: opts.max_steps / 2,
        ..*opts
    };
    let t = trace(cal, base, &back)?;
    t.curve.axes[0]
        .tau
        .last()
        .copied()
        .ok_or_else(|| Error::Curve("empty trace".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_raw_residual: f64,
    pub max_normalized_residual: f64,
    /// Largest `|Im F̂(τ) − Im F̂(τ at the first sample)|`.
    pub level_drift: f64,
    /// Samples with `|F|` below the stop speed.
    pub singular_hits: usize,
    pub samples: usize,
}

/// Residual, level drift and singular count over every sample; for rank two,
/// over the tensor grid of the per-axis samples.
pub fn verify_curve(cal: &Calibration, curve: &ProfileCurve) -> Result<VerifyReport> {
    verify_curve_with(cal, curve, DEFAULT_STOP_SPEED)
}

pub fn verify_curve_with(
    cal: &Calibration,
    curve: &ProfileCurve,
    stop_speed: f64,
) -> Result<VerifyReport> {
    curve.validate()?;
    let r = cal.rank();
    if curve.rank() != r {
        return Err(Error::Dimension {
            expected: r,
            got: curve.rank(),
        });
    }
    let lens: Vec<usize> = curve.axes.iter().map(AxisSamples::len).collect();
    let total: usize = lens.iter().product();
    let base: Vec<C64> = curve.axes.iter().map(|a| a.tau[0]).collect();
    let level = cal.f_hat(&base).im;
    let mut rep = VerifyReport {
        max_raw_residual: 0.0,
        max_normalized_residual: 0.0,
        level_drift: 0.0,
        singular_hits: 0,
        samples: total,
    };
    let mut tau = vec![C64::new(0.0, 0.0); r];
    let mut dtau = vec![C64::new(0.0, 0.0); r];
    for mut flat in 0..total {
        for a in 0..r {
            let i = flat % lens[a];
            flat /= lens[a];
            tau[a] = curve.axes[a].tau[i];
            dtau[a] = curve.axes[a].dtau[i];
        }
        let res = cal.residual(&tau, &dtau)?;
        rep.max_raw_residual = rep.max_raw_residual.max(res.raw.abs());
        rep.max_normalized_residual = rep.max_normalized_residual.max(res.normalized);
        rep.level_drift = rep.level_drift.max((cal.f_hat(&tau).im - level).abs());
        if cal.f(&tau).norm() < stop_speed {
            rep.singular_hits += 1;
        }
    }
    Ok(rep)
}

/// Axis-aligned rectangle in `(φ, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub phi: (f64, f64),
    pub rho: (f64, f64),
}

/// Grid points of `Im F̂ = level` in `window`: nodes where the defect is already
/// below `1e-10`, plus sign changes along grid edges refined by bisection.
/// Points where `|F| ≤ stop_speed` are dropped.
pub fn scan_seeds(
    cal: &Calibration,
    window: Window,
    grid: (usize, usize),
    level: f64,
    stop_speed: f64,
) -> Result<Vec<C64>> {
    const TOL: f64 = 1e-10;
    if cal.rank() != 1 {
        return Err(Error::domain("seed scanning needs a rank-one action"));
    }
    let (nx, ny) = grid;
    if nx < 2 || ny < 2 {
        return Err(Error::domain(format!(
            "grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    let (p0, p1) = window.phi;
    let (r0, r1) = window.rho;
    if !(p1 > p0 && r1 > r0) || ![p0, p1, r0, r1].iter().all(|x| x.is_finite()) {
        return Err(Error::domain("empty or non-finite scan window"));
    }
    let g = |z: C64| cal.f_hat(&[z]).im - level;
    let node = |i: usize, j: usize| {
        C64::new(
            p0 + (p1 - p0) * i as f64 / (nx - 1) as f64,
            r0 + (r1 - r0) * j as f64 / (ny - 1) as f64,
        )
    };
    let values: Vec<Vec<f64>> = (0..nx)
        .map(|i| (0..ny).map(|j| g(node(i, j))).collect())
        .collect();

    let mut found: Vec<C64> = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            if values[i][j].abs() <= TOL {
                found.push(node(i, j));
            }
        }
    }
    let mut edge = |a: C64, ga: f64, b: C64, gb: f64| {
        if ga.abs() <= TOL || gb.abs() <= TOL || ga.signum() == gb.signum() {
            return;
        }
        if let Some(z) = bisect(&g, a, ga, b, TOL) {
            found.push(z);
        }
    };
    for i in 0..nx {
        for j in 0..ny {
            if i + 1 < nx {
                edge(node(i, j), values[i][j], node(i + 1, j), values[i + 1][j]);
            }
            if j + 1 < ny {
                edge(node(i, j), values[i][j], node(i, j + 1), values[i][j + 1]);
            }
        }
    }
    found.retain(|&z| cal.f(&[z]).norm() > stop_speed);
    let mut seeds: Vec<C64> = Vec::with_capacity(found.len());
    for z in found {
        if !seeds.iter().any(|s| (s - z).norm() <= 1e-9) {
            seeds.push(z);
        }
    }
    Ok(seeds)
}

fn bisect(g: &impl Fn(C64) -> f64, mut a: C64, mut ga: f64, mut b: C64, tol: f64) -> Option<C64> {
    for _ in 0..200 {
        let m = (a + b) * 0.5;
        let gm = g(m);
        if gm.abs() <= tol * 1e-2 || (b - a).norm() < 1e-15 {
            return (gm.abs() <= tol).then_some(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let m = (a + b) * 0.5;
    (g(m).abs() <= tol).then_some(m)
}
