//! Calibration integrand `F = e^{iθ} Π sin^{m_v}(β·τ) Π cos^{m_h}(β·τ)`,
//! its iterated primitive `F̂`, and the special Lagrangian residual
//! `Im(F(τ) Π τ′_i)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::{ExpPoly, TrigKind};
use crate::registry::HermannActionSpec;

/// Guard added to the normalized residual denominator.
const RESIDUAL_EPS: f64 = 1e-300;

/// Offsets and weights of the fourth-order central first-derivative stencil
/// (divide by `12h`).
const STENCIL: [(i64, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// Reduces an angle to `(−π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSpec {
    pub action: HermannActionSpec,
    theta: f64,
}

impl CalibrationSpec {
    pub fn new(action: HermannActionSpec, theta: f64) -> Self {
        Self {
            action,
            theta: reduce_angle(theta),
        }
    }

    /// Phase in `(−π, π]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rank(&self) -> usize {
        self.action.rank()
    }
}

/// The integrand `F` as an exponential polynomial.
pub fn build_integrand(spec: &CalibrationSpec) -> Result<ExpPoly> {
    spec.action.validate()?;
    let frame = &spec.action.frame;
    let mut f = ExpPoly::constant(frame, C64::from_polar(1.0, spec.theta));
    for root in &spec.action.roots {
        if root.m_v > 0 {
            let s = ExpPoly::from_trig_power(frame, TrigKind::Sin, &root.lattice, root.m_v)?;
            f = f.mul(&s)?;
        }
        if root.m_h > 0 {
            let c = ExpPoly::from_trig_power(frame, TrigKind::Cos, &root.lattice, root.m_h)?;
            f = f.mul(&c)?;
        }
    }
    Ok(f)
}

/// `F̂`: antiderivative of `F` along each axis in turn, constants zero.
pub fn build_primitive(spec: &CalibrationSpec) -> Result<ExpPoly> {
    let mut p = build_integrand(spec)?;
    for axis in 0..spec.rank() {
        p = p.antiderivative(axis)?;
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    /// `Im(F(τ) Π τ′_i)`.
    pub raw: f64,
    /// `|raw| / (|F(τ)| Π |τ′_i| + ε)`.
    pub normalized: f64,
}

/// A spec together with its expanded `F` and `F̂`.
#[derive(Debug, Clone)]
pub struct Calibration {
    spec: CalibrationSpec,
    integrand: ExpPoly,
    primitive: ExpPoly,
}

impl Calibration {
    pub fn new(spec: CalibrationSpec) -> Result<Self> {
        let integrand = build_integrand(&spec)?;
        let mut primitive = integrand.clone();
        for axis in 0..spec.rank() {
            primitive = primitive.antiderivative(axis)?;
        }
        Ok(Self {
            spec,
            integrand,
            primitive,
        })
    }

    pub fn from_action(action: &HermannActionSpec, theta: f64) -> Result<Self> {
        Self::new(CalibrationSpec::new(action.clone(), theta))
    }

    pub fn spec(&self) -> &CalibrationSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn theta(&self) -> f64 {
        self.spec.theta
    }

    pub fn integrand(&self) -> &ExpPoly {
        &self.integrand
    }

    pub fn primitive(&self) -> &ExpPoly {
        &self.primitive
    }

    pub fn f(&self, tau: &[C64]) -> C64 {
        self.integrand.eval(tau)
    }

    pub fn f_hat(&self, tau: &[C64]) -> C64 {
        self.primitive.eval(tau)
    }

    pub fn residual(&self, tau: &[C64], tau_prime: &[C64]) -> Result<Residual> {
        let r = self.rank();
        for len in [tau.len(), tau_prime.len()] {
            if len != r {
                return Err(Error::Dimension {
                    expected: r,
                    got: len,
                });
            }
        }
        let f = self.f(tau);
        let prod: C64 = tau_prime.iter().product();
        let raw = (f * prod).im;
        let scale = f.norm() * tau_prime.iter().map(|z| z.norm()).product::<f64>();
        Ok(Residual {
            raw,
            normalized: raw.abs() / (scale + RESIDUAL_EPS),
        })
    }

    /// Compares a fourth-order finite difference of `s ↦ F̂(τ_1(s_1), …, τ_r(s_r))`,
    /// mixed over every axis, against `F(τ) Π τ′_i` at interior samples.
    ///
    /// Each axis must be uniformly sampled with `h` an integer multiple of the
    /// spacing. Samples where the exact value is below `1e-8` of its largest
    /// magnitude on the grid are skipped and counted.
    pub fn mixed_partial_check(&self, curve: &ProfileCurve, h: f64) -> Result<MixedPartialReport> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain(format!(
                "stencil step must be positive, got {h}"
            )));
        }
        curve.validate()?;
        let r = self.rank();
        if curve.rank() != r {
            return Err(Error::Dimension {
                expected: r,
                got: curve.rank(),
            });
        }
        let mut strides = Vec::with_capacity(r);
        let mut centers: Vec<Vec<usize>> = Vec::with_capacity(r);
        for (a, axis) in curve.axes.iter().enumerate() {
            let k = axis
                .stencil_stride(h)
                .map_err(|m| Error::Curve(format!("axis {a}: {m}")))?;
            let n = axis.len();
            if n <= 4 * k {
                return Err(Error::Curve(format!(
                    "axis {a} has {n} samples, stencil needs more than {}",
                    4 * k
                )));
            }
            let lo = 2 * k;
            let hi = n - 1 - 2 * k;
            let count = hi - lo + 1;
            let every = count.div_ceil(MAX_CHECK_POINTS).max(1);
            centers.push((lo..=hi).step_by(every).collect());
            strides.push(k);
        }

        let mut exact_vals = Vec::new();
        let mut fd_vals = Vec::new();
        let mut index = vec![0usize; r];
        for_each_index(&centers, &mut index, 0, &mut |idx| {
            let tau: Vec<C64> = (0..r).map(|a| curve.axes[a].tau[idx[a]]).collect();
            let dprod: C64 = (0..r).map(|a| curve.axes[a].dtau[idx[a]]).product();
            exact_vals.push(self.f(&tau) * dprod);
            fd_vals.push(self.mixed_fd(curve, idx, &strides, h));
        });

        let peak = exact_vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let floor = 1e-8 * peak;
        let mut max_rel = 0.0f64;
        let mut max_abs = 0.0f64;
        let mut checked = 0;
        let mut skipped = 0;
        for (e, fd) in exact_vals.iter().zip(&fd_vals) {
            if e.norm() <= floor {
                skipped += 1;
                continue;
            }
            checked += 1;
            max_abs = max_abs.max((fd - e).norm());
            max_rel = max_rel.max((fd - e).norm() / e.norm());
        }
        Ok(MixedPartialReport {
            max_rel_error: max_rel,
            sup_rel_error: if peak > 0.0 { max_abs / peak } else { 0.0 },
            checked,
            skipped,
        })
    }

    fn mixed_fd(&self, curve: &ProfileCurve, center: &[usize], strides: &[usize], h: f64) -> C64 {
        let r = center.len();
        let mut sum = C64::new(0.0, 0.0);
        let combos = STENCIL.len().pow(r as u32);
        let mut tau = vec![C64::new(0.0, 0.0); r];
        for mut c in 0..combos {
            let mut w = 1.0;
            for a in 0..r {
                let (off, wa) = STENCIL[c % STENCIL.len()];
                c /= STENCIL.len();
                let i = (center[a] as i64 + off * strides[a] as i64) as usize;
                tau[a] = curve.axes[a].tau[i];
                w *= wa;
            }
            sum += self.f_hat(&tau) * w;
        }
        sum / (12.0 * h).powi(r as i32)
    }
}

const MAX_CHECK_POINTS: usize = 41;

fn for_each_index(
    sets: &[Vec<usize>],
    cur: &mut Vec<usize>,
    depth: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == sets.len() {
        f(cur);
        return;
    }
    for &i in &sets[depth] {
        cur[depth] = i;
        for_each_index(sets, cur, depth + 1, f);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedPartialReport {
    /// Largest pointwise relative error.
    pub max_rel_error: f64,
    /// Largest absolute error over the largest exact magnitude.
    pub sup_rel_error: f64,
    pub checked: usize,
    pub skipped: usize,
}

/// Samples of one profile curve `τ(s) = φ(s) + iρ(s)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxisSamples {
    pub s: Vec<f64>,
    pub tau: Vec<C64>,
    pub dtau: Vec<C64>,
}

impl AxisSamples {
    /// `τ(s) = origin + direction · s` at `s = s0 + k·ds`, `k = 0..n`.
    pub fn line(origin: C64, direction: C64, s0: f64, ds: f64, n: usize) -> Self {
        let s: Vec<f64> = (0..n).map(|k| s0 + k as f64 * ds).collect();
        let tau = s.iter().map(|&t| origin + direction * t).collect();
        Self {
            s,
            tau,
            dtau: vec![direction; n],
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let n = self.s.len();
        if self.tau.len() != n || self.dtau.len() != n {
            return Err(format!(
                "array lengths differ: s={}, tau={}, dtau={}",
                n,
                self.tau.len(),
                self.dtau.len()
            ));
        }
        if n < 2 {
            return Err(format!("need at least 2 samples, got {n}"));
        }
        if let Some(i) = self.s.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(format!("s not strictly increasing at sample {}", i + 1));
        }
        Ok(())
    }

    fn stencil_stride(&self, h: f64) -> std::result::Result<usize, String> {
        let ds = self.s[1] - self.s[0];
        let uniform = self
            .s
            .windows(2)
            .all(|w| ((w[1] - w[0]) - ds).abs() <= 1e-9 * ds.abs().max(1e-300) + 1e-15);
        if !uniform {
            return Err("samples are not uniformly spaced".into());
        }
        let k = (h / ds).round();
        if k < 1.0 || (k * ds - h).abs() > 1e-9 * h {
            return Err(format!("step {h} is not a multiple of the spacing {ds}"));
        }
        Ok(k as usize)
    }

    /// Largest `|τ′ − central difference of τ|` over interior samples.
    pub fn derivative_consistency(&self) -> f64 {
        (1..self.len().saturating_sub(1))
            .map(|i| {
                let fd = (self.tau[i + 1] - self.tau[i - 1]) / (self.s[i + 1] - self.s[i - 1]);
                (fd - self.dtau[i]).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveMeta {
    pub action: String,
    pub theta: f64,
    pub seed: Vec<C64>,
    pub step: f64,
    /// `Im F̂` at the seed.
    pub level: f64,
}

/// One sampled curve per rank component.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProfileCurve {
    pub axes: Vec<AxisSamples>,
    pub meta: CurveMeta,
}

const CSV_HEADER: [&str; 8] = [
    "axis", "s", "phi", "rho", "dphi", "drho", "abs_F", "im_Fhat",
];

impl ProfileCurve {
    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Curve("curve has no axes".into()));
        }
        for (a, axis) in self.axes.iter().enumerate() {
            axis.validate()
                .map_err(|m| Error::Curve(format!("axis {a}: {m}")))?;
        }
        Ok(())
    }

    /// CSV text with `# key=value` metadata lines. `abs_F` and `im_Fhat` are
    /// evaluated with every other axis held at its first sample.
    pub fn to_csv_string(&self, cal: &Calibration) -> Result<String> {
        self.validate()?;
        if self.rank() != cal.rank() {
            return Err(Error::Dimension {
                expected: cal.rank(),
                got: self.rank(),
            });
        }
        let mut out = String::new();
        let m = &self.meta;
        let seed: Vec<String> = m
            .seed
            .iter()
            .map(|z| format!("{:.16e},{:.16e}", z.re, z.im))
            .collect();
        writeln!(out, "# action={}", m.action).unwrap();
        writeln!(out, "# theta={:.16e}", m.theta).unwrap();
        writeln!(out, "# seed={}", seed.join(";")).unwrap();
        writeln!(out, "# step={:.16e}", m.step).unwrap();
        writeln!(out, "# level={:.16e}", m.level).unwrap();

        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        let base: Vec<C64> = self.axes.iter().map(|ax| ax.tau[0]).collect();
        for (a, axis) in self.axes.iter().enumerate() {
            for i in 0..axis.len() {
                let mut tau = base.clone();
                tau[a] = axis.tau[i];
                let rec = [
                    a.to_string(),
                    format!("{:.16e}", axis.s[i]),
                    format!("{:.16e}", axis.tau[i].re),
                    format!("{:.16e}", axis.tau[i].im),
                    format!("{:.16e}", axis.dtau[i].re),
                    format!("{:.16e}", axis.dtau[i].im),
                    format!("{:.16e}", cal.f(&tau).norm()),
                    format!("{:.16e}", cal.f_hat(&tau).im),
                ];
                w.write_record(&rec)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Curve(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn write_csv(&self, cal: &Calibration, path: &Path) -> Result<()> {
        let text = self.to_csv_string(cal)?;
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut meta = CurveMeta::default();
        let parse_f = |key: &str, v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::Curve(format!("metadata {key}: {e}")))
        };
        for line in text.lines().filter_map(|l| l.strip_prefix('#')) {
            let Some((key, value)) = line.trim().split_once('=') else {
                continue;
            };
            match key.trim() {
                "action" => meta.action = value.to_string(),
                "theta" => meta.theta = parse_f("theta", value)?,
                "step" => meta.step = parse_f("step", value)?,
                "level" => meta.level = parse_f("level", value)?,
                "seed" => {
                    meta.seed = value
                        .split(';')
                        .filter(|p| !p.trim().is_empty())
                        .map(parse_complex)
                        .collect::<Result<_>>()?
                }
                _ => {}
            }
        }
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = r.headers()?.clone();
        if headers
            .iter()
            .take(6)
            .ne(CSV_HEADER.iter().take(6).copied())
        {
            return Err(Error::Curve(format!("unexpected header {headers:?}")));
        }
        let mut axes: Vec<AxisSamples> = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| {
                        Error::Curve(format!("row {row}: missing column {}", CSV_HEADER[i]))
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Curve(format!("row {row}, {}: {e}", CSV_HEADER[i])))
            };
            let axis: usize = rec
                .get(0)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|e| Error::Curve(format!("row {row}, axis: {e}")))?;
            if axis > 8 {
                return Err(Error::Curve(format!("row {row}: axis {axis} out of range")));
            }
            if axes.len() <= axis {
                axes.resize_with(axis + 1, AxisSamples::default);
            }
            let ax = &mut axes[axis];
            ax.s.push(field(1)?);
            ax.tau.push(C64::new(field(2)?, field(3)?));
            ax.dtau.push(C64::new(field(4)?, field(5)?));
        }
        let curve = Self { axes, meta };
        curve.validate()?;
        Ok(curve)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }
}

/// Parses `"re,im"` (or a bare real) into a complex number.
pub fn parse_complex(text: &str) -> Result<C64> {
    let bad = || Error::Parse {
        entry: text.to_string(),
        field: "complex".into(),
        message: "expected `re,im`".into(),
    };
    let mut parts = text.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}
