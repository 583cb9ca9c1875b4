//! The complexified sphere as the quadric `Σ z_k² = 1` in `ℂ^{n+1}`.
//!
//! A tangent vector `(p, v)` of the unit sphere maps to
//! `z = cosh‖v‖ · p + i (sinh‖v‖/‖v‖) · v`. The Kähler potential is
//! `ψ(z) = f(Y(Σ|z_k|²))` with `Y(t) = 1 + acosh(t)²/4 = ‖v‖² + 1`, and all
//! geometric quantities are finite differences of `ψ` in ambient real
//! coordinates.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::calibration::{reduce_angle, ProfileCurve};
use crate::error::{Error, Result};
use crate::monge_ampere::{RadialProfile, ScalarProfile};

const UNIT_TOL: f64 = 1e-12;
const MEMBERSHIP_TOL: f64 = 1e-10;
const TANGENT_TOL: f64 = 1e-10;
/// Step for first derivatives of the potential.
pub const FIRST_STEP: f64 = 1e-6;
/// Step for mixed second derivatives of the potential.
pub const SECOND_STEP: f64 = 1e-5;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `sinh(t)/t`.
fn sinhc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 + t2 / 6.0 + t2 * t2 / 120.0 + t2 * t2 * t2 / 5040.0
    } else {
        t.sinh() / t
    }
}

/// `t/sinh(t)`.
fn inv_sinhc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + 7.0 * t2 * t2 / 360.0 - 31.0 * t2 * t2 * t2 / 15120.0
    } else {
        t / t.sinh()
    }
}

/// A point `p` of the unit sphere and a tangent vector `v` at it.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTangent {
    p: Vec<f64>,
    v: Vec<f64>,
}

impl SphereTangent {
    pub fn new(p: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if p.len() != v.len() {
            return Err(Error::Dimension {
                expected: p.len(),
                got: v.len(),
            });
        }
        if p.len() < 2 {
            return Err(Error::domain("sphere needs ambient dimension at least 2"));
        }
        if (norm(&p) - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!("|p| = {} is not 1", norm(&p))));
        }
        if dot(&p, &v).abs() > UNIT_TOL {
            return Err(Error::domain(format!("p·v = {:e} is not 0", dot(&p, &v))));
        }
        Ok(Self { p, v })
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Sphere dimension `n`.
    pub fn dim(&self) -> usize {
        self.p.len() - 1
    }

    /// `‖v‖² + 1`, the first generator evaluated at `√−1 v`.
    pub fn rho1(&self) -> f64 {
        dot(&self.v, &self.v) + 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadricPoint {
    z: Vec<C64>,
}

impl QuadricPoint {
    /// Accepts `z` when `|Σ z_k² − 1| ≤ 1e-10`.
    pub fn new(z: Vec<C64>) -> Result<Self> {
        let q = Self { z };
        let d = q.membership_defect();
        if !(d <= MEMBERSHIP_TOL) {
            return Err(Error::domain(format!(
                "|Σz² − 1| = {d:e}, point is off the quadric"
            )));
        }
        Ok(q)
    }

    pub fn z(&self) -> &[C64] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.len() - 1
    }

    pub fn membership_defect(&self) -> f64 {
        (self.z.iter().map(|w| w * w).sum::<C64>() - 1.0).norm()
    }

    /// `Σ |z_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.z.iter().map(|w| w.norm_sqr()).sum()
    }

    /// `z ↦ e^{tX} z`.
    pub fn act(&self, x: &LieGenerator, t: f64) -> Result<Self> {
        let m = (x.matrix() * t).exp();
        self.apply_orthogonal(&m)
    }

    pub fn apply_orthogonal(&self, m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != self.z.len() || m.ncols() != self.z.len() {
            return Err(Error::Dimension {
                expected: self.z.len(),
                got: m.nrows(),
            });
        }
        Self::new(mat_vec(m, &self.z))
    }
}

fn mat_vec(m: &DMatrix<f64>, z: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| z[j] * m[(i, j)]).sum())
        .collect()
}

/// A real skew-symmetric matrix acting linearly on `ℂ^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieGenerator {
    x: DMatrix<f64>,
}

impl LieGenerator {
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != x.ncols() {
            return Err(Error::domain("generator must be square"));
        }
        let defect = (&x + x.transpose()).norm();
        if defect > 1e-14 {
            return Err(Error::domain(format!(
                "generator is not skew (defect {defect:e})"
            )));
        }
        Ok(Self { x })
    }

    /// The rotation sending `e_from` to `e_to` (and `e_to` to `−e_from`).
    pub fn rotation(dim: usize, from: usize, to: usize) -> Self {
        assert!(
            from != to && from < dim && to < dim,
            "invalid rotation plane"
        );
        let mut x = DMatrix::zeros(dim, dim);
        x[(to, from)] = 1.0;
        x[(from, to)] = -1.0;
        Self { x }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// `X·z`.
    pub fn apply(&self, z: &[C64]) -> Vec<C64> {
        mat_vec(&self.x, z)
    }

    /// `X·p` for a real vector.
    pub fn apply_real(&self, p: &[f64]) -> Vec<f64> {
        let n = self.x.nrows();
        (0..n)
            .map(|i| (0..n).map(|j| self.x[(i, j)] * p[j]).sum())
            .collect()
    }
}

/// Basis of the Lie algebra of `SO(p) × SO(n+1−p)`: rotations inside the
/// first `p` coordinates and inside the remaining ones.
pub fn block_generators(n: usize, p_split: usize) -> Result<Vec<LieGenerator>> {
    check_split(n, p_split)?;
    let dim = n + 1;
    let mut out = Vec::new();
    for block in [0..p_split, p_split..dim] {
        for i in block.clone() {
            for j in (i + 1)..block.end {
                out.push(LieGenerator::rotation(dim, i, j));
            }
        }
    }
    Ok(out)
}

fn check_split(n: usize, p_split: usize) -> Result<()> {
    if n < 1 || p_split < 1 || p_split > n {
        return Err(Error::domain(format!(
            "need 1 <= p_split <= n, got p_split={p_split}, n={n}"
        )));
    }
    Ok(())
}

pub fn embed(t: &SphereTangent) -> QuadricPoint {
    let s = norm(&t.v);
    let (c, k) = (s.cosh(), sinhc(s));
    QuadricPoint {
        z: t.p
            .iter()
            .zip(&t.v)
            .map(|(&p, &v)| C64::new(c * p, k * v))
            .collect(),
    }
}

pub fn unembed(z: &QuadricPoint) -> Result<SphereTangent> {
    let nz = z.norm_sqr();
    if nz < 1.0 - 1e-12 {
        return Err(Error::domain(format!(
            "|z|² = {nz} < 1 has no real preimage"
        )));
    }
    let re: Vec<f64> = z.z.iter().map(|w| w.re).collect();
    let im: Vec<f64> = z.z.iter().map(|w| w.im).collect();
    let s = norm(&im).asinh();
    let rn = norm(&re);
    let scale = inv_sinhc(s);
    Ok(SphereTangent {
        p: re.iter().map(|x| x / rn).collect(),
        v: im.iter().map(|y| y * scale).collect(),
    })
}

/// Point of the section `τ ↦ cos τ · e_0 + sin τ · e_{p_split}`.
pub fn section_point(n: usize, p_split: usize, tau: C64) -> Result<SphereTangent> {
    check_split(n, p_split)?;
    let mut p = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let (s, c) = tau.re.sin_cos();
    p[0] = c;
    p[p_split] = s;
    v[0] = -s * tau.im;
    v[p_split] = c * tau.im;
    SphereTangent::new(p, v)
}

/// Inverse of [`section_point`] with `φ ∈ (−π, π]`.
pub fn section_tau(t: &SphereTangent, p_split: usize) -> Result<C64> {
    let n = t.dim();
    check_split(n, p_split)?;
    let off = (0..=n)
        .filter(|&k| k != 0 && k != p_split)
        .map(|k| t.p[k].abs() + t.v[k].abs())
        .fold(0.0, f64::max);
    if off > 1e-10 {
        return Err(Error::domain("point does not lie on the section"));
    }
    let phi = t.p[p_split].atan2(t.p[0]);
    let (s, c) = phi.sin_cos();
    let rho = -s * t.v[0] + c * t.v[p_split];
    Ok(C64::new(phi, rho))
}

/// `z(τ) = cos τ · e_0 + sin τ · e_{p_split}` and `dz/dτ`.
fn section_curve(n: usize, p_split: usize, tau: C64) -> (Vec<C64>, Vec<C64>) {
    let mut z = vec![C64::new(0.0, 0.0); n + 1];
    let mut dz = z.clone();
    z[0] = tau.cos();
    z[p_split] = tau.sin();
    dz[0] = -tau.sin();
    dz[p_split] = tau.cos();
    (z, dz)
}

/// `h(t) = acosh(t)/√(t²−1)`, continued analytically below `t = 1`.
fn acosh_ratio(t: f64) -> f64 {
    let u = t - 1.0;
    if u.abs() < 1e-3 {
        let c = [
            1.0,
            -1.0 / 3.0,
            2.0 / 15.0,
            -2.0 / 35.0,
            8.0 / 315.0,
            -8.0 / 693.0,
            16.0 / 3003.0,
        ];
        return c.iter().rev().fold(0.0, |acc, k| acc * u + k);
    }
    if u > 0.0 {
        let r = (u * (u + 2.0)).sqrt();
        (u + r).ln_1p() / r
    } else {
        let w = -u;
        let r = (w * (2.0 - w)).sqrt();
        2.0 * (w / 2.0).sqrt().asin() / r
    }
}

/// `Y(t) = 1 + acosh(t)²/4`, continued as `1 − acos(t)²/4` below `t = 1`.
pub fn first_generator(t: f64) -> f64 {
    let u = t - 1.0;
    if u >= 0.0 {
        let a = (u + (u * (u + 2.0)).sqrt()).ln_1p();
        1.0 + a * a / 4.0
    } else {
        let a = 2.0 * (-u / 2.0).sqrt().asin();
        1.0 - a * a / 4.0
    }
}

/// The ambient potential `ψ(z) = f(Y(Σ|z_k|²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub profile: ScalarProfile,
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

impl Potential {
    pub fn new(profile: ScalarProfile) -> Self {
        Self { profile }
    }

    /// `dψ/dt = f′(Y(t)) · Y′(t)` with `Y′ = h/2`.
    pub fn radial_derivative(&self, t: f64) -> f64 {
        self.profile.d1(first_generator(t)) * acosh_ratio(t) / 2.0
    }

    /// `ψ(z)`.
    pub fn value(&self, z: &QuadricPoint) -> Result<f64> {
        let t = z.norm_sqr();
        if t < 1.0 - 1e-12 {
            return Err(Error::domain(format!(
                "|z|² = {t} < 1 has no real preimage"
            )));
        }
        self.profile.value(first_generator(t.max(1.0)))
    }

    /// `ψ(z + δ) − ψ(z)` for ambient `z` and displacement `δ`, integrated
    /// along `t` so that small increments keep full relative precision.
    pub fn increment(&self, z: &[C64], delta: &[C64]) -> f64 {
        let t: f64 = z.iter().map(|w| w.norm_sqr()).sum();
        let dt: f64 = z
            .iter()
            .zip(delta)
            .map(|(a, d)| 2.0 * (a.conj() * d).re + d.norm_sqr())
            .sum();
        let pieces = ((dt.abs() / 0.05).ceil() as usize).max(1);
        let w = dt / pieces as f64;
        let mut sum = 0.0;
        for k in 0..pieces {
            let mid = t + w * (k as f64 + 0.5);
            let inner: f64 = GAUSS5
                .iter()
                .map(|&(x, wt)| wt * self.radial_derivative(mid + 0.5 * w * x))
                .sum();
            sum += 0.5 * w * inner;
        }
        sum
    }

    /// Real partials `(∂ψ/∂x_k, ∂ψ/∂y_k)` by central differences.
    pub fn gradient(&self, z: &[C64]) -> Vec<(f64, f64)> {
        let h = FIRST_STEP;
        let m = z.len();
        (0..m)
            .map(|k| {
                let mut d = vec![C64::new(0.0, 0.0); m];
                let mut part = |dir: C64| {
                    d[k] = dir * h;
                    let plus = self.increment(z, &d);
                    d[k] = -dir * h;
                    let minus = self.increment(z, &d);
                    d[k] = C64::new(0.0, 0.0);
                    (plus - minus) / (2.0 * h)
                };
                (part(C64::new(1.0, 0.0)), part(C64::i()))
            })
            .collect()
    }

    /// `∂ψ/∂z̄_k = (ψ_{x_k} + iψ_{y_k})/2`.
    pub fn dbar(&self, z: &[C64]) -> Vec<C64> {
        self.gradient(z)
            .into_iter()
            .map(|(gx, gy)| C64::new(gx, gy) / 2.0)
            .collect()
    }

    /// Mixed Hessian `h_{jk̄} = ∂²ψ/∂z_j∂z̄_k`.
    pub fn mixed_hessian(&self, z: &[C64]) -> DMatrix<C64> {
        let m = z.len();
        let h = SECOND_STEP;
        let dir = |a: usize| {
            let mut d = vec![C64::new(0.0, 0.0); m];
            d[a / 2] = if a.is_multiple_of(2) {
                C64::new(h, 0.0)
            } else {
                C64::new(0.0, h)
            };
            d
        };
        let dirs: Vec<Vec<C64>> = (0..2 * m).map(dir).collect();
        let comb = |a: &[C64], sa: f64, b: &[C64], sb: f64| -> Vec<C64> {
            a.iter().zip(b).map(|(x, y)| x * sa + y * sb).collect()
        };
        let mut real = vec![vec![0.0; 2 * m]; 2 * m];
        for a in 0..2 * m {
            for b in a..2 * m {
                let (da, db) = (&dirs[a], &dirs[b]);
                let v = (self.increment(z, &comb(da, 1.0, db, 1.0))
                    - self.increment(z, &comb(da, 1.0, db, -1.0))
                    - self.increment(z, &comb(da, -1.0, db, 1.0))
                    + self.increment(z, &comb(da, -1.0, db, -1.0)))
                    / (4.0 * h * h);
                real[a][b] = v;
                real[b][a] = v;
            }
        }
        DMatrix::from_fn(m, m, |j, k| {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            C64::new(real[xj][xk] + real[yj][yk], real[xj][yk] - real[yj][xk]) / 4.0
        })
    }
}

fn check_tangent(z: &QuadricPoint, u: &[C64]) -> Result<()> {
    if u.len() != z.z.len() {
        return Err(Error::Dimension {
            expected: z.z.len(),
            got: u.len(),
        });
    }
    let scale = u.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1.0);
    let defect = z.z.iter().zip(u).map(|(a, b)| a * b).sum::<C64>().norm();
    if defect > TANGENT_TOL * scale {
        return Err(Error::domain(format!(
            "vector is not tangent to the quadric (Σ z u = {defect:e})"
        )));
    }
    Ok(())
}

/// `ω(u, w) = −2 Im Σ h_{jk̄} u_j conj(w_k)` with the Hessian from [`Potential::mixed_hessian`].
pub fn kahler_form(z: &QuadricPoint, pot: &Potential, u: &[C64], w: &[C64]) -> Result<f64> {
    check_tangent(z, u)?;
    check_tangent(z, w)?;
    let h = pot.mixed_hessian(&z.z);
    Ok(kahler_with(&h, u, w))
}

fn kahler_with(h: &DMatrix<C64>, u: &[C64], w: &[C64]) -> f64 {
    -2.0 * hermitian(h, u, w).im
}

/// `Σ h_{jk̄} u_j conj(w_k)`.
fn hermitian(h: &DMatrix<C64>, u: &[C64], w: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for j in 0..u.len() {
        for k in 0..w.len() {
            s += h[(j, k)] * u[j] * w[k].conj();
        }
    }
    s
}

/// `μ(X) = −Im ∂̄ψ(X·z)` with `∂̄ψ` by central differences.
pub fn moment(z: &QuadricPoint, x: &LieGenerator, pot: &Potential) -> f64 {
    let xz = x.apply(&z.z);
    let dbar = pot.dbar(&z.z);
    -dbar
        .iter()
        .zip(&xz)
        .map(|(d, v)| d * v.conj())
        .sum::<C64>()
        .im
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentCheck {
    /// Finite-difference moment.
    pub numeric: f64,
    /// `−2 g′(t) cosh‖v‖ (sinh‖v‖/‖v‖) ⟨Xp, v⟩`.
    pub analytic: f64,
    /// `−2 (ln(‖v‖² + 1) + b)^{1/r} ⟨Xp, v⟩`, sign and zero set only.
    pub factorized: f64,
}

impl MomentCheck {
    /// Signs agree wherever `|numeric| > threshold`.
    pub fn signs_agree(&self, threshold: f64) -> bool {
        self.numeric.abs() <= threshold
            || (self.numeric.signum() == self.factorized.signum()
                && self.numeric.signum() == self.analytic.signum())
    }
}

pub fn moment_check(z: &QuadricPoint, x: &LieGenerator, pot: &Potential) -> Result<MomentCheck> {
    let t = unembed(z)?;
    let xp = x.apply_real(&t.p);
    let pair = dot(&xp, &t.v);
    let s = norm(&t.v);
    let g1 = pot.radial_derivative(z.norm_sqr());
    let prof = pot.profile;
    Ok(MomentCheck {
        numeric: moment(z, x, pot),
        analytic: -2.0 * g1 * s.cosh() * sinhc(s) * pair,
        factorized: -2.0 * (t.rho1().ln() + prof.b).powf(1.0 / prof.r as f64) * pair,
    })
}

/// `(−1)^k det(frame restricted to the coordinates other than k) / (2 z_k)`.
pub fn holomorphic_volume_in_chart(z: &QuadricPoint, frame: &[Vec<C64>], k: usize) -> Result<C64> {
    let n = z.dim();
    if frame.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: frame.len(),
        });
    }
    for u in frame {
        check_tangent(z, u)?;
    }
    if k > n {
        return Err(Error::domain(format!("chart index {k} out of range")));
    }
    if z.z[k].norm() < 1e-6 {
        return Err(Error::domain(format!(
            "chart {k} is not admissible at this point"
        )));
    }
    let cols: Vec<usize> = (0..=n).filter(|&j| j != k).collect();
    let m = DMatrix::from_fn(n, n, |a, b| frame[a][cols[b]]);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(m.determinant() * sign / (z.z[k] * 2.0))
}

/// Holomorphic volume in the chart dropping the largest coordinate.
pub fn holomorphic_volume(z: &QuadricPoint, frame: &[Vec<C64>]) -> Result<C64> {
    let k = largest_coordinate(z);
    if z.z[k].norm() < 1e-6 {
        return Err(Error::domain("all coordinates vanish"));
    }
    holomorphic_volume_in_chart(z, frame, k)
}

fn largest_coordinate(z: &QuadricPoint) -> usize {
    (0..z.z.len())
        .max_by(|&a, &b| z.z[a].norm().total_cmp(&z.z[b].norm()))
        .expect("nonempty point")
}

/// Tangent vectors `e_k − z_k z`, skipping the largest coordinate.
pub fn tangent_basis(z: &QuadricPoint) -> Vec<Vec<C64>> {
    let skip = largest_coordinate(z);
    (0..z.z.len())
        .filter(|&k| k != skip)
        .map(|k| {
            let mut u: Vec<C64> = z.z.iter().map(|w| -z.z[k] * w).collect();
            u[k] += 1.0;
            u
        })
        .collect()
}

/// `det(h(u_a, u_b)) / |Ω(u)|²` for the given basis.
pub fn volume_ratio_with_basis(
    z: &QuadricPoint,
    pot: &Potential,
    basis: &[Vec<C64>],
) -> Result<f64> {
    let omega = holomorphic_volume(z, basis)?;
    let h = pot.mixed_hessian(&z.z);
    let n = basis.len();
    let gram = DMatrix::from_fn(n, n, |a, b| hermitian(&h, &basis[a], &basis[b]));
    Ok(gram.determinant().re / omega.norm_sqr())
}

/// `ω^n / Ω∧Ω̄` up to a dimensional constant; constant on the quadric exactly
/// when the metric is Ricci-flat with respect to `Ω`.
pub fn volume_ratio(z: &QuadricPoint, pot: &Potential) -> Result<f64> {
    volume_ratio_with_basis(z, pot, &tangent_basis(z))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    /// `X·z` for the generators with nonvanishing action on the section,
    /// followed by the curve tangent.
    pub vectors: Vec<Vec<C64>>,
    pub min_singular_value: f64,
    pub rank_deficient: bool,
    /// Largest gap between `X·z` and its `cos τ`/`sin τ` factorization.
    pub factorization_defect: f64,
}

/// Frame of the orbit-swept submanifold at a section point with curve velocity `tau_prime`.
pub fn lagrangian_frame(
    point: &SphereTangent,
    p_split: usize,
    tau_prime: C64,
) -> Result<LagrangianFrame> {
    let n = point.dim();
    let tau = section_tau(point, p_split)?;
    let z = embed(point).z;
    let (zs, dz) = section_curve(n, p_split, tau);
    let dim = n + 1;
    let mut vectors = Vec::with_capacity(n);
    let mut defect = 0.0f64;
    let mut push = |gen: LieGenerator, factor: C64, target: usize, vectors: &mut Vec<Vec<C64>>| {
        let v = gen.apply(&z);
        let mut expect = vec![C64::new(0.0, 0.0); dim];
        expect[target] = factor;
        defect = defect.max(
            v.iter()
                .zip(&expect)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        );
        vectors.push(v);
    };
    for k in 1..p_split {
        push(
            LieGenerator::rotation(dim, 0, k),
            tau.cos(),
            k,
            &mut vectors,
        );
    }
    for k in (p_split + 1)..dim {
        push(
            LieGenerator::rotation(dim, p_split, k),
            tau.sin(),
            k,
            &mut vectors,
        );
    }
    vectors.push(dz.iter().map(|w| w * tau_prime).collect());
    let section_gap = z
        .iter()
        .zip(&zs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    defect = defect.max(section_gap);

    let m = DMatrix::from_fn(dim, n, |i, a| vectors[a][i]);
    let sv = m.svd(false, false).singular_values;
    let min_sv = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_sv = sv.iter().cloned().fold(0.0, f64::max);
    Ok(LagrangianFrame {
        vectors,
        min_singular_value: min_sv,
        rank_deficient: !(min_sv > 1e-8 * max_sv.max(1.0)),
        factorization_defect: defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlagReport {
    /// Largest `|ω(u_i, u_j)|` over frame pairs.
    pub max_omega_defect: f64,
    /// Largest deviation of the calibration phase from its first value, modulo `π`.
    pub phase_drift_rad: f64,
    /// Calibration phase `−arg Ω(frame)` at the first sample.
    pub phase: f64,
    /// Largest `|μ(X)|` over the block generators.
    pub moment_max_on_level: f64,
    pub min_singular_value: f64,
    pub samples: usize,
}

/// Reduces an angle modulo `π` into `(−π/2, π/2]`.
pub fn wrap_half_turn(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r > PI / 2.0 {
        r - PI
    } else {
        r
    }
}

/// Embeds a rank-one profile curve through the section and checks the
/// Lagrangian condition, the calibration phase and the moment level.
/// At most `max_samples` evenly spaced samples are used.
pub fn verify_special_lagrangian(
    curve: &ProfileCurve,
    n: usize,
    p_split: usize,
    pot: &Potential,
    max_samples: usize,
) -> Result<SlagReport> {
    curve.validate()?;
    if curve.rank() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: curve.rank(),
        });
    }
    let axis = &curve.axes[0];
    let every = axis.len().div_ceil(max_samples.max(1)).max(1);
    let gens = block_generators(n, p_split)?;
    let mut rep = SlagReport {
        max_omega_defect: 0.0,
        phase_drift_rad: 0.0,
        phase: f64::NAN,
        moment_max_on_level: 0.0,
        min_singular_value: f64::INFINITY,
        samples: 0,
    };
    for i in (0..axis.len()).step_by(every) {
        let point = section_point(n, p_split, axis.tau[i])?;
        let frame = lagrangian_frame(&point, p_split, axis.dtau[i])?;
        let z = embed(&point);
        let h = pot.mixed_hessian(&z.z);
        for a in 0..frame.vectors.len() {
            for b in (a + 1)..frame.vectors.len() {
                let w = kahler_with(&h, &frame.vectors[a], &frame.vectors[b]).abs();
                rep.max_omega_defect = rep.max_omega_defect.max(w);
            }
        }
        let phase = -holomorphic_volume(&z, &frame.vectors)?.arg();
        if rep.phase.is_nan() {
            rep.phase = phase;
        }
        rep.phase_drift_rad = rep
            .phase_drift_rad
            .max(wrap_half_turn(phase - rep.phase).abs());
        for g in &gens {
            rep.moment_max_on_level = rep.moment_max_on_level.max(moment(&z, g, pot).abs());
        }
        rep.min_singular_value = rep.min_singular_value.min(frame.min_singular_value);
        rep.samples += 1;
    }
    rep.phase = reduce_angle(rep.phase);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pot() -> Potential {
        Potential::new(ScalarProfile::new(1.0, 1.0, 1.0, 1).unwrap())
    }

    #[test]
    fn zero_vector_embeds_to_base_point() {
        let t = SphereTangent::new(vec![0.6, 0.8, 0.0], vec![0.0; 3]).unwrap();
        let z = embed(&t);
        assert_eq!(z.z(), &[c(0.6, 0.0), c(0.8, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn hyperbolic_embedding() {
        let t = SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
        let z = embed(&t);
        assert!((z.z()[0] - c(1f64.cosh(), 0.0)).norm() < 1e-15);
        assert!((z.z()[1] - c(0.0, 1f64.sinh())).norm() < 1e-15);
        let back = unembed(&z).unwrap();
        assert!((back.p()[0] - 1.0).abs() < 1e-12);
        assert!((back.v()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_tangent_rejected() {
        assert!(SphereTangent::new(vec![1.0, 0.1], vec![0.0, 0.0]).is_err());
        assert!(SphereTangent::new(vec![1.0, 0.0], vec![0.5, 0.0]).is_err());
    }

    #[test]
    fn off_quadric_rejected() {
        assert!(QuadricPoint::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).is_err());
    }

    #[test]
    fn radial_series_matches_closed_form_at_cutover() {
        for u in [9.99e-4f64, -9.99e-4] {
            let t = 1.0 + u;
            let closed = if u > 0.0 {
                t.acosh() / (t * t - 1.0).sqrt()
            } else {
                t.acos() / (1.0 - t * t).sqrt()
            };
            assert!((acosh_ratio(t) - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn first_generator_is_continuous() {
        assert_eq!(first_generator(1.0), 1.0);
        let e = 1e-9;
        assert!((first_generator(1.0 + e) - first_generator(1.0 - e)).abs() < 1e-8);
    }

    #[test]
    fn potential_on_zero_section_is_constant() {
        let t = SphereTangent::new(vec![0.0, 1.0, 0.0], vec![0.0; 3]).unwrap();
        assert_eq!(pot().value(&embed(&t)).unwrap(), 1.0);
    }

    #[test]
    fn kahler_form_is_alternating() {
        let t = SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0, 0.3, -0.2]).unwrap();
        let z = embed(&t);
        let basis = tangent_basis(&z);
        let w = kahler_form(&z, &pot(), &basis[0], &basis[0]).unwrap();
        assert!(w.abs() < 1e-12);
    }

    #[test]
    fn non_tangent_rejected() {
        let t = SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0; 3]).unwrap();
        let z = embed(&t);
        let u = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(kahler_form(&z, &pot(), &u, &u).is_err());
    }

    #[test]
    fn volume_at_base_point() {
        let t = SphereTangent::new(vec![1.0, 0.0, 0.0], vec![0.0; 3]).unwrap();
        let z = embed(&t);
        let frame = vec![
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        let v = holomorphic_volume(&z, &frame).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        let repeated = vec![frame[0].clone(), frame[0].clone()];
        assert_eq!(holomorphic_volume(&z, &repeated).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn section_round_trip() {
        let tau = c(0.7, -0.4);
        let pt = section_point(3, 2, tau).unwrap();
        assert!((section_tau(&pt, 2).unwrap() - tau).norm() < 1e-14);
        let z = embed(&pt);
        assert!((z.z()[0] - tau.cos()).norm() < 1e-14);
        assert!((z.z()[2] - tau.sin()).norm() < 1e-14);
    }

    #[test]
    fn zero_section_frame_is_real() {
        let pt = section_point(2, 1, c(0.4, 0.0)).unwrap();
        let f = lagrangian_frame(&pt, 1, c(1.0, 0.0)).unwrap();
        assert_eq!(f.vectors.len(), 2);
        assert!(f.vectors.iter().flatten().all(|w| w.im.abs() < 1e-15));
        assert!(!f.rank_deficient);
    }

    #[test]
    fn frame_degenerates_where_cosine_vanishes() {
        let pt = section_point(2, 2, c(PI / 2.0, 0.0)).unwrap();
        let f = lagrangian_frame(&pt, 2, c(1.0, 0.0)).unwrap();
        assert!(f.rank_deficient);
    }

    #[test]
    fn generator_must_be_skew() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(LieGenerator::new(m).is_err());
    }
}
