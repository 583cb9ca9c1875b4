//! Monge-Ampère determinants for potentials `f(ρ_1(x))` with
//! `ρ_1(x) = ‖x‖² + 1` and the Stenzel-type profile
//! `f′(y) = (a ln y + b)^{1/r}`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// First and second derivatives of a radial profile `y ↦ f(y)`.
pub trait RadialProfile {
    fn d1(&self, y: f64) -> f64;
    fn d2(&self, y: f64) -> f64;
}

/// `f(y) = c0 + ∫_1^y (a ln s + b)^{1/r} ds` on `y ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProfile {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub r: u32,
}

impl ScalarProfile {
    pub fn new(a: f64, b: f64, c0: f64, r: u32) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c0", c0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if r == 0 {
            return Err(Error::domain("r must be positive"));
        }
        Ok(Self { a, b, c0, r })
    }

    fn inner(&self, y: f64) -> f64 {
        self.a * y.ln() + self.b
    }

    /// `(f′)^r = a ln y + b`.
    pub fn d1_pow_r(&self, y: f64) -> f64 {
        self.inner(y)
    }

    /// `f(y)` by double-exponential quadrature to absolute tolerance `1e-12`.
    pub fn value(&self, y: f64) -> Result<f64> {
        if !(y >= 1.0) {
            return Err(Error::domain(format!(
                "profile defined for y >= 1, got {y}"
            )));
        }
        if y == 1.0 {
            return Ok(self.c0);
        }
        let q = quadrature::double_exponential::integrate(|s| self.d1(s), 1.0, y, 1e-12);
        Ok(self.c0 + q.integral)
    }
}

impl RadialProfile for ScalarProfile {
    fn d1(&self, y: f64) -> f64 {
        self.inner(y).powf(1.0 / self.r as f64)
    }

    fn d2(&self, y: f64) -> f64 {
        let r = self.r as f64;
        self.a / (r * y) * self.inner(y).powf(1.0 / r - 1.0)
    }
}

/// `2 x_i x_j f″(ρ_1) + f′(ρ_1) δ_ij`.
pub fn hessian_matrix(profile: &impl RadialProfile, x: &[f64]) -> DMatrix<f64> {
    let r = x.len();
    let y = rho1(x);
    let (d1, d2) = (profile.d1(y), profile.d2(y));
    DMatrix::from_fn(r, r, |i, j| {
        2.0 * x[i] * x[j] * d2 + if i == j { d1 } else { 0.0 }
    })
}

pub fn rho1(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() + 1.0
}

/// Cofactor expansion for sizes up to three, LU beyond.
pub fn small_det(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.clone().determinant(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetRow {
    pub x: Vec<f64>,
    /// Determinant of [`hessian_matrix`].
    pub a: f64,
    /// `f′^{r−1}(f′ + 2f″‖x‖²)`.
    pub b: f64,
    /// `2 f″ f′^{r−1} ρ_1`.
    pub c: f64,
    /// `2a/r`.
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DevStats {
    pub max: f64,
    pub mean: f64,
}

impl DevStats {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let (mut max, mut sum, mut n) = (0.0f64, 0.0, 0usize);
        for v in values {
            max = max.max(v);
            sum += v;
            n += 1;
        }
        Self {
            max,
            mean: if n == 0 { 0.0 } else { sum / n as f64 },
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetReport {
    pub assert_A_eq_B: bool,
    pub assert_C_eq_D: bool,
    pub max_rel_A_vs_B: f64,
    pub max_rel_C_vs_D: f64,
    /// Absolute `|A − C|`.
    pub dev_A_vs_C: DevStats,
    /// Absolute `|A − D|`.
    pub dev_A_vs_D: DevStats,
    pub grid: Vec<DetRow>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Evaluates the four determinant expressions at every grid point.
pub fn det_report(profile: &ScalarProfile, grid: &[Vec<f64>]) -> Result<DetReport> {
    if grid.is_empty() {
        return Err(Error::domain("det_report needs at least one grid point"));
    }
    let r = profile.r as usize;
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        if x.len() != r {
            return Err(Error::Dimension {
                expected: r,
                got: x.len(),
            });
        }
        let y = rho1(x);
        let (d1, d2) = (profile.d1(y), profile.d2(y));
        let norm2 = y - 1.0;
        let pow = d1.powi(r as i32 - 1);
        rows.push(DetRow {
            x: x.clone(),
            a: small_det(&hessian_matrix(profile, x)),
            b: pow * (d1 + 2.0 * d2 * norm2),
            c: 2.0 * d2 * pow * y,
            d: 2.0 * profile.a / profile.r as f64,
        });
    }
    let max_ab = rows.iter().map(|w| rel(w.a, w.b)).fold(0.0, f64::max);
    let max_cd = rows.iter().map(|w| rel(w.c, w.d)).fold(0.0, f64::max);
    Ok(DetReport {
        assert_A_eq_B: max_ab <= 1e-10,
        assert_C_eq_D: max_cd <= 1e-12,
        max_rel_A_vs_B: max_ab,
        max_rel_C_vs_D: max_cd,
        dev_A_vs_C: DevStats::of(rows.iter().map(|w| (w.a - w.c).abs())),
        dev_A_vs_D: DevStats::of(rows.iter().map(|w| (w.a - w.d).abs())),
        grid: rows,
    })
}

/// A smooth function of the generator values `y = (ρ_1, …, ρ_l)`.
pub trait MultiProfile {
    fn arity(&self) -> usize;
    fn gradient(&self, y: &[f64]) -> Vec<f64>;
    fn hessian(&self, y: &[f64]) -> Vec<Vec<f64>>;
}

/// A radial profile viewed as a function of `l` generators that only reads the first.
#[derive(Debug, Clone, Copy)]
pub struct FirstGenerator<P> {
    pub profile: P,
    pub arity: usize,
}

impl<P: RadialProfile> MultiProfile for FirstGenerator<P> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.arity];
        g[0] = self.profile.d1(y[0]);
        g
    }

    fn hessian(&self, y: &[f64]) -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; self.arity]; self.arity];
        h[0][0] = self.profile.d2(y[0]);
        h
    }
}

/// Central-difference derivatives of a plain function of `l` variables.
pub struct FdProfile<F> {
    pub f: F,
    pub arity: usize,
    pub step: f64,
}

impl<F: Fn(&[f64]) -> f64> MultiProfile for FdProfile<F> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let h = self.step;
        (0..self.arity)
            .map(|k| {
                let mut p = y.to_vec();
                let mut m = y.to_vec();
                p[k] += h;
                m[k] -= h;
                ((self.f)(&p) - (self.f)(&m)) / (2.0 * h)
            })
            .collect()
    }

    fn hessian(&self, y: &[f64]) -> Vec<Vec<f64>> {
        fd_hessian(&self.f, y, self.step)
    }
}

fn fd_hessian(f: &impl Fn(&[f64]) -> f64, y: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = y.len();
    let at = |di: usize, si: f64, dj: usize, sj: f64| {
        let mut p = y.to_vec();
        p[di] += si * h;
        p[dj] += sj * h;
        f(&p)
    };
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                let mut p = y.to_vec();
                let mut m = y.to_vec();
                p[i] += h;
                m[i] -= h;
                (f(&p) - 2.0 * f(y) + f(&m)) / (h * h)
            } else {
                (at(i, 1.0, j, 1.0) - at(i, 1.0, j, -1.0) - at(i, -1.0, j, 1.0)
                    + at(i, -1.0, j, -1.0))
                    / (4.0 * h * h)
            };
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

type Generator = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `ρ_1(x) = ‖x‖² + 1` followed by user generators differentiated numerically.
pub struct GeneratorSet {
    extra: Vec<Generator>,
    pub step: f64,
}

impl Default for GeneratorSet {
    fn default() -> Self {
        Self {
            extra: Vec::new(),
            step: 1e-4,
        }
    }
}

impl GeneratorSet {
    pub fn with_step(step: f64) -> Self {
        Self {
            extra: Vec::new(),
            step,
        }
    }

    pub fn push(mut self, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.extra.push(Box::new(g));
        self
    }

    pub fn len(&self) -> usize {
        1 + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        std::iter::once(rho1(x))
            .chain(self.extra.iter().map(|g| g(x)))
            .collect()
    }

    fn gradient(&self, k: usize, x: &[f64]) -> Vec<f64> {
        if k == 0 {
            return x.iter().map(|v| 2.0 * v).collect();
        }
        let g = &self.extra[k - 1];
        let h = self.step;
        (0..x.len())
            .map(|i| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[i] += h;
                m[i] -= h;
                (g(&p) - g(&m)) / (2.0 * h)
            })
            .collect()
    }

    fn hessian(&self, k: usize, x: &[f64]) -> Vec<Vec<f64>> {
        if k == 0 {
            let r = x.len();
            return (0..r)
                .map(|i| (0..r).map(|j| if i == j { 2.0 } else { 0.0 }).collect())
                .collect();
        }
        fd_hessian(&|p: &[f64]| self.extra[k - 1](p), x, self.step)
    }
}

/// `det[Σ f_{k̂k} ∂_iρ_k̂ ∂_jρ_k + Σ f_k ∂_i∂_jρ_k]`, the flat Hessian of `f ∘ ρ`.
pub fn generic_ma_det(gens: &GeneratorSet, f: &impl MultiProfile, x: &[f64]) -> Result<f64> {
    if f.arity() != gens.len() {
        return Err(Error::Dimension {
            expected: gens.len(),
            got: f.arity(),
        });
    }
    let r = x.len();
    let l = gens.len();
    let y = gens.values(x);
    let fg = f.gradient(&y);
    let fh = f.hessian(&y);
    let grads: Vec<Vec<f64>> = (0..l).map(|k| gens.gradient(k, x)).collect();
    let mut m = DMatrix::<f64>::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let mut v = 0.0;
            for k in 0..l {
                for kh in 0..l {
                    v += fh[kh][k] * grads[kh][i] * grads[k][j];
                }
            }
            m[(i, j)] = v;
        }
    }
    for (k, fk) in fg.iter().enumerate() {
        if *fk == 0.0 {
            continue;
        }
        let hk = gens.hessian(k, x);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] += fk * hk[i][j];
            }
        }
    }
    Ok(small_det(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct HalfSquare;
    impl RadialProfile for HalfSquare {
        fn d1(&self, y: f64) -> f64 {
            y
        }
        fn d2(&self, _: f64) -> f64 {
            1.0
        }
    }

    #[test]
    fn test_profile_hessian() {
        let m = hessian_matrix(&HalfSquare, &[1.0]);
        assert_eq!(m[(0, 0)], 4.0);
    }

    #[test]
    fn origin_hessian_is_scaled_identity() {
        let p = ScalarProfile::new(3.0, 2.0, 1.0, 2).unwrap();
        let m = hessian_matrix(&p, &[0.0, 0.0]);
        let b = 2f64.sqrt();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[b, 0.0, 0.0, b]));
    }

    #[test]
    fn profile_at_one() {
        let p = ScalarProfile::new(1.0, 4.0, 0.5, 2).unwrap();
        assert_eq!(p.d1(1.0), 2.0);
        assert_eq!(p.value(1.0).unwrap(), 0.5);
        assert!(p.value(0.5).is_err());
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(ScalarProfile::new(0.0, 1.0, 1.0, 1).is_err());
        assert!(ScalarProfile::new(1.0, -1.0, 1.0, 1).is_err());
        assert!(ScalarProfile::new(1.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn one_dimensional_deviation() {
        let p = ScalarProfile::new(1.0, 1.0, 1.0, 1).unwrap();
        let rep = det_report(&p, &[vec![0.0]]).unwrap();
        let row = &rep.grid[0];
        assert_eq!(row.a, 1.0);
        assert_eq!(row.c, 2.0);
        assert_eq!(rep.dev_A_vs_C.max, 1.0);
    }

    #[test]
    fn constant_profile_has_zero_determinant() {
        let gens = GeneratorSet::default();
        let f = FdProfile {
            f: |_: &[f64]| 7.0,
            arity: 1,
            step: 1e-4,
        };
        assert_eq!(generic_ma_det(&gens, &f, &[0.3, -0.2]).unwrap(), 0.0);
    }

    #[test]
    fn arity_mismatch() {
        let gens = GeneratorSet::default().push(|x: &[f64]| x[0]);
        let p = ScalarProfile::new(1.0, 1.0, 1.0, 2).unwrap();
        let f = FirstGenerator {
            profile: p,
            arity: 1,
        };
        assert!(generic_ma_det(&gens, &f, &[0.1, 0.2]).is_err());
    }
}
