//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slag::registry::{Family, HermannActionSpec};
use slag::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Columns `β_j(e_1), …, β_j(e_r)` of the simple roots, written out by hand.
pub fn simple_roots(spec: &HermannActionSpec) -> Vec<Vec<f64>> {
    let s3 = 3f64.sqrt();
    match spec.family {
        Family::A2 => vec![vec![2.0, 0.0], vec![-1.0, s3]],
        Family::B2 => vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
        Family::G2 => vec![vec![2.0 * s3, 0.0], vec![-s3, 1.0]],
        Family::Rank1 => {
            let four_c = spec.rank1.as_ref().expect("rank-one params").four_c;
            vec![vec![(four_c / 4.0).sqrt()]]
        }
    }
}

/// `β(τ) = Σ_j lattice_j β_j(τ)`.
pub fn root_value(cols: &[Vec<f64>], lattice: &[i64], tau: &[C64]) -> C64 {
    let mut out = C64::new(0.0, 0.0);
    for (j, &l) in lattice.iter().enumerate() {
        for (i, t) in tau.iter().enumerate() {
            out += *t * (l as f64 * cols[j][i]);
        }
    }
    out
}

/// `e^{iθ} Π sin^{m_v}(β(τ)) cos^{m_h}(β(τ))` by direct complex trigonometry.
pub fn trig_product(spec: &HermannActionSpec, theta: f64, tau: &[C64]) -> C64 {
    let cols = simple_roots(spec);
    let mut out = C64::from_polar(1.0, theta);
    for root in &spec.roots {
        let b = root_value(&cols, &root.lattice, tau);
        out *= b.sin().powu(root.m_v) * b.cos().powu(root.m_h);
    }
    out
}

pub fn random_tau(rng: &mut impl Rng, r: usize) -> Vec<C64> {
    (0..r)
        .map(|_| {
            C64::new(
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect()
}

pub fn rel_err(got: C64, want: C64) -> f64 {
    (got - want).norm() / want.norm().max(f64::MIN_POSITIVE)
}

pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Random vector orthogonal to the unit vector `p`.
pub fn normal_to(rng: &mut impl Rng, p: &[f64], len: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..p.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = dot(&v, p);
        v.iter_mut().zip(p).for_each(|(x, q)| *x -= c * q);
        let n = norm(&v);
        if n > 1e-3 {
            return v.iter().map(|x| x * len / n).collect();
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Random rotation as a product of plane rotations.
pub fn random_rotation(rng: &mut impl Rng, dim: usize) -> nalgebra::DMatrix<f64> {
    let mut m = nalgebra::DMatrix::<f64>::identity(dim, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let a = rng.random_range(-3.0..3.0f64);
            let mut g = nalgebra::DMatrix::<f64>::identity(dim, dim);
            let (s, c) = a.sin_cos();
            g[(i, i)] = c;
            g[(j, j)] = c;
            g[(i, j)] = -s;
            g[(j, i)] = s;
            m = g * m;
        }
    }
    m
}
