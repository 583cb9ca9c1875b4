//! Finite sums `Σ c · τ^α · exp(i λ·τ)` with frequencies on the root lattice.
//!
//! Frequencies are stored as integer lattice vectors and realized through a
//! [`FrequencyFrame`] only when evaluating, so merging and the degenerate
//! branch of the antiderivative never compare floats.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::registry::FrequencyFrame;

/// Relative magnitude below which coefficients are dropped.
const PRUNE_REL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sin,
    Cos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub coeff: C64,
    pub powers: Vec<u32>,
    pub lattice: Vec<i64>,
}

type Key = (Vec<i64>, Vec<u32>);

/// A canonical exponential polynomial: terms sorted by `(lattice, powers)`,
/// keys unique, negligible coefficients removed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    frame: FrequencyFrame,
    terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn zero(frame: &FrequencyFrame) -> Self {
        Self {
            frame: frame.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(frame: &FrequencyFrame, c: C64) -> Self {
        let r = frame.rank();
        Self::from_terms(
            frame,
            vec![ExpTerm {
                coeff: c,
                powers: vec![0; r],
                lattice: vec![0; r],
            }],
        )
    }

    /// Builds a canonical polynomial, summing terms that share a key.
    /// Panics if a term's vectors do not match the frame rank.
    pub fn from_terms(frame: &FrequencyFrame, terms: impl IntoIterator<Item = ExpTerm>) -> Self {
        let r = frame.rank();
        let mut map: BTreeMap<Key, C64> = BTreeMap::new();
        for t in terms {
            assert!(
                t.powers.len() == r && t.lattice.len() == r,
                "term rank does not match frame"
            );
            *map.entry((t.lattice, t.powers)).or_default() += t.coeff;
        }
        Self::from_map(frame, map)
    }

    fn from_map(frame: &FrequencyFrame, map: BTreeMap<Key, C64>) -> Self {
        let max = map.values().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = max * PRUNE_REL;
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|((lattice, powers), coeff)| ExpTerm {
                coeff,
                powers,
                lattice,
            })
            .collect();
        Self {
            frame: frame.clone(),
            terms,
        }
    }

    /// `sin^power(β·τ)` or `cos^power(β·τ)` for `β = Σ lattice_j β_j`.
    pub fn from_trig_power(
        frame: &FrequencyFrame,
        kind: TrigKind,
        lattice: &[i64],
        power: u32,
    ) -> Result<Self> {
        if lattice.len() != frame.rank() {
            return Err(Error::Dimension {
                expected: frame.rank(),
                got: lattice.len(),
            });
        }
        if lattice.iter().all(|&k| k == 0) {
            return Err(Error::domain("trig factor with zero lattice vector"));
        }
        let m = power as i64;
        // ((e^{ix} ∓ e^{-ix}) / (2i | 2))^m = prefactor · Σ_k C(m,k) (±1)^{m−k} e^{i(2k−m)x}
        let prefactor = match kind {
            TrigKind::Sin => C64::new(0.0, 2.0).powi(-(power as i32)),
            TrigKind::Cos => C64::new(0.5f64.powi(power as i32), 0.0),
        };
        let r = frame.rank();
        let mut binom = 1.0f64;
        let mut terms = Vec::with_capacity(power as usize + 1);
        for k in 0..=m {
            let sign = match kind {
                TrigKind::Sin if (m - k) % 2 == 1 => -1.0,
                _ => 1.0,
            };
            let mult = 2 * k - m;
            terms.push(ExpTerm {
                coeff: prefactor * (sign * binom),
                powers: vec![0; r],
                lattice: lattice.iter().map(|&l| l * mult).collect(),
            });
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        Ok(Self::from_terms(frame, terms))
    }

    pub fn frame(&self) -> &FrequencyFrame {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::domain(
                "exponential polynomials use different frames",
            ));
        }
        Ok(())
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.rank() {
            return Err(Error::domain(format!(
                "axis {axis} out of range for rank {}",
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_terms(
            &self.frame,
            self.terms.iter().map(|t| ExpTerm {
                coeff: t.coeff * c,
                ..t.clone()
            }),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        Ok(Self::from_terms(
            &self.frame,
            self.terms.iter().chain(&other.terms).cloned(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let mut map: BTreeMap<Key, C64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let lattice = a
                    .lattice
                    .iter()
                    .zip(&b.lattice)
                    .map(|(x, y)| x + y)
                    .collect();
                let powers = a.powers.iter().zip(&b.powers).map(|(x, y)| x + y).collect();
                *map.entry((lattice, powers)).or_default() += a.coeff * b.coeff;
            }
        }
        Ok(Self::from_map(&self.frame, map))
    }

    /// Evaluates at `tau`, summing in canonical term order.
    /// Panics if `tau.len()` differs from the rank.
    pub fn eval(&self, tau: &[C64]) -> C64 {
        assert_eq!(tau.len(), self.rank(), "tau length must equal rank");
        let mut sum = C64::new(0.0, 0.0);
        for t in &self.terms {
            let lambda = self.frame.frequency(&t.lattice);
            let phase: C64 = lambda.iter().zip(tau).map(|(l, z)| z * *l).sum();
            let mut v = t.coeff * (C64::i() * phase).exp();
            for (z, &p) in tau.iter().zip(&t.powers) {
                if p > 0 {
                    v *= z.powu(p);
                }
            }
            sum += v;
        }
        sum
    }

    /// Term-wise `∂/∂τ_axis`.
    pub fn derivative(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let lam_int = self.frame.integer_component(&t.lattice, axis);
            if lam_int != 0 {
                let lam = self.frame.frequency(&t.lattice)[axis];
                out.push(ExpTerm {
                    coeff: t.coeff * C64::new(0.0, lam),
                    ..t.clone()
                });
            }
            let a = t.powers[axis];
            if a > 0 {
                let mut powers = t.powers.clone();
                powers[axis] -= 1;
                out.push(ExpTerm {
                    coeff: t.coeff * a as f64,
                    powers,
                    lattice: t.lattice.clone(),
                });
            }
        }
        Ok(Self::from_terms(&self.frame, out))
    }

    /// Term-wise primitive in `τ_axis` with zero integration constant.
    pub fn antiderivative(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let mut out = Vec::new();
        for t in &self.terms {
            let a = t.powers[axis];
            if self.frame.component_is_zero(&t.lattice, axis) {
                let mut powers = t.powers.clone();
                powers[axis] += 1;
                out.push(ExpTerm {
                    coeff: t.coeff / (a + 1) as f64,
                    powers,
                    lattice: t.lattice.clone(),
                });
                continue;
            }
            let il = C64::new(0.0, self.frame.frequency(&t.lattice)[axis]);
            // Σ_t (−1)^t a!/(a−t)! τ^{a−t} / (iλ)^{t+1}
            let mut falling = 1.0f64;
            let mut denom = il;
            for k in 0..=a {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let mut powers = t.powers.clone();
                powers[axis] = a - k;
                out.push(ExpTerm {
                    coeff: t.coeff * (sign * falling) / denom,
                    powers,
                    lattice: t.lattice.clone(),
                });
                falling *= (a - k) as f64;
                denom *= il;
            }
        }
        Ok(Self::from_terms(&self.frame, out))
    }

    /// Largest coefficient difference against `other`, or `None` if the key sets differ.
    pub fn max_coeff_diff(&self, other: &Self) -> Option<f64> {
        if self.terms.len() != other.terms.len() || self.frame != other.frame {
            return None;
        }
        let mut max = 0.0f64;
        for (a, b) in self.terms.iter().zip(&other.terms) {
            if a.lattice != b.lattice || a.powers != b.powers {
                return None;
            }
            max = max.max((a.coeff - b.coeff).norm());
        }
        Some(max)
    }

    pub fn to_dump(&self) -> ExpPolyDump {
        ExpPolyDump {
            basis: self.frame.basis(),
            terms: self
                .terms
                .iter()
                .map(|t| TermDump {
                    coeff: [t.coeff.re, t.coeff.im],
                    powers: t.powers.clone(),
                    lattice: t.lattice.clone(),
                })
                .collect(),
        }
    }
}

/// JSON dump layout.
#[derive(Debug, Clone, Serialize)]
pub struct ExpPolyDump {
    pub basis: Vec<Vec<f64>>,
    pub terms: Vec<TermDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermDump {
    pub coeff: [f64; 2],
    pub powers: Vec<u32>,
    pub lattice: Vec<i64>,
}
