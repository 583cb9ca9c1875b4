//! Catalog of Hermann actions and their restricted-root data.
//!
//! Roots are keyed by integer coordinates in the simple-root basis
//! `(β_1, β_2)`; the irrational values `β_j(e_i)` only appear through a
//! [`FrequencyFrame`]. Every row of a frame is a real scale times an integer
//! vector, so whether a realized frequency component vanishes is decided on
//! integers.

mod builtin;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::{builtin_actions, rank_one_action, sphere_action, ParametricRow, RankOneFamily};

/// Tolerance for matching a user-supplied frame basis against its family.
const BASIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A2,
    B2,
    G2,
    Rank1,
}

impl Family {
    pub fn rank(self) -> usize {
        match self {
            Family::Rank1 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A2 => "a2",
            Family::B2 => "b2",
            Family::G2 => "g2",
            Family::Rank1 => "rank1",
        };
        f.write_str(s)
    }
}

/// Realizes lattice frequencies as real vectors `λ = B · lattice`.
///
/// Row `i` of `B` holds `β_1(e_i), …, β_r(e_i)` and is stored as
/// `scales[i] * int_rows[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyFrame {
    scales: Vec<f64>,
    int_rows: Vec<Vec<i64>>,
}

impl FrequencyFrame {
    /// Frame of a rank-two family.
    pub fn for_family(family: Family) -> Option<Self> {
        let s3 = 3f64.sqrt();
        let (scales, rows) = match family {
            // β_1 = (2, 0), β_2 = (−1, √3)
            Family::A2 => (vec![1.0, s3], vec![vec![2, -1], vec![0, 1]]),
            // β_1 = (1, 0), β_2 = (−1, 1)
            Family::B2 => (vec![1.0, 1.0], vec![vec![1, -1], vec![0, 1]]),
            // β_1 = (2√3, 0), β_2 = (−√3, 1)
            Family::G2 => (vec![s3, 1.0], vec![vec![2, -1], vec![0, 1]]),
            Family::Rank1 => return None,
        };
        Some(Self {
            scales,
            int_rows: rows,
        })
    }

    /// Rank-one frame `B = [√c]` for maximal sectional curvature `4c`.
    pub fn rank_one(four_c: f64) -> Self {
        Self {
            scales: vec![(four_c / 4.0).sqrt()],
            int_rows: vec![vec![1]],
        }
    }

    pub fn rank(&self) -> usize {
        self.scales.len()
    }

    /// The real matrix `B`, row-major (row `i` = component along `e_i`).
    pub fn basis(&self) -> Vec<Vec<f64>> {
        self.scales
            .iter()
            .zip(&self.int_rows)
            .map(|(s, row)| row.iter().map(|&k| s * k as f64).collect())
            .collect()
    }

    /// Integer part of `(B · lattice)_axis`; the realized component is this times a nonzero scale.
    pub fn integer_component(&self, lattice: &[i64], axis: usize) -> i64 {
        self.int_rows[axis]
            .iter()
            .zip(lattice)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `true` iff `(B · lattice)_axis` is exactly zero.
    pub fn component_is_zero(&self, lattice: &[i64], axis: usize) -> bool {
        self.integer_component(lattice, axis) == 0
    }

    /// Realized frequency `B · lattice`. Panics if the lattice length differs from the rank.
    pub fn frequency(&self, lattice: &[i64]) -> Vec<f64> {
        assert_eq!(
            lattice.len(),
            self.rank(),
            "lattice length must equal frame rank"
        );
        (0..self.rank())
            .map(|axis| self.scales[axis] * self.integer_component(lattice, axis) as f64)
            .collect()
    }

    fn max_basis_deviation(&self, basis: &[Vec<f64>]) -> Option<f64> {
        let own = self.basis();
        if basis.len() != own.len() || basis.iter().any(|row| row.len() != own.len()) {
            return None;
        }
        let dev = own
            .iter()
            .flatten()
            .zip(basis.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Some(dev)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub lattice: Vec<i64>,
    pub m_v: u32,
    pub m_h: u32,
}

impl RootDatum {
    pub fn new(lattice: Vec<i64>, m_v: u32, m_h: u32) -> Self {
        Self { lattice, m_v, m_h }
    }

    pub fn multiplicity(&self) -> u32 {
        self.m_v + self.m_h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank1Params {
    pub four_c: f64,
    pub d: u32,
    pub m_v: u32,
    pub m_h: u32,
}

/// A Hermann action `H ↷ G/K` together with the data that enters the
/// calibration integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct HermannActionSpec {
    pub name: String,
    pub display: String,
    pub family: Family,
    pub frame: FrequencyFrame,
    pub roots: Vec<RootDatum>,
    pub rank1: Option<Rank1Params>,
    /// Dual action, carried as metadata only.
    pub dual: Option<String>,
    pub notes: Option<String>,
    /// `dim G/K`, when known.
    pub dim: Option<u32>,
}

impl HermannActionSpec {
    pub fn rank(&self) -> usize {
        self.family.rank()
    }

    /// `Σ (m_v + m_h) + rank`.
    pub fn root_dimension(&self) -> u32 {
        self.roots.iter().map(RootDatum::multiplicity).sum::<u32>() + self.rank() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |message: String| Error::Validation {
            entry: self.name.clone(),
            message,
        };
        let rank = self.rank();
        if self.frame.rank() != rank {
            return Err(invalid(format!(
                "frame has rank {} but family {} has rank {rank}",
                self.frame.rank(),
                self.family
            )));
        }
        if self.roots.is_empty() {
            return Err(invalid("no roots listed".into()));
        }
        for root in &self.roots {
            if root.lattice.len() != rank {
                return Err(invalid(format!(
                    "root {:?} has length {}, expected {rank}",
                    root.lattice,
                    root.lattice.len()
                )));
            }
            if root.lattice.iter().all(|&k| k == 0) {
                return Err(invalid("root lattice vector is zero".into()));
            }
            if root.multiplicity() == 0 {
                return Err(invalid(format!(
                    "root {:?} has m_v + m_h = 0",
                    root.lattice
                )));
            }
        }
        for (i, a) in self.roots.iter().enumerate() {
            if self.roots[i + 1..].iter().any(|b| b.lattice == a.lattice) {
                return Err(invalid(format!("root {:?} listed twice", a.lattice)));
            }
        }
        match (self.family, &self.rank1) {
            (Family::Rank1, None) => {
                return Err(invalid("rank1 family requires rank1 parameters".into()))
            }
            (Family::Rank1, Some(p)) => {
                if !(p.four_c > 0.0 && p.four_c.is_finite()) {
                    return Err(invalid(format!(
                        "four_c must be positive, got {}",
                        p.four_c
                    )));
                }
                if p.d == 0 {
                    return Err(invalid("d must be positive".into()));
                }
                let expected = rank_one_roots(p);
                let mut got = self.roots.clone();
                got.sort_by(|a, b| a.lattice.cmp(&b.lattice));
                if got != expected {
                    return Err(invalid(format!(
                        "rank-one roots must be e* with (m_v, m_h) = ({}, {}) and 2e* with ({}, 0)",
                        p.m_v,
                        p.m_h,
                        p.d - 1
                    )));
                }
                let own = FrequencyFrame::rank_one(p.four_c);
                if own != self.frame {
                    return Err(invalid("frame does not match four_c".into()));
                }
            }
            (_, Some(_)) => {
                return Err(invalid(
                    "rank1 parameters given for a rank-two family".into(),
                ))
            }
            (family, None) => {
                if Some(&self.frame) != FrequencyFrame::for_family(family).as_ref() {
                    return Err(invalid(format!("frame does not match family {family}")));
                }
            }
        }
        Ok(())
    }
}

/// Root list demanded by the rank-one form of the ODE: `e*` with the given
/// split and `2e*` with `(d − 1, 0)`. The second root is absent when `d = 1`.
pub fn rank_one_roots(p: &Rank1Params) -> Vec<RootDatum> {
    let mut roots = Vec::with_capacity(2);
    if p.m_v + p.m_h > 0 {
        roots.push(RootDatum::new(vec![1], p.m_v, p.m_h));
    }
    if p.d > 1 {
        roots.push(RootDatum::new(vec![2], p.d - 1, 0));
    }
    roots
}

/// `B · lattice` for the action's frame.
pub fn root_frequency(spec: &HermannActionSpec, lattice: &[i64]) -> Result<Vec<f64>> {
    if lattice.len() != spec.rank() {
        return Err(Error::Dimension {
            expected: spec.rank(),
            got: lattice.len(),
        });
    }
    Ok(spec.frame.frequency(lattice))
}

/// A `dim G/K` value that disagrees with the root multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionMismatch {
    pub name: String,
    pub stated: u32,
    pub from_roots: u32,
}

/// Named, immutable collection of action specs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActionCatalog {
    actions: BTreeMap<String, HermannActionSpec>,
}

impl ActionCatalog {
    pub fn builtin() -> Self {
        let mut cat = Self::default();
        for spec in builtin_actions() {
            debug_assert!(spec.validate().is_ok(), "builtin {} invalid", spec.name);
            cat.actions.insert(spec.name.clone(), spec);
        }
        cat
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HermannActionSpec> {
        self.actions.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.actions.keys().map(String::as_str)
    }

    /// Inserts or replaces a spec after validating it.
    pub fn insert(&mut self, spec: HermannActionSpec) -> Result<()> {
        spec.validate()?;
        self.actions.insert(spec.name.clone(), spec);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&HermannActionSpec> {
        self.actions.get(name)
    }

    pub fn lookup(&self, name: &str) -> Result<&HermannActionSpec> {
        self.get(name).ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            suggestions: self.near_misses(name),
        })
    }

    /// Up to five names ordered by similarity to `name`.
    pub fn near_misses(&self, name: &str) -> Vec<String> {
        let needle = name.to_lowercase();
        let mut scored: Vec<(f64, &String)> = self
            .actions
            .keys()
            .map(|k| {
                let hay = k.to_lowercase();
                let mut score = strsim::jaro_winkler(&needle, &hay);
                if !needle.is_empty() && hay.contains(&needle) {
                    score = score.max(0.9);
                }
                (score, k)
            })
            .filter(|(s, _)| *s >= 0.7)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        scored.into_iter().take(5).map(|(_, k)| k.clone()).collect()
    }

    /// Built-in entries with a stated dimension that the roots do not reproduce.
    pub fn dimension_report(&self) -> Vec<DimensionMismatch> {
        self.actions
            .values()
            .filter_map(|spec| {
                let stated = spec.dim?;
                let from_roots = spec.root_dimension();
                (stated != from_roots).then(|| DimensionMismatch {
                    name: spec.name.clone(),
                    stated,
                    from_roots,
                })
            })
            .collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let mut cat = Self::default();
        for spec in parse_registry(text)? {
            cat.insert(spec)?;
        }
        Ok(cat)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let doc = RegistryDocument {
            actions: self.actions.values().map(ActionRecord::from).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// Built-in catalog merged with the entries of an optional registry file.
/// User entries replace built-ins of the same name.
pub fn load_catalog(source: Option<&Path>) -> Result<ActionCatalog> {
    let mut cat = ActionCatalog::builtin();
    if let Some(path) = source {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for spec in parse_registry(&text)? {
            cat.insert(spec)?;
        }
    }
    Ok(cat)
}

// ---- JSON schema ----

#[derive(Debug, Serialize, Deserialize)]
struct RegistryDocument<T = ActionRecord> {
    actions: Vec<T>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionRecord {
    name: String,
    display: String,
    family: Family,
    rank: usize,
    frame: FrameRecord,
    roots: Vec<RootRecord>,
    rank1: Option<Rank1Record>,
    dual: Option<String>,
    notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRecord {
    basis: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootRecord {
    lattice: Vec<i64>,
    mv: u32,
    mh: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Rank1Record {
    four_c: f64,
    d: u32,
    mv: u32,
    mh: u32,
}

impl From<&HermannActionSpec> for ActionRecord {
    fn from(spec: &HermannActionSpec) -> Self {
        Self {
            name: spec.name.clone(),
            display: spec.display.clone(),
            family: spec.family,
            rank: spec.rank(),
            frame: FrameRecord {
                basis: spec.frame.basis(),
            },
            roots: spec
                .roots
                .iter()
                .map(|r| RootRecord {
                    lattice: r.lattice.clone(),
                    mv: r.m_v,
                    mh: r.m_h,
                })
                .collect(),
            rank1: spec.rank1.map(|p| Rank1Record {
                four_c: p.four_c,
                d: p.d,
                mv: p.m_v,
                mh: p.m_h,
            }),
            dual: spec.dual.clone(),
            notes: spec.notes.clone(),
            dim: spec.dim,
        }
    }
}

impl ActionRecord {
    fn into_spec(self) -> Result<HermannActionSpec> {
        let invalid = |message: String| Error::Validation {
            entry: self.name.clone(),
            message,
        };
        if self.rank != self.family.rank() {
            return Err(invalid(format!(
                "rank {} inconsistent with family {}",
                self.rank, self.family
            )));
        }
        let frame = match (&self.family, &self.rank1) {
            (Family::Rank1, Some(p)) => FrequencyFrame::rank_one(p.four_c),
            (Family::Rank1, None) => {
                return Err(invalid("rank1 family requires a `rank1` record".into()))
            }
            (family, _) => FrequencyFrame::for_family(*family).expect("rank-two family"),
        };
        match frame.max_basis_deviation(&self.frame.basis) {
            None => return Err(invalid(format!("frame.basis must be {0}x{0}", self.rank))),
            Some(dev) if dev > BASIS_TOL => {
                return Err(invalid(format!(
                    "frame.basis deviates from the {} frame by {dev:e}",
                    self.family
                )))
            }
            Some(_) => {}
        }
        let spec = HermannActionSpec {
            family: self.family,
            frame,
            roots: self
                .roots
                .into_iter()
                .map(|r| RootDatum::new(r.lattice, r.mv, r.mh))
                .collect(),
            rank1: self.rank1.map(|p| Rank1Params {
                four_c: p.four_c,
                d: p.d,
                m_v: p.mv,
                m_h: p.mh,
            }),
            dual: self.dual,
            notes: self.notes,
            dim: self.dim,
            name: self.name,
            display: self.display,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_registry(text: &str) -> Result<Vec<HermannActionSpec>> {
    let doc: RegistryDocument<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| Error::Parse {
            entry: "<document>".into(),
            field: "actions".into(),
            message: e.to_string(),
        })?;
    doc.actions
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let entry = value
                .get("name")
                .and_then(|n| n.as_str())
                .map(|n| format!("#{i} ({n})"))
                .unwrap_or_else(|| format!("#{i}"));
            let record: ActionRecord =
                serde_path_to_error::deserialize(value).map_err(|e| Error::Parse {
                    entry: entry.clone(),
                    field: e.path().to_string(),
                    message: e.into_inner().to_string(),
                })?;
            record.into_spec()
        })
        .collect()
}
