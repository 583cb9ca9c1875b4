//! Built-in rows: rank-two actions, rank-one projective-space actions and
//! the sphere family.

use super::{rank_one_roots, Family, FrequencyFrame, HermannActionSpec, Rank1Params, RootDatum};
use crate::error::{Error, Result};

const B1: [i64; 2] = [1, 0];
const B2: [i64; 2] = [0, 1];
const B12: [i64; 2] = [1, 1];
const B1B1B2: [i64; 2] = [2, 1];
const TWO_B1: [i64; 2] = [2, 0];
const TWO_B12: [i64; 2] = [2, 2];
const G31: [i64; 2] = [3, 1];
const G32: [i64; 2] = [3, 2];

/// Merges a vertical list and a horizontal list into root data. Roots with
/// zero total multiplicity are dropped.
fn merge(v: &[([i64; 2], i64)], h: &[([i64; 2], i64)]) -> Vec<RootDatum> {
    let mut out: Vec<RootDatum> = Vec::new();
    let mut slot = |lat: [i64; 2]| -> usize {
        match out.iter().position(|r| r.lattice == lat) {
            Some(i) => i,
            None => {
                out.push(RootDatum::new(lat.to_vec(), 0, 0));
                out.len() - 1
            }
        }
    };
    let mut idx = Vec::new();
    for &(lat, m) in v {
        idx.push((slot(lat), m, true));
    }
    for &(lat, m) in h {
        idx.push((slot(lat), m, false));
    }
    for (i, m, vertical) in idx {
        let m = u32::try_from(m).expect("negative multiplicity");
        if vertical {
            out[i].m_v += m;
        } else {
            out[i].m_h += m;
        }
    }
    out.retain(|r| r.multiplicity() > 0);
    out.sort_by(|a, b| a.lattice.cmp(&b.lattice));
    out
}

fn rank_two(
    name: &str,
    family: Family,
    dim: u32,
    v: &[([i64; 2], i64)],
    h: &[([i64; 2], i64)],
    dual: Option<&str>,
    notes: Option<&str>,
) -> HermannActionSpec {
    HermannActionSpec {
        name: name.to_string(),
        display: display_name(name),
        family,
        frame: FrequencyFrame::for_family(family).expect("rank-two family"),
        roots: merge(v, h),
        rank1: None,
        dual: dual.map(str::to_string),
        notes: notes.map(str::to_string),
        dim: Some(dim),
    }
}

fn display_name(name: &str) -> String {
    name.replace(" on ", " ↷ ").replace(" x ", " × ")
}

/// Parametric rank-two rows, instantiated at `(q, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParametricRow {
    /// `SO(q+2)` on `SU(q+2)/S(U(2)×U(q))`, `q > 2`.
    SoOnComplexGrassmannian,
    /// `S(U(j+1)×U(q−j+1))` on `SU(q+2)/S(U(2)×U(q))`, `q > 2`.
    SplitUnitaryOnComplexGrassmannian,
    /// `SO(j+1)×SO(q−j+1)` on `SO(q+2)/SO(2)×SO(q)`.
    SplitOrthogonalOnRealGrassmannian,
    /// `SU(q+2)` on `Sp(q+2)/Sp(2)×Sp(q)`, `q > 2`.
    SuOnQuaternionGrassmannian,
    /// `Sp(j+1)×Sp(q−j+1)` on `Sp(q+2)/Sp(2)×Sp(q)`, `q > 2`.
    SplitSymplecticOnQuaternionGrassmannian,
}

impl ParametricRow {
    pub const ALL: [ParametricRow; 5] = [
        ParametricRow::SoOnComplexGrassmannian,
        ParametricRow::SplitUnitaryOnComplexGrassmannian,
        ParametricRow::SplitOrthogonalOnRealGrassmannian,
        ParametricRow::SuOnQuaternionGrassmannian,
        ParametricRow::SplitSymplecticOnQuaternionGrassmannian,
    ];

    /// Parameters used for the built-in instance.
    pub fn default_params(self) -> (i64, i64) {
        match self {
            ParametricRow::SoOnComplexGrassmannian => (3, 0),
            ParametricRow::SplitUnitaryOnComplexGrassmannian => (6, 2),
            ParametricRow::SplitOrthogonalOnRealGrassmannian => (4, 2),
            ParametricRow::SuOnQuaternionGrassmannian => (3, 0),
            ParametricRow::SplitSymplecticOnQuaternionGrassmannian => (5, 3),
        }
    }

    pub fn instantiate(self, q: i64, j: i64) -> Result<HermannActionSpec> {
        let bad = |msg: &str| Error::Validation {
            entry: format!("{self:?}(q={q}, j={j})"),
            message: msg.to_string(),
        };
        let check = |pairs: &[([i64; 2], i64)]| pairs.iter().all(|&(_, m)| m >= 0);
        let (name, dim, v, h): (String, i64, Vec<_>, Vec<_>) = match self {
            ParametricRow::SoOnComplexGrassmannian => {
                if q <= 2 {
                    return Err(bad("requires q > 2"));
                }
                (
                    format!("SO({}) on SU({})/S(U(2) x U({q}))", q + 2, q + 2),
                    4 * q,
                    vec![(B1, q - 2), (B2, 1), (B12, q - 2), (B1B1B2, 1)],
                    vec![
                        (B1, q - 2),
                        (B2, 1),
                        (B12, q - 2),
                        (B1B1B2, 1),
                        (TWO_B1, 1),
                        (TWO_B12, 1),
                    ],
                )
            }
            ParametricRow::SplitUnitaryOnComplexGrassmannian => {
                if q <= 2 {
                    return Err(bad("requires q > 2"));
                }
                (
                    format!(
                        "S(U({}) x U({})) on SU({})/S(U(2) x U({q}))",
                        j + 1,
                        q - j + 1,
                        q + 2
                    ),
                    4 * q,
                    vec![
                        (B1, 2 * j - 2),
                        (B12, 2 * q - 2 * j - 2),
                        (TWO_B1, 1),
                        (TWO_B12, 1),
                    ],
                    vec![
                        (B1, 2 * q - 2 * j - 6),
                        (B2, 2),
                        (B12, 2 * j - 2),
                        (B1B1B2, 2),
                    ],
                )
            }
            ParametricRow::SplitOrthogonalOnRealGrassmannian => (
                format!(
                    "SO({}) x SO({}) on SO({})/SO(2) x SO({q})",
                    j + 1,
                    q - j + 1,
                    q + 2
                ),
                2 * q,
                vec![(B1, j - 1), (B12, q - j - 1)],
                vec![(B1, q - j - 1), (B2, 1), (B12, j - 1), (B1B1B2, 1)],
            ),
            ParametricRow::SuOnQuaternionGrassmannian => {
                if q <= 2 {
                    return Err(bad("requires q > 2"));
                }
                (
                    format!("SU({}) on Sp({})/Sp(2) x Sp({q})", q + 2, q + 2),
                    8 * q,
                    vec![
                        (B1, 2 * q - 4),
                        (B2, 2),
                        (B12, 2 * q - 4),
                        (B1B1B2, 2),
                        (TWO_B1, 1),
                        (TWO_B12, 1),
                    ],
                    vec![
                        (B1, 2 * q - 4),
                        (B2, 2),
                        (B12, 2 * q - 4),
                        (B1B1B2, 2),
                        (TWO_B1, 2),
                        (TWO_B12, 2),
                    ],
                )
            }
            ParametricRow::SplitSymplecticOnQuaternionGrassmannian => {
                if q <= 2 {
                    return Err(bad("requires q > 2"));
                }
                (
                    format!(
                        "Sp({}) x Sp({}) on Sp({})/Sp(2) x Sp({q})",
                        j + 1,
                        q - j + 1,
                        q + 2
                    ),
                    8 * q,
                    vec![
                        (B1, 2 * j - 4),
                        (TWO_B1, 3),
                        (B12, 4 * q - 4 * j - 4),
                        (TWO_B12, 3),
                    ],
                    vec![
                        (B1, 4 * q - 4 * j - 4),
                        (B2, 4),
                        (B12, 4 * j - 4),
                        (B1B1B2, 4),
                    ],
                )
            }
        };
        if !check(&v) || !check(&h) {
            return Err(bad("parameters give a negative multiplicity"));
        }
        let spec = rank_two(&name, Family::B2, dim as u32, &v, &h, None, None);
        spec.validate()?;
        Ok(spec)
    }
}

/// Rank-one projective-space actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOneFamily {
    /// `S(U(1)×U(m))` on `CP^m`.
    CpIsotropy,
    /// `S(U(m)×U(1))` on `CP^m`.
    CpBlock,
    /// `SO(m+1)` on `CP^m`.
    CpReal,
    /// `Sp(1)×Sp(m)` on `HP^m`.
    HpIsotropy,
    /// `Sp(m)×Sp(1)` on `HP^m`.
    HpBlock,
    /// `U(m+1)` on `HP^m`.
    HpComplex,
    /// `Spin(9)` on `OP^2`.
    OpIsotropy,
    /// `Sp(3)·Sp(1)` on `OP^2`.
    OpQuaternionic,
}

impl RankOneFamily {
    pub const ALL: [RankOneFamily; 8] = [
        RankOneFamily::CpIsotropy,
        RankOneFamily::CpBlock,
        RankOneFamily::CpReal,
        RankOneFamily::HpIsotropy,
        RankOneFamily::HpBlock,
        RankOneFamily::HpComplex,
        RankOneFamily::OpIsotropy,
        RankOneFamily::OpQuaternionic,
    ];

    /// Real dimension `d` of the scalar field.
    pub fn d(self) -> u32 {
        use RankOneFamily::*;
        match self {
            CpIsotropy | CpBlock | CpReal => 2,
            HpIsotropy | HpBlock | HpComplex => 4,
            OpIsotropy | OpQuaternionic => 8,
        }
    }

    /// `(m_v, m_h)` of the root `e*`; the two always sum to `d(m − 1)`.
    pub fn split(self, m: u32) -> (u32, u32) {
        use RankOneFamily::*;
        let k = self.d() * (m - 1);
        match self {
            CpIsotropy | HpIsotropy | OpIsotropy => (k, 0),
            CpBlock | HpBlock | OpQuaternionic => (0, k),
            CpReal => (m - 2, m),
            HpComplex => (2 * m - 4, 2 * m),
        }
    }

    fn label(self, m: u32) -> (String, String) {
        use RankOneFamily::*;
        match self {
            CpIsotropy => (
                format!("CPm isotropy, m={m}"),
                format!("S(U(1)×U({m})) ↷ SU({})/S(U(1)×U({m}))", m + 1),
            ),
            CpBlock => (
                format!("S(U(m) x U(1)) on CPm, m={m}"),
                format!("S(U({m})×U(1)) ↷ SU({})/S(U(1)×U({m}))", m + 1),
            ),
            CpReal => (
                format!("SO(m+1) on CPm, m={m}"),
                format!("SO({}) ↷ SU({})/S(U(1)×U({m}))", m + 1, m + 1),
            ),
            HpIsotropy => (
                format!("HPm isotropy, m={m}"),
                format!("Sp(1)×Sp({m}) ↷ Sp({})/(Sp(1)×Sp({m}))", m + 1),
            ),
            HpBlock => (
                format!("Sp(m) x Sp(1) on HPm, m={m}"),
                format!("Sp({m})×Sp(1) ↷ Sp({})/(Sp(1)×Sp({m}))", m + 1),
            ),
            HpComplex => (
                format!("U(m+1) on HPm, m={m}"),
                format!("U({}) ↷ Sp({})/(Sp(1)×Sp({m}))", m + 1, m + 1),
            ),
            OpIsotropy => ("OP2 isotropy".into(), "Spin(9) ↷ F4/Spin(9)".into()),
            OpQuaternionic => (
                "Sp(3).Sp(1) on OP2".into(),
                "Sp(3)·Sp(1) ↷ F4/Spin(9)".into(),
            ),
        }
    }

    fn valid_m(self, m: u32) -> bool {
        use RankOneFamily::*;
        match self {
            OpIsotropy | OpQuaternionic => m == 2,
            CpReal | HpComplex => m >= 2,
            _ => m >= 2,
        }
    }
}

/// A rank-one projective-space action with curvature normalization `4c`.
pub fn rank_one_action(family: RankOneFamily, m: u32, four_c: f64) -> Result<HermannActionSpec> {
    let (name, display) = family.label(m);
    if !family.valid_m(m) {
        return Err(Error::Validation {
            entry: name,
            message: format!("m = {m} not allowed for this family"),
        });
    }
    let (m_v, m_h) = family.split(m);
    let params = Rank1Params {
        four_c,
        d: family.d(),
        m_v,
        m_h,
    };
    let spec = HermannActionSpec {
        name,
        display,
        family: Family::Rank1,
        frame: FrequencyFrame::rank_one(four_c),
        roots: rank_one_roots(&params),
        rank1: Some(params),
        dual: None,
        notes: None,
        dim: Some(family.d() * m),
    };
    spec.validate()?;
    Ok(spec)
}

/// `SO(p)×SO(n+1−p)` acting on the unit sphere `S^n`, `1 ≤ p ≤ n`.
///
/// The base point lies in the first block, so the section direction splits
/// the generators into `n − p` vertical and `p − 1` horizontal ones.
pub fn sphere_action(n: u32, p: u32) -> Result<HermannActionSpec> {
    let name = format!("sphere-n{n}-p{p}");
    if n < 1 || p < 1 || p > n {
        return Err(Error::Validation {
            entry: name,
            message: format!("need 1 <= p <= n, got n={n}, p={p}"),
        });
    }
    let params = Rank1Params {
        four_c: 4.0,
        d: 1,
        m_v: n - p,
        m_h: p - 1,
    };
    let spec = HermannActionSpec {
        display: format!("SO({p})×SO({}) ↷ S^{n}", n + 1 - p),
        name,
        family: Family::Rank1,
        frame: FrequencyFrame::rank_one(4.0),
        roots: rank_one_roots(&params),
        rank1: Some(params),
        dual: None,
        notes: None,
        dim: Some(n),
    };
    spec.validate()?;
    Ok(spec)
}

/// Every built-in action.
pub fn builtin_actions() -> Vec<HermannActionSpec> {
    let mut out = vec![
        rank_two(
            "rho1(SO(3)) on SU(3)/SO(3)",
            Family::A2,
            5,
            &[(B1, 1)],
            &[(B2, 1), (B12, 1)],
            Some("SO_0(1,2) on SL(3,R)/SO(3)"),
            None,
        ),
        rank_two(
            "SO(6) on SU(6)/Sp(3)",
            Family::A2,
            14,
            &[(B1, 2), (B2, 2), (B12, 2)],
            &[(B1, 2), (B2, 2), (B12, 2)],
            None,
            None,
        ),
        rank_two(
            "rho2(Sp(3)) on SU(6)/Sp(3)",
            Family::A2,
            14,
            &[(B1, 4)],
            &[(B2, 4), (B12, 4)],
            Some("Sp(1,2) on SU*(6)/Sp(3)"),
            None,
        ),
        rank_two(
            "S(U(2) x U(2)) on SU(4)/S(U(2) x U(2))",
            Family::B2,
            8,
            &[(B1, 1), (B12, 1)],
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1)],
            None,
            Some("non-isotropy action"),
        ),
        rank_two(
            "SO(4) x SO(4) on SO(8)/U(4)",
            Family::B2,
            12,
            &[(B1, 2), (B2, 1), (B12, 2), (B1B1B2, 1)],
            &[(B1, 2), (B12, 2)],
            None,
            None,
        ),
        rank_two(
            "rho3(SO(4) x SO(4)) on SO(8)/U(4)",
            Family::B2,
            12,
            &[(B1, 2), (B12, 2)],
            &[(B1, 2), (B2, 1), (B12, 2), (B1B1B2, 1)],
            Some("SO(4,C) on SO*(8)/U(4)"),
            None,
        ),
        rank_two(
            "rho4(U(4)) on SO(8)/U(4)",
            Family::B2,
            12,
            &[(B1, 1), (B12, 1)],
            &[(B1, 3), (B2, 1), (B12, 3), (B1B1B2, 1)],
            Some("U(2,2) on SO*(8)/U(4)"),
            None,
        ),
        rank_two(
            "SO(4) x SO(6) on SO(10)/U(5)",
            Family::B2,
            20,
            &[
                (B1, 2),
                (B2, 2),
                (B12, 2),
                (B1B1B2, 2),
                (TWO_B1, 1),
                (TWO_B12, 1),
            ],
            &[(B1, 2), (B2, 2), (B12, 2), (B1B1B2, 2)],
            None,
            None,
        ),
        rank_two(
            "SO(5) x SO(5) on SO(10)/U(5)",
            Family::B2,
            20,
            &[(B1, 2), (B2, 2), (B12, 2), (B1B1B2, 2)],
            &[
                (B1, 2),
                (B2, 2),
                (B12, 2),
                (B1B1B2, 2),
                (TWO_B1, 1),
                (TWO_B12, 1),
            ],
            None,
            None,
        ),
        rank_two(
            "rho5(U(5)) on SO(10)/U(5)",
            Family::B2,
            20,
            &[(B1, 4), (TWO_B1, 1), (TWO_B12, 1)],
            &[(B2, 4), (B12, 4), (B1B1B2, 4)],
            Some("U(2,3) on SO*(10)/U(5)"),
            None,
        ),
        rank_two(
            "SO(2)^2 x SO(3)^2 on (SO(5) x SO(5))/SO(5)",
            Family::B2,
            10,
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1)],
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1)],
            None,
            None,
        ),
        rank_two(
            "rho6(SO(5)) on (SO(5) x SO(5))/SO(5)",
            Family::B2,
            10,
            &[(B1, 2)],
            &[(B2, 2), (B12, 2), (B1B1B2, 2)],
            Some("SO_0(2,3) on SO(5,C)/SO(5)"),
            None,
        ),
        rank_two(
            "rho7(U(2)) on Sp(2)/U(2)",
            Family::B2,
            6,
            &[(B1, 1), (B12, 1)],
            &[(B2, 1), (B1B1B2, 1)],
            Some("U(1,1) on Sp(2,R)/U(2)"),
            None,
        ),
        rank_two(
            "SU(4) on Sp(4)/Sp(2) x Sp(2)",
            Family::B2,
            16,
            &[(B1, 2), (B2, 1), (B12, 2), (B1B1B2, 1)],
            &[(B1, 2), (B2, 2), (B12, 1), (B1B1B2, 3)],
            None,
            None,
        ),
        rank_two(
            "U(4) on Sp(4)/Sp(2) x Sp(2)",
            Family::B2,
            16,
            &[(B1, 2), (B2, 2), (B12, 2), (B1B1B2, 2)],
            &[(B1, 2), (B2, 1), (B12, 1), (B1B1B2, 2)],
            None,
            None,
        ),
        rank_two(
            "Sp(2) x Sp(2) on Sp(4)/Sp(2) x Sp(2)",
            Family::B2,
            16,
            &[(B1, 3), (B12, 3)],
            &[(B1, 1), (B2, 3), (B1B1B2, 4)],
            None,
            None,
        ),
        rank_two(
            "SU(2)^2.SO(2)^2 on (Sp(2) x Sp(2))/Sp(2)",
            Family::B2,
            10,
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1)],
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1)],
            None,
            None,
        ),
        rank_two(
            "rho8(Sp(2)) on (Sp(2) x Sp(2))/Sp(2)",
            Family::B2,
            10,
            &[(B1, 2), (B12, 2)],
            &[(B2, 2), (B1B1B2, 2)],
            Some("Sp(2,R) on Sp(2,C)/Sp(2)"),
            None,
        ),
        rank_two(
            "rho9(Sp(2)) on (Sp(2) x Sp(2))/Sp(2)",
            Family::B2,
            10,
            &[(B1, 2), (B12, 2)],
            &[(B2, 2), (B1B1B2, 2)],
            Some("Sp(1,1) on Sp(2,C)/Sp(2)"),
            None,
        ),
        rank_two(
            "Sp(4) on E6/Spin(10).U(1)",
            Family::B2,
            32,
            &[(B1, 4), (B2, 3), (B12, 3), (B1B1B2, 4)],
            &[(B1, 4), (B2, 3), (B12, 6), (B1B1B2, 1)],
            None,
            None,
        ),
        rank_two(
            "SU(6).SU(2) on E6/Spin(10).U(1)",
            Family::B2,
            32,
            &[
                (B1, 4),
                (B2, 2),
                (B12, 4),
                (B1B1B2, 2),
                (TWO_B1, 1),
                (TWO_B12, 1),
            ],
            &[(B1, 4), (B2, 4), (B12, 5), (B1B1B2, 3)],
            None,
            None,
        ),
        rank_two(
            "rho10(SU(6).SU(2)) on E6/Spin(10).U(1)",
            Family::B2,
            32,
            &[
                (B1, 4),
                (B2, 4),
                (B12, 4),
                (B1B1B2, 4),
                (TWO_B1, 1),
                (TWO_B12, 1),
            ],
            &[(B1, 4), (B2, 2), (B12, 5), (B1B1B2, 1)],
            Some("SU(1,5).SL(2,R) on E6^-14/Spin(10).U(1)"),
            None,
        ),
        rank_two(
            "rho11(Spin(10).U(1)) on E6/Spin(10).U(1)",
            Family::B2,
            32,
            &[(B1, 8), (TWO_B1, 1), (TWO_B12, 1)],
            &[(B2, 6), (B12, 9), (B1B1B2, 5)],
            Some("SO*(10).U(1) on E6^-14/Spin(10).U(1)"),
            None,
        ),
        rank_two(
            "rho12(Spin(10).U(1)) on E6/Spin(10).U(1)",
            Family::B2,
            32,
            &[(B1, 6), (B2, 1), (B12, 6), (B1B1B2, 1)],
            &[
                (B1, 2),
                (B2, 5),
                (B12, 3),
                (B1B1B2, 4),
                (TWO_B1, 1),
                (TWO_B12, 1),
            ],
            Some("SO_0(2,8).U(1) on E6^-14/Spin(10).U(1)"),
            None,
        ),
        rank_two(
            "Sp(4) on E6/F4",
            Family::A2,
            26,
            &[(B1, 4), (B2, 4), (B12, 4)],
            &[(B1, 4), (B2, 4), (B12, 4)],
            None,
            None,
        ),
        rank_two(
            "rho13(F4) on E6/F4",
            Family::A2,
            26,
            &[(B1, 8)],
            &[(B2, 8), (B12, 8)],
            Some("F4^-20 on E6^-26/F4"),
            None,
        ),
        rank_two(
            "rho14(SO(4)) on G2/SO(4)",
            Family::G2,
            8,
            &[(B1, 1), (G32, 1)],
            &[(B2, 1), (B12, 1), (B1B1B2, 1), (G31, 1)],
            Some("SL(2,R) x SL(2,R) on G2^2/SO(4)"),
            None,
        ),
        rank_two(
            "rho15(SO(4)) on G2/SO(4)",
            Family::G2,
            8,
            &[(B1, 1), (G32, 1)],
            &[(B2, 1), (B12, 1), (B1B1B2, 1), (G31, 1)],
            Some("rho15*(SO(4)) on G2^2/SO(4)"),
            None,
        ),
        rank_two(
            "rho16(G2) on (G2 x G2)/G2",
            Family::G2,
            14,
            &[(B1, 2), (G32, 2)],
            &[(B2, 2), (B12, 2), (B1B1B2, 2), (G31, 2)],
            Some("G2^2 on G2^C/G2"),
            None,
        ),
        rank_two(
            "SU(2)^4 on (G2 x G2)/G2",
            Family::G2,
            14,
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1), (G31, 1), (G32, 1)],
            &[(B1, 1), (B2, 1), (B12, 1), (B1B1B2, 1), (G31, 1), (G32, 1)],
            None,
            None,
        ),
    ];
    for row in ParametricRow::ALL {
        let (q, j) = row.default_params();
        out.push(row.instantiate(q, j).expect("default parameters are valid"));
    }
    for family in RankOneFamily::ALL {
        let ms: &[u32] = match family {
            RankOneFamily::OpIsotropy | RankOneFamily::OpQuaternionic => &[2],
            _ => &[2, 3],
        };
        for &m in ms {
            out.push(rank_one_action(family, m, 4.0).expect("valid rank-one row"));
        }
    }
    for (n, p) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)] {
        out.push(sphere_action(n, p).expect("valid sphere row"));
    }
    out
}
