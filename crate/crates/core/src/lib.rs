//! Special Lagrangian profile curves for Hermann actions on complexified
//! symmetric spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`registry`] holds the catalog of Hermann actions with their restricted
//!   roots and the `(m_v, m_h)` multiplicity splits.
//! - [`expsum`] is an exact algebra of finite exponential sums over the root
//!   lattice. The calibration integrand and its iterated primitive live here.
//! - [`calibration`] builds the integrand `F` and primitive `F̂` for an action
//!   and a phase, and evaluates the special Lagrangian ODE residual.
//! - [`tracer`] traces level curves of `Im F̂` (rank one) and verifies
//!   candidate product curves (rank two).
//! - [`monge_ampere`] evaluates the radial Monge-Ampère determinants for the
//!   logarithmic profile `f′(y) = (a ln y + b)^{1/r}`.
//! - [`quadric`] is the concrete sphere model on the complex quadric, used to
//!   check the Lagrangian, calibration and moment-map statements geometrically.
//! - [`cli`] drives all of the above from the `slag` binary.

// `!(x > tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod error;
pub mod expsum;
pub mod monge_ampere;
pub mod quadric;
pub mod registry;
pub mod tracer;

pub use calibration::{Calibration, CalibrationSpec, ProfileCurve};
pub use error::{Error, Result};
pub use expsum::{ExpPoly, ExpTerm, TrigKind};
pub use registry::{ActionCatalog, Family, FrequencyFrame, HermannActionSpec, RootDatum};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
