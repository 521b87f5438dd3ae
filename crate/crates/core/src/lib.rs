//! Envelopes of one-parameter families of circles in the plane.
//!
//! A family is a center curve `γ`, a radius `λ > 0` and optionally a unit
//! normal `ν ⟂ γ'`. The crate decides whether the family creates an
//! envelope, builds the envelope branches, computes the discriminant set
//! and recovers reflectors from seismic surveys.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod creativity;
pub mod discriminant;
pub mod envelope;
pub mod expr;
pub mod family;
pub mod frontal;
pub mod gallery;
pub mod geom;
pub mod render;
pub mod scenario;
pub mod seismic;

pub use analysis::{Analysis, AnalysisError};
pub use creativity::{Classification, CreativityParams, CreativityReport, PointStatus};
pub use envelope::{BranchLabel, EnvelopeBranch, Residuals};
pub use expr::Expr;
pub use family::{CircleFamily, CircleFamilySpec, FamilySample, Interval};
pub use frontal::FrontalData;
pub use geom::Vec2;
