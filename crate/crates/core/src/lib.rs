//! Perturbed global operators `G_v`, `G_{r,v}` on quaternion-valued fields, their weighted
//! reproducing kernels, and the v-slice regular function machinery, with executable checks
//! of the integral and algebraic identities that tie them together.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod field;
pub mod kernels;
pub mod moebius;
pub mod operators;
pub mod quadrature;
pub mod quat;
pub mod series;
pub mod slice;
pub mod suite;
pub mod theorems;

pub use config::{SuiteConfig, Tolerances};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec};
pub use moebius::MoebiusMap;
pub use quat::{Quaternion, StructuralSet};
pub use slice::{DomainSpec, SlicePoint};
pub use suite::{PointSet, Target};
pub use theorems::{SuiteReport, Variants, VerificationReport};
