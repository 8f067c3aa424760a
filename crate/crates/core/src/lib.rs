//! Empirical bridge-pier scour equations with accuracy scoring against
//! measured data and two sensitivity analyses: one-at-a-time perturbation
//! around a baseline and the PAWN distribution-based global method.
//!
//! Data-parallel loops (sample evaluation, bootstrap replicas, per-record
//! scoring) run on rayon when the `parallel` feature is enabled and fall back
//! to sequential iteration otherwise. Results are identical either way.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accuracy;
pub mod dataset;
pub mod distributions;
pub mod equations;
pub mod error;
pub mod factors;
pub mod oat;
pub mod optimize;
pub mod par;
pub mod pawn;
pub mod reference;

pub use equations::{predict, EquationId, InputParam, PierShape, ScourInputs, ShapeTag};
pub use error::{Error, Result};
pub use reference::Source;
