//! Correlation-tensor norms of multipartite qudit states.
//!
//! The crate computes the full-body correlation tensor norms `‖τ_α‖²` of a
//! density matrix for every party subset `α`, evaluates closed-form bounds on
//! those norms that hold for k-separable states and for states of restricted
//! local rank, and simulates a sequential, reference-frame-free measurement
//! protocol that certifies entanglement from a partial set of correlations.
//!
//! All bounds are expressed on the squared scale (`‖τ‖²` or `C_x`).

pub mod basis;
pub mod bounds;
pub mod cli;
pub mod correlations;
pub mod detect;
mod error;
pub mod limits;
pub mod parties;
pub mod random;
pub mod spec;
pub mod stabilizer;
pub mod states;

pub use basis::GeneratorBasis;
pub use bounds::{BoundSpec, BoundValue};
pub use correlations::{CxValue, NormTable, TensorIndex};
pub use detect::{AcquisitionRecord, DetectionReport, NoiseSweepResult, Schedule};
pub use error::{Error, Result};
pub use limits::Limits;
pub use parties::Parties;
pub use states::DensityMatrix;

pub type C64 = num_complex::Complex64;
