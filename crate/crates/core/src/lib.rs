//! Finite probability theory extended with superposition events.
//!
//! An [`OutcomeSpace`] carries labeled outcomes and point probabilities.
//! Subsets of it are [`Event`]s, which can be lifted to density matrices in two
//! ways: the classical event `ρ(ΔS)` (diagonal) and the superposition event
//! `ρ(ΣS)` (the rank-one projector onto the normalized ket `|S⟩`). The
//! [`measurement`] module implements the trace rule, projection and the Lüders
//! mixture operation; [`entropy`] computes logical entropy and the entropy
//! created by a measurement. [`qmsets`] is the model over `Z₂ⁿ` in which every
//! basis of the vector space is a different outcome set.
//!
//! The crate is `no_std` and only needs `alloc`. All values are immutable once
//! built and can be shared across threads.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod density;
pub mod entropy;
mod error;
pub mod gf2;
mod linalg;
pub mod measurement;
pub mod outcome;
pub mod qmsets;

pub use density::{DensityMatrix, StateVector};
pub use entropy::{
    logical_entropy_density, logical_entropy_distribution, logical_entropy_partition,
    measurement_entropy_report, EntropyReport,
};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
pub use measurement::{
    expectation, luders, measure, prob_given, project_superposition, MeasurementOutcome,
    ProjectionMatrix,
};
pub use outcome::{Event, OutcomeSpace, Partition, RandomVariable};
pub use qmsets::{Gf2Basis, Ket, KetTable, QState};

/// Comparison tolerance for probabilities and probability vectors.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Comparison tolerance for density-matrix entries, traces and eigenvalues.
pub const MATRIX_TOLERANCE: f64 = 1e-9;
