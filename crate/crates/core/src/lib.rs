//! Evaluation pipeline for classifying in-vehicle telemetry on quantum and
//! classical accelerators.
//!
//! The crate is organised by subsystem:
//!
//! - [`qsim`]: dense statevector simulator with shot sampling and a stochastic
//!   Pauli-error channel.
//! - [`feature_map`]: the second-order ZZ data embedding circuit.
//! - [`vqc`]: variational quantum classifier trained with SPSA.
//! - [`svm`]: kernel SVM trained with SMO.
//! - [`qubo_svm`]: SVM training rewritten as a QUBO and solved by enumeration
//!   or simulated annealing.
//! - [`features`]: Fisher-score feature ranking.
//! - [`pipeline`]: CSV ingestion, cleaning, augmentation, scaling, drive-level
//!   labelling and splitting, plus a synthetic telemetry generator.
//! - [`harness`]: execution backends, the remote accelerator latency model and
//!   benchmark reports.

pub mod error;
pub mod feature_map;
pub mod features;
pub mod harness;
pub mod pipeline;
pub mod qsim;
pub mod qubo_svm;
pub mod rng;
pub mod svm;
pub mod vqc;

pub use error::{Error, Result};
