//! Chronological causal discovery (CCD) detectors and a benchmark harness
//! for measuring how sensitive they are to the window length Q and the
//! downsampling factor k.
//!
//! The crate simulates a bivariate process with a known delayed coupling,
//! runs Granger-causality, transfer-entropy, cross-mapping, and lagged-VAR
//! detectors on resampled versions of it, and scores the inferred graphs
//! against ground truth over (Q, k) grids.
//!
//! Start with the runnable examples (`cargo run --release --example ...`):
//! each major capability has one. The `ccd` binary wraps the same machinery
//! behind `simulate`, `detect`, `sweep`, `report`, and `replicate`
//! subcommands.

pub mod bench;
pub mod detectors;
pub mod error;
pub mod graphs;
pub mod numerics;
pub mod sampling;
pub mod signals;

pub use error::{CcdError, Result};
