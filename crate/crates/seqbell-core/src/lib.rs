//! Simulation and certification toolkit for sequential Bell experiments with
//! unsharp quantum instruments.
//!
//! The scenario: one Alice and a chain of Bobs share a bipartite state. Each
//! party has three dichotomic measurement settings; every Bob measures an
//! unbiased unsharp POVM with sharpness `eta` and forwards his post-measurement
//! state to the next Bob. The crate covers:
//!
//! - dense complex matrix arithmetic sized for small local dimensions
//!   ([`matrix`], [`eigen`]);
//! - quantum states, dichotomic observables, unsharp POVMs, Kraus pairs and
//!   the sequential state-update channel ([`quantum`]);
//! - the three-setting Bell functional, its local / noncontextual / quantum
//!   bounds and sum-of-squares optimality diagnostics ([`bell`], [`seesaw`]);
//! - chain simulation together with the closed-form sub-optimal Bell values
//!   and the operator identities behind them ([`chain`]);
//! - inversion of observed Bell tuples into self-tested sharpness parameters
//!   and admissible ranges ([`certify`]);
//! - norm-based degrees of measurement incompatibility and their sequential
//!   lower bounds ([`incompat`]);
//! - a reference-value check suite shared by the test gate and the CLI
//!   ([`reproduce`]).
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the command
//! line front-end live in the companion `seqbell-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bell;
pub mod certify;
pub mod chain;
pub mod eigen;
mod error;
pub mod incompat;
pub mod matrix;
pub mod quantum;
pub mod reproduce;
pub mod rng;
pub mod seesaw;

pub use error::{Error, Result};

/// Default absolute tolerance for scalar equality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Deviation allowed when validating that an observable squares to identity.
pub const DICHOTOMY_TOL: f64 = 1e-9;

/// Eigenvalue floor below which a state is rejected as non-positive.
pub const POSITIVITY_FLOOR: f64 = -1e-10;
