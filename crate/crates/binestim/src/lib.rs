//! Online bin packing with estimated item sizes.
//!
//! Items arrive one by one and must be placed irrevocably into unit-capacity
//! bins. Before the first item is revealed, the packer is handed an estimate
//! of every item's size together with an accuracy factor `delta`; each actual
//! size then lands in the closed band `[c'(1-delta), min(c'(1+delta), 1)]`.
//!
//! The crate provides:
//!
//! * [`core`] - exact rational arithmetic, the instance model, and a referee
//!   that drives the online protocol while validating both sides,
//! * [`algorithms`] - Next-Fit, First-Fit, Best-Fit, Harmonic₄, the
//!   Planned-Harmonic strategy and Delayed-Best-Fit,
//! * [`oracle`] - exact optima (branch-and-bound, pairing), lower bounds and
//!   the weight-function analysis utilities,
//! * [`adversary`] - adaptive instance constructions that force any packer to
//!   high bin counts, each with a verified optimality certificate,
//! * [`harness`] - seeded instance generators, experiment grids and CSV/JSON
//!   report emission.

pub mod adversary;
pub mod algorithms;
pub mod core;
pub mod harness;
pub mod oracle;
pub mod rational;

mod error;

pub use error::Error;
pub use rational::Rational;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
