//! Hurwitz complex continued fractions over the Gaussian integers.
//!
//! The crate provides exact digit expansion of Gaussian rationals, the
//! convergent recursion, rigorous log-domain diameter bounds for cylinder
//! sets of the associated infinite iterated function system, the seed-set
//! and integer-square-insertion constructions, homothetic-pattern search
//! in digit sets, and numerical dimension diagnostics.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `hcf` binary for a batch command-line front end.

pub mod analysis;
pub mod gaussian;
pub mod hurwitz;
pub mod ifs;
pub mod logdomain;
pub mod patterns;
pub mod seedset;

pub use gaussian::{GaussianInt, GaussianRational};
pub use hurwitz::{ConvergentPair, Digit, DigitClass, DigitSequence};
pub use ifs::{CylinderInfo, DerivedConstants};
pub use patterns::{HomotheticCopy, LatticePattern};
pub use seedset::{InsertionSchedule, IntegerSquare};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("input is zero")]
    ZeroInput,
    #[error("input lies outside the fundamental box U")]
    InputOutsideU,
    #[error("input lies outside the closed box cl(U)")]
    InputOutsideClosedU,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("empty digit sequence")]
    EmptySequence,
    #[error("digit {0} is not admissible here")]
    InadmissibleDigit(String),
    #[error("shell level must be >= 1")]
    InvalidShellLevel,
    #[error("shell level {0} is too large to enumerate")]
    ShellTooLarge(u64),
    #[error("sequence is not a seed word: {0}")]
    NotSeedWord(String),
    #[error("schedule verification failed: {0}")]
    ScheduleInfeasible(String),
    #[error("square index {0} is outside the schedule horizon")]
    IndexOutOfSchedule(usize),
    #[error("word length {0} exceeds the last verified schedule level {1}")]
    ScheduleTooShort(usize, u64),
    #[error("sequence is not in the image of the insertion map: {0}")]
    NotInImage(String),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("empty point set")]
    EmptySet,
    #[error("point enclosures are too coarse for scale {0}")]
    ScaleTooSmall(f64),
    #[error("radius {0} is not below the shell-1 derivative floor r0 = {1}")]
    RadiusTooLarge(f64, f64),
    #[error("not enough samples: {0}")]
    InsufficientSamples(String),
    #[error("schedule has not been verified")]
    ScheduleUnverified,
}

pub type Result<T> = std::result::Result<T, Error>;
