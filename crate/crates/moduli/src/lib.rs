//! Command-line driver and report writers for `moduli-core`, plus parallel
//! campaign runners.

pub mod cli;
pub mod parallel;
pub mod report;

pub use moduli_core;
