//! Experiment harness on top of sdioph-core: approximation functions,
//! Borel-Cantelli sums, measure surveys, and the campaign runner behind
//! the `sdioph` binary.

pub mod bc;
pub mod campaign;
pub mod config;
pub mod psi;
pub mod report;
pub mod survey;

mod kernel;
