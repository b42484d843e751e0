//! Command-line tooling around [`semimin_core`]: sequence input, randomized
//! verification and benchmarks.

pub mod bench;
pub mod cli;
pub mod input;
pub mod verify;
