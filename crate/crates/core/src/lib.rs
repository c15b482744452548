//! Self-organized acoustic segment units for scene audio: tokenize recordings
//! into unit sequences, detect low-indexing-power "stop" units with retrieval
//! metrics, and block the matching segments before classification.
//!
//! The crate is `no_std` + `alloc`; everything here is pure computation over
//! in-memory matrices. Audio decoding, file formats, and the pipeline CLI live
//! in the companion `asmsel` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asm_init;
pub mod classifier;
pub mod error;
pub mod features;
pub mod fingerprint;
pub mod hmm;
mod math;
pub mod selection;
pub mod stop_asm;
pub mod synth;

pub use error::CoreError;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, CoreError>;
