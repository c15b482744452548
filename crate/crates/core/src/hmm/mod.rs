//! Per-unit left-to-right GMM-HMMs trained by iterative Viterbi re-alignment.
//!
//! All D unit models decode in parallel over an ergodic graph: the final
//! state of any unit connects to the initial state of every unit with a
//! uniform log(1/D) transition. Training is segmental: decode the corpus,
//! re-estimate on the hard alignments, repeat until the frame labels settle.

mod gmm;
mod train;
mod viterbi;

pub use gmm::DiagGmm;
pub use train::{reestimate, seed_hmms, train_tokenizer, SeedParams};
pub use viterbi::{viterbi_decode, viterbi_decode_with, EmissionModel};

use alloc::vec::Vec;

use crate::asm_init::AsmSequence;
use crate::error::CoreError;
use crate::math;
use crate::Result;

pub const DEFAULT_N_STATES: usize = 6;
pub const DEFAULT_N_GAUSS: usize = 4;

/// Left-to-right HMM for one unit: only self-loops and single-state advances.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmHmm {
    pub unit: usize,
    pub states: Vec<DiagGmm>,
    /// Self-loop probability per state; the complement advances (the final
    /// state's complement exits the unit).
    pub self_loop: Vec<f64>,
}

impl GmmHmm {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn log_self(&self, state: usize) -> f64 {
        math::ln(self.self_loop[state])
    }

    pub fn log_advance(&self, state: usize) -> f64 {
        math::ln(1.0 - self.self_loop[state])
    }

    pub fn validate(&self) -> Result<()> {
        for &p in &self.self_loop {
            if !(p > 0.0 && p < 1.0) {
                return Err(CoreError::InvalidConfig(
                    "self-loop probability must lie strictly in (0, 1)".into(),
                ));
            }
        }
        for s in &self.states {
            let total: f64 = s.weights.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(CoreError::InvalidConfig(
                    "state mixture weights must sum to 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Training metadata carried with the model set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainMeta {
    pub iterations: usize,
    pub final_objective: f64,
    /// Summed best-path log-likelihood after each decode pass.
    pub objective_history: Vec<f64>,
}

/// All D unit models plus the shared decoding graph parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmHmmSet {
    pub models: Vec<GmmHmm>,
    pub n_states: usize,
    pub n_dims: usize,
    pub feature_fingerprint: u64,
    /// ln(1/D): uniform unit-to-unit transition.
    pub unit_loop_logprob: f64,
    pub meta: TrainMeta,
}

impl GmmHmmSet {
    pub fn n_units(&self) -> usize {
        self.models.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() || self.n_states == 0 {
            return Err(CoreError::InvalidConfig(
                "model set needs at least one unit and one state".into(),
            ));
        }
        for (u, m) in self.models.iter().enumerate() {
            if m.unit != u {
                return Err(CoreError::InvalidConfig("unit ids must be 0..D-1".into()));
            }
            if m.n_states() != self.n_states {
                return Err(CoreError::InvalidConfig(
                    "all models must share the state count".into(),
                ));
            }
            m.validate()?;
        }
        Ok(())
    }
}

/// Decoded sequence with its best-path score.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub sequence: AsmSequence,
    pub best_path_loglik: f64,
}
