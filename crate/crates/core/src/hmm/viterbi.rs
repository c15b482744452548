//! Exact Viterbi decoding over the ergodic unit graph, log domain only.

use alloc::vec;
use alloc::vec::Vec;

use super::{DecodeResult, GmmHmmSet};
use crate::asm_init::{AsmSequence, Token};
use crate::error::CoreError;
use crate::features::FrameMatrix;
use crate::Result;

/// State emission scores; the decoding graph itself always comes from the
/// `GmmHmmSet`, so an alternative emission model (a neural scorer, say) can
/// be plugged in without retouching the decoder.
pub trait EmissionModel {
    fn state_log_likelihood(&self, unit: usize, state: usize, frame: &[f32]) -> f64;
}

impl EmissionModel for GmmHmmSet {
    fn state_log_likelihood(&self, unit: usize, state: usize, frame: &[f32]) -> f64 {
        self.models[unit].states[state].log_likelihood(frame)
    }
}

/// Backpointer layout: predecessor flat state plus a flag marking a
/// cross-unit entry, so token boundaries stay unambiguous even for
/// single-state models.
const CROSS_BIT: u32 = 1 << 31;

pub fn viterbi_decode(fm: &FrameMatrix, set: &GmmHmmSet) -> Result<DecodeResult> {
    viterbi_decode_with(fm, set, set)
}

pub fn viterbi_decode_with(
    fm: &FrameMatrix,
    set: &GmmHmmSet,
    emissions: &impl EmissionModel,
) -> Result<DecodeResult> {
    if fm.fingerprint != set.feature_fingerprint {
        return Err(CoreError::FingerprintMismatch {
            expected: set.feature_fingerprint,
            got: fm.fingerprint,
        });
    }
    if fm.n_dims != set.n_dims {
        return Err(CoreError::InvalidConfig(
            "frame and model dimensionality differ".into(),
        ));
    }
    let t_total = fm.n_frames();
    let s = set.n_states;
    let d = set.n_units();
    if t_total < s {
        return Err(CoreError::UtteranceTooShort {
            id: fm.utterance_id.clone(),
            frames: t_total,
            required: s,
        });
    }

    let n = d * s;
    let log_loop = set.unit_loop_logprob;
    let mut log_self = vec![0.0f64; n];
    let mut log_adv = vec![0.0f64; n];
    for u in 0..d {
        for st in 0..s {
            log_self[u * s + st] = set.models[u].log_self(st);
            log_adv[u * s + st] = set.models[u].log_advance(st);
        }
    }

    let mut prev = vec![f64::NEG_INFINITY; n];
    let mut cur = vec![f64::NEG_INFINITY; n];
    let mut psi = vec![0u32; t_total * n];

    for u in 0..d {
        prev[u * s] = log_loop + emissions.state_log_likelihood(u, 0, fm.row(0));
    }

    for t in 1..t_total {
        let frame = fm.row(t);
        // Best exit score over all units, with the lowest-id argmax; every
        // state-0 target compares against this single candidate set.
        let mut best_exit = f64::NEG_INFINITY;
        let mut best_exit_unit = 0usize;
        for v in 0..d {
            let idx = v * s + (s - 1);
            let score = prev[idx] + log_adv[idx];
            if score > best_exit {
                best_exit = score;
                best_exit_unit = v;
            }
        }
        for u in 0..d {
            for st in 0..s {
                let idx = u * s + st;
                // Ties resolve toward the lower predecessor unit id, then
                // toward staying in the state.
                if st == 0 {
                    let stay = prev[idx] + log_self[idx];
                    let cross = best_exit + log_loop;
                    let take_cross = cross > stay || (cross == stay && best_exit_unit < u);
                    if take_cross {
                        cur[idx] = cross;
                        psi[t * n + idx] = (best_exit_unit * s + (s - 1)) as u32 | CROSS_BIT;
                    } else {
                        cur[idx] = stay;
                        psi[t * n + idx] = idx as u32;
                    }
                } else {
                    let stay = prev[idx] + log_self[idx];
                    let advance = prev[idx - 1] + log_adv[idx - 1];
                    if stay >= advance {
                        cur[idx] = stay;
                        psi[t * n + idx] = idx as u32;
                    } else {
                        cur[idx] = advance;
                        psi[t * n + idx] = (idx - 1) as u32;
                    }
                }
                cur[idx] += emissions.state_log_likelihood(u, st, frame);
            }
        }
        core::mem::swap(&mut prev, &mut cur);
    }

    // The path must end in a final state so the last token is complete.
    let mut best_end = f64::NEG_INFINITY;
    let mut end_idx = 0usize;
    for u in 0..d {
        let idx = u * s + (s - 1);
        if prev[idx] > best_end {
            best_end = prev[idx];
            end_idx = idx;
        }
    }
    if !best_end.is_finite() {
        return Err(CoreError::NonFinite("viterbi best path score"));
    }

    // Backtrack, marking cross entries.
    let mut flat = vec![0usize; t_total];
    let mut crossed = vec![false; t_total];
    flat[t_total - 1] = end_idx;
    for t in (1..t_total).rev() {
        let bp = psi[t * n + flat[t]];
        crossed[t] = bp & CROSS_BIT != 0;
        flat[t - 1] = (bp & !CROSS_BIT) as usize;
    }
    crossed[0] = true;

    let mut tokens = Vec::new();
    let mut start = 0usize;
    for t in 1..t_total {
        if crossed[t] {
            tokens.push(Token {
                unit: flat[t - 1] / s,
                start,
                end: t,
            });
            start = t;
        }
    }
    tokens.push(Token {
        unit: flat[t_total - 1] / s,
        start,
        end: t_total,
    });

    Ok(DecodeResult {
        sequence: AsmSequence {
            utterance_id: fm.utterance_id.clone(),
            tokens,
            total_frames: t_total,
        },
        best_path_loglik: best_end,
    })
}
