//! Segmental training: seed per-unit models from the initial segmentation,
//! then alternate Viterbi decoding and re-estimation on the hard alignments.

use alloc::vec;
use alloc::vec::Vec;

use super::gmm::DiagGmm;
use super::viterbi::viterbi_decode;
use super::{GmmHmm, GmmHmmSet, TrainMeta};
use crate::asm_init::AsmSequence;
use crate::error::CoreError;
use crate::features::FrameMatrix;
use crate::fingerprint::Fingerprint;
use crate::math;
use crate::Result;

#[derive(Debug, Clone)]
pub struct SeedParams {
    pub n_states: usize,
    pub n_gauss: usize,
    pub seed: u64,
    pub gmm_em_iters: usize,
}

impl Default for SeedParams {
    fn default() -> Self {
        SeedParams {
            n_states: super::DEFAULT_N_STATES,
            n_gauss: super::DEFAULT_N_GAUSS,
            seed: 0,
            gmm_em_iters: 10,
        }
    }
}

const SELF_LOOP_MIN: f64 = 0.1;
const SELF_LOOP_MAX: f64 = 0.9;
const VAR_FLOOR_SCALE: f64 = 1e-3;
const VAR_FLOOR_ABS: f64 = 1e-8;

fn check_corpus(corpus: &[FrameMatrix], seqs: &[AsmSequence]) -> Result<(usize, u64)> {
    if corpus.is_empty() || corpus.len() != seqs.len() {
        return Err(CoreError::CorpusMismatch(
            "corpus and sequence lists differ in length".into(),
        ));
    }
    let dim = corpus[0].n_dims;
    let fp = corpus[0].fingerprint;
    for (fm, seq) in corpus.iter().zip(seqs) {
        if fm.n_dims != dim || fm.fingerprint != fp {
            return Err(CoreError::CorpusMismatch(fm.utterance_id.clone()));
        }
        if fm.utterance_id != seq.utterance_id || seq.total_frames > fm.n_frames() {
            return Err(CoreError::SequenceMismatch(fm.utterance_id.clone()));
        }
    }
    Ok((dim, fp))
}

/// Variance floor: `1e-3` of the global per-dimension variance, with a small
/// absolute floor under it so a constant corpus stays non-degenerate.
fn variance_floor(corpus: &[FrameMatrix], dim: usize) -> Vec<f64> {
    let mut mean = vec![0.0f64; dim];
    let mut n = 0usize;
    for fm in corpus {
        for row in fm.rows() {
            for j in 0..dim {
                mean[j] += row[j] as f64;
            }
        }
        n += fm.n_frames();
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut var = vec![0.0f64; dim];
    for fm in corpus {
        for row in fm.rows() {
            for j in 0..dim {
                let d = row[j] as f64 - mean[j];
                var[j] += d * d;
            }
        }
    }
    var.iter()
        .map(|v| (VAR_FLOOR_SCALE * v / n as f64).max(VAR_FLOOR_ABS))
        .collect()
}

fn clamp_self_loop(p: f64) -> f64 {
    p.clamp(SELF_LOOP_MIN, SELF_LOOP_MAX)
}

/// Seeds one GMM-HMM per unit from the initial segmentation: every token
/// span is split uniformly into `n_states` sub-spans and each state's GMM is
/// fit on its pooled sub-span frames.
pub fn seed_hmms(
    corpus: &[FrameMatrix],
    init_seqs: &[AsmSequence],
    d: usize,
    params: &SeedParams,
) -> Result<GmmHmmSet> {
    let (dim, fp) = check_corpus(corpus, init_seqs)?;
    let s = params.n_states;
    let floor = variance_floor(corpus, dim);

    // state_frames[u][s] collects f64 rows; span_lens[u] the token lengths.
    let mut state_frames: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); s]; d];
    let mut span_lens: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (fm, seq) in corpus.iter().zip(init_seqs) {
        for t in &seq.tokens {
            if t.unit >= d {
                return Err(CoreError::UnitOutOfRange { unit: t.unit, d });
            }
            let len = t.end - t.start;
            if len < s {
                return Err(CoreError::TokenTooShort {
                    unit: t.unit,
                    len,
                    states: s,
                });
            }
            span_lens[t.unit].push(len);
            for st in 0..s {
                let lo = t.start + st * len / s;
                let hi = t.start + (st + 1) * len / s;
                for frame in lo..hi {
                    state_frames[t.unit][st]
                        .extend(fm.row(frame).iter().map(|&v| v as f64));
                }
            }
        }
    }

    let mut models = Vec::with_capacity(d);
    for u in 0..d {
        if span_lens[u].is_empty() {
            return Err(CoreError::UnitWithoutOccurrences(u));
        }
        let avg_span: f64 =
            span_lens[u].iter().sum::<usize>() as f64 / span_lens[u].len() as f64;
        let p = clamp_self_loop(1.0 - s as f64 / avg_span);
        let mut states = Vec::with_capacity(s);
        for st in 0..s {
            let gmm_seed = Fingerprint::new("seed-hmm")
                .push_u64(params.seed)
                .push_u64(u as u64)
                .push_u64(st as u64)
                .finish();
            states.push(DiagGmm::fit(
                &state_frames[u][st],
                dim,
                params.n_gauss,
                &floor,
                gmm_seed,
                params.gmm_em_iters,
            )?);
        }
        models.push(GmmHmm {
            unit: u,
            states,
            self_loop: vec![p; s],
        });
    }

    let set = GmmHmmSet {
        models,
        n_states: s,
        n_dims: dim,
        feature_fingerprint: fp,
        unit_loop_logprob: math::ln(1.0 / d as f64),
        meta: TrainMeta::default(),
    };
    set.validate()?;
    Ok(set)
}

/// Aligns the frames of one token to the unit's states: constrained Viterbi
/// from state 0 to the final state, self-loops and advances only. Returns
/// the state index per frame.
fn align_token(fm: &FrameMatrix, model: &GmmHmm, start: usize, end: usize) -> Result<Vec<usize>> {
    let s = model.n_states();
    let len = end - start;
    if len < s {
        return Err(CoreError::TokenTooShort {
            unit: model.unit,
            len,
            states: s,
        });
    }
    let mut prev = vec![f64::NEG_INFINITY; s];
    let mut psi = vec![0u8; len * s];
    prev[0] = model.states[0].log_likelihood(fm.row(start));
    for i in 1..len {
        let frame = fm.row(start + i);
        let mut cur = vec![f64::NEG_INFINITY; s];
        for st in 0..s {
            let stay = prev[st] + model.log_self(st);
            let advance = if st > 0 {
                prev[st - 1] + model.log_advance(st - 1)
            } else {
                f64::NEG_INFINITY
            };
            if stay >= advance {
                cur[st] = stay;
                psi[i * s + st] = st as u8;
            } else {
                cur[st] = advance;
                psi[i * s + st] = (st - 1) as u8;
            }
            cur[st] += model.states[st].log_likelihood(frame);
        }
        prev = cur;
    }
    let mut path = vec![0usize; len];
    path[len - 1] = s - 1;
    for i in (1..len).rev() {
        path[i - 1] = psi[i * s + path[i]] as usize;
    }
    Ok(path)
}

/// Re-estimation on hard transcriptions: re-align each token, refit every
/// state GMM with one EM pass over its assigned frames, and re-estimate the
/// clamped transitions from occupancy counts. A unit with no frames keeps
/// its previous model unchanged.
pub fn reestimate(
    corpus: &[FrameMatrix],
    seqs: &[AsmSequence],
    prev: &GmmHmmSet,
) -> Result<GmmHmmSet> {
    let (dim, fp) = check_corpus(corpus, seqs)?;
    if dim != prev.n_dims || fp != prev.feature_fingerprint {
        return Err(CoreError::FingerprintMismatch {
            expected: prev.feature_fingerprint,
            got: fp,
        });
    }
    let d = prev.n_units();
    let s = prev.n_states;
    let floor = variance_floor(corpus, dim);

    let mut state_frames: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); s]; d];
    let mut stay_counts = vec![0u64; d * s];
    let mut leave_counts = vec![0u64; d * s];
    for (fm, seq) in corpus.iter().zip(seqs) {
        for t in &seq.tokens {
            if t.unit >= d {
                return Err(CoreError::UnitOutOfRange { unit: t.unit, d });
            }
            let path = align_token(fm, &prev.models[t.unit], t.start, t.end)?;
            for (i, &st) in path.iter().enumerate() {
                state_frames[t.unit][st]
                    .extend(fm.row(t.start + i).iter().map(|&v| v as f64));
                if i + 1 < path.len() {
                    if path[i + 1] == st {
                        stay_counts[t.unit * s + st] += 1;
                    } else {
                        leave_counts[t.unit * s + st] += 1;
                    }
                }
            }
            // The token's exit from the final state counts as a leave.
            leave_counts[t.unit * s + (s - 1)] += 1;
        }
    }

    let mut models = Vec::with_capacity(d);
    for u in 0..d {
        let occupied = state_frames[u].iter().any(|f| !f.is_empty());
        if !occupied {
            models.push(prev.models[u].clone());
            continue;
        }
        let mut states = Vec::with_capacity(s);
        let mut self_loop = Vec::with_capacity(s);
        for st in 0..s {
            let frames = &state_frames[u][st];
            if frames.is_empty() {
                states.push(prev.models[u].states[st].clone());
            } else {
                states.push(prev.models[u].states[st].em_step(frames, &floor));
            }
            let stays = stay_counts[u * s + st];
            let leaves = leave_counts[u * s + st];
            let p = if stays + leaves > 0 {
                clamp_self_loop(stays as f64 / (stays + leaves) as f64)
            } else {
                prev.models[u].self_loop[st]
            };
            self_loop.push(p);
        }
        models.push(GmmHmm {
            unit: u,
            states,
            self_loop,
        });
    }

    Ok(GmmHmmSet {
        models,
        n_states: s,
        n_dims: dim,
        feature_fingerprint: fp,
        unit_loop_logprob: prev.unit_loop_logprob,
        meta: prev.meta.clone(),
    })
}

fn frame_labels(seqs: &[AsmSequence]) -> Vec<Vec<usize>> {
    seqs.iter()
        .map(|seq| {
            let mut labels = vec![0usize; seq.total_frames];
            for t in &seq.tokens {
                for l in &mut labels[t.start..t.end] {
                    *l = t.unit;
                }
            }
            labels
        })
        .collect()
}

fn label_stability(prev: &[Vec<usize>], cur: &[Vec<usize>]) -> f64 {
    let mut same = 0usize;
    let mut total = 0usize;
    for (a, b) in prev.iter().zip(cur) {
        total += a.len();
        same += a.iter().zip(b).filter(|(x, y)| x == y).count();
    }
    same as f64 / total as f64
}

/// Decode/re-estimate loop. Converges when the fraction of frames whose unit
/// label is unchanged between successive decodes reaches
/// `stability_threshold`, or after `max_iters` re-estimation cycles.
pub fn train_tokenizer(
    corpus: &[FrameMatrix],
    init_seqs: &[AsmSequence],
    d: usize,
    params: &SeedParams,
    max_iters: usize,
    stability_threshold: f64,
) -> Result<(GmmHmmSet, Vec<AsmSequence>)> {
    let mut models = seed_hmms(corpus, init_seqs, d, params)?;
    let mut prev_labels: Option<Vec<Vec<usize>>> = None;
    let mut history = Vec::new();
    for cycle in 0..max_iters.max(1) {
        let mut seqs = Vec::with_capacity(corpus.len());
        let mut objective = 0.0f64;
        for fm in corpus {
            let decoded = viterbi_decode(fm, &models)?;
            objective += decoded.best_path_loglik;
            seqs.push(decoded.sequence);
        }
        history.push(objective);
        let labels = frame_labels(&seqs);
        let converged = prev_labels
            .as_ref()
            .map(|p| label_stability(p, &labels) >= stability_threshold)
            .unwrap_or(false);
        if converged || cycle + 1 == max_iters.max(1) {
            models.meta = TrainMeta {
                iterations: cycle,
                final_objective: objective,
                objective_history: history,
            };
            return Ok((models, seqs));
        }
        models = reestimate(corpus, &seqs, &models)?;
        prev_labels = Some(labels);
    }
    unreachable!("loop always returns");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm_init::{self, Token};
    use crate::hmm::viterbi_decode;
    use alloc::format;
    use alloc::string::String;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    fn fm_of(id: &str, rows: Vec<f32>, dim: usize) -> FrameMatrix {
        FrameMatrix::new(String::from(id), dim, rows, 0)
    }

    fn seq_of(id: &str, spans: &[(usize, usize, usize)]) -> AsmSequence {
        let tokens: Vec<Token> = spans
            .iter()
            .map(|&(unit, start, end)| Token { unit, start, end })
            .collect();
        AsmSequence {
            utterance_id: String::from(id),
            total_frames: tokens.last().unwrap().end,
            tokens,
        }
    }

    /// Two-unit corpus drawn from distinct Gaussians with planted spans.
    fn planted_corpus(
        seed: u64,
        n_utts: usize,
        means: &[f64],
        sigma: f64,
    ) -> (Vec<FrameMatrix>, Vec<AsmSequence>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = rand_distr::Normal::new(0.0, sigma).unwrap();
        let n_units = means.len();
        let mut corpus = Vec::new();
        let mut seqs = Vec::new();
        for i in 0..n_utts {
            let mut rows = Vec::new();
            let mut spans = Vec::new();
            let mut cursor = 0usize;
            for slot in 0..6 {
                let unit = (slot + i) % n_units;
                let len = rng.random_range(8..14);
                for _ in 0..len {
                    rows.push((means[unit] + normal.sample(&mut rng)) as f32);
                }
                spans.push((unit, cursor, cursor + len));
                cursor += len;
            }
            corpus.push(fm_of(&format!("u{i}"), rows, 1));
            seqs.push(seq_of(&format!("u{i}"), &spans));
        }
        (corpus, seqs)
    }

    fn params(n_states: usize, n_gauss: usize) -> SeedParams {
        SeedParams {
            n_states,
            n_gauss,
            seed: 3,
            gmm_em_iters: 5,
        }
    }

    #[test]
    fn seeding_constant_unit_hits_floor() {
        // Unit 0 frames are constant 2.0; unit 1 varies so the global
        // variance (hence the floor) is positive.
        let rows: Vec<f32> = (0..24)
            .map(|t| if t < 12 { 2.0 } else { (t % 5) as f32 })
            .collect();
        let corpus = [fm_of("c", rows, 1)];
        let seqs = [seq_of("c", &[(0, 0, 12), (1, 12, 24)])];
        let set = seed_hmms(&corpus, &seqs, 2, &params(3, 1)).unwrap();
        let floor = variance_floor(&corpus, 1)[0];
        for st in &set.models[0].states {
            assert!((st.means[0] - 2.0).abs() < 1e-9);
            assert_eq!(st.vars[0], floor);
        }
    }

    #[test]
    fn seeding_recovers_distinct_generators() {
        let (corpus, seqs) = planted_corpus(11, 30, &[0.0, 6.0], 0.4);
        let set = seed_hmms(&corpus, &seqs, 2, &params(3, 1)).unwrap();
        // About 90 spans per unit, ~10 frames each, 3 states: >= 250 frames
        // per state; the state means sit within 3 standard errors.
        let se = 3.0 * 0.4 / (250.0f64).sqrt();
        for st in &set.models[0].states {
            assert!((st.means[0] - 0.0).abs() < 3.0 * se + 0.05, "{}", st.means[0]);
        }
        for st in &set.models[1].states {
            assert!((st.means[0] - 6.0).abs() < 3.0 * se + 0.05, "{}", st.means[0]);
        }
    }

    #[test]
    fn single_gaussian_state_is_sample_mean_var() {
        let rows: Vec<f32> = alloc::vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let corpus = [fm_of("s", rows.clone(), 1)];
        let seqs = [seq_of("s", &[(0, 0, 6)])];
        let set = seed_hmms(&corpus, &seqs, 1, &params(3, 1)).unwrap();
        // State 0 gets frames {1,2}, state 1 {3,4}, state 2 {5,6}.
        for (st, pair) in set.models[0].states.iter().zip([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]) {
            let mean = (pair[0] + pair[1]) / 2.0;
            let var = ((pair[0] - mean) * (pair[0] - mean) + (pair[1] - mean) * (pair[1] - mean)) / 2.0;
            assert!((st.means[0] - mean).abs() < 1e-9);
            assert!((st.vars[0] - var).abs() < 1e-9);
        }
    }

    #[test]
    fn seeding_errors() {
        let (corpus, seqs) = planted_corpus(1, 4, &[0.0, 5.0], 0.3);
        assert!(matches!(
            seed_hmms(&corpus, &seqs, 3, &params(3, 1)),
            Err(CoreError::UnitWithoutOccurrences(2))
        ));
        let short = [fm_of("x", alloc::vec![0.0; 4], 1)];
        let short_seq = [seq_of("x", &[(0, 0, 2), (1, 2, 4)])];
        assert!(matches!(
            seed_hmms(&short, &short_seq, 2, &params(3, 1)),
            Err(CoreError::TokenTooShort { .. })
        ));
    }

    #[test]
    fn reestimate_carries_absent_units_bit_identically() {
        let (corpus, seqs) = planted_corpus(7, 10, &[0.0, 5.0], 0.4);
        let mut set = seed_hmms(&corpus, &seqs, 2, &params(2, 2)).unwrap();
        // Graft a third unit that never occurs in the sequences.
        let ghost = GmmHmm {
            unit: 2,
            states: set.models[0].states.clone(),
            self_loop: set.models[0].self_loop.clone(),
        };
        set.models.push(ghost.clone());
        set.unit_loop_logprob = crate::math::ln(1.0 / 3.0);
        let re = reestimate(&corpus, &seqs, &set).unwrap();
        assert_eq!(re.models[2], ghost);
        assert_ne!(re.models[0], set.models[0]);
    }

    fn sets_close(a: &GmmHmmSet, b: &GmmHmmSet, tol: f64) -> bool {
        a.models.iter().zip(&b.models).all(|(ma, mb)| {
            ma.states.iter().zip(&mb.states).all(|(sa, sb)| {
                sa.means.iter().zip(&sb.means).all(|(x, y)| (x - y).abs() < tol)
                    && sa.vars.iter().zip(&sb.vars).all(|(x, y)| (x - y).abs() < tol)
                    && sa.weights.iter().zip(&sb.weights).all(|(x, y)| (x - y).abs() < tol)
            }) && ma
                .self_loop
                .iter()
                .zip(&mb.self_loop)
                .all(|(x, y)| (x - y).abs() < tol)
        })
    }

    #[test]
    fn reestimate_reaches_fixed_point() {
        let (corpus, seqs) = planted_corpus(5, 12, &[0.0, 6.0], 0.3);
        let mut set = seed_hmms(&corpus, &seqs, 2, &params(3, 1)).unwrap();
        // Iterating re-estimation on fixed transcriptions settles; once two
        // consecutive outputs coincide, a further pass changes nothing.
        let mut settled = None;
        for _ in 0..25 {
            let next = reestimate(&corpus, &seqs, &set).unwrap();
            if sets_close(&set, &next, 1e-9) {
                settled = Some(next);
                break;
            }
            set = next;
        }
        let fixed = settled.expect("re-estimation did not settle in 25 rounds");
        let again = reestimate(&corpus, &seqs, &fixed).unwrap();
        assert!(sets_close(&fixed, &again, 1e-9));
    }

    #[test]
    fn training_objective_is_monotone_and_converges() {
        let (corpus, init_seqs) = planted_corpus(13, 20, &[0.0, 4.0, 8.0], 0.5);
        let (set, seqs) =
            train_tokenizer(&corpus, &init_seqs, 3, &params(3, 1), 10, 0.995).unwrap();
        let hist = &set.meta.objective_history;
        assert!(hist.len() >= 2, "history {hist:?}");
        for w in hist.windows(2) {
            assert!(w[1] >= w[0] - 1e-6, "objective fell: {} -> {}", w[0], w[1]);
        }
        assert!(set.meta.iterations <= 10);
        assert_eq!(seqs.len(), corpus.len());
        for seq in &seqs {
            seq.validate(3).unwrap();
        }
    }

    #[test]
    fn training_stops_quickly_at_fixed_point() {
        // Noise-free, perfectly separated data: the first decode already
        // reproduces itself, so training converges after one cycle.
        let (corpus, init_seqs) = planted_corpus(17, 8, &[0.0, 10.0], 0.01);
        let (set, _) = train_tokenizer(&corpus, &init_seqs, 2, &params(2, 1), 10, 0.995).unwrap();
        assert_eq!(set.meta.iterations, 1);
    }

    #[test]
    fn training_recovers_planted_boundaries() {
        let (corpus, truth) = planted_corpus(23, 20, &[0.0, 5.0, 10.0], 0.4);
        // Initial sequences from the standard fixed-length segmentation via
        // k-means, not from the truth.
        // Six 8-frame segments always fit the shortest utterance (6 spans of
        // at least 8 frames), so no clamped tail falls below n_states.
        let (pooled, dim) = asm_init::pool_segment_means(&corpus, 6, 8).unwrap();
        let inv = asm_init::kmeans_fit(&pooled, dim, 3, 9, 0).unwrap();
        let init: Vec<AsmSequence> = corpus
            .iter()
            .map(|fm| asm_init::tokenize_initial(fm, &inv, 6, 8).unwrap())
            .collect();
        let (set, decoded) = train_tokenizer(&corpus, &init, 3, &params(2, 1), 10, 0.999).unwrap();

        // Map discovered units onto planted units by decoded-frame overlap.
        let mut overlap = [[0usize; 3]; 3];
        for (seq, gt) in decoded.iter().zip(&truth) {
            let mut gt_frame = alloc::vec![0usize; gt.total_frames];
            for t in &gt.tokens {
                for f in t.start..t.end {
                    gt_frame[f] = t.unit;
                }
            }
            for t in &seq.tokens {
                for f in t.start..t.end.min(gt.total_frames) {
                    overlap[t.unit][gt_frame[f]] += 1;
                }
            }
        }
        let mapping: Vec<usize> = (0..3)
            .map(|u| (0..3).max_by_key(|&g| overlap[u][g]).unwrap())
            .collect();

        // At least 90% of planted boundaries are recovered within 2 frames.
        let mut hits = 0usize;
        let mut total = 0usize;
        for (seq, gt) in decoded.iter().zip(&truth) {
            let decoded_bounds: Vec<usize> = seq.tokens.iter().map(|t| t.start).collect();
            for t in gt.tokens.iter().skip(1) {
                total += 1;
                if decoded_bounds
                    .iter()
                    .any(|&b| b.abs_diff(t.start) <= 2)
                {
                    hits += 1;
                }
            }
        }
        assert!(
            hits as f64 >= 0.9 * total as f64,
            "boundary recovery {hits}/{total}"
        );

        // And the frame labels agree through the mapping on >= 90% of frames.
        let mut same = 0usize;
        let mut frames = 0usize;
        for (seq, gt) in decoded.iter().zip(&truth) {
            let mut gt_frame = alloc::vec![0usize; gt.total_frames];
            for t in &gt.tokens {
                for f in t.start..t.end {
                    gt_frame[f] = t.unit;
                }
            }
            for t in &seq.tokens {
                for f in t.start..t.end {
                    frames += 1;
                    if mapping[t.unit] == gt_frame[f] {
                        same += 1;
                    }
                }
            }
        }
        assert!(same as f64 >= 0.9 * frames as f64, "label agreement {same}/{frames}");

        // Decoding the corpus again with the returned models reproduces the
        // returned sequences (the pair is consistent).
        for (fm, seq) in corpus.iter().zip(&decoded) {
            let again = viterbi_decode(fm, &set).unwrap();
            assert_eq!(&again.sequence, seq);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let (corpus, init_seqs) = planted_corpus(31, 10, &[0.0, 5.0], 0.4);
        let a = train_tokenizer(&corpus, &init_seqs, 2, &params(2, 2), 6, 0.995).unwrap();
        let b = train_tokenizer(&corpus, &init_seqs, 2, &params(2, 2), 6, 0.995).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
