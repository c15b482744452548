//! Segment-level scene classifier with per-utterance majority voting.
//!
//! The reference model is a multinomial softmax regression over masked-mean
//! pooled segment features, standardized with training-set statistics. The
//! scoring surface is the `SegmentScorer` trait so a stronger back-end can be
//! swapped in without touching the voting or evaluation code.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::math;
use crate::selection::{Segment, SegmentBatch};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneLabel {
    pub id: usize,
    pub name: String,
}

/// Posterior scores for one segment.
pub trait SegmentScorer {
    fn n_classes(&self) -> usize;
    fn score_segment(&self, segment: &Segment, n_dims: usize) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 60,
            learning_rate: 0.5,
            batch_size: 64,
            seed: 17,
        }
    }
}

/// Multinomial softmax regression over pooled segment features.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentClassifier {
    pub classes: Vec<String>,
    pub n_dims: usize,
    /// C x F row-major.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub feat_mean: Vec<f64>,
    pub feat_std: Vec<f64>,
    pub final_loss: f64,
    pub train_config: TrainConfig,
}

impl SegmentClassifier {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn label(&self, id: usize) -> SceneLabel {
        SceneLabel {
            id,
            name: self.classes[id].clone(),
        }
    }

    fn posteriors_from_features(&self, x: &[f64]) -> Vec<f64> {
        let c = self.n_classes();
        let f = self.n_dims;
        let mut logits = vec![0.0f64; c];
        for k in 0..c {
            let mut z = self.bias[k];
            for j in 0..f {
                let xs = (x[j] - self.feat_mean[j]) / self.feat_std[j];
                z += self.weights[k * f + j] * xs;
            }
            logits[k] = z;
        }
        softmax(&logits)
    }
}

impl SegmentScorer for SegmentClassifier {
    fn n_classes(&self) -> usize {
        self.classes.len()
    }

    fn score_segment(&self, segment: &Segment, n_dims: usize) -> Vec<f64> {
        debug_assert_eq!(n_dims, self.n_dims);
        self.posteriors_from_features(&pool_segment(segment, n_dims))
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| math::exp(z - m)).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / total).collect()
}

/// Mean over the real (unpadded) frames only.
pub fn pool_segment(segment: &Segment, n_dims: usize) -> Vec<f64> {
    assert!(segment.real_len > 0, "segment with no real frames");
    let mut acc = vec![0.0f64; n_dims];
    for t in 0..segment.real_len {
        for (a, &x) in acc
            .iter_mut()
            .zip(&segment.data[t * n_dims..(t + 1) * n_dims])
        {
            *a += x as f64;
        }
    }
    let n = segment.real_len as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    acc
}

/// Cross-entropy loss and gradients of a softmax regression on standardized
/// features, averaged over the given rows. Exposed for the gradient check.
pub fn softmax_loss_grad(
    weights: &[f64],
    bias: &[f64],
    features: &[f64],
    labels: &[usize],
    n_classes: usize,
    n_dims: usize,
) -> (f64, Vec<f64>, Vec<f64>) {
    let n = labels.len();
    let mut loss = 0.0f64;
    let mut grad_w = vec![0.0f64; n_classes * n_dims];
    let mut grad_b = vec![0.0f64; n_classes];
    for (i, &label) in labels.iter().enumerate() {
        let x = &features[i * n_dims..(i + 1) * n_dims];
        let mut logits = vec![0.0f64; n_classes];
        for k in 0..n_classes {
            let mut z = bias[k];
            for j in 0..n_dims {
                z += weights[k * n_dims + j] * x[j];
            }
            logits[k] = z;
        }
        let p = softmax(&logits);
        loss -= math::ln(p[label].max(1e-300));
        for k in 0..n_classes {
            let err = p[k] - if k == label { 1.0 } else { 0.0 };
            grad_b[k] += err;
            for j in 0..n_dims {
                grad_w[k * n_dims + j] += err * x[j];
            }
        }
    }
    let scale = 1.0 / n as f64;
    loss *= scale;
    grad_w.iter_mut().for_each(|g| *g *= scale);
    grad_b.iter_mut().for_each(|g| *g *= scale);
    (loss, grad_w, grad_b)
}

/// Trains the reference classifier with mini-batch gradient descent.
pub fn train_classifier(
    batches: &[SegmentBatch],
    labels: &[usize],
    classes: &[String],
    cfg: &TrainConfig,
) -> Result<SegmentClassifier> {
    if batches.is_empty() || batches.len() != labels.len() {
        return Err(CoreError::CorpusMismatch(
            "segment batches and labels differ in length".into(),
        ));
    }
    let n_classes = classes.len();
    let n_dims = batches[0].n_dims;

    let mut feats = Vec::new();
    let mut seg_labels = Vec::new();
    for (batch, &label) in batches.iter().zip(labels) {
        if label >= n_classes {
            return Err(CoreError::UnknownLabel(alloc::format!("{label}")));
        }
        for seg in &batch.segments {
            feats.extend(pool_segment(seg, n_dims));
            seg_labels.push(label);
        }
    }
    let n = seg_labels.len();
    let mut per_class = vec![0usize; n_classes];
    for &l in &seg_labels {
        per_class[l] += 1;
    }
    if let Some(empty) = per_class.iter().position(|&c| c == 0) {
        return Err(CoreError::ClassWithoutSegments(empty));
    }

    // Standardize with training statistics; the floor keeps constant
    // dimensions from dividing by zero.
    let (feat_mean, var) = mean_var_f64(&feats, n_dims);
    let feat_std: Vec<f64> = var.iter().map(|&v| math::sqrt(v).max(1e-8)).collect();
    for row in feats.chunks_exact_mut(n_dims) {
        for j in 0..n_dims {
            row[j] = (row[j] - feat_mean[j]) / feat_std[j];
        }
    }

    let mut weights = vec![0.0f64; n_classes * n_dims];
    let mut bias = vec![0.0f64; n_classes];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut final_loss = 0.0;
    for _ in 0..cfg.epochs {
        // Fisher-Yates shuffle, deterministic with the seed.
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let mut epoch_loss = 0.0;
        let mut n_batches = 0usize;
        for chunk in order.chunks(cfg.batch_size.max(1)) {
            let mut bf = Vec::with_capacity(chunk.len() * n_dims);
            let mut bl = Vec::with_capacity(chunk.len());
            for &i in chunk {
                bf.extend_from_slice(&feats[i * n_dims..(i + 1) * n_dims]);
                bl.push(seg_labels[i]);
            }
            let (loss, gw, gb) = softmax_loss_grad(&weights, &bias, &bf, &bl, n_classes, n_dims);
            for (w, g) in weights.iter_mut().zip(&gw) {
                *w -= cfg.learning_rate * g;
            }
            for (b, g) in bias.iter_mut().zip(&gb) {
                *b -= cfg.learning_rate * g;
            }
            epoch_loss += loss;
            n_batches += 1;
        }
        final_loss = epoch_loss / n_batches as f64;
    }

    Ok(SegmentClassifier {
        classes: classes.to_vec(),
        n_dims,
        weights,
        bias,
        feat_mean,
        feat_std,
        final_loss,
        train_config: cfg.clone(),
    })
}

fn mean_var_f64(data: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = data.len() / dim;
    let mut mean = vec![0.0f64; dim];
    for row in data.chunks_exact(dim) {
        for j in 0..dim {
            mean[j] += row[j];
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut var = vec![0.0f64; dim];
    for row in data.chunks_exact(dim) {
        for j in 0..dim {
            let d = row[j] - mean[j];
            var[j] += d * d;
        }
    }
    var.iter_mut().for_each(|v| *v /= n as f64);
    (mean, var)
}

/// Majority vote over per-segment argmax labels. Vote ties break toward the
/// class with the highest posterior summed over all segments, then toward
/// the lower class id; per-segment argmax ties take the lower class id.
pub fn classify_utterance<S: SegmentScorer>(
    batch: &SegmentBatch,
    model: &S,
) -> Result<(usize, Vec<usize>)> {
    if batch.segments.is_empty() {
        return Err(CoreError::EmptyBatch(batch.utterance_id.clone()));
    }
    let c = model.n_classes();
    let mut votes = vec![0usize; c];
    let mut posterior_sum = vec![0.0f64; c];
    let mut seg_labels = Vec::with_capacity(batch.segments.len());
    for seg in &batch.segments {
        let p = model.score_segment(seg, batch.n_dims);
        let mut best = 0usize;
        for k in 1..c {
            if p[k] > p[best] {
                best = k;
            }
        }
        votes[best] += 1;
        for k in 0..c {
            posterior_sum[k] += p[k];
        }
        seg_labels.push(best);
    }
    let top = *votes.iter().max().unwrap();
    let mut winner = None;
    for k in 0..c {
        if votes[k] == top {
            winner = match winner {
                None => Some(k),
                Some(w) if posterior_sum[k] > posterior_sum[w] => Some(k),
                w => w,
            };
        }
    }
    Ok((winner.unwrap(), seg_labels))
}

/// Utterance-level evaluation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub n_classes: usize,
    pub n_total: usize,
    pub n_correct: usize,
    /// Row = true class, column = predicted class.
    pub confusion: Vec<u32>,
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        self.n_correct as f64 / self.n_total as f64
    }

    pub fn class_total(&self, class: usize) -> u32 {
        (0..self.n_classes)
            .map(|p| self.confusion[class * self.n_classes + p])
            .sum()
    }

    pub fn class_accuracy(&self, class: usize) -> f64 {
        let total = self.class_total(class);
        if total == 0 {
            return 0.0;
        }
        self.confusion[class * self.n_classes + class] as f64 / total as f64
    }
}

/// Scores every utterance and tallies the confusion matrix.
pub fn evaluate<S: SegmentScorer>(
    batches: &[SegmentBatch],
    labels: &[usize],
    model: &S,
) -> Result<EvalReport> {
    if batches.is_empty() || batches.len() != labels.len() {
        return Err(CoreError::CorpusMismatch(
            "batches and labels differ in length".into(),
        ));
    }
    let c = model.n_classes();
    let mut confusion = vec![0u32; c * c];
    let mut correct = 0usize;
    for (batch, &label) in batches.iter().zip(labels) {
        if label >= c {
            return Err(CoreError::UnknownLabel(alloc::format!("{label}")));
        }
        let (pred, _) = classify_utterance(batch, model)?;
        confusion[label * c + pred] += 1;
        if pred == label {
            correct += 1;
        }
    }
    Ok(EvalReport {
        n_classes: c,
        n_total: batches.len(),
        n_correct: correct,
        confusion,
    })
}
