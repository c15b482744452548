//! Initial acoustic unit inventory and fixed-length tokenization.
//!
//! Utterances are chopped into fixed-length segments, each segment is reduced
//! to its frame mean, the pooled means are clustered with K-means, and the
//! resulting centroids map every utterance to an initial unit sequence.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::features::FrameMatrix;
use crate::Result;

pub const DEFAULT_N_SEGMENTS: usize = 50;
pub const DEFAULT_SEG_LEN: usize = 20;
pub const DEFAULT_INVENTORY_SIZE: usize = 64;

/// Half-open frame span `[start, end)`.
pub type Span = (usize, usize);

/// The universal unit set: D centroids in feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct AsmInventory {
    pub n_dims: usize,
    /// D x F row-major.
    pub centroids: Vec<f32>,
    /// Fingerprint of the feature configuration the centroids were fit on.
    pub feature_fingerprint: u64,
    pub rng_seed: u64,
}

impl AsmInventory {
    pub fn size(&self) -> usize {
        self.centroids.len() / self.n_dims
    }

    pub fn centroid(&self, unit: usize) -> &[f32] {
        &self.centroids[unit * self.n_dims..(unit + 1) * self.n_dims]
    }

    pub fn validate(&self) -> Result<()> {
        if self.size() < 2 {
            return Err(CoreError::InvalidConfig(
                "inventory must hold at least 2 units".into(),
            ));
        }
        if self.centroids.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("inventory centroids"));
        }
        Ok(())
    }
}

/// One token: a unit id over a half-open frame span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub unit: usize,
    pub start: usize,
    pub end: usize,
}

/// Ordered tokens partitioning the covered frame range of one utterance.
#[derive(Debug, Clone, PartialEq)]
pub struct AsmSequence {
    pub utterance_id: String,
    pub tokens: Vec<Token>,
    /// Frames covered by the tokens. For fixed segmentation this can be less
    /// than the utterance length: trailing frames beyond
    /// `n_segments * seg_len` are never tokenized.
    pub total_frames: usize,
}

impl AsmSequence {
    pub fn validate(&self, d: usize) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(CoreError::EmptyUtterance(self.utterance_id.clone()));
        }
        let mut cursor = 0usize;
        for t in &self.tokens {
            if t.start != cursor || t.end <= t.start {
                return Err(CoreError::SequenceMismatch(self.utterance_id.clone()));
            }
            if t.unit >= d {
                return Err(CoreError::UnitOutOfRange { unit: t.unit, d });
            }
            cursor = t.end;
        }
        if cursor != self.total_frames {
            return Err(CoreError::SequenceMismatch(self.utterance_id.clone()));
        }
        Ok(())
    }
}

/// Consecutive spans of `seg_len` frames from frame 0.
///
/// Short utterances clamp the final span to `n_frames` and drop spans that
/// would start past the end; long utterances ignore frames beyond
/// `n_segments * seg_len`.
pub fn fixed_segment(n_frames: usize, n_segments: usize, seg_len: usize) -> Result<Vec<Span>> {
    if n_frames == 0 {
        return Err(CoreError::EmptySpan);
    }
    if n_segments == 0 || seg_len == 0 {
        return Err(CoreError::InvalidConfig(
            "n_segments and seg_len must be positive".into(),
        ));
    }
    let mut spans = Vec::with_capacity(n_segments);
    for s in 0..n_segments {
        let start = s * seg_len;
        if start >= n_frames {
            break;
        }
        spans.push((start, (start + seg_len).min(n_frames)));
    }
    Ok(spans)
}

/// Arithmetic mean vector per span, row-major `spans.len() x F`.
pub fn segment_means(fm: &FrameMatrix, spans: &[Span]) -> Result<Vec<f64>> {
    let dim = fm.n_dims;
    let mut out = Vec::with_capacity(spans.len() * dim);
    for &(start, end) in spans {
        if end <= start || end > fm.n_frames() {
            return Err(CoreError::EmptySpan);
        }
        let mut acc = vec![0.0f64; dim];
        for t in start..end {
            for (a, &x) in acc.iter_mut().zip(fm.row(t)) {
                *a += x as f64;
            }
        }
        let n = (end - start) as f64;
        out.extend(acc.iter().map(|a| a / n));
    }
    Ok(out)
}

/// Result of one K-means fit.
#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// k x F row-major.
    pub centroids: Vec<f64>,
    pub assignments: Vec<usize>,
    /// Sum of squared distances to the assigned centroid, once per iteration.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
}

/// Lloyd's algorithm with k-means++ initialization.
///
/// Ties in assignment go to the lowest centroid index; empty clusters are
/// re-seeded from the point farthest from its assigned centroid. Stops when
/// the max-norm centroid shift falls below `tol`.
pub fn kmeans(
    points: &[f64],
    dim: usize,
    k: usize,
    seed: u64,
    max_iters: usize,
    tol: f64,
) -> Result<KMeansResult> {
    let m = points.len() / dim;
    if m < k {
        return Err(CoreError::TooFewPoints {
            points: m,
            clusters: k,
        });
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite("kmeans input"));
    }
    let point = |i: usize| &points[i * dim..(i + 1) * dim];
    let d2 = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = vec![0.0f64; k * dim];

    // k-means++ seeding.
    let first = rng.random_range(0..m);
    centroids[..dim].copy_from_slice(point(first));
    let mut min_d2 = vec![0.0f64; m];
    for i in 0..m {
        min_d2[i] = d2(point(i), &centroids[..dim]);
    }
    for c in 1..k {
        let total: f64 = min_d2.iter().sum();
        let chosen = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut idx = m - 1;
            for (i, &w) in min_d2.iter().enumerate() {
                if r < w {
                    idx = i;
                    break;
                }
                r -= w;
            }
            idx
        } else {
            rng.random_range(0..m)
        };
        let row = c * dim;
        let src: Vec<f64> = point(chosen).to_vec();
        centroids[row..row + dim].copy_from_slice(&src);
        for i in 0..m {
            min_d2[i] = min_d2[i].min(d2(point(i), &centroids[row..row + dim]));
        }
    }

    let mut assignments = vec![0usize; m];
    let mut inertia_history = Vec::new();
    let mut iterations = 0;
    for _ in 0..max_iters {
        iterations += 1;
        // Assignment.
        let mut inertia = 0.0;
        let mut dist = vec![0.0f64; m];
        for i in 0..m {
            let mut best = 0usize;
            let mut best_d = d2(point(i), &centroids[..dim]);
            for c in 1..k {
                let d = d2(point(i), &centroids[c * dim..(c + 1) * dim]);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            assignments[i] = best;
            dist[i] = best_d;
            inertia += best_d;
        }
        inertia_history.push(inertia);

        // Update.
        let mut sums = vec![0.0f64; k * dim];
        let mut counts = vec![0usize; k];
        for i in 0..m {
            let c = assignments[i];
            counts[c] += 1;
            for (s, &x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(point(i)) {
                *s += x;
            }
        }
        let mut new_centroids = centroids.clone();
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..dim {
                    new_centroids[c * dim + j] = sums[c * dim + j] / counts[c] as f64;
                }
            }
        }
        // Re-seed empties from the farthest point, excluding points already
        // taken by another empty cluster this round.
        let mut taken = dist;
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..m)
                    .max_by(|&a, &b| taken[a].partial_cmp(&taken[b]).unwrap())
                    .unwrap();
                let src: Vec<f64> = point(far).to_vec();
                new_centroids[c * dim..(c + 1) * dim].copy_from_slice(&src);
                taken[far] = -1.0;
            }
        }

        let shift = centroids
            .iter()
            .zip(&new_centroids)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        centroids = new_centroids;
        if shift < tol {
            break;
        }
    }

    // Final assignment against the converged centroids.
    for i in 0..m {
        let mut best = 0usize;
        let mut best_d = d2(point(i), &centroids[..dim]);
        for c in 1..k {
            let d = d2(point(i), &centroids[c * dim..(c + 1) * dim]);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        assignments[i] = best;
    }

    Ok(KMeansResult {
        centroids,
        assignments,
        inertia_history,
        iterations,
    })
}

/// Fits the unit inventory on pooled segment means.
pub fn kmeans_fit(
    vectors: &[f64],
    dim: usize,
    d: usize,
    seed: u64,
    feature_fingerprint: u64,
) -> Result<AsmInventory> {
    let fit = kmeans(vectors, dim, d, seed, 100, 1e-6)?;
    Ok(AsmInventory {
        n_dims: dim,
        centroids: fit.centroids.iter().map(|&v| v as f32).collect(),
        feature_fingerprint,
        rng_seed: seed,
    })
}

/// Nearest centroid for a span-mean vector; ties go to the lowest unit id.
pub fn nearest_unit(inv: &AsmInventory, mean: &[f64]) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for u in 0..inv.size() {
        let c = inv.centroid(u);
        let d: f64 = mean
            .iter()
            .zip(c)
            .map(|(&x, &y)| (x - y as f64) * (x - y as f64))
            .sum();
        if d < best_d {
            best_d = d;
            best = u;
        }
    }
    best
}

/// Maps an utterance to its initial fixed-length unit sequence.
pub fn tokenize_initial(
    fm: &FrameMatrix,
    inv: &AsmInventory,
    n_segments: usize,
    seg_len: usize,
) -> Result<AsmSequence> {
    if fm.fingerprint != inv.feature_fingerprint {
        return Err(CoreError::FingerprintMismatch {
            expected: inv.feature_fingerprint,
            got: fm.fingerprint,
        });
    }
    if fm.n_dims != inv.n_dims {
        return Err(CoreError::InvalidConfig(
            "frame and inventory dimensionality differ".into(),
        ));
    }
    let spans = fixed_segment(fm.n_frames(), n_segments, seg_len)?;
    let means = segment_means(fm, &spans)?;
    let dim = fm.n_dims;
    let tokens: Vec<Token> = spans
        .iter()
        .enumerate()
        .map(|(i, &(start, end))| Token {
            unit: nearest_unit(inv, &means[i * dim..(i + 1) * dim]),
            start,
            end,
        })
        .collect();
    let total_frames = tokens.last().map_or(0, |t| t.end);
    Ok(AsmSequence {
        utterance_id: fm.utterance_id.clone(),
        tokens,
        total_frames,
    })
}

/// Pools fixed-segment means over a corpus, the K-means training set.
pub fn pool_segment_means(
    corpus: &[FrameMatrix],
    n_segments: usize,
    seg_len: usize,
) -> Result<(Vec<f64>, usize)> {
    if corpus.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let dim = corpus[0].n_dims;
    let mut pooled = Vec::new();
    for fm in corpus {
        if fm.n_dims != dim {
            return Err(CoreError::CorpusMismatch(fm.utterance_id.clone()));
        }
        let spans = fixed_segment(fm.n_frames(), n_segments, seg_len)?;
        pooled.extend(segment_means(fm, &spans)?);
    }
    Ok((pooled, dim))
}
