//! Stop-unit detection: retrieval-style statistics over tokenized corpora.
//!
//! Four scores rank the inventory by indexing power. MP is the mean
//! per-utterance probability of a unit, IDF the smoothed inverse document
//! frequency, VP the population variance of the per-utterance probability,
//! and SAT the ratio MP / sqrt(VP). Units that occur frequently and uniformly
//! across utterances score as stop units.

use alloc::vec;
use alloc::vec::Vec;

use crate::asm_init::AsmSequence;
use crate::error::CoreError;
use crate::math;
use crate::Result;

pub const DEFAULT_TOP_P: usize = 3;
pub const SAT_EPS: f64 = 1e-12;

/// Token-count statistics over a training corpus.
#[derive(Debug, Clone)]
pub struct TokenStats {
    pub n_utterances: usize,
    pub d: usize,
    /// N x D row-major; row i is the unit distribution of utterance i.
    pub p_matrix: Vec<f64>,
    /// Number of utterances containing each unit.
    pub doc_freq: Vec<u32>,
    /// Total token occurrences per unit.
    pub occ_count: Vec<u64>,
}

impl TokenStats {
    pub fn p(&self, utterance: usize, unit: usize) -> f64 {
        self.p_matrix[utterance * self.d + unit]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Mp,
    Idf,
    Vp,
    Sat,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Mp, Metric::Idf, Metric::Vp, Metric::Sat];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Mp => "mp",
            Metric::Idf => "idf",
            Metric::Vp => "vp",
            Metric::Sat => "sat",
        }
    }

    pub fn parse(s: &str) -> Result<Metric> {
        match s {
            "mp" => Ok(Metric::Mp),
            "idf" => Ok(Metric::Idf),
            "vp" => Ok(Metric::Vp),
            "sat" => Ok(Metric::Sat),
            other => Err(CoreError::InvalidConfig(alloc::format!(
                "unknown metric `{other}` (expected mp, idf, vp, or sat)"
            ))),
        }
    }

    /// Stop units score high on MP and SAT, low on IDF and VP.
    pub fn stop_direction_descending(&self) -> bool {
        matches!(self, Metric::Mp | Metric::Sat)
    }
}

/// How `N_j` in the IDF formula is counted. Document frequency is the
/// standard reading; raw occurrence counts are the literal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdfCounts {
    DocFreq,
    Occurrences,
}

/// Per-metric scores with the selected top-P stop units.
#[derive(Debug, Clone, PartialEq)]
pub struct StopAsmSet {
    pub metric: Metric,
    pub scores: Vec<f64>,
    /// Ordered best-first; `selected.len() == p`.
    pub selected: Vec<usize>,
    pub p: usize,
}

impl StopAsmSet {
    pub fn empty(metric: Metric, d: usize) -> Self {
        StopAsmSet {
            metric,
            scores: vec![0.0; d],
            selected: Vec::new(),
            p: 0,
        }
    }

    pub fn is_stop(&self, unit: usize) -> bool {
        self.selected.contains(&unit)
    }
}

/// Counts tokens across the corpus.
pub fn collect_stats(seqs: &[AsmSequence], d: usize) -> Result<TokenStats> {
    if seqs.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }
    let n = seqs.len();
    let mut p_matrix = vec![0.0f64; n * d];
    let mut doc_freq = vec![0u32; d];
    let mut occ_count = vec![0u64; d];
    for (i, seq) in seqs.iter().enumerate() {
        if seq.tokens.is_empty() {
            return Err(CoreError::EmptyUtterance(seq.utterance_id.clone()));
        }
        let mut counts = vec![0u64; d];
        for t in &seq.tokens {
            if t.unit >= d {
                return Err(CoreError::UnitOutOfRange { unit: t.unit, d });
            }
            counts[t.unit] += 1;
        }
        let total = seq.tokens.len() as f64;
        for j in 0..d {
            p_matrix[i * d + j] = counts[j] as f64 / total;
            occ_count[j] += counts[j];
            if counts[j] > 0 {
                doc_freq[j] += 1;
            }
        }
    }
    Ok(TokenStats {
        n_utterances: n,
        d,
        p_matrix,
        doc_freq,
        occ_count,
    })
}

/// MP(M_j) = sum_i P[i][j] / N
pub fn score_mp(stats: &TokenStats) -> Vec<f64> {
    let n = stats.n_utterances as f64;
    (0..stats.d)
        .map(|j| (0..stats.n_utterances).map(|i| stats.p(i, j)).sum::<f64>() / n)
        .collect()
}

/// IDF(M_j) = ln((N + 1) / (N_j + 1)) with N_j the document frequency.
pub fn score_idf(stats: &TokenStats) -> Vec<f64> {
    score_idf_with(stats, IdfCounts::DocFreq)
}

pub fn score_idf_with(stats: &TokenStats, counts: IdfCounts) -> Vec<f64> {
    let n = stats.n_utterances as f64;
    (0..stats.d)
        .map(|j| {
            let nj = match counts {
                IdfCounts::DocFreq => stats.doc_freq[j] as f64,
                IdfCounts::Occurrences => stats.occ_count[j] as f64,
            };
            math::ln((n + 1.0) / (nj + 1.0))
        })
        .collect()
}

/// VP(M_j) = sum_i (P[i][j] - MP(M_j))^2 / N, the population variance.
pub fn score_vp(stats: &TokenStats) -> Vec<f64> {
    let n = stats.n_utterances as f64;
    let mp = score_mp(stats);
    (0..stats.d)
        .map(|j| {
            (0..stats.n_utterances)
                .map(|i| {
                    let diff = stats.p(i, j) - mp[j];
                    diff * diff
                })
                .sum::<f64>()
                / n
        })
        .collect()
}

/// SAT(M_j) = MP(M_j) / max(sqrt(VP(M_j)), eps)
pub fn score_sat(stats: &TokenStats, eps: f64) -> Vec<f64> {
    let mp = score_mp(stats);
    let vp = score_vp(stats);
    mp.iter()
        .zip(&vp)
        .map(|(&m, &v)| m / math::sqrt(v).max(eps))
        .collect()
}

pub fn score_metric(stats: &TokenStats, metric: Metric) -> Vec<f64> {
    match metric {
        Metric::Mp => score_mp(stats),
        Metric::Idf => score_idf(stats),
        Metric::Vp => score_vp(stats),
        Metric::Sat => score_sat(stats, SAT_EPS),
    }
}

/// Top-P stop units for a metric: highest MP or SAT, lowest IDF or VP.
/// Ties break toward the lower unit id.
pub fn select_stop_asms(scores: &[f64], metric: Metric, p: usize) -> Result<StopAsmSet> {
    let d = scores.len();
    if p > d {
        return Err(CoreError::TopPExceedsUnits { p, d });
    }
    let mut order: Vec<usize> = (0..d).collect();
    let descending = metric.stop_direction_descending();
    order.sort_by(|&a, &b| {
        let cmp = scores[a].partial_cmp(&scores[b]).expect("finite scores");
        let cmp = if descending { cmp.reverse() } else { cmp };
        cmp.then(a.cmp(&b))
    });
    Ok(StopAsmSet {
        metric,
        scores: scores.to_vec(),
        selected: order[..p].to_vec(),
        p,
    })
}

/// Convenience: stats -> scores -> selection.
pub fn detect(seqs: &[AsmSequence], d: usize, metric: Metric, p: usize) -> Result<StopAsmSet> {
    let stats = collect_stats(seqs, d)?;
    select_stop_asms(&score_metric(&stats, metric), metric, p)
}
