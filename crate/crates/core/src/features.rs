//! Frame-level feature extraction: log-mel filterbank energies and MFCCs.
//!
//! Frames are Hann-windowed, zero-padded to `n_fft`, taken to a power
//! spectrum, and passed through a triangular mel filterbank spanning 0 to
//! Nyquist. MFCC additionally applies an orthonormal DCT-II and keeps the
//! leading coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::fingerprint::Fingerprint;
use crate::math;
use crate::Result;

/// Decoded PCM audio, samples normalized to [-1, 1].
#[derive(Debug, Clone)]
pub struct Waveform {
    /// One or two channels of equal length.
    pub channels: Vec<Vec<f32>>,
    pub sample_rate: u32,
}

impl Waveform {
    pub fn mono(samples: Vec<f32>, sample_rate: u32) -> Self {
        Waveform {
            channels: vec![samples],
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_rate == 0 {
            return Err(CoreError::InvalidConfig("sample_rate must be > 0".into()));
        }
        if self.channels.is_empty() || self.channels.len() > 2 {
            return Err(CoreError::InvalidConfig(
                "waveform must have 1 or 2 channels".into(),
            ));
        }
        let len = self.channels[0].len();
        for ch in &self.channels {
            if ch.len() != len {
                return Err(CoreError::InvalidConfig(
                    "channel lengths differ".into(),
                ));
            }
            if ch.iter().any(|s| !s.is_finite()) {
                return Err(CoreError::NonFinite("waveform samples"));
            }
        }
        Ok(())
    }
}

/// Per-sample arithmetic mean of the channels; identity for mono input.
pub fn downmix(w: &Waveform) -> Waveform {
    if w.channels.len() == 1 {
        return w.clone();
    }
    let (l, r) = (&w.channels[0], &w.channels[1]);
    let mixed = l
        .iter()
        .zip(r)
        .map(|(&a, &b)| ((a as f64 + b as f64) * 0.5) as f32)
        .collect();
    Waveform::mono(mixed, w.sample_rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Lmfb,
    Mfcc,
}

impl FeatureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureKind::Lmfb => "lmfb",
            FeatureKind::Mfcc => "mfcc",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeatureConfig {
    /// FFT length in samples; must be a power of two and at least one window.
    pub n_fft: usize,
    pub window_ms: u32,
    pub hop_ms: u32,
    pub n_mels: usize,
    /// Mel energies are floored at this value before the log.
    pub log_floor: f64,
    pub feature_kind: FeatureKind,
    /// Cepstral coefficients kept when `feature_kind` is MFCC.
    pub n_ceps: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            n_fft: 2048,
            window_ms: 25,
            hop_ms: 10,
            n_mels: 128,
            log_floor: 1e-10,
            feature_kind: FeatureKind::Lmfb,
            n_ceps: 20,
        }
    }
}

impl FeatureConfig {
    pub fn window_samples(&self, sample_rate: u32) -> usize {
        (self.window_ms as usize * sample_rate as usize) / 1000
    }

    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        (self.hop_ms as usize * sample_rate as usize) / 1000
    }

    /// Output dimensionality per frame.
    pub fn feature_dim(&self) -> usize {
        match self.feature_kind {
            FeatureKind::Lmfb => self.n_mels,
            FeatureKind::Mfcc => self.n_ceps,
        }
    }

    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        if !self.n_fft.is_power_of_two() {
            return Err(CoreError::InvalidConfig(
                "n_fft must be a power of two".into(),
            ));
        }
        let win = self.window_samples(sample_rate);
        if win == 0 {
            return Err(CoreError::InvalidConfig("window length is zero".into()));
        }
        if self.n_fft < win {
            return Err(CoreError::InvalidConfig(
                "n_fft must be at least the window length in samples".into(),
            ));
        }
        if self.hop_ms == 0 || self.hop_ms > self.window_ms {
            return Err(CoreError::InvalidConfig(
                "hop must be positive and no longer than the window".into(),
            ));
        }
        if self.n_mels == 0 {
            return Err(CoreError::InvalidConfig("n_mels must be positive".into()));
        }
        if !(self.log_floor > 0.0) {
            return Err(CoreError::InvalidConfig("log_floor must be > 0".into()));
        }
        if self.feature_kind == FeatureKind::Mfcc && (self.n_ceps == 0 || self.n_ceps > self.n_mels)
        {
            return Err(CoreError::InvalidConfig(
                "n_ceps must be in 1..=n_mels for MFCC".into(),
            ));
        }
        Ok(())
    }

    /// Stable hash of every parameter that affects the output, plus the rate.
    pub fn fingerprint(&self, sample_rate: u32) -> u64 {
        let mut f = Fingerprint::new("feature-config-v1");
        f.push_u32(sample_rate)
            .push_u64(self.n_fft as u64)
            .push_u32(self.window_ms)
            .push_u32(self.hop_ms)
            .push_u64(self.n_mels as u64)
            .push_f64(self.log_floor)
            .push_str(self.feature_kind.as_str());
        if self.feature_kind == FeatureKind::Mfcc {
            f.push_u64(self.n_ceps as u64);
        }
        f.finish()
    }
}

/// Per-utterance T x F feature matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    pub utterance_id: String,
    pub n_dims: usize,
    pub data: Vec<f32>,
    /// Fingerprint of the configuration that produced the frames.
    pub fingerprint: u64,
}

impl FrameMatrix {
    pub fn new(utterance_id: String, n_dims: usize, data: Vec<f32>, fingerprint: u64) -> Self {
        debug_assert!(n_dims > 0 && data.len() % n_dims == 0);
        FrameMatrix {
            utterance_id,
            n_dims,
            data,
            fingerprint,
        }
    }

    pub fn n_frames(&self) -> usize {
        self.data.len() / self.n_dims
    }

    pub fn row(&self, t: usize) -> &[f32] {
        &self.data[t * self.n_dims..(t + 1) * self.n_dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(self.n_dims)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_frames() == 0 {
            return Err(CoreError::EmptyUtterance(self.utterance_id.clone()));
        }
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("frame matrix"));
        }
        Ok(())
    }
}

/// Number of analysis frames for a signal of `len` samples.
pub fn frame_count(len: usize, win: usize, hop: usize) -> Option<usize> {
    if len < win {
        None
    } else {
        Some((len - win) / hop + 1)
    }
}

/// 2595 * log10(1 + hz / 700)
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * math::log10(1.0 + hz / 700.0)
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (math::powf(10.0, mel / 2595.0) - 1.0)
}

/// Triangular filter weight at frequency `hz` for a filter with the given
/// edge and center frequencies; unit peak at the center.
pub fn triangle_weight(hz: f64, left: f64, center: f64, right: f64) -> f64 {
    if hz < left || hz > right {
        0.0
    } else if hz <= center {
        if center > left {
            (hz - left) / (center - left)
        } else {
            0.0
        }
    } else if right > center {
        (right - hz) / (right - center)
    } else {
        0.0
    }
}

/// Center frequencies (Hz) of the `n_mels` filters for a given rate:
/// `n_mels + 2` points uniform on the mel scale over [0, Nyquist], centers
/// are the interior points.
pub fn mel_center_frequencies(n_mels: usize, sample_rate: u32) -> Vec<f64> {
    let edges = mel_edge_frequencies(n_mels, sample_rate);
    edges[1..=n_mels].to_vec()
}

fn mel_edge_frequencies(n_mels: usize, sample_rate: u32) -> Vec<f64> {
    let nyquist = sample_rate as f64 / 2.0;
    let mel_max = hz_to_mel(nyquist);
    (0..n_mels + 2)
        .map(|i| mel_to_hz(mel_max * i as f64 / (n_mels + 1) as f64))
        .collect()
}

/// Precomputed analysis state for one (config, sample_rate) pair.
struct Analyzer {
    window: Vec<f64>,
    n_fft: usize,
    /// Per filter: index of its first nonzero bin and the weights from there.
    filters: Vec<(usize, Vec<f64>)>,
}

impl Analyzer {
    fn new(cfg: &FeatureConfig, sample_rate: u32) -> Self {
        let win = cfg.window_samples(sample_rate);
        let window = hann_window(win);
        let edges = mel_edge_frequencies(cfg.n_mels, sample_rate);
        let n_bins = cfg.n_fft / 2 + 1;
        let bin_hz = sample_rate as f64 / cfg.n_fft as f64;
        let mut filters = Vec::with_capacity(cfg.n_mels);
        for m in 0..cfg.n_mels {
            let (left, center, right) = (edges[m], edges[m + 1], edges[m + 2]);
            let first = (left / bin_hz) as usize;
            let mut weights = Vec::new();
            for k in first..n_bins {
                let hz = k as f64 * bin_hz;
                if hz > right {
                    break;
                }
                weights.push(triangle_weight(hz, left, center, right));
            }
            filters.push((first, weights));
        }
        Analyzer {
            window,
            n_fft: cfg.n_fft,
            filters,
        }
    }

    /// Mel-band energies of the frame starting at `start`.
    fn mel_energies(&self, samples: &[f32], start: usize) -> Vec<f64> {
        let win = self.window.len();
        let mut re = vec![0.0f64; self.n_fft];
        let mut im = vec![0.0f64; self.n_fft];
        for i in 0..win {
            re[i] = samples[start + i] as f64 * self.window[i];
        }
        fft::fft_in_place(&mut re, &mut im);
        let n_bins = self.n_fft / 2 + 1;
        let mut power = vec![0.0f64; n_bins];
        for k in 0..n_bins {
            power[k] = re[k] * re[k] + im[k] * im[k];
        }
        self.filters
            .iter()
            .map(|(first, weights)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * power[first + i])
                    .sum()
            })
            .collect()
    }
}

/// Hann window, symmetric form: 0.5 - 0.5 cos(2 pi n / (L - 1)).
pub fn hann_window(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|n| {
            0.5 - 0.5 * math::cos(2.0 * core::f64::consts::PI * n as f64 / (len - 1) as f64)
        })
        .collect()
}

/// Orthonormal DCT-II of `input`, truncated to `n_out` coefficients.
pub fn dct2_orthonormal(input: &[f64], n_out: usize) -> Vec<f64> {
    let n = input.len();
    let mut out = Vec::with_capacity(n_out);
    for k in 0..n_out {
        let scale = if k == 0 {
            math::sqrt(1.0 / n as f64)
        } else {
            math::sqrt(2.0 / n as f64)
        };
        let mut s = 0.0;
        for (i, &x) in input.iter().enumerate() {
            s += x * math::cos(core::f64::consts::PI * (i as f64 + 0.5) * k as f64 / n as f64);
        }
        out.push(scale * s);
    }
    out
}

/// Extracts the frame matrix for a mono waveform.
///
/// T = floor((len - win) / hop) + 1 frames; each LMFB entry is
/// `ln(max(mel_energy, log_floor))`.
pub fn compute_features(
    w: &Waveform,
    cfg: &FeatureConfig,
    utterance_id: &str,
) -> Result<FrameMatrix> {
    w.validate()?;
    cfg.validate(w.sample_rate)?;
    if w.channels.len() != 1 {
        return Err(CoreError::InvalidConfig(
            "compute_features expects a mono waveform; downmix first".into(),
        ));
    }
    let samples = &w.channels[0];
    let win = cfg.window_samples(w.sample_rate);
    let hop = cfg.hop_samples(w.sample_rate);
    let n_frames = frame_count(samples.len(), win, hop).ok_or(CoreError::UtteranceTooShort {
        id: utterance_id.into(),
        frames: samples.len(),
        required: win,
    })?;

    let analyzer = Analyzer::new(cfg, w.sample_rate);
    let dim = cfg.feature_dim();
    let mut data = Vec::with_capacity(n_frames * dim);
    for t in 0..n_frames {
        let energies = analyzer.mel_energies(samples, t * hop);
        let log_mel: Vec<f64> = energies
            .iter()
            .map(|&e| math::ln(e.max(cfg.log_floor)))
            .collect();
        match cfg.feature_kind {
            FeatureKind::Lmfb => data.extend(log_mel.iter().map(|&v| v as f32)),
            FeatureKind::Mfcc => {
                data.extend(dct2_orthonormal(&log_mel, cfg.n_ceps).iter().map(|&v| v as f32))
            }
        }
    }
    Ok(FrameMatrix::new(
        utterance_id.into(),
        dim,
        data,
        cfg.fingerprint(w.sample_rate),
    ))
}

mod fft {
    //! Iterative radix-2 Cooley-Tukey transform; length must be a power of two.

    use crate::math;

    pub fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
        let n = re.len();
        debug_assert!(n.is_power_of_two() && im.len() == n);
        if n < 2 {
            return;
        }
        // Bit-reversal permutation.
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                re.swap(i, j);
                im.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let step = -2.0 * core::f64::consts::PI / len as f64;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let angle = step * k as f64;
                    let (wr, wi) = (math::cos(angle), libm::sin(angle));
                    let (i, j) = (start + k, start + k + len / 2);
                    let tr = wr * re[j] - wi * im[j];
                    let ti = wr * im[j] + wi * re[j];
                    re[j] = re[i] - tr;
                    im[j] = im[i] - ti;
                    re[i] += tr;
                    im[i] += ti;
                }
            }
            len <<= 1;
        }
    }
}
