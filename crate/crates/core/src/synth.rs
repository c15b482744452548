//! Synthetic labeled corpora with planted class-discriminative "event" units
//! and shared low-information "filler" units, used as ground truth when
//! validating stop-unit detection and segment selection end to end.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::asm_init::{AsmSequence, Token};
use crate::error::CoreError;
use crate::features::{FrameMatrix, Waveform};
use crate::fingerprint::Fingerprint;
use crate::math;
use crate::Result;

/// One planted unit: an F-dimensional Gaussian in feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitPrototype {
    pub mean: Vec<f64>,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_classes: usize,
    pub n_event_units_per_class: usize,
    pub n_filler_units: usize,
    pub feat_dim: usize,
    /// Event prototypes class-major, then filler prototypes.
    pub prototypes: Vec<UnitPrototype>,
    /// Unit slots per utterance.
    pub utterance_len_units: usize,
    /// Probability that a slot is a filler unit.
    pub filler_rate: f64,
    /// Inclusive frame-length range for one unit span.
    pub span_frames: (usize, usize),
    /// Relative sampling weight per class.
    pub class_weights: Vec<f64>,
    /// Probability mass on a class's first event unit; the remainder is
    /// uniform over its other event units.
    pub event_bias: f64,
    pub n_utterances: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn n_units(&self) -> usize {
        self.n_classes * self.n_event_units_per_class + self.n_filler_units
    }

    /// Planted filler unit ids: the tail of the inventory.
    pub fn filler_ids(&self) -> Vec<usize> {
        let first = self.n_classes * self.n_event_units_per_class;
        (first..self.n_units()).collect()
    }

    pub fn event_unit(&self, class: usize, k: usize) -> usize {
        class * self.n_event_units_per_class + k
    }

    /// Fingerprint stamped onto generated frame matrices so downstream
    /// stages can chain on it like on real feature configs.
    pub fn fingerprint(&self) -> u64 {
        let mut f = Fingerprint::new("synth-corpus-v1");
        f.push_u64(self.seed)
            .push_u64(self.feat_dim as u64)
            .push_u64(self.n_units() as u64)
            .push_u64(self.n_utterances as u64)
            .push_f64(self.filler_rate);
        f.finish()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.filler_rate > 0.0 && self.filler_rate < 1.0) {
            return Err(CoreError::InvalidConfig(
                "filler_rate must lie strictly in (0, 1)".into(),
            ));
        }
        if self.n_classes == 0
            || self.n_event_units_per_class == 0
            || self.n_filler_units == 0
            || self.utterance_len_units == 0
            || self.n_utterances == 0
        {
            return Err(CoreError::InvalidConfig("degenerate synth spec".into()));
        }
        if self.prototypes.len() != self.n_units() {
            return Err(CoreError::InvalidConfig(
                "prototype count must equal the unit count".into(),
            ));
        }
        if self.class_weights.len() != self.n_classes
            || self.class_weights.iter().any(|&w| !(w > 0.0))
        {
            return Err(CoreError::InvalidConfig(
                "class_weights must be positive, one per class".into(),
            ));
        }
        if self.span_frames.0 == 0 || self.span_frames.0 > self.span_frames.1 {
            return Err(CoreError::InvalidConfig("bad span_frames range".into()));
        }
        if !(0.0..=1.0).contains(&self.event_bias) {
            return Err(CoreError::InvalidConfig(
                "event_bias must lie in [0, 1]".into(),
            ));
        }
        for p in &self.prototypes {
            if p.mean.len() != self.feat_dim || !(p.sigma > 0.0) {
                return Err(CoreError::InvalidConfig("bad prototype".into()));
            }
        }
        // Prototypes must be separated by at least 4 sigma pairwise.
        for i in 0..self.prototypes.len() {
            for j in i + 1..self.prototypes.len() {
                let a = &self.prototypes[i];
                let b = &self.prototypes[j];
                let dist2: f64 = a
                    .mean
                    .iter()
                    .zip(&b.mean)
                    .map(|(&x, &y)| (x - y) * (x - y))
                    .sum();
                let min_sep = 4.0 * a.sigma.max(b.sigma);
                if math::sqrt(dist2) < min_sep {
                    return Err(CoreError::InvalidConfig(alloc::format!(
                        "prototypes {i} and {j} closer than 4 sigma"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds a spec with prototype means sampled from a spherical Gaussian,
    /// rejection-sampled until the 4-sigma pairwise separation holds.
    #[allow(clippy::too_many_arguments)]
    pub fn random(
        n_classes: usize,
        n_event_units_per_class: usize,
        n_filler_units: usize,
        feat_dim: usize,
        sigma: f64,
        spread: f64,
        n_utterances: usize,
        seed: u64,
    ) -> Result<SynthSpec> {
        let n_units = n_classes * n_event_units_per_class + n_filler_units;
        let mut rng = ChaCha8Rng::seed_from_u64(
            Fingerprint::new("synth-protos").push_u64(seed).finish(),
        );
        let normal = rand_distr::Normal::new(0.0, spread).map_err(|_| {
            CoreError::InvalidConfig("prototype spread must be positive".into())
        })?;
        let mut prototypes: Vec<UnitPrototype> = Vec::with_capacity(n_units);
        let mut tries = 0;
        while prototypes.len() < n_units {
            if tries > 1000 * n_units {
                return Err(CoreError::InvalidConfig(
                    "could not separate prototypes; raise spread or lower sigma".into(),
                ));
            }
            tries += 1;
            let mean: Vec<f64> = (0..feat_dim).map(|_| normal.sample(&mut rng)).collect();
            let ok = prototypes.iter().all(|p| {
                let d2: f64 = p
                    .mean
                    .iter()
                    .zip(&mean)
                    .map(|(&x, &y)| (x - y) * (x - y))
                    .sum();
                math::sqrt(d2) >= 4.0 * sigma
            });
            if ok {
                prototypes.push(UnitPrototype { mean, sigma });
            }
        }
        let spec = SynthSpec {
            n_classes,
            n_event_units_per_class,
            n_filler_units,
            feat_dim,
            prototypes,
            utterance_len_units: 50,
            filler_rate: 0.5,
            span_frames: (15, 25),
            class_weights: vec![1.0; n_classes],
            event_bias: 1.0 / n_event_units_per_class as f64,
            n_utterances,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A generated corpus with its planted ground truth.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub frames: Vec<FrameMatrix>,
    pub labels: Vec<usize>,
    pub truth: Vec<AsmSequence>,
    pub filler_units: Vec<usize>,
}

fn utterance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        Fingerprint::new("synth-utt")
            .push_u64(seed)
            .push_u64(index as u64)
            .finish(),
    )
}

fn sample_class(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut r = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return i;
      }
        r -= w;
    }
    weights.len() - 1
}

/// Generates the corpus: each unit slot is a filler with probability
/// `filler_rate` (uniform over fillers, shared across classes), otherwise an
/// event unit of the utterance's class; every slot emits a random-length
/// span of prototype-plus-noise frames. Deterministic given the seed.
pub fn generate_corpus(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let fp = spec.fingerprint();
    let normal = rand_distr::StandardNormal;
    let mut frames = Vec::with_capacity(spec.n_utterances);
    let mut labels = Vec::with_capacity(spec.n_utterances);
    let mut truth = Vec::with_capacity(spec.n_utterances);
    for i in 0..spec.n_utterances {
        let mut rng = utterance_rng(spec.seed, i);
        let class = sample_class(&mut rng, &spec.class_weights);
        let id = alloc::format!("synth-{i:05}");
        let mut data: Vec<f32> = Vec::new();
        let mut tokens = Vec::with_capacity(spec.utterance_len_units);
        let mut cursor = 0usize;
        for _ in 0..spec.utterance_len_units {
            let unit = if rng.random::<f64>() < spec.filler_rate {
                let k = rng.random_range(0..spec.n_filler_units);
                spec.n_classes * spec.n_event_units_per_class + k
            } else if spec.n_event_units_per_class == 1 {
                spec.event_unit(class, 0)
            } else if rng.random::<f64>() < spec.event_bias {
                spec.event_unit(class, 0)
            } else {
                let k = 1 + rng.random_range(0..spec.n_event_units_per_class - 1);
                spec.event_unit(class, k)
            };
            let span_len = rng.random_range(spec.span_frames.0..=spec.span_frames.1);
            let proto = &spec.prototypes[unit];
            for _ in 0..span_len {
                for j in 0..spec.feat_dim {
                    let noise: f64 = normal.sample(&mut rng);
                    data.push((proto.mean[j] + proto.sigma * noise) as f32);
                }
            }
            tokens.push(Token {
                unit,
                start: cursor,
                end: cursor + span_len,
            });
            cursor += span_len;
        }
        frames.push(FrameMatrix::new(id.clone(), spec.feat_dim, data, fp));
        labels.push(class);
        truth.push(AsmSequence {
            utterance_id: id,
            tokens,
            total_frames: cursor,
        });
    }
    Ok(SynthCorpus {
        frames,
        labels,
        truth,
        filler_units: spec.filler_ids(),
    })
}

/// Waveform mode: each prototype becomes a mixture of sinusoids whose
/// amplitudes follow the prototype spectrum, so the audio front end can be
/// exercised end to end. Span lengths are measured in feature frames and
/// converted through the hop size.
pub fn generate_waveforms(
    spec: &SynthSpec,
    sample_rate: u32,
    hop_samples: usize,
    window_samples: usize,
    tone_freqs: &[f64],
) -> Result<(Vec<Waveform>, Vec<usize>)> {
    spec.validate()?;
    if tone_freqs.len() != spec.feat_dim {
        return Err(CoreError::InvalidConfig(
            "one tone frequency per feature dimension".into(),
        ));
    }
    let corpus = generate_corpus(spec)?;
    let mut waves = Vec::with_capacity(corpus.frames.len());
    for (i, seq) in corpus.truth.iter().enumerate() {
        let n_samples = seq.total_frames * hop_samples + window_samples;
        let mut samples = vec![0.0f32; n_samples];
        let mut rng = utterance_rng(spec.seed ^ 0x57a7e, i);
        for t in &seq.tokens {
            let proto = &spec.prototypes[t.unit];
            // Map the mean spectrum to positive amplitudes.
            let lo = proto.mean.iter().copied().fold(f64::INFINITY, f64::min);
            let amps: Vec<f64> = proto.mean.iter().map(|&m| (m - lo) + 0.05).collect();
            let scale: f64 = 0.3 / amps.iter().sum::<f64>().max(1e-9);
            let phase: f64 = rng.random::<f64>() * core::f64::consts::TAU;
            let start = t.start * hop_samples;
            let end = (t.end * hop_samples + window_samples).min(n_samples);
            for n in start..end {
                let time = n as f64 / sample_rate as f64;
                let mut v = 0.0;
                for (j, &f) in tone_freqs.iter().enumerate() {
                    v += amps[j] * scale * math::cos(core::f64::consts::TAU * f * time + phase);
                }
                samples[n] += v as f32;
            }
        }
        waves.push(Waveform::mono(samples, sample_rate));
    }
    Ok((waves, corpus.labels))
}
