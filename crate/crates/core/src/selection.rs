//! Front-end segment selection: remove frames tokenized as stop units, then
//! re-segment the surviving fragments into fixed-length, zero-padded segments.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::asm_init::AsmSequence;
use crate::error::CoreError;
use crate::features::FrameMatrix;
use crate::stop_asm::StopAsmSet;
use crate::Result;

/// A maximal run of surviving frames, copied out of the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    /// Span in original frame indices, half-open.
    pub origin: (usize, usize),
    pub n_dims: usize,
    pub frames: Vec<f32>,
}

impl Fragment {
    pub fn len(&self) -> usize {
        self.frames.len() / self.n_dims
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// One fixed-length segment; frames past `real_len` are zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub data: Vec<f32>,
    pub real_len: usize,
}

impl Segment {
    pub fn seg_len(&self, n_dims: usize) -> usize {
        self.data.len() / n_dims
    }
}

/// All segments of one utterance after selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentBatch {
    pub utterance_id: String,
    pub n_dims: usize,
    pub seg_len: usize,
    pub segments: Vec<Segment>,
    /// Set when every token was a stop unit and the unfiltered utterance was
    /// segmented instead.
    pub fallback: bool,
}

impl SegmentBatch {
    pub fn real_frames(&self) -> usize {
        self.segments.iter().map(|s| s.real_len).sum()
    }
}

/// Deletes every frame inside a stop token; adjacent surviving tokens merge
/// into one fragment.
pub fn block_frames(
    fm: &FrameMatrix,
    seq: &AsmSequence,
    stop: &StopAsmSet,
) -> Result<Vec<Fragment>> {
    if seq.utterance_id != fm.utterance_id || seq.total_frames > fm.n_frames() {
        return Err(CoreError::SequenceMismatch(fm.utterance_id.clone()));
    }
    let mut fragments = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for t in &seq.tokens {
        if stop.is_stop(t.unit) {
            if let Some(span) = run.take() {
                fragments.push(copy_fragment(fm, span));
            }
        } else {
            run = match run {
                Some((start, _)) => Some((start, t.end)),
                None => Some((t.start, t.end)),
            };
        }
    }
    if let Some(span) = run {
        fragments.push(copy_fragment(fm, span));
    }
    Ok(fragments)
}

fn copy_fragment(fm: &FrameMatrix, (start, end): (usize, usize)) -> Fragment {
    Fragment {
        origin: (start, end),
        n_dims: fm.n_dims,
        frames: fm.data[start * fm.n_dims..end * fm.n_dims].to_vec(),
    }
}

/// Chops each fragment independently into ceil(len / seg_len) segments,
/// zero-padding the final short piece. Fragments are never concatenated
/// across a removed region.
pub fn resegment_pad(frags: &[Fragment], seg_len: usize, n_dims: usize) -> Vec<Segment> {
    let mut segments = Vec::new();
    for frag in frags {
        debug_assert_eq!(frag.n_dims, n_dims);
        let len = frag.len();
        let mut start = 0usize;
        while start < len {
            let real = (len - start).min(seg_len);
            let mut data = vec![0.0f32; seg_len * n_dims];
            data[..real * n_dims]
                .copy_from_slice(&frag.frames[start * n_dims..(start + real) * n_dims]);
            segments.push(Segment {
                data,
                real_len: real,
            });
            start += real;
        }
    }
    segments
}

/// Blocks stop-unit frames and re-segments the survivors. If everything was
/// blocked, falls back to segmenting the unfiltered utterance so the
/// classifier always receives at least one segment.
pub fn select_utterance(
    fm: &FrameMatrix,
    seq: &AsmSequence,
    stop: &StopAsmSet,
    seg_len: usize,
) -> Result<SegmentBatch> {
    let frags = block_frames(fm, seq, stop)?;
    let (frags, fallback) = if frags.is_empty() {
        let whole = copy_fragment(fm, (0, seq.total_frames));
        (vec![whole], true)
    } else {
        (frags, false)
    };
    let segments = resegment_pad(&frags, seg_len, fm.n_dims);
    Ok(SegmentBatch {
        utterance_id: fm.utterance_id.clone(),
        n_dims: fm.n_dims,
        seg_len,
        segments,
        fallback,
    })
}

/// Baseline segmentation with no blocking: the whole covered range chopped
/// into fixed-length segments. Shares the code path of the selected mode
/// with an empty stop set.
pub fn baseline_batch(fm: &FrameMatrix, covered: usize, seg_len: usize) -> SegmentBatch {
    let frag = copy_fragment(fm, (0, covered.min(fm.n_frames())));
    let segments = resegment_pad(&[frag], seg_len, fm.n_dims);
    SegmentBatch {
        utterance_id: fm.utterance_id.clone(),
        n_dims: fm.n_dims,
        seg_len,
        segments,
        fallback: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm_init::Token;
    use crate::stop_asm::Metric;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fm(id: &str, n_frames: usize, n_dims: usize) -> FrameMatrix {
        // Frame t has every entry t+1 so padding (exact zeros) is detectable.
        let data: Vec<f32> = (0..n_frames)
            .flat_map(|t| core::iter::repeat((t + 1) as f32).take(n_dims))
            .collect();
        FrameMatrix::new(id.into(), n_dims, data, 0)
    }

    fn seq(id: &str, spans: &[(usize, usize, usize)]) -> AsmSequence {
        let tokens: Vec<Token> = spans
            .iter()
            .map(|&(unit, start, end)| Token { unit, start, end })
            .collect();
        AsmSequence {
            utterance_id: id.into(),
            total_frames: tokens.last().unwrap().end,
            tokens,
        }
    }

    fn stop_set(units: &[usize]) -> StopAsmSet {
        StopAsmSet {
            metric: Metric::Sat,
            scores: alloc::vec![0.0; 8],
            selected: units.to_vec(),
            p: units.len(),
        }
    }

    #[test]
    fn empty_stop_set_keeps_whole_utterance() {
        let m = fm("u", 100, 2);
        let s = seq("u", &[(0, 0, 40), (1, 40, 60), (2, 60, 100)]);
        let frags = block_frames(&m, &s, &stop_set(&[])).unwrap();
        assert_eq!(frags.len(), 1);
        assert_eq!(frags[0].origin, (0, 100));
    }

    #[test]
    fn all_tokens_stopped_yields_no_fragments() {
        let m = fm("u", 60, 2);
        let s = seq("u", &[(3, 0, 30), (3, 30, 60)]);
        let frags = block_frames(&m, &s, &stop_set(&[3])).unwrap();
        assert!(frags.is_empty());
    }

    #[test]
    fn middle_stop_token_splits_fragments() {
        let m = fm("u", 100, 2);
        let s = seq("u", &[(0, 0, 40), (1, 40, 60), (0, 60, 100)]);
        let frags = block_frames(&m, &s, &stop_set(&[1])).unwrap();
        assert_eq!(frags.len(), 2);
        assert_eq!(frags[0].origin, (0, 40));
        assert_eq!(frags[1].origin, (60, 100));
        // Adjacent surviving tokens merge.
        let s2 = seq("u", &[(0, 0, 40), (2, 40, 60), (0, 60, 100)]);
        let frags = block_frames(&m, &s2, &stop_set(&[7])).unwrap();
        assert_eq!(frags.len(), 1);
        assert_eq!(frags[0].origin, (0, 100));
    }

    #[test]
    fn resegment_divides_and_pads() {
        let m = fm("u", 45, 3);
        let frag = Fragment {
            origin: (0, 45),
            n_dims: 3,
            frames: m.data.clone(),
        };
        let segs = resegment_pad(&[frag], 20, 3);
        assert_eq!(segs.len(), 3);
        assert_eq!(segs[0].real_len, 20);
        assert_eq!(segs[1].real_len, 20);
        assert_eq!(segs[2].real_len, 5);
        // Padded tail is exactly zero.
        for v in &segs[2].data[5 * 3..] {
            assert_eq!(*v, 0.0);
        }
        // Exact fit: no padding.
        let exact = Fragment {
            origin: (0, 20),
            n_dims: 3,
            frames: m.data[..60].to_vec(),
        };
        let segs = resegment_pad(&[exact], 20, 3);
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].real_len, 20);
    }

    #[test]
    fn resegment_bookkeeping_over_multiple_fragments() {
        let m = fm("u", 72, 2);
        let lens = [45usize, 20, 7];
        let mut start = 0;
        let frags: Vec<Fragment> = lens
            .iter()
            .map(|&l| {
                let f = Fragment {
                    origin: (start, start + l),
                    n_dims: 2,
                    frames: m.data[start * 2..(start + l) * 2].to_vec(),
                };
                start += l;
                f
            })
            .collect();
        let segs = resegment_pad(&frags, 20, 2);
        assert_eq!(segs.len(), 5);
        let real: usize = segs.iter().map(|s| s.real_len).sum();
        assert_eq!(real, 72);
    }

    #[test]
    fn select_utterance_baseline_identity_and_fallback() {
        let m = fm("u", 1000, 2);
        let spans: Vec<(usize, usize, usize)> =
            (0..50).map(|i| (0, i * 20, (i + 1) * 20)).collect();
        let s = seq("u", &spans);

        let none = select_utterance(&m, &s, &stop_set(&[]), 20).unwrap();
        assert_eq!(none.segments.len(), 50);
        assert!(!none.fallback);
        let base = baseline_batch(&m, 1000, 20);
        assert_eq!(none.segments, base.segments);

        let all = select_utterance(&m, &s, &stop_set(&[0]), 20).unwrap();
        assert!(all.fallback);
        assert_eq!(all.segments, base.segments);
    }

    #[test]
    fn mid_stop_at_non_multiple_boundary_matches_hand_simulation() {
        // Tokens: [0,30) unit A, [30,47) unit S, [47,90) unit B; stop {S}.
        // Fragments: 30 and 43 frames -> segments 20,10pad | 20,20,3pad.
        let m = fm("u", 90, 2);
        let s = seq("u", &[(0, 0, 30), (1, 30, 47), (2, 47, 90)]);
        let batch = select_utterance(&m, &s, &stop_set(&[1]), 20).unwrap();
        let lens: Vec<usize> = batch.segments.iter().map(|x| x.real_len).collect();
        assert_eq!(lens, alloc::vec![20, 10, 20, 20, 3]);
        // First frame of the second fragment is original frame 47 (value 48).
        assert_eq!(batch.segments[2].data[0], 48.0);
    }

    #[test]
    fn blocking_is_idempotent() {
        let m = fm("u", 100, 1);
        let s = seq("u", &[(0, 0, 40), (1, 40, 60), (2, 60, 100)]);
        let stop = stop_set(&[1]);
        let once = block_frames(&m, &s, &stop).unwrap();
        // Re-tokenize the survivors: the stop unit no longer appears, so a
        // second pass over the surviving tokens changes nothing.
        let surviving = seq("u2", &[(0, 0, 40), (2, 40, 80)]);
        let rebuilt = FrameMatrix::new(
            "u2".into(),
            1,
            once.iter().flat_map(|f| f.frames.iter().copied()).collect(),
            0,
        );
        let twice = block_frames(&rebuilt, &surviving, &stop).unwrap();
        let flat_once: Vec<f32> = once.into_iter().flat_map(|f| f.frames).collect();
        let flat_twice: Vec<f32> = twice.into_iter().flat_map(|f| f.frames).collect();
        assert_eq!(flat_once, flat_twice);
    }

    #[test]
    fn rejects_mismatched_sequence() {
        let m = fm("u", 50, 2);
        let s = seq("other", &[(0, 0, 50)]);
        assert!(block_frames(&m, &s, &stop_set(&[])).is_err());
        let long = seq("u", &[(0, 0, 60)]);
        assert!(block_frames(&m, &long, &stop_set(&[])).is_err());
    }

    proptest! {
        // Conservation: real frames + blocked frames = covered frames, and
        // every padded position is exactly zero, and fallback triggers iff
        // every token is stopped.
        #[test]
        fn conservation_padding_and_fallback(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 6usize;
            let n_tokens = rng.random_range(1..12);
            let mut spans = Vec::new();
            let mut cursor = 0usize;
            for _ in 0..n_tokens {
                let len = rng.random_range(3..40);
                spans.push((rng.random_range(0..d), cursor, cursor + len));
                cursor += len;
            }
            let m = fm("p", cursor, 3);
            let s = seq("p", &spans);
            let stop_units: Vec<usize> = (0..d).filter(|_| rng.random::<f32>() < 0.3).collect();
            let stop = stop_set(&stop_units);

            let blocked: usize = s
                .tokens
                .iter()
                .filter(|t| stop.is_stop(t.unit))
                .map(|t| t.end - t.start)
                .sum();
            let all_stopped = blocked == cursor;

            let batch = select_utterance(&m, &s, &stop, 20).unwrap();
            prop_assert_eq!(batch.fallback, all_stopped);
            if !batch.fallback {
                prop_assert_eq!(batch.real_frames() + blocked, cursor);
            } else {
                prop_assert_eq!(batch.real_frames(), cursor);
            }
            for seg in &batch.segments {
                prop_assert_eq!(seg.data.len(), 20 * 3);
                for v in &seg.data[seg.real_len * 3..] {
                    prop_assert_eq!(*v, 0.0);
                }
                // Real region of this corpus is strictly positive by
                // construction, so padding cannot be confused with content.
                for v in &seg.data[..seg.real_len * 3] {
                    prop_assert!(*v > 0.0);
                }
            }
        }

        // No output segment mixes frames from both sides of a removed region:
        // within a segment, original frame values are consecutive.
        #[test]
        fn no_cross_fragment_leakage(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n_tokens = rng.random_range(2..10);
            let mut spans = Vec::new();
            let mut cursor = 0usize;
            for i in 0..n_tokens {
                let len = rng.random_range(3..30);
                spans.push((i % 3, cursor, cursor + len));
                cursor += len;
            }
            let m = fm("q", cursor, 1);
            let s = seq("q", &spans);
            let stop = stop_set(&[1]);
            let batch = select_utterance(&m, &s, &stop, 20).unwrap();
            for seg in &batch.segments {
                for w in seg.data[..seg.real_len].windows(2) {
                    prop_assert_eq!(w[1], w[0] + 1.0);
                }
            }
        }
    }
}
