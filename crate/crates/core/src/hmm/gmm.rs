//! Diagonal-covariance Gaussian mixtures for HMM state emissions.

use alloc::vec;
use alloc::vec::Vec;

use crate::asm_init;
use crate::math;
use crate::Result;

/// Mixture with diagonal covariance; `n_comp x dim` parameter matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagGmm {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub means: Vec<f64>,
    pub vars: Vec<f64>,
    /// Cached per-component ln(w_c) - 0.5 sum_j ln(2 pi var_cj).
    log_norm: Vec<f64>,
}

const LOG_2PI: f64 = 1.8378770664093453;
const WEIGHT_FLOOR: f64 = 1e-10;

impl DiagGmm {
    pub fn new(dim: usize, weights: Vec<f64>, means: Vec<f64>, vars: Vec<f64>) -> Self {
        let mut g = DiagGmm {
            dim,
            weights,
            means,
            vars,
            log_norm: Vec::new(),
        };
        g.refresh_cache();
        g
    }

    pub fn n_components(&self) -> usize {
        self.weights.len()
    }

    fn refresh_cache(&mut self) {
        let dim = self.dim;
        self.log_norm = (0..self.n_components())
            .map(|c| {
                let logdet: f64 = self.vars[c * dim..(c + 1) * dim]
                    .iter()
                    .map(|&v| math::ln(v))
                    .sum();
                math::ln(self.weights[c]) - 0.5 * (dim as f64 * LOG_2PI + logdet)
            })
            .collect();
    }

    /// ln p(x) = logsumexp_c [ ln w_c + ln N(x; mu_c, var_c) ]
    pub fn log_likelihood(&self, frame: &[f32]) -> f64 {
        debug_assert_eq!(frame.len(), self.dim);
        let dim = self.dim;
        let mut best = f64::NEG_INFINITY;
        let mut terms = Vec::with_capacity(self.n_components());
        for c in 0..self.n_components() {
            let mut maha = 0.0f64;
            for j in 0..dim {
                let d = frame[j] as f64 - self.means[c * dim + j];
                maha += d * d / self.vars[c * dim + j];
            }
            let t = self.log_norm[c] - 0.5 * maha;
            terms.push(t);
            best = best.max(t);
        }
        if !best.is_finite() {
            return f64::NEG_INFINITY;
        }
        best + math::ln(terms.iter().map(|&t| math::exp(t - best)).sum::<f64>())
    }

    fn log_likelihood_f64(&self, row: &[f64]) -> f64 {
        let dim = self.dim;
        let mut terms = Vec::with_capacity(self.n_components());
        for c in 0..self.n_components() {
            let mut maha = 0.0f64;
            for j in 0..dim {
                let d = row[j] - self.means[c * dim + j];
                maha += d * d / self.vars[c * dim + j];
            }
            terms.push(self.log_norm[c] - 0.5 * maha);
        }
        math::logsumexp(&terms)
    }

    /// Fits a mixture on `frames` (row-major, `dim` columns): k-means++
    /// seeding followed by EM with the given variance floor.
    pub fn fit(
        frames: &[f64],
        dim: usize,
        n_comp: usize,
        var_floor: &[f64],
        seed: u64,
        em_iters: usize,
    ) -> Result<DiagGmm> {
        let n = frames.len() / dim;
        debug_assert!(n > 0);
        let k = n_comp.min(n).max(1);
        let fit = asm_init::kmeans(frames, dim, k, seed, 20, 1e-6)?;

        let mut weights = vec![0.0f64; k];
        let means = fit.centroids.clone();
        let mut vars = vec![0.0f64; k * dim];
        let mut counts = vec![0usize; k];
        for (i, &c) in fit.assignments.iter().enumerate() {
            counts[c] += 1;
            for j in 0..dim {
                let d = frames[i * dim + j] - means[c * dim + j];
                vars[c * dim + j] += d * d;
            }
        }
        for c in 0..k {
            weights[c] = (counts[c] as f64 / n as f64).max(WEIGHT_FLOOR);
            for j in 0..dim {
                let v = if counts[c] > 0 {
                    vars[c * dim + j] / counts[c] as f64
                } else {
                    0.0
                };
                vars[c * dim + j] = v.max(var_floor[j]);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        // Empty clusters cannot occur here (kmeans re-seeds them), but a
        // component can still collapse during EM; the floors handle that.
        let mut gmm = DiagGmm::new(dim, weights, means, vars);
        let mut prev_ll = f64::NEG_INFINITY;
        for _ in 0..em_iters {
            gmm = gmm.em_step(frames, var_floor);
            let ll: f64 = frames
                .chunks_exact(dim)
                .map(|row| gmm.log_likelihood_f64(row))
                .sum();
            if (ll - prev_ll).abs() < 1e-6 {
                break;
            }
            prev_ll = ll;
        }
        Ok(gmm)
    }

    /// One EM pass over `frames`, returning the updated mixture.
    pub fn em_step(&self, frames: &[f64], var_floor: &[f64]) -> DiagGmm {
        let dim = self.dim;
        let k = self.n_components();
        let n = frames.len() / dim;
        let mut resp_sum = vec![0.0f64; k];
        let mut mean_acc = vec![0.0f64; k * dim];
        let mut sq_acc = vec![0.0f64; k * dim];

        let mut terms = vec![0.0f64; k];
        for i in 0..n {
            let row = &frames[i * dim..(i + 1) * dim];
            for c in 0..k {
                let mut maha = 0.0f64;
                for j in 0..dim {
                    let d = row[j] - self.means[c * dim + j];
                    maha += d * d / self.vars[c * dim + j];
                }
                terms[c] = self.log_norm[c] - 0.5 * maha;
            }
            let lse = math::logsumexp(&terms);
            for c in 0..k {
                let r = math::exp(terms[c] - lse);
                resp_sum[c] += r;
                for j in 0..dim {
                    mean_acc[c * dim + j] += r * row[j];
                    sq_acc[c * dim + j] += r * row[j] * row[j];
                }
            }
        }

        let mut weights = vec![0.0f64; k];
        let mut means = vec![0.0f64; k * dim];
        let mut vars = vec![0.0f64; k * dim];
        for c in 0..k {
            if resp_sum[c] > 1e-12 {
                weights[c] = (resp_sum[c] / n as f64).max(WEIGHT_FLOOR);
                for j in 0..dim {
                    let m = mean_acc[c * dim + j] / resp_sum[c];
                    means[c * dim + j] = m;
                    let v = sq_acc[c * dim + j] / resp_sum[c] - m * m;
                    vars[c * dim + j] = v.max(var_floor[j]);
                }
            } else {
                // Collapsed component: keep previous parameters.
                weights[c] = WEIGHT_FLOOR;
                means[c * dim..(c + 1) * dim]
                    .copy_from_slice(&self.means[c * dim..(c + 1) * dim]);
                vars[c * dim..(c + 1) * dim].copy_from_slice(&self.vars[c * dim..(c + 1) * dim]);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        DiagGmm::new(dim, weights, means, vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    fn gaussian_frames(seed: u64, centers: &[(f64, f64)], per: usize, sigma: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = rand_distr::Normal::new(0.0, sigma).unwrap();
        let mut out = Vec::new();
        for &(a, b) in centers {
            for _ in 0..per {
                out.push(a + normal.sample(&mut rng));
                out.push(b + normal.sample(&mut rng));
            }
        }
        out
    }

    #[test]
    fn single_component_reduces_to_sample_stats() {
        let frames = gaussian_frames(3, &[(2.0, -1.0)], 200, 0.7);
        let floor = [1e-6, 1e-6];
        let gmm = DiagGmm::fit(&frames, 2, 1, &floor, 0, 10).unwrap();
        let n = 200.0;
        let mean0: f64 = frames.chunks_exact(2).map(|r| r[0]).sum::<f64>() / n;
        let mean1: f64 = frames.chunks_exact(2).map(|r| r[1]).sum::<f64>() / n;
        let var0: f64 = frames
            .chunks_exact(2)
            .map(|r| (r[0] - mean0) * (r[0] - mean0))
            .sum::<f64>()
            / n;
        assert!((gmm.means[0] - mean0).abs() < 1e-9);
        assert!((gmm.means[1] - mean1).abs() < 1e-9);
        assert!((gmm.vars[0] - var0).abs() < 1e-9);
        assert_eq!(gmm.weights, alloc::vec![1.0]);
    }

    #[test]
    fn constant_data_floors_variances() {
        let frames = alloc::vec![5.0f64; 40]; // 20 identical 2-d points
        let floor = [1e-3, 1e-3];
        let gmm = DiagGmm::fit(&frames, 2, 2, &floor, 1, 5).unwrap();
        for c in 0..gmm.n_components() {
            assert!((gmm.means[c * 2] - 5.0).abs() < 1e-9);
            assert_eq!(gmm.vars[c * 2], 1e-3);
            assert_eq!(gmm.vars[c * 2 + 1], 1e-3);
        }
    }

    #[test]
    fn two_components_recover_two_clusters() {
        let frames = gaussian_frames(11, &[(0.0, 0.0), (6.0, 6.0)], 300, 0.5);
        let floor = [1e-6, 1e-6];
        let gmm = DiagGmm::fit(&frames, 2, 2, &floor, 5, 30).unwrap();
        let se = 3.0 * 0.5 / (300.0f64).sqrt();
        let mut found = [false, false];
        for (t, &(cx, cy)) in [(0.0, 0.0), (6.0, 6.0)].iter().enumerate() {
            for c in 0..2 {
                if (gmm.means[c * 2] - cx).abs() < 3.0 * se + 0.1
                    && (gmm.means[c * 2 + 1] - cy).abs() < 3.0 * se + 0.1
                {
                    found[t] = true;
                }
            }
        }
        assert!(found[0] && found[1], "means {:?}", gmm.means);
        assert!((gmm.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_likelihood_matches_direct_evaluation() {
        let gmm = DiagGmm::new(
            1,
            alloc::vec![0.3, 0.7],
            alloc::vec![0.0, 4.0],
            alloc::vec![1.0, 2.0],
        );
        let x = 1.5f32;
        let direct = (0.3 * (-0.5f64 * 1.5 * 1.5).exp() / (2.0 * core::f64::consts::PI).sqrt()
            + 0.7 * (-0.5 * (1.5 - 4.0) * (1.5 - 4.0) / 2.0).exp()
                / (2.0 * core::f64::consts::PI * 2.0).sqrt())
        .ln();
        assert!((gmm.log_likelihood(&[x]) - direct).abs() < 1e-12);
    }

    #[test]
    fn em_never_decreases_likelihood() {
        let frames = gaussian_frames(21, &[(0.0, 0.0), (3.0, 1.0)], 100, 0.8);
        let floor = [1e-6, 1e-6];
        let mut gmm = DiagGmm::fit(&frames, 2, 2, &floor, 2, 0).unwrap();
        let ll = |g: &DiagGmm| -> f64 {
            frames
                .chunks_exact(2)
                .map(|r| g.log_likelihood(&[r[0] as f32, r[1] as f32]))
                .sum()
        };
        let mut prev = ll(&gmm);
        for _ in 0..8 {
            gmm = gmm.em_step(&frames, &floor);
            let cur = ll(&gmm);
            assert!(cur >= prev - 1e-9, "EM decreased: {prev} -> {cur}");
            prev = cur;
        }
    }
}
