//! Activity, fading and received-signal synthesis.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, Op, SplitMat};
use crate::{CMat, CVec, C64};
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

/// Sorted set of active user indices in `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivitySet {
    indices: Vec<usize>,
}

impl ActivitySet {
    /// Build from arbitrary indices; sorts, dedups and bounds-checks.
    pub fn new(mut indices: Vec<usize>, n_users: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= n_users {
                return Err(Error::InvalidConfig(format!(
                    "user id {last} out of range for N = {n_users}"
                )));
            }
        }
        Ok(ActivitySet { indices })
    }

    pub fn empty() -> Self {
        ActivitySet { indices: Vec::new() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, user: usize) -> bool {
        self.indices.binary_search(&user).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }
}

/// Small-scale and large-scale fading for one coherence block.
///
/// Column `j` of `small_scale` is the unit-variance Rayleigh vector of the
/// `j`-th user in the owning frame's active set; `large_scale[j]` is its
/// amplitude gain (so received power scales with the square).
#[derive(Debug, Clone)]
pub struct ChannelBlock {
    pub small_scale: CMat,
    pub large_scale: Vec<f64>,
}

impl ChannelBlock {
    pub fn n_antennas(&self) -> usize {
        self.small_scale.nrows()
    }

    pub fn n_users(&self) -> usize {
        self.small_scale.ncols()
    }
}

/// One received coherence block with its pilot/data column split.
#[derive(Debug, Clone)]
pub struct ReceivedBlock {
    pub samples: CMat,
    pub pilot_span: std::ops::Range<usize>,
    pub data_span: std::ops::Range<usize>,
}

impl ReceivedBlock {
    pub fn new(samples: CMat, pilot_len: usize) -> Result<Self> {
        let d = samples.ncols();
        if pilot_len > d {
            return Err(Error::Shape(format!(
                "pilot span {pilot_len} exceeds block length {d}"
            )));
        }
        Ok(ReceivedBlock {
            samples,
            pilot_span: 0..pilot_len,
            data_span: pilot_len..d,
        })
    }

    pub fn pilot_samples(&self) -> CMat {
        self.samples
            .slice(ndarray::s![.., self.pilot_span.clone()])
            .to_owned()
    }
}

/// Uniformly random K-subset of `[0, N)`.
pub fn sample_activity<R: Rng>(config: &SystemConfig, rng: &mut R) -> Result<ActivitySet> {
    let (n, k) = (config.n_users, config.n_active);
    if k > n {
        return Err(Error::InvalidConfig(format!("K = {k} exceeds N = {n}")));
    }
    // Partial Fisher-Yates over an index vector: O(N) setup, exact uniformity.
    let mut ids: Vec<usize> = (0..n).collect();
    let (chosen, _) = ids.partial_shuffle(rng, k);
    let mut v = chosen.to_vec();
    v.sort_unstable();
    Ok(ActivitySet { indices: v })
}

/// Linear power gain of the path-loss model; delegates to the config.
pub fn pathloss_gain(distance_km: f64, config: &SystemConfig) -> Result<f64> {
    config.pathloss_gain(distance_km)
}

/// Per-user distances for one frame, i.i.d. uniform on the configured range.
pub fn sample_distances<R: Rng>(config: &SystemConfig, count: usize, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = config.dist_range_km;
    (0..count).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect()
}

/// Amplitude gains `g_i = sqrt(pathloss(d_i))` for a frame's distances.
pub fn large_scale_gains(config: &SystemConfig, distances: &[f64]) -> Result<Vec<f64>> {
    distances
        .iter()
        .map(|&d| config.pathloss_gain(d).map(f64::sqrt))
        .collect()
}

/// Fresh i.i.d. small-scale fading block for `large_scale.len()` users.
///
/// Large-scale gains are drawn once per frame and passed in so that every
/// block of the frame shares them while small-scale fading is redrawn.
pub fn sample_channel_block<R: Rng>(
    config: &SystemConfig,
    large_scale: &[f64],
    rng: &mut R,
) -> ChannelBlock {
    let m = config.n_antennas;
    let k = large_scale.len();
    let scale = 0.5f64.sqrt();
    let small_scale = Array2::from_shape_fn((m, k), |_| {
        C64::new(
            scale * rng.sample::<f64, _>(StandardNormal),
            scale * rng.sample::<f64, _>(StandardNormal),
        )
    });
    ChannelBlock {
        small_scale,
        large_scale: large_scale.to_vec(),
    }
}

/// Superimpose per-user transmissions through the channel and add noise:
/// `samples = sum_j g_j h_j x_j + Z`, `Z ~ CN(0, noise_var)`.
///
/// `transmitters` are column indices into `channel`; `signals[i]` is the
/// complex row transmitted by `transmitters[i]` and all rows must share one
/// length.
pub fn synthesize_received<R: Rng>(
    transmitters: &[usize],
    signals: &[CVec],
    channel: &ChannelBlock,
    noise_var: f64,
    rng: &mut R,
) -> Result<CMat> {
    if transmitters.len() != signals.len() {
        return Err(Error::Shape(format!(
            "{} transmitters but {} signals",
            transmitters.len(),
            signals.len()
        )));
    }
    let m = channel.n_antennas();
    let d = signals.first().map_or(0, |s| s.len());
    if signals.iter().any(|s| s.len() != d) {
        return Err(Error::Shape("signal lengths differ".into()));
    }
    for &j in transmitters {
        if j >= channel.n_users() {
            return Err(Error::Shape(format!(
                "transmitter column {j} outside channel with {} users",
                channel.n_users()
            )));
        }
    }

    let mut samples = noise_matrix(m, d, noise_var, rng);
    if !transmitters.is_empty() && d > 0 {
        // Stack effective channels and signals, then one product.
        let kt = transmitters.len();
        let mut heff = SplitMat::zeros(m, kt);
        for (c, &j) in transmitters.iter().enumerate() {
            let g = channel.large_scale[j];
            let base = c * m;
            for i in 0..m {
                let h = channel.small_scale[[i, j]];
                heff.re[base + i] = g * h.re;
                heff.im[base + i] = g * h.im;
            }
        }
        let mut x = SplitMat::zeros(kt, d);
        for (r, sig) in signals.iter().enumerate() {
            for (c, z) in sig.iter().enumerate() {
                x.re[c * kt + r] = z.re;
                x.im[c * kt + r] = z.im;
            }
        }
        let mut sum = SplitMat::zeros(m, d);
        linalg::split::gemm(1.0, Op::N, &heff, Op::N, &x, 0.0, &mut sum);
        for j in 0..d {
            let base = j * m;
            for i in 0..m {
                samples[[i, j]] += C64::new(sum.re[base + i], sum.im[base + i]);
            }
        }
    }
    Ok(samples)
}

/// i.i.d. `CN(0, noise_var)` matrix.
pub fn noise_matrix<R: Rng>(m: usize, d: usize, noise_var: f64, rng: &mut R) -> CMat {
    let scale = (noise_var / 2.0).sqrt();
    Array2::from_shape_fn((m, d), |_| {
        C64::new(
            scale * rng.sample::<f64, _>(StandardNormal),
            scale * rng.sample::<f64, _>(StandardNormal),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn cfg(n: usize, k: usize, m: usize) -> SystemConfig {
        SystemConfig {
            n_users: n,
            n_active: k,
            n_antennas: m,
            n_blocks: 1,
            block_len: 16,
            frame_len: 16,
            det_pilot_len: 8,
            orth_pilot_count: 4,
            orth_pilot_len: 4,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn activity_extremes() {
        let mut rng = stream(1, 0, "act");
        let none = sample_activity(&cfg(5, 0, 4), &mut rng).unwrap();
        assert!(none.is_empty());
        let all = sample_activity(&cfg(5, 5, 4), &mut rng).unwrap();
        assert_eq!(all.indices(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn activity_rejects_oversized_k() {
        let mut rng = stream(1, 0, "act");
        let mut c = cfg(5, 5, 4);
        c.n_active = 6;
        assert!(sample_activity(&c, &mut rng).is_err());
    }

    #[test]
    fn activity_set_reproducible() {
        let c = cfg(100, 10, 4);
        let a = sample_activity(&c, &mut stream(9, 4, "act")).unwrap();
        let b = sample_activity(&c, &mut stream(9, 4, "act")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn activity_frequency_law_of_large_numbers() {
        // N=10000, K=1000: per-user activity frequency 0.1 within 0.01.
        let c = cfg(10_000, 1_000, 1);
        let trials = 40_000usize;
        let mut counts = vec![0u32; c.n_users];
        for t in 0..trials {
            let a = sample_activity(&c, &mut stream(5, t as u64, "act-lln")).unwrap();
            for u in a.iter() {
                counts[u] += 1;
            }
        }
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for &cnt in &counts {
            let f = f64::from(cnt) / trials as f64;
            lo = lo.min(f);
            hi = hi.max(f);
        }
        assert!(lo > 0.09 && hi < 0.11, "freq range [{lo}, {hi}]");
    }

    #[test]
    fn channel_block_shape_and_variance() {
        let c = cfg(10, 2, 4);
        let gains = vec![1.0, 1.0];
        let mut rng = stream(2, 0, "chan");
        let b = sample_channel_block(&c, &gains, &mut rng);
        assert_eq!(b.small_scale.dim(), (4, 2));
        // Monte-Carlo per-entry variance over 1e5 entries.
        let mut acc = 0.0;
        let mut n = 0usize;
        for t in 0..12_500 {
            let b = sample_channel_block(&c, &gains, &mut stream(2, t, "chan-var"));
            acc += b.small_scale.iter().map(|z| z.norm_sqr()).sum::<f64>();
            n += b.small_scale.len();
        }
        let var = acc / n as f64;
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn channel_block_empty_active_set() {
        let c = cfg(10, 0, 4);
        let b = sample_channel_block(&c, &[], &mut stream(3, 0, "chan"));
        assert_eq!(b.small_scale.dim(), (4, 0));
    }

    #[test]
    fn channel_block_reproducible() {
        let c = cfg(10, 3, 4);
        let gains = vec![1.0, 0.5, 2.0];
        let a = sample_channel_block(&c, &gains, &mut stream(7, 1, "chan"));
        let b = sample_channel_block(&c, &gains, &mut stream(7, 1, "chan"));
        assert_eq!(a.small_scale, b.small_scale);
    }

    #[test]
    fn synthesize_no_transmitters_noiseless_is_zero() {
        let c = cfg(10, 2, 4);
        let ch = sample_channel_block(&c, &[1.0, 1.0], &mut stream(4, 0, "chan"));
        let y = synthesize_received(&[], &[], &ch, 0.0, &mut stream(4, 0, "noise")).unwrap();
        assert_eq!(y.dim(), (4, 0));
        let sig = vec![CVec::zeros(6)];
        let y = synthesize_received(&[0], &sig, &ch, 0.0, &mut stream(4, 0, "noise")).unwrap();
        assert!(y.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn synthesize_single_transmitter_rank_one() {
        let c = cfg(10, 1, 4);
        let ch = sample_channel_block(&c, &[1.0], &mut stream(5, 0, "chan"));
        let x = CVec::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, -2.0),
            C64::new(0.5, 0.5),
        ]);
        let y =
            synthesize_received(&[0], &[x.clone()], &ch, 0.0, &mut stream(5, 0, "noise")).unwrap();
        for i in 0..4 {
            for j in 0..3 {
                let expect = ch.small_scale[[i, 0]] * x[j];
                assert!((y[[i, j]] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn synthesize_superposition_with_frozen_noise() {
        let c = cfg(10, 2, 4);
        let ch = sample_channel_block(&c, &[0.7, 1.3], &mut stream(6, 0, "chan"));
        let x0 = CVec::from_shape_fn(5, |i| C64::new(i as f64, 1.0));
        let x1 = CVec::from_shape_fn(5, |i| C64::new(-1.0, i as f64 * 0.5));
        let joint = synthesize_received(
            &[0, 1],
            &[x0.clone(), x1.clone()],
            &ch,
            0.25,
            &mut stream(6, 1, "noise"),
        )
        .unwrap();
        let a = synthesize_received(&[0], &[x0], &ch, 0.0, &mut stream(6, 9, "z")).unwrap();
        let b = synthesize_received(&[1], &[x1], &ch, 0.25, &mut stream(6, 1, "noise")).unwrap();
        for (j, (x, y)) in joint.iter().zip((&a + &b).iter()).enumerate() {
            assert!((x - y).norm() < 1e-10, "entry {j}: {x} vs {y}");
        }
    }

    #[test]
    fn synthesize_shape_errors() {
        let c = cfg(10, 2, 4);
        let ch = sample_channel_block(&c, &[1.0, 1.0], &mut stream(8, 0, "chan"));
        let x0 = CVec::zeros(5);
        let x1 = CVec::zeros(4);
        assert!(synthesize_received(&[0, 1], &[x0.clone(), x1], &ch, 0.0, &mut stream(8, 0, "n"))
            .is_err());
        assert!(synthesize_received(&[0, 2], &[x0.clone(), x0], &ch, 0.0, &mut stream(8, 0, "n"))
            .is_err());
    }

    #[test]
    fn noise_energy_calibration() {
        // E||Z||_F^2 / (M D) must equal the configured variance within 1%.
        let mut acc = 0.0;
        let mut n = 0usize;
        for t in 0..40 {
            let z = noise_matrix(40, 40, 0.37, &mut stream(11, t, "noise-cal"));
            acc += z.iter().map(|v| v.norm_sqr()).sum::<f64>();
            n += z.len();
        }
        let var = acc / n as f64;
        assert!((var - 0.37).abs() / 0.37 < 0.01, "variance {var}");
    }

    #[test]
    fn received_block_spans() {
        let samples = CMat::zeros((2, 10));
        let b = ReceivedBlock::new(samples, 4).unwrap();
        assert_eq!(b.pilot_span, 0..4);
        assert_eq!(b.data_span, 4..10);
        assert!(ReceivedBlock::new(CMat::zeros((2, 3)), 4).is_err());
    }
}
