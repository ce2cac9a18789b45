//! Activity detection from the received sample covariance.
//!
//! The detector fits per-user activity powers by maximum likelihood,
//! minimizing `log|Sigma| + tr(Sigma^{-1} SampleCov)` over `gamma >= 0` with
//! `Sigma = S diag(gamma) S^H + noise_var I`, one coordinate at a time. Each
//! coordinate step has a closed form and the running inverse of `Sigma` is
//! maintained with a rank-one identity, so a full pass over all N users costs
//! `O(N L^2)` independent of the antenna count.

use crate::channel::ActivitySet;
use crate::error::{Error, Result};
use crate::linalg::{self, split, Cholesky, Op, SplitMat, SplitVec};
use crate::{CMat, C64};
use rand::seq::SliceRandom;
use rand::Rng;

/// Nonnegative per-user activity powers.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector {
    values: Vec<f64>,
}

impl GammaVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::Domain("gamma entries must be nonnegative".into()));
        }
        Ok(GammaVector { values })
    }

    pub fn zeros(n: usize) -> Self {
        GammaVector { values: vec![0.0; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Hermitian positive-semidefinite sample covariance of a received block.
#[derive(Debug, Clone)]
pub struct SampleCovariance {
    matrix: CMat,
}

impl SampleCovariance {
    /// Wrap an existing Hermitian matrix (checked to 1e-12).
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || n == 0 {
            return Err(Error::Shape("covariance must be square and nonempty".into()));
        }
        let scale = linalg::fro_norm(&matrix).max(1.0);
        for i in 0..n {
            for j in 0..n {
                if (matrix[[i, j]] - matrix[[j, i]].conj()).norm() > 1e-12 * scale {
                    return Err(Error::Numerical("matrix is not Hermitian".into()));
                }
            }
        }
        Ok(SampleCovariance { matrix })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `(1/M) Y^H Y` for a received block `Y` of shape M x L.
pub fn sample_covariance(received: &CMat) -> Result<SampleCovariance> {
    let (m, l) = received.dim();
    if m == 0 || l == 0 {
        return Err(Error::Shape(format!("received block is empty: {m}x{l}")));
    }
    let mut cov = linalg::cgemm(Op::H, received, Op::N, received);
    cov.mapv_inplace(|z| z / m as f64);
    linalg::hermitize(&mut cov);
    Ok(SampleCovariance { matrix: cov })
}

/// Coordinate update order within one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOrder {
    Cyclic,
    RandomPermutation,
}

/// Coordinate-descent solver configuration.
#[derive(Debug, Clone)]
pub struct CdConfig {
    /// Maximum number of full passes over the N coordinates (W).
    pub max_passes: usize,
    pub order: UpdateOrder,
    /// Stop when the relative objective decrease of a pass falls below this.
    pub tolerance: f64,
    /// Users with fitted power above this are declared active.
    pub activity_threshold: f64,
}

impl Default for CdConfig {
    fn default() -> Self {
        CdConfig {
            max_passes: 15,
            order: UpdateOrder::RandomPermutation,
            tolerance: 1e-6,
            activity_threshold: 0.5,
        }
    }
}

/// Result of [`detect`].
#[derive(Debug, Clone)]
pub struct DetectionOutcome {
    pub gamma: GammaVector,
    pub active: ActivitySet,
    /// Whether the tolerance was met before `max_passes` ran out.
    pub converged: bool,
    /// Full passes actually performed.
    pub passes: usize,
    /// Final maximum-likelihood objective value (natural log convention).
    pub objective: f64,
}

/// Maximum-likelihood objective `ln|Sigma| + tr(Sigma^{-1} SampleCov)`.
///
/// Natural logarithm throughout. `Sigma` is assembled from the support of
/// `gamma` only, then factored.
pub fn ml_objective(
    gamma: &GammaVector,
    pilots: &CMat,
    sample_cov: &SampleCovariance,
    noise_var: f64,
) -> Result<f64> {
    let (l, n) = pilots.dim();
    if gamma.len() != n {
        return Err(Error::Shape(format!(
            "gamma length {} vs {} pilot columns",
            gamma.len(),
            n
        )));
    }
    if sample_cov.dim() != l {
        return Err(Error::Shape("covariance dimension mismatch".into()));
    }
    if !(noise_var > 0.0) {
        return Err(Error::Domain("noise variance must be positive".into()));
    }
    let mut sigma = CMat::zeros((l, l));
    for i in 0..l {
        sigma[[i, i]] = C64::new(noise_var, 0.0);
    }
    for (k, &g) in gamma.values().iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        let col = pilots.column(k);
        for i in 0..l {
            let gi = g * col[i];
            for j in 0..l {
                sigma[[i, j]] += gi * col[j].conj();
            }
        }
    }
    let ch = Cholesky::factor(&sigma)
        .map_err(|e| Error::Numerical(format!("objective evaluation failed: {e}")))?;
    Ok(ch.ln_det() + ch.trace_solve(sample_cov.matrix()))
}

/// Coordinate-descent state: current `gamma`, the running `Sigma^{-1}` and
/// the tracked objective value.
pub struct CoordState {
    pilots: SplitMat,     // L x N
    cov: SplitMat,        // L x L
    inv: SplitMat,        // L x L, Sigma^{-1}
    gamma: Vec<f64>,
    noise_var: f64,
    objective: f64,
    v: SplitVec,
    w: SplitVec,
}

impl CoordState {
    /// Start from `gamma = 0`, where `Sigma^{-1} = I / noise_var`.
    pub fn new(pilots: &CMat, sample_cov: &SampleCovariance, noise_var: f64) -> Result<Self> {
        let (l, _) = pilots.dim();
        if sample_cov.dim() != l {
            return Err(Error::Shape("covariance dimension mismatch".into()));
        }
        if !(noise_var > 0.0) {
            return Err(Error::Domain("noise variance must be positive".into()));
        }
        let n = pilots.ncols();
        let mut inv = SplitMat::zeros(l, l);
        for i in 0..l {
            inv.re[i * l + i] = 1.0 / noise_var;
        }
        let trace: f64 = (0..l).map(|i| sample_cov.matrix()[[i, i]].re).sum();
        let objective = l as f64 * noise_var.ln() + trace / noise_var;
        Ok(CoordState {
            pilots: SplitMat::from_cmat(pilots),
            cov: SplitMat::from_cmat(sample_cov.matrix()),
            inv,
            gamma: vec![0.0; n],
            noise_var,
            objective,
            v: SplitVec::zeros(l),
            w: SplitVec::zeros(l),
        })
    }

    /// Start from an arbitrary feasible `gamma` (inverse formed by Cholesky).
    pub fn with_gamma(
        pilots: &CMat,
        sample_cov: &SampleCovariance,
        noise_var: f64,
        gamma: &GammaVector,
    ) -> Result<Self> {
        let mut state = Self::new(pilots, sample_cov, noise_var)?;
        if gamma.len() != state.gamma.len() {
            return Err(Error::Shape("gamma length mismatch".into()));
        }
        state.gamma = gamma.values().to_vec();
        state.objective = ml_objective(gamma, pilots, sample_cov, noise_var)?;
        state.refresh_inverse()?;
        Ok(state)
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Objective value tracked across updates (natural log convention).
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Recompute `Sigma^{-1}` from scratch, clearing rank-one update drift.
    pub fn refresh_inverse(&mut self) -> Result<()> {
        let l = self.inv.rows;
        let mut sigma = CMat::zeros((l, l));
        for i in 0..l {
            sigma[[i, i]] = C64::new(self.noise_var, 0.0);
        }
        let pilots = self.pilots.to_cmat();
        for (k, &g) in self.gamma.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let col = pilots.column(k);
            for i in 0..l {
                let gi = g * col[i];
                for j in 0..l {
                    sigma[[i, j]] += gi * col[j].conj();
                }
            }
        }
        let inv = Cholesky::factor(&sigma)?.inverse();
        self.inv = SplitMat::from_cmat(&inv);
        Ok(())
    }

    /// One closed-form coordinate step on user `k`.
    ///
    /// Returns the applied step `delta = max((b - a)/a^2, -gamma_k)` where
    /// `a = s_k^H Sigma^{-1} s_k` and `b = s_k^H Sigma^{-1} Cov Sigma^{-1} s_k`;
    /// updates `Sigma^{-1}` and the tracked objective when `delta != 0`.
    pub fn update_coordinate(&mut self, k: usize) -> f64 {
        let s_k = self.pilots.col(k);
        self.inv.gemv_cols_into(s_k, &mut self.v);
        let a = split::dot_re_conj(s_k, &self.v);
        if !(a > 0.0) || !a.is_finite() {
            return 0.0;
        }
        self.cov.gemv_into(&self.v, &mut self.w);
        let b = split::dot_re_conj_vv(&self.v, &self.w);
        let delta = ((b - a) / (a * a)).max(-self.gamma[k]);
        if delta == 0.0 || !delta.is_finite() {
            return 0.0;
        }
        let denom = 1.0 + delta * a;
        self.gamma[k] = (self.gamma[k] + delta).max(0.0);
        self.inv.rank1_herm_update(-delta / denom, &self.v);
        self.objective += denom.ln() - delta * b / denom;
        delta
    }
}

/// Spec-level wrapper over [`CoordState::update_coordinate`].
pub fn coordinate_update(state: &mut CoordState, k: usize) -> f64 {
    state.update_coordinate(k)
}

/// Full covariance-approach detection: sample covariance, coordinate descent
/// to `max_passes`/`tolerance`, then thresholding of the fitted powers.
pub fn detect<R: Rng>(
    received: &CMat,
    pilots: &CMat,
    noise_var: f64,
    config: &CdConfig,
    rng: &mut R,
) -> Result<DetectionOutcome> {
    let cov = sample_covariance(received)?;
    detect_from_covariance(&cov, pilots, noise_var, config, rng)
}

/// Detection starting from a precomputed sample covariance.
pub fn detect_from_covariance<R: Rng>(
    cov: &SampleCovariance,
    pilots: &CMat,
    noise_var: f64,
    config: &CdConfig,
    rng: &mut R,
) -> Result<DetectionOutcome> {
    let (l, n) = pilots.dim();
    if cov.dim() != l {
        return Err(Error::Shape(format!(
            "pilots are {l}x{n} but covariance is {}x{}",
            cov.dim(),
            cov.dim()
        )));
    }
    let mut state = CoordState::new(pilots, cov, noise_var)?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut converged = false;
    let mut passes = 0;
    for pass in 0..config.max_passes {
        if config.order == UpdateOrder::RandomPermutation {
            order.shuffle(rng);
        }
        let before = state.objective();
        for &k in &order {
            state.update_coordinate(k);
        }
        passes = pass + 1;
        let after = state.objective();
        if (before - after).abs() <= config.tolerance * before.abs().max(1.0) {
            converged = true;
            break;
        }
        if passes % 8 == 0 {
            state.refresh_inverse()?;
        }
    }
    let gamma = GammaVector::new(state.gamma().iter().map(|&g| g.max(0.0)).collect())?;
    let active: Vec<usize> = gamma
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > config.activity_threshold)
        .map(|(i, _)| i)
        .collect();
    let objective = state.objective();
    Ok(DetectionOutcome {
        active: ActivitySet::new(active, n)?,
        gamma,
        converged,
        passes,
        objective,
    })
}

/// Missed-detection and false-alarm rates of an estimated activity set.
pub fn detection_metrics(truth: &ActivitySet, estimate: &ActivitySet, n_users: usize) -> (f64, f64) {
    let missed = truth.iter().filter(|&u| !estimate.contains(u)).count();
    let false_alarms = estimate.iter().filter(|&u| !truth.contains(u)).count();
    let p_md = if truth.is_empty() {
        0.0
    } else {
        missed as f64 / truth.len() as f64
    };
    let inactive = n_users - truth.len();
    let p_fa = if inactive == 0 {
        0.0
    } else {
        false_alarms as f64 / inactive as f64
    };
    (p_md, p_fa)
}
