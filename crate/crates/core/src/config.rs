//! Scenario configuration shared by all protocol simulators.

use crate::error::{Error, Result};

/// All scenario parameters for one simulated system.
///
/// Powers are carried in dBm and converted to linear milliwatts on demand;
/// when `snr_db` is set the absolute power pathway is bypassed entirely:
/// transmit symbols have unit power and the noise variance is `10^(-snr/10)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Total user population N.
    pub n_users: usize,
    /// Number of active users K in a frame.
    pub n_active: usize,
    /// Base-station antennas M.
    pub n_antennas: usize,
    /// Coherence blocks per frame (Δ).
    pub n_blocks: usize,
    /// Symbols per coherence block (D).
    pub block_len: usize,
    /// Symbols per frame (T = D·Δ).
    pub frame_len: usize,
    /// Non-orthogonal detection pilot length (L, or L1 in the two-stage scheme).
    pub det_pilot_len: usize,
    /// Number of orthogonal pilots available per block (τ).
    pub orth_pilot_count: usize,
    /// Length of each orthogonal pilot in symbols.
    pub orth_pilot_len: usize,
    /// Uplink transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Noise power spectral density in dBm/Hz.
    pub noise_psd_dbm_hz: f64,
    /// Channel bandwidth in Hz.
    pub bandwidth_hz: f64,
    /// Path-loss intercept in dB (gain at 1 km).
    pub pathloss_intercept_db: f64,
    /// Path-loss slope in dB per decade of distance.
    pub pathloss_slope_db: f64,
    /// User distance range (min, max) in km.
    pub dist_range_km: (f64, f64),
    /// Inverse power control: unit large-scale gains for all users.
    pub power_control: bool,
    /// Direct per-symbol SNR in dB, overriding the dBm pathway when set.
    pub snr_db: Option<f64>,
    /// Base seed for every derived random stream.
    pub seed: u64,
}

impl SystemConfig {
    /// Check every structural invariant, returning the config on success.
    pub fn validated(self) -> Result<Self> {
        let c = &self;
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if c.n_users == 0 || c.n_antennas == 0 || c.n_blocks == 0 || c.block_len == 0 {
            return fail("counts must be positive".into());
        }
        if c.frame_len != c.block_len * c.n_blocks {
            return fail(format!(
                "frame_len {} != block_len {} x n_blocks {}",
                c.frame_len, c.block_len, c.n_blocks
            ));
        }
        if c.det_pilot_len > c.block_len {
            return fail(format!(
                "det_pilot_len {} exceeds block_len {}",
                c.det_pilot_len, c.block_len
            ));
        }
        if c.n_active > c.n_users {
            return fail(format!(
                "n_active {} exceeds n_users {}",
                c.n_active, c.n_users
            ));
        }
        if c.orth_pilot_count > c.block_len {
            return fail(format!(
                "orth_pilot_count {} exceeds block_len {}",
                c.orth_pilot_count, c.block_len
            ));
        }
        let (lo, hi) = c.dist_range_km;
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
            return fail(format!("dist_range ({lo}, {hi}) must satisfy 0 < min <= max"));
        }
        if c.bandwidth_hz <= 0.0 {
            return fail("bandwidth must be positive".into());
        }
        Ok(self)
    }

    /// Transmit power per symbol in linear milliwatts (1.0 under `snr_db`).
    pub fn tx_power_lin(&self) -> f64 {
        if self.snr_db.is_some() {
            1.0
        } else {
            10f64.powf(self.tx_power_dbm / 10.0)
        }
    }

    /// Noise variance per complex sample, in the same units as `tx_power_lin`.
    pub fn noise_variance(&self) -> f64 {
        match self.snr_db {
            Some(snr) => 10f64.powf(-snr / 10.0),
            None => 10f64.powf(self.noise_psd_dbm_hz / 10.0) * self.bandwidth_hz,
        }
    }

    /// Linear power gain of the path-loss model at distance `d` km.
    ///
    /// Returns 1.0 when inverse power control is active. Errors on
    /// nonpositive distances.
    pub fn pathloss_gain(&self, distance_km: f64) -> Result<f64> {
        if !(distance_km > 0.0) {
            return Err(Error::Domain(format!(
                "distance must be positive, got {distance_km}"
            )));
        }
        if self.power_control {
            return Ok(1.0);
        }
        let db = self.pathloss_intercept_db + self.pathloss_slope_db * distance_km.log10();
        Ok(10f64.powf(db / 10.0))
    }

    /// Received per-symbol power of an active user at the far edge of the
    /// cell: the smallest activity power the detector must resolve.
    pub fn min_active_gamma(&self) -> f64 {
        let far = self.dist_range_km.1;
        self.tx_power_lin() * self.pathloss_gain(far).expect("validated range")
    }
}

impl Default for SystemConfig {
    /// Fast-fading scenario defaults: inverse power control at 10 dB SNR.
    fn default() -> Self {
        SystemConfig {
            n_users: 10_000,
            n_active: 1_000,
            n_antennas: 400,
            n_blocks: 15,
            block_len: 300,
            frame_len: 4_500,
            det_pilot_len: 300,
            orth_pilot_count: 64,
            orth_pilot_len: 64,
            tx_power_dbm: 13.0,
            noise_psd_dbm_hz: -169.0,
            bandwidth_hz: 1e6,
            pathloss_intercept_db: -128.1,
            pathloss_slope_db: -36.7,
            dist_range_km: (0.8, 1.0),
            power_control: true,
            snr_db: Some(10.0),
            seed: 0,
        }
    }
}
