//! Pilot sequence generation.

use crate::{CMat, C64};
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// L x N non-orthogonal signature matrix with i.i.d. circular Gaussian
/// entries, each column scaled to squared norm `L` (unit per-symbol power).
pub fn signature_matrix<R: Rng>(pilot_len: usize, n_users: usize, rng: &mut R) -> CMat {
    let mut s = Array2::from_shape_fn((pilot_len, n_users), |_| {
        C64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    for mut col in s.columns_mut() {
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let scale = (pilot_len as f64).sqrt() / norm;
            col.mapv_inplace(|z| z * scale);
        }
    }
    s
}

/// tau x tau orthogonal pilot bank from the DFT construction.
///
/// Rows are mutually orthogonal with per-symbol unit power, so each row has
/// squared norm `tau`.
pub fn dft_pilot_bank(tau: usize) -> CMat {
    Array2::from_shape_fn((tau, tau), |(r, c)| {
        let phase = -2.0 * PI * (r as f64) * (c as f64) / tau as f64;
        C64::new(phase.cos(), phase.sin())
    })
}
