//! Simulation library for massive random access over a massive-MIMO uplink.
//!
//! The library provides the building blocks to compare scheduled and
//! contention-based access protocols:
//!
//! - [`config`] / [`channel`]: scenario configuration, activity and block-fading
//!   channel synthesis shared by everything else.
//! - [`covariance`]: activity detection by maximum-likelihood fitting of the
//!   received sample covariance via coordinate descent.
//! - [`amp`]: approximate message passing for joint activity detection and
//!   channel estimation, with its state-evolution predictor.
//! - [`feedback`]: collision-free scheduling feedback based on a two-level
//!   compress-hash-displace code, plus rate bounds and baselines.
//! - [`cpa`]: packet-level coded pilot access simulator with a peeling decoder.
//! - [`scheduled`]: three-phase scheduled random access for the fast-fading
//!   scenario.
//! - [`rate`]: LS/LMMSE channel estimation, MMSE-beamforming SINR and sum-rate
//!   evaluation for the slow-fading scenario.
//!
//! All randomness flows through [`rng::stream`], which derives independent
//! per-trial streams from a `(seed, trial, tag)` triple so Monte-Carlo trials
//! can run in parallel and reproduce bit-identically.

pub mod amp;
pub mod channel;
pub mod config;
pub mod covariance;
pub mod cpa;
pub mod error;
pub mod feedback;
pub mod linalg;
pub mod pilots;
pub mod rate;
pub mod rng;
pub mod scheduled;

pub use config::SystemConfig;
pub use error::{Error, Result};

/// Complex sample type used throughout the library.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMat = ndarray::Array2<C64>;
/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;
