//! Command-line harness over the adaptive-filter core: single enhancement
//! runs, the noise x SNR x algorithm benchmark grid, and offline metrics.

pub mod benchmark;
pub mod config;
pub mod enhance;
pub mod metrics_cmd;
pub mod params;
pub mod synth;
