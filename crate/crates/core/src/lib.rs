//! Adaptive filtering for speech enhancement, linear and kernel.
//!
//! The crate drives a supervised enhancement topology: a filter sees
//! regressors built from the noisy signal, predicts the clean (desired)
//! sample, and adapts on the prediction error. Four linear algorithms (LMS,
//! Newton-LMS, APA, NAPA) share one state shape; the kernel pair (KAPA,
//! NKAPA) runs the same updates in a reproducing-kernel space by storing
//! regressors as dictionary centers with one coefficient each.
//!
//! Supporting modules cover WAV I/O and SNR-controlled mixing
//! ([`signal_io`]), kernel evaluation and Gram matrices ([`kernels`]), and
//! report metrics: MSE, SNR, learning curves, spectrogram data
//! ([`metrics`]).

pub mod error;
pub mod kernel_filters;
pub mod kernels;
mod linalg;
pub mod linear_filters;
pub mod metrics;
pub mod run;
pub mod signal_io;

pub use error::{Error, Result};
pub use kernel_filters::{run_kernel, KernelAlgorithm, KernelFilter, KernelFilterConfig};
pub use kernels::{gram, kernel_eval, KernelSpec};
pub use linear_filters::{run_linear, LinearAlgorithm, LinearFilter, LinearFilterConfig};
pub use metrics::{
    learning_curve, mse, output_snr_db, snr_db, spectrogram, EnhancementReport, Snr,
};
pub use run::FilterRun;
pub use signal_io::{
    make_regressors, mix_at_snr, read_wav, synth_testbed, write_wav, Regressor, SignalBuffer,
    SynthSpec, Tone,
};
