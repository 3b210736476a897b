//! Offline comparison of two WAV files: SNR, MSE, and optional learning-curve
//! and spectrogram CSV dumps.

use std::fs;
use std::path::{Path, PathBuf};

use kaf_core::{learning_curve, mse, output_snr_db, read_wav, spectrogram, Error, Result, Snr};

#[derive(Debug, clap::Args)]
pub struct MetricsArgs {
    /// Reference WAV (treated as the clean signal)
    #[arg(long = "ref")]
    pub reference: PathBuf,

    /// Estimate WAV to score against the reference
    #[arg(long)]
    pub est: PathBuf,

    /// Degrees of freedom subtracted from the sample count in the MSE
    /// denominator
    #[arg(long = "mse-dof", default_value_t = 0)]
    pub mse_dof: usize,

    /// Write the learning curve of (reference - estimate) to this CSV
    #[arg(long)]
    pub curve: Option<PathBuf>,

    /// Sliding window for the learning curve
    #[arg(long = "curve-window", default_value_t = 500)]
    pub curve_window: usize,

    /// Write the estimate's spectrogram magnitudes to this CSV
    #[arg(long)]
    pub spectrogram: Option<PathBuf>,

    /// Spectrogram frame length in samples
    #[arg(long, default_value_t = 256)]
    pub frame: usize,

    /// Spectrogram hop in samples (default: frame / 2)
    #[arg(long)]
    pub hop: Option<usize>,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn run(args: &MetricsArgs) -> Result<()> {
    let reference = read_wav(&args.reference)?;
    let estimate = read_wav(&args.est)?;

    match output_snr_db(&reference, &estimate)? {
        Snr::Infinite => println!("SNR: inf"),
        Snr::Db(v) => println!("SNR: {v:.3} dB"),
    }
    println!("MSE: {}", mse(&estimate.samples, &reference.samples, args.mse_dof)?);

    if let Some(path) = &args.curve {
        let errors: Vec<f64> =
            reference.samples.iter().zip(&estimate.samples).map(|(r, e)| r - e).collect();
        let points = learning_curve(&errors, args.curve_window)?;
        let mut out = Vec::new();
        kaf_core::metrics::write_learning_curve_csv(&points, &mut out)
            .expect("writing to a Vec cannot fail");
        write_text(path, std::str::from_utf8(&out).unwrap())?;
        println!("curve: {}", path.display());
    }

    if let Some(path) = &args.spectrogram {
        let hop = args.hop.unwrap_or(args.frame / 2).max(1);
        let rows = spectrogram(&estimate, args.frame, hop)?;
        let mut out = Vec::new();
        kaf_core::metrics::write_spectrogram_csv(&rows, &mut out)
            .expect("writing to a Vec cannot fail");
        write_text(path, std::str::from_utf8(&out).unwrap())?;
        println!("spectrogram: {}", path.display());
    }

    Ok(())
}
