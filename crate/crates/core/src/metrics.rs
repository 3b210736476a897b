//! MSE, SNR, learning curves, and spectrogram data for run reports.

use std::io::{self, Write};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal_io::SignalBuffer;

/// Signal-to-noise ratio in dB, with a distinct value for the zero-noise
/// case instead of overloading a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Db(f64),
    Infinite,
}

impl Snr {
    /// The ratio as a plain float, infinite-SNR mapping to f64::INFINITY.
    pub fn db_or_inf(&self) -> f64 {
        match *self {
            Self::Db(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }
}

/// Mean squared difference with an adjustable degrees-of-freedom denominator:
/// sum of squared differences over (n - dof_p). dof_p = 0 is the plain mean.
pub fn mse(estimates: &[f64], truths: &[f64], dof_p: usize) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch { expected: estimates.len(), got: truths.len() });
    }
    let n = estimates.len();
    if n <= dof_p {
        return Err(Error::InvalidArgument(format!(
            "need more than {dof_p} samples for {dof_p} degrees of freedom, got {n}"
        )));
    }
    let sum_sq: f64 = estimates.iter().zip(truths).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum_sq / (n - dof_p) as f64)
}

/// Power ratio of signal to noise in dB: 10 log10(sum s^2 / sum v^2).
pub fn snr_db(signal: &[f64], noise: &[f64]) -> Result<Snr> {
    if signal.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    if signal.len() != noise.len() {
        return Err(Error::LengthMismatch { expected: signal.len(), got: noise.len() });
    }
    let signal_power: f64 = signal.iter().map(|s| s * s).sum();
    let noise_power: f64 = noise.iter().map(|v| v * v).sum();
    if noise_power == 0.0 {
        return Ok(Snr::Infinite);
    }
    Ok(Snr::Db(10.0 * (signal_power / noise_power).log10()))
}

/// Residual-based output SNR: the clean signal against (enhanced - clean).
pub fn output_snr_db(clean: &SignalBuffer, enhanced: &SignalBuffer) -> Result<Snr> {
    if clean.len() != enhanced.len() {
        return Err(Error::LengthMismatch { expected: clean.len(), got: enhanced.len() });
    }
    let residual: Vec<f64> =
        enhanced.samples.iter().zip(&clean.samples).map(|(y, c)| y - c).collect();
    snr_db(&clean.samples, &residual)
}

/// Sliding-window mean of squared errors: one point per hop = max(1,
/// window/2) samples, the first at index = window. A window longer than the
/// sequence collapses to a single point over the whole sequence.
pub fn learning_curve(errors: &[f64], window: usize) -> Result<Vec<(usize, f64)>> {
    if window == 0 {
        return Err(Error::InvalidArgument("learning-curve window must be at least 1".into()));
    }
    if errors.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    let n = errors.len();
    let mean_sq = |span: &[f64]| span.iter().map(|e| e * e).sum::<f64>() / span.len() as f64;
    if window > n {
        return Ok(vec![(n, mean_sq(errors))]);
    }
    let hop = (window / 2).max(1);
    let mut points = Vec::new();
    let mut end = window;
    while end <= n {
        points.push((end, mean_sq(&errors[end - window..end])));
        end += hop;
    }
    Ok(points)
}

pub fn write_learning_curve_csv<W: Write>(points: &[(usize, f64)], mut w: W) -> io::Result<()> {
    writeln!(w, "index,mse")?;
    for (index, value) in points {
        writeln!(w, "{index},{value}")?;
    }
    Ok(())
}

/// Hann-windowed short-time Fourier magnitudes: one row per frame,
/// frame/2 + 1 bins per row.
pub fn spectrogram(buf: &SignalBuffer, frame: usize, hop: usize) -> Result<Vec<Vec<f64>>> {
    if frame < 2 {
        return Err(Error::InvalidArgument("frame must be at least 2".into()));
    }
    if hop == 0 || hop > frame {
        return Err(Error::InvalidArgument("hop must be between 1 and the frame size".into()));
    }
    let n = buf.len();
    if n < frame {
        return Err(Error::InvalidArgument(format!(
            "buffer shorter than one frame ({n} < {frame})"
        )));
    }

    let hann: Vec<f64> = (0..frame)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / frame as f64).cos()))
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(frame);
    let bins = frame / 2 + 1;

    let mut rows = Vec::new();
    let mut start = 0;
    while start + frame <= n {
        let mut spectrum: Vec<Complex<f64>> = buf.samples[start..start + frame]
            .iter()
            .zip(&hann)
            .map(|(s, w)| Complex::new(s * w, 0.0))
            .collect();
        fft.process(&mut spectrum);
        rows.push(spectrum[..bins].iter().map(|c| c.norm()).collect());
        start += hop;
    }
    Ok(rows)
}

pub fn write_spectrogram_csv<W: Write>(rows: &[Vec<f64>], mut w: W) -> io::Result<()> {
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Everything a single enhancement run reports: measured SNRs, the final
/// windowed MSE, the learning curve, and a config echo complete enough to
/// reproduce the run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementReport {
    pub algorithm: String,
    pub config_echo: Vec<(String, String)>,
    pub input_snr_db: Snr,
    pub output_snr_db: Snr,
    pub mse_final: f64,
    pub learning_curve: Vec<(usize, f64)>,
    pub dictionary_size: Option<usize>,
}

impl EnhancementReport {
    /// Builds the report from a run's signals. `curve_window` controls the
    /// learning curve; mse_final is the plain MSE over the trailing window.
    #[allow(clippy::too_many_arguments)]
    pub fn from_signals(
        algorithm: &str,
        config_echo: Vec<(String, String)>,
        clean: &SignalBuffer,
        noisy: &SignalBuffer,
        enhanced: &SignalBuffer,
        errors: &[f64],
        curve_window: usize,
        dictionary_size: Option<usize>,
    ) -> Result<Self> {
        let input_snr_db = output_snr_db(clean, noisy)?;
        let out_snr = output_snr_db(clean, enhanced)?;
        let curve = learning_curve(errors, curve_window)?;
        let tail = &errors[errors.len().saturating_sub(curve_window)..];
        let mse_final = mse(tail, &vec![0.0; tail.len()], 0)?;
        Ok(Self {
            algorithm: algorithm.to_string(),
            config_echo,
            input_snr_db,
            output_snr_db: out_snr,
            mse_final,
            learning_curve: curve,
            dictionary_size,
        })
    }

    /// Human-readable block, one key per line.
    pub fn text_block(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algorithm: {}\n", self.algorithm));
        for (key, value) in &self.config_echo {
            out.push_str(&format!("{key}: {value}\n"));
        }
        out.push_str(&format!("input_snr_db: {}\n", format_snr(self.input_snr_db)));
        out.push_str(&format!("output_snr_db: {}\n", format_snr(self.output_snr_db)));
        out.push_str(&format!("mse_final: {}\n", self.mse_final));
        if let Some(size) = self.dictionary_size {
            out.push_str(&format!("dictionary_size: {size}\n"));
        }
        out.push_str(&format!("learning_curve_points: {}\n", self.learning_curve.len()));
        out
    }
}

/// Formats an SNR as a plain decimal, or "inf" for the zero-noise case.
pub fn format_snr(snr: Snr) -> String {
    match snr {
        Snr::Db(v) => format!("{v}"),
        Snr::Infinite => "inf".to_string(),
    }
}
