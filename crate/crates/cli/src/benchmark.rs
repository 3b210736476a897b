//! The benchmark grid: noise type x input SNR x algorithm, each cell an
//! independent supervised enhancement run, reported as one CSV row.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ArgGroup;
use rayon::prelude::*;

use kaf_core::metrics::format_snr;
use kaf_core::{mix_at_snr, output_snr_db, read_wav, Error, Result, SignalBuffer, Snr};

use crate::config::{CommonOpts, Overrides};
use crate::params::{run_any, AnyAlgorithm, Params};
use crate::synth::{clean_speech_like, noise, NoiseType, SAMPLE_RATE_HZ};

pub const CSV_HEADER: &str = "noise_type,input_snr_db,algorithm,output_snr_db,mse_final,runtime_ms";

/// Kernel dictionary cap applied by default in benchmark runs only; it keeps
/// the full grid inside an interactive time budget. Pass --dict-cap none to
/// run unbounded dictionaries.
pub const DEFAULT_BENCH_DICT_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSettings {
    pub params: Params,
    pub seed: u64,
    pub samples: usize,
    pub snr_levels_db: Vec<f64>,
    pub algorithms: Vec<AnyAlgorithm>,
    pub nonlinear: bool,
    pub include_timing: bool,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            params: Params { dict_cap: Some(DEFAULT_BENCH_DICT_CAP), ..Params::default() },
            seed: 7,
            samples: 10_000,
            snr_levels_db: vec![0.0, 5.0, 10.0, 15.0],
            algorithms: ["apa", "kapa", "napa", "nkapa"]
                .iter()
                .map(|name| name.parse().unwrap())
                .collect(),
            nonlinear: false,
            include_timing: true,
        }
    }
}

impl GridSettings {
    pub fn from_overrides(over: &Overrides) -> Result<Self> {
        let defaults = Self::default();
        let mut params = over.resolve_params()?;
        if over.dict_cap.is_none() {
            params.dict_cap = Some(DEFAULT_BENCH_DICT_CAP);
        }
        let algorithms = match &over.algos {
            None => defaults.algorithms,
            Some(names) => names
                .iter()
                .map(|name| name.parse::<AnyAlgorithm>())
                .collect::<Result<Vec<_>>>()?,
        };
        if algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithms selected".into()));
        }
        let snr_levels_db = over.snr.clone().unwrap_or(defaults.snr_levels_db);
        if snr_levels_db.is_empty() {
            return Err(Error::InvalidConfig("no SNR levels selected".into()));
        }
        Ok(Self {
            params,
            seed: over.seed.unwrap_or(defaults.seed),
            samples: over.samples.unwrap_or(defaults.samples),
            snr_levels_db,
            algorithms,
            nonlinear: over.nonlinear.unwrap_or(false),
            include_timing: over.timing.unwrap_or(true),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub noise_type: String,
    pub input_snr_db: f64,
    pub algorithm: String,
    pub output_snr_db: Snr,
    pub mse_final: f64,
    pub runtime_ms: u128,
}

impl GridRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.noise_type,
            self.input_snr_db,
            self.algorithm,
            format_snr(self.output_snr_db),
            self.mse_final,
            self.runtime_ms
        )
    }
}

pub fn rows_to_csv(rows: &[GridRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// The built-in corpus: one clean signal and all five shaped noise types.
pub fn synthetic_sources(
    samples: usize,
    seed: u64,
) -> Result<(SignalBuffer, Vec<(String, SignalBuffer)>)> {
    let clean = clean_speech_like(samples, SAMPLE_RATE_HZ)?;
    let noises = NoiseType::ALL
        .iter()
        .map(|&t| Ok((t.name().to_string(), noise(t, samples, SAMPLE_RATE_HZ, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((clean, noises))
}

fn wav_paths_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "wav").unwrap_or(false))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Reads `clean/*.wav` (concatenated in name order) and `noise/<type>.wav`
/// from a corpus directory.
pub fn corpus_sources(dir: &Path) -> Result<(SignalBuffer, Vec<(String, SignalBuffer)>)> {
    let clean_paths = wav_paths_sorted(&dir.join("clean"))?;
    if clean_paths.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "empty corpus: no clean WAV files under {}",
            dir.display()
        )));
    }
    let mut clean: Option<SignalBuffer> = None;
    for path in clean_paths {
        let part = read_wav(&path)?;
        match &mut clean {
            None => clean = Some(part),
            Some(buf) => {
                if buf.sample_rate_hz != part.sample_rate_hz {
                    return Err(Error::SampleRateMismatch(buf.sample_rate_hz, part.sample_rate_hz));
                }
                buf.samples.extend_from_slice(&part.samples);
            }
        }
    }
    let clean = clean.unwrap();

    let noise_paths = wav_paths_sorted(&dir.join("noise"))?;
    if noise_paths.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "empty corpus: no noise WAV files under {}",
            dir.display()
        )));
    }
    let mut noises = Vec::new();
    for path in noise_paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "noise".to_string());
        let buf = read_wav(&path)?;
        if buf.sample_rate_hz != clean.sample_rate_hz {
            return Err(Error::SampleRateMismatch(clean.sample_rate_hz, buf.sample_rate_hz));
        }
        noises.push((name, buf));
    }
    Ok((clean, noises))
}

/// Signal-correlated noise for the nonlinear grid variant: the noise
/// amplitude follows the instantaneous clean value, so the observation is
/// no longer clean plus independent additive noise and the optimal
/// clean-from-noisy map is nonlinear. The mixer rescales afterwards, so the
/// SNR label stays honest for the modulated noise.
pub fn modulate_noise(clean: &SignalBuffer, noise: &SignalBuffer) -> SignalBuffer {
    let rms = clean.power().sqrt();
    SignalBuffer {
        samples: noise
            .samples
            .iter()
            .zip(&clean.samples)
            .map(|(v, c)| v * (1.0 + c / (1.5 * rms)))
            .collect(),
        sample_rate_hz: noise.sample_rate_hz,
    }
}

/// Mean squared error over the trailing window of a run's error sequence.
pub fn trailing_mse(errors: &[f64], window: usize) -> f64 {
    let tail = &errors[errors.len().saturating_sub(window.max(1))..];
    tail.iter().map(|e| e * e).sum::<f64>() / tail.len() as f64
}

/// Runs every grid cell and returns rows in deterministic grid order
/// (noise types, then SNR levels, then algorithms). Cells are independent
/// and run in parallel.
pub fn run_grid(
    clean: &SignalBuffer,
    noises: &[(String, SignalBuffer)],
    settings: &GridSettings,
) -> Result<Vec<GridRow>> {
    let mut cells = Vec::new();
    for (noise_idx, _) in noises.iter().enumerate() {
        for &snr in &settings.snr_levels_db {
            for &algo in &settings.algorithms {
                cells.push((noise_idx, snr, algo));
            }
        }
    }

    cells
        .par_iter()
        .map(|&(noise_idx, snr, algo)| {
            let (noise_name, noise_buf) = &noises[noise_idx];
            let noise_src = if settings.nonlinear {
                modulate_noise(clean, noise_buf)
            } else {
                noise_buf.clone()
            };
            let (input, _) = mix_at_snr(clean, &noise_src, snr)?;

            let started = Instant::now();
            let run = run_any(algo, &settings.params, &input, clean)?;
            let runtime_ms = if settings.include_timing { started.elapsed().as_millis() } else { 0 };

            let enhanced = run.output_signal(clean.sample_rate_hz);
            Ok(GridRow {
                noise_type: noise_name.clone(),
                input_snr_db: snr,
                algorithm: algo.name().to_string(),
                output_snr_db: output_snr_db(clean, &enhanced)?,
                mse_final: trailing_mse(&run.errors, settings.params.curve_window),
                runtime_ms,
            })
        })
        .collect()
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("source").required(true).args(["corpus", "synthetic"])))]
pub struct BenchmarkArgs {
    /// Corpus directory containing clean/*.wav and noise/<type>.wav
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Use the built-in synthetic corpus instead of files
    #[arg(long)]
    pub synthetic: bool,

    /// Seed for the synthetic corpus
    #[arg(long)]
    pub seed: Option<u64>,

    /// Samples per synthetic cell
    #[arg(long)]
    pub samples: Option<usize>,

    /// Input SNR levels in dB, comma separated
    #[arg(long, value_delimiter = ',')]
    pub snr: Option<Vec<f64>>,

    /// Algorithms to run, comma separated
    #[arg(long, value_delimiter = ',')]
    pub algos: Option<Vec<String>>,

    /// Modulate the noise amplitude with the clean signal before mixing
    #[arg(long)]
    pub nonlinear: bool,

    /// Report runtime_ms as 0 so reruns are byte-identical
    #[arg(long = "no-timing")]
    pub no_timing: bool,

    /// Output CSV path
    #[arg(long, default_value = "benchmark.csv")]
    pub out: PathBuf,

    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: &BenchmarkArgs) -> Result<()> {
    let mut over = args.common.merged()?;
    over = Overrides {
        seed: args.seed,
        samples: args.samples,
        snr: args.snr.clone(),
        algos: args.algos.clone(),
        nonlinear: args.nonlinear.then_some(true),
        timing: args.no_timing.then_some(false),
        ..Default::default()
    }
    .over(over);
    let settings = GridSettings::from_overrides(&over)?;

    let (clean, noises) = match &args.corpus {
        Some(dir) => corpus_sources(dir)?,
        None => synthetic_sources(settings.samples, settings.seed)?,
    };

    let rows = run_grid(&clean, &noises, &settings)?;
    let csv = rows_to_csv(&rows);
    fs::write(&args.out, csv)
        .map_err(|source| Error::Io { path: args.out.clone(), source })?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_format_as_plain_csv() {
        let row = GridRow {
            noise_type: "babble".into(),
            input_snr_db: 0.0,
            algorithm: "apa".into(),
            output_snr_db: Snr::Db(3.25),
            mse_final: 0.0125,
            runtime_ms: 42,
        };
        assert_eq!(row.csv_line(), "babble,0,apa,3.25,0.0125,42");
    }

    #[test]
    fn grid_order_is_noise_then_snr_then_algorithm() {
        let settings = GridSettings {
            samples: 400,
            snr_levels_db: vec![0.0, 10.0],
            algorithms: vec!["lms".parse().unwrap(), "apa".parse().unwrap()],
            include_timing: false,
            ..GridSettings::default()
        };
        let (clean, noises) = synthetic_sources(settings.samples, settings.seed).unwrap();
        let rows = run_grid(&clean, &noises[..2], &settings).unwrap();
        let labels: Vec<String> = rows
            .iter()
            .map(|r| format!("{}/{}/{}", r.noise_type, r.input_snr_db, r.algorithm))
            .collect();
        assert_eq!(
            labels,
            vec![
                "white/0/lms",
                "white/0/apa",
                "white/10/lms",
                "white/10/apa",
                "babble/0/lms",
                "babble/0/apa",
                "babble/10/lms",
                "babble/10/apa",
            ]
        );
    }

    #[test]
    fn grid_is_deterministic_without_timing() {
        let settings = GridSettings {
            samples: 300,
            snr_levels_db: vec![5.0],
            algorithms: vec!["apa".parse().unwrap(), "kapa".parse().unwrap()],
            include_timing: false,
            ..GridSettings::default()
        };
        let (clean, noises) = synthetic_sources(settings.samples, settings.seed).unwrap();
        let a = rows_to_csv(&run_grid(&clean, &noises, &settings).unwrap());
        let b = rows_to_csv(&run_grid(&clean, &noises, &settings).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 1 + 5 * 2);
    }

    #[test]
    fn settings_resolution_applies_benchmark_defaults() {
        let settings = GridSettings::from_overrides(&Overrides::default()).unwrap();
        assert_eq!(settings.params.dict_cap, Some(DEFAULT_BENCH_DICT_CAP));
        assert_eq!(settings.snr_levels_db, vec![0.0, 5.0, 10.0, 15.0]);
        assert_eq!(settings.seed, 7);
        assert!(settings.include_timing);

        let over = Overrides {
            dict_cap: Some(None),
            algos: Some(vec!["lms".into()]),
            ..Default::default()
        };
        let settings = GridSettings::from_overrides(&over).unwrap();
        assert_eq!(settings.params.dict_cap, None);
        assert_eq!(settings.algorithms, vec!["lms".parse().unwrap()]);

        let bad = Overrides { algos: Some(vec![]), ..Default::default() };
        assert!(GridSettings::from_overrides(&bad).is_err());
    }
}
