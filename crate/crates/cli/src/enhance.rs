//! One supervised enhancement pass: noisy WAV in, enhanced and error WAVs
//! plus a report out.

use std::fs;
use std::path::{Path, PathBuf};

use kaf_core::metrics::format_snr;
use kaf_core::{read_wav, write_wav, EnhancementReport, Error, Result};

use crate::config::CommonOpts;
use crate::params::{run_any, AnyAlgorithm};

#[derive(Debug, clap::Args)]
pub struct EnhanceArgs {
    /// Algorithm: lms | newton-lms | apa | napa | kapa | nkapa
    #[arg(long)]
    pub algo: String,

    /// Noisy input WAV (the filter's regressor source)
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Clean reference WAV; adaptation is supervised with desired = clean
    #[arg(long)]
    pub clean: PathBuf,

    /// Enhanced output WAV (the filter's y-sequence)
    #[arg(long)]
    pub out: PathBuf,

    /// Error-signal WAV (default: <out> with an .err.wav extension)
    #[arg(long = "err-out")]
    pub err_out: Option<PathBuf>,

    /// Report CSV (default: <out> with a .report.csv extension)
    #[arg(long = "report-csv")]
    pub report_csv: Option<PathBuf>,

    /// Learning-curve CSV, if wanted
    #[arg(long = "curve-csv")]
    pub curve_csv: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonOpts,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn run(args: &EnhanceArgs) -> Result<()> {
    let algorithm: AnyAlgorithm = args.algo.parse()?;
    let params = args.common.merged()?.resolve_params()?;

    let noisy = read_wav(&args.input)?;
    let clean = read_wav(&args.clean)?;
    let run = run_any(algorithm, &params, &noisy, &clean)?;

    let enhanced = run.output_signal(noisy.sample_rate_hz);
    write_wav(&args.out, &enhanced)?;
    let err_path =
        args.err_out.clone().unwrap_or_else(|| args.out.with_extension("err.wav"));
    write_wav(&err_path, &run.error_signal(noisy.sample_rate_hz))?;

    let mut echo = params.echo(algorithm);
    echo.push(("input".to_string(), args.input.display().to_string()));
    echo.push(("clean".to_string(), args.clean.display().to_string()));
    let report = EnhancementReport::from_signals(
        algorithm.name(),
        echo,
        &clean,
        &noisy,
        &enhanced,
        &run.errors,
        params.curve_window,
        run.dictionary_size,
    )?;

    let report_path =
        args.report_csv.clone().unwrap_or_else(|| args.out.with_extension("report.csv"));
    write_text(&report_path, &report_csv(&report))?;

    if let Some(curve_path) = &args.curve_csv {
        let mut out = Vec::new();
        kaf_core::metrics::write_learning_curve_csv(&report.learning_curve, &mut out)
            .expect("writing to a Vec cannot fail");
        write_text(curve_path, std::str::from_utf8(&out).unwrap())?;
    }

    print!("{}", report.text_block());
    println!("enhanced: {}", args.out.display());
    println!("error_signal: {}", err_path.display());
    println!("report: {}", report_path.display());
    Ok(())
}

fn report_csv(report: &EnhancementReport) -> String {
    let dict = report.dictionary_size.map(|d| d.to_string()).unwrap_or_default();
    format!(
        "algorithm,input_snr_db,output_snr_db,mse_final,dictionary_size\n{},{},{},{},{}\n",
        report.algorithm,
        format_snr(report.input_snr_db),
        format_snr(report.output_snr_db),
        report.mse_final,
        dict
    )
}
