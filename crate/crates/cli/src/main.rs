use clap::Parser;

use kaf_cli::{benchmark, enhance, metrics_cmd};

/// Adaptive-filter speech enhancement harness.
///
/// Every run is supervised: the filter reads regressors from the noisy
/// signal, predicts the clean (desired) sample, and adapts on the prediction
/// error. The clean reference must therefore be available at run time; this
/// is a testbed for comparing adaptation algorithms, not a blind enhancer.
#[derive(Debug, Parser)]
#[command(name = "kaf", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Run one supervised enhancement pass over a noisy/clean WAV pair
    Enhance(enhance::EnhanceArgs),
    /// Sweep noise type x input SNR x algorithm and write one CSV
    Benchmark(benchmark::BenchmarkArgs),
    /// Score an estimate WAV against a reference WAV
    Metrics(metrics_cmd::MetricsArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enhance(args) => enhance::run(args),
        Command::Benchmark(args) => benchmark::run(args),
        Command::Metrics(args) => metrics_cmd::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
