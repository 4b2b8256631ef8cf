//! `acofdm` — frame-timing benchmarks for clipped optical OFDM.
//!
//! Two subcommands, same knobs:
//!
//! * `metric-avg` — average a timing metric's offset curve over many
//!   Monte-Carlo trials at one operating point and write it as CSV.
//! * `detect-sweep` — measure the exact-detection rate at each SNR point
//!   and write the rates with confidence intervals as CSV.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use acofdm::channel::Snr;
use acofdm::experiment::{
    run_detection_sweep, run_metric_average, ExperimentConfig, MetricKind, TrialReport,
};
use acofdm::modem::Scheme;

#[derive(Parser)]
#[command(name = "acofdm", version, about = "Frame-timing benchmarks for clipped optical OFDM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average a timing metric's offset curve over many trials
    MetricAvg(RunArgs),
    /// Measure the exact-detection rate across SNR points
    DetectSweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Modulation scheme: aco, pamdmt, dht
    #[arg(long, default_value = "aco")]
    scheme: String,

    /// Timing metric: proposed, tian, schmidl, park
    #[arg(long, default_value = "proposed")]
    metric: String,

    /// FFT block size (power of two)
    #[arg(long, default_value_t = 256)]
    nfft: usize,

    /// Cyclic-prefix length [default: nfft/8]
    #[arg(long)]
    cp: Option<usize>,

    /// Constellation order: square QAM for aco (4/16/64), PAM otherwise (2/4/8)
    #[arg(long = "mod", default_value_t = 4)]
    modulation: usize,

    /// Correlation length for the proposed metric [default: nfft/2]
    #[arg(long)]
    corr_len: Option<usize>,

    /// SNR points in dB; `inf` means noise-free. Comma- or space-separated.
    /// [default: inf for metric-avg; 0,2.5,…,15 for detect-sweep]
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    snr: Option<Vec<String>>,

    /// Monte-Carlo trials per operating point [default: 10000; 1000 with --quick]
    #[arg(long)]
    trials: Option<usize>,

    /// Master RNG seed; reruns with the same seed are bit-identical
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output CSV path [default: metric-avg.csv / detect-sweep.csv]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write an SVG chart next to the CSV
    #[arg(long)]
    plot: bool,

    /// Cut default trials to 1000 for a fast smoke run
    #[arg(long)]
    quick: bool,
}

impl RunArgs {
    fn config(&self, default_snr: &[Snr]) -> Result<ExperimentConfig> {
        let scheme: Scheme = self.scheme.parse()?;
        let metric: MetricKind = self.metric.parse()?;
        let snr_points = match &self.snr {
            Some(values) => values
                .iter()
                .map(|v| v.parse::<Snr>())
                .collect::<acofdm::Result<Vec<_>>>()?,
            None => default_snr.to_vec(),
        };
        let config = ExperimentConfig {
            scheme,
            n_fft: self.nfft,
            cp_len: self.cp.unwrap_or(self.nfft / 8),
            constellation_order: self.modulation,
            metric,
            corr_len: self.corr_len.unwrap_or(self.nfft / 2),
            snr_points,
            trials: self
                .trials
                .unwrap_or(if self.quick { 1_000 } else { 10_000 }),
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }

    fn out_path(&self, default_name: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default_name))
    }
}

fn write_outputs(report: &TrialReport, csv_path: &PathBuf, plot: bool) -> Result<()> {
    report
        .write_csv(csv_path)
        .with_context(|| format!("writing {}", csv_path.display()))?;
    println!("wrote {}", csv_path.display());
    if plot {
        let svg_path = csv_path.with_extension("svg");
        report
            .write_svg(&svg_path)
            .with_context(|| format!("writing {}", svg_path.display()))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn run_metric_avg_cmd(args: &RunArgs) -> Result<()> {
    let config = args.config(&[Snr::NoiseFree])?;
    let report = run_metric_average(&config)?;
    let series = report
        .averaged_metric
        .as_ref()
        .expect("curve averaging always produces a series");
    let (d_hat, peak) = series.argmax();
    println!(
        "metric-avg: scheme={} metric={} n_fft={} cp={} snr={} trials={} seed={}",
        config.scheme,
        config.metric,
        config.n_fft,
        config.cp_len,
        config.snr_points[0],
        config.trials,
        config.seed
    );
    println!(
        "peak mean metric {peak:.6} at offset {d_hat} (curve spans {}..={}, {} points, {:.2} s)",
        series.first_offset(),
        series.first_offset() + series.len() as i64 - 1,
        series.len(),
        report.wall_time.as_secs_f64()
    );
    write_outputs(&report, &args.out_path("metric-avg.csv"), args.plot)
}

fn run_detect_sweep_cmd(args: &RunArgs) -> Result<()> {
    let default_snr: Vec<Snr> = (0..7).map(|i| Snr::Db(i as f64 * 2.5)).collect();
    let config = args.config(&default_snr)?;
    let report = run_detection_sweep(&config)?;
    println!(
        "detect-sweep: scheme={} metric={} n_fft={} cp={} trials={} seed={} ({:.2} s)",
        config.scheme,
        config.metric,
        config.n_fft,
        config.cp_len,
        config.trials,
        config.seed,
        report.wall_time.as_secs_f64()
    );
    for point in &report.sweep {
        println!(
            "snr={} rate={:.4} (95% CI half-width {:.4}, {}/{} trials)",
            point.snr, point.rate, point.ci_halfwidth, point.detections, point.trials
        );
    }
    write_outputs(&report, &args.out_path("detect-sweep.csv"), args.plot)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::MetricAvg(args) => run_metric_avg_cmd(args),
        Command::DetectSweep(args) => run_detect_sweep_cmd(args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn metric_avg_defaults() {
        let cli = Cli::try_parse_from(["acofdm", "metric-avg"]).unwrap();
        let Command::MetricAvg(args) = &cli.command else {
            panic!("wrong subcommand");
        };
        let config = args.config(&[Snr::NoiseFree]).unwrap();
        assert_eq!(config.scheme, Scheme::Aco);
        assert_eq!(config.metric, MetricKind::Proposed);
        assert_eq!(config.n_fft, 256);
        assert_eq!(config.cp_len, 32);
        assert_eq!(config.constellation_order, 4);
        assert_eq!(config.corr_len, 128);
        assert_eq!(config.snr_points, vec![Snr::NoiseFree]);
        assert_eq!(config.trials, 10_000);
        assert_eq!(config.seed, 1);
        assert_eq!(args.out_path("metric-avg.csv"), PathBuf::from("metric-avg.csv"));
    }

    #[test]
    fn sweep_flags_parse_and_override_defaults() {
        let cli = Cli::try_parse_from([
            "acofdm",
            "detect-sweep",
            "--scheme",
            "pamdmt",
            "--mod",
            "2",
            "--nfft",
            "512",
            "--cp",
            "64",
            "--snr",
            "0,2.5,5",
            "--quick",
            "--seed",
            "9",
            "--out",
            "custom.csv",
        ])
        .unwrap();
        let Command::DetectSweep(args) = &cli.command else {
            panic!("wrong subcommand");
        };
        let config = args.config(&[]).unwrap();
        assert_eq!(config.scheme, Scheme::PamDmt);
        assert_eq!(config.n_fft, 512);
        assert_eq!(config.cp_len, 64);
        assert_eq!(config.constellation_order, 2);
        assert_eq!(
            config.snr_points,
            vec![Snr::Db(0.0), Snr::Db(2.5), Snr::Db(5.0)]
        );
        assert_eq!(config.trials, 1_000, "--quick lowers the default");
        assert_eq!(config.seed, 9);
        assert_eq!(args.out_path("detect-sweep.csv"), PathBuf::from("custom.csv"));
    }

    #[test]
    fn explicit_trials_beat_quick() {
        let cli =
            Cli::try_parse_from(["acofdm", "metric-avg", "--quick", "--trials", "42"]).unwrap();
        let Command::MetricAvg(args) = &cli.command else {
            panic!("wrong subcommand");
        };
        assert_eq!(args.config(&[Snr::NoiseFree]).unwrap().trials, 42);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let cli = Cli::try_parse_from(["acofdm", "metric-avg", "--metric", "nearest"]).unwrap();
        let Command::MetricAvg(args) = &cli.command else {
            panic!("wrong subcommand");
        };
        assert!(args.config(&[Snr::NoiseFree]).is_err());

        let cli = Cli::try_parse_from(["acofdm", "metric-avg", "--snr", "loud"]).unwrap();
        let Command::MetricAvg(args) = &cli.command else {
            panic!("wrong subcommand");
        };
        assert!(args.config(&[Snr::NoiseFree]).is_err());
    }
}
