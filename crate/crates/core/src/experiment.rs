//! Seeded Monte-Carlo experiments over the timing metrics.
//!
//! Two drivers cover the usual questions:
//!
//! * [`run_metric_average`] — average a metric's full offset curve over many
//!   independent trials at one operating point (the "what does the metric
//!   look like" experiment).
//! * [`run_detection_sweep`] — per SNR point, count how often the metric's
//!   global peak lands exactly on the right offset (the "how often does it
//!   work" experiment).
//!
//! Both are deterministic functions of the experiment config: every trial
//! seeds its own counter-based RNG derived from `(seed, lane, trial)`, trials
//! are summed in fixed-size chunks, and chunk partials are merged in index
//! order, so results are bit-identical no matter how many worker threads
//! run. Output goes to CSV (one header comment echoing the config, one
//! column-name row, then data rows) or a standalone SVG chart.

use std::ops::Range;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::channel::{awgn, build_stream, Snr};
use crate::error::{Error, Result};
use crate::modem::{ModemConfig, Scheme};
use crate::plot;
use crate::sync::{
    detect, gen_park_training, gen_schmidl_training, gen_tian_training, gen_training,
    metric_park, metric_proposed, metric_schmidl, metric_tian, SyncConfig, TimingMetricSeries,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trials per work unit. Fixing this (rather than letting the thread count
/// decide) is what makes parallel runs reproducible.
const CHUNK: usize = 64;

/// Which timing metric an experiment exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Clipping-symmetry correlator against a stored training template.
    Proposed,
    /// Symmetric-product metric over clipped mirror pairs.
    Tian,
    /// Half-block repetition metric.
    Schmidl,
    /// Centered-symmetry metric.
    Park,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Proposed => "proposed",
            MetricKind::Tian => "tian",
            MetricKind::Schmidl => "schmidl",
            MetricKind::Park => "park",
        }
    }

    /// Where the metric's peak sits relative to the training-body start.
    /// The symmetry-centered metrics peak half a block in; the detector
    /// compensates with this offset when scoring detections.
    pub fn peak_offset(self, n_fft: usize) -> i64 {
        match self {
            MetricKind::Proposed | MetricKind::Schmidl => 0,
            MetricKind::Tian | MetricKind::Park => (n_fft / 2) as i64,
        }
    }

    /// Offsets at which the metric can be evaluated on a stream of
    /// `stream_len` samples (window and lookback must stay in bounds).
    pub fn feasible_range(self, n_fft: usize, stream_len: usize) -> Range<usize> {
        match self {
            MetricKind::Proposed | MetricKind::Schmidl => 0..stream_len + 1 - n_fft,
            MetricKind::Tian => {
                let reach = n_fft / 4 - 1;
                reach..stream_len - reach
            }
            MetricKind::Park => {
                let reach = n_fft / 2 - 1;
                reach..stream_len - reach
            }
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(MetricKind::Proposed),
            "tian" => Ok(MetricKind::Tian),
            "schmidl" => Ok(MetricKind::Schmidl),
            "park" => Ok(MetricKind::Park),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

/// Complete, validated description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub n_fft: usize,
    pub cp_len: usize,
    pub constellation_order: usize,
    pub metric: MetricKind,
    /// Correlation length for the template correlator (ignored by the
    /// baselines, validated regardless).
    pub corr_len: usize,
    /// Operating points. The curve-averaging driver uses the first entry;
    /// the sweep visits all of them in order.
    pub snr_points: Vec<Snr>,
    /// Monte-Carlo trials per operating point.
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// The modem this experiment drives; also revalidates the geometry.
    pub fn modem(&self) -> Result<ModemConfig> {
        ModemConfig::new(self.scheme, self.n_fft, self.cp_len, self.constellation_order)
    }

    pub fn validate(&self) -> Result<()> {
        let modem = self.modem()?;
        if self.metric != MetricKind::Proposed && self.scheme != Scheme::Aco {
            return Err(Error::Config(format!(
                "the {} baseline is defined for the ACO scheme, got {}",
                self.metric, self.scheme
            )));
        }
        if self.metric == MetricKind::Tian && self.n_fft < 16 {
            return Err(Error::Config(
                "the tian metric needs n_fft >= 16".into(),
            ));
        }
        if matches!(self.metric, MetricKind::Schmidl | MetricKind::Park) && self.n_fft < 8 {
            return Err(Error::Config(format!(
                "the {} training needs n_fft >= 8",
                self.metric
            )));
        }
        if self.corr_len == 0 || self.corr_len > self.n_fft / 2 {
            return Err(Error::Config(format!(
                "corr_len must lie in 1..={}, got {}",
                self.n_fft / 2,
                self.corr_len
            )));
        }
        if self.snr_points.is_empty() {
            return Err(Error::Empty("snr_points"));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        drop(modem);
        Ok(())
    }

    /// `key=value` echo of every field that determines the results.
    fn echo(&self, kind: &str) -> String {
        let snrs: Vec<String> = self.snr_points.iter().map(|s| s.to_string()).collect();
        format!(
            "# kind={kind} scheme={} n_fft={} cp_len={} order={} metric={} corr_len={} \
             snr={} trials={} seed={}",
            self.scheme,
            self.n_fft,
            self.cp_len,
            self.constellation_order,
            self.metric,
            self.corr_len,
            snrs.join("/"),
            self.trials,
            self.seed
        )
    }
}

/// Detection statistics at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub snr: Snr,
    pub detections: u64,
    pub trials: u64,
    /// Raw success fraction `detections / trials`.
    pub rate: f64,
    /// Half-width of the 95% Wilson score interval.
    pub ci_halfwidth: f64,
}

impl SweepPoint {
    fn new(snr: Snr, detections: u64, trials: u64) -> Self {
        let rate = detections as f64 / trials as f64;
        let (center, hw) = wilson(detections, trials);
        debug_assert!(center.is_finite());
        SweepPoint {
            snr,
            detections,
            trials,
            rate,
            ci_halfwidth: hw,
        }
    }

    /// 95% Wilson score interval `(lo, hi)`; always inside `[0, 1]`. The
    /// interval is centered on the Wilson midpoint, which is pulled toward
    /// 1/2 relative to the raw rate, so `rate` itself may sit off-center.
    pub fn ci_bounds(&self) -> (f64, f64) {
        let (center, hw) = wilson(self.detections, self.trials);
        (center - hw, center + hw)
    }
}

/// Wilson score interval: `(midpoint, halfwidth)` for 95% confidence.
fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.96;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2n = Z * Z / n;
    let center = (p + z2n / 2.0) / (1.0 + z2n);
    let hw = (Z / (1.0 + z2n)) * (p * (1.0 - p) / n + z2n / (4.0 * n)).sqrt();
    (center, hw)
}

/// What kind of experiment a report came from (drives the CSV schema).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ReportKind {
    MetricAverage,
    DetectionSweep,
}

/// Results of one experiment run, ready to serialize.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub config: ExperimentConfig,
    /// Trial-averaged metric curve, offsets relative to the training-body
    /// start. Populated by [`run_metric_average`].
    pub averaged_metric: Option<TimingMetricSeries>,
    /// Per-SNR detection statistics. Populated by [`run_detection_sweep`].
    pub sweep: Vec<SweepPoint>,
    pub wall_time: Duration,
    kind: ReportKind,
}

impl TrialReport {
    /// CSV rendering: one `#` config-echo line, one header row, data rows.
    /// Floats print with Rust's shortest round-trip formatting. Deliberately
    /// excludes wall time so identical configs yield identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.kind {
            ReportKind::MetricAverage => {
                out.push_str(&self.config.echo("metric-avg"));
                out.push('\n');
                out.push_str("offset_d,mean_metric,n_trials\n");
                if let Some(series) = &self.averaged_metric {
                    for (d, v) in series.offsets().zip(series.values()) {
                        out.push_str(&format!("{d},{v},{}\n", self.config.trials));
                    }
                }
            }
            ReportKind::DetectionSweep => {
                out.push_str(&self.config.echo("detect-sweep"));
                out.push('\n');
                out.push_str("snr_db,detection_rate,ci_halfwidth,trials\n");
                for point in &self.sweep {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        point.snr, point.rate, point.ci_halfwidth, point.trials
                    ));
                }
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Write {
            path: path.display().to_string(),
            source,
        })
    }

    /// Standalone SVG chart of the report's curve.
    pub fn to_svg(&self) -> String {
        match self.kind {
            ReportKind::MetricAverage => {
                let series = self.averaged_metric.as_ref();
                let points: Vec<(f64, f64)> = series
                    .map(|s| s.offsets().map(|d| d as f64).zip(s.values().iter().copied()).collect())
                    .unwrap_or_default();
                let label = self.config.metric.as_str();
                plot::line_chart(&plot::Chart {
                    title: &format!(
                        "Averaged {label} metric, {} n_fft={} ({} trials)",
                        self.config.scheme, self.config.n_fft, self.config.trials
                    ),
                    x_label: "offset from training start (samples)",
                    y_label: "mean metric",
                    series: &[plot::Series {
                        label,
                        points: &points,
                    }],
                    x_ticks: None,
                })
            }
            ReportKind::DetectionSweep => {
                let points: Vec<(f64, f64)> = self
                    .sweep
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i as f64, p.rate))
                    .collect();
                let ticks: Vec<(f64, String)> = self
                    .sweep
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i as f64, p.snr.to_string()))
                    .collect();
                plot::line_chart(&plot::Chart {
                    title: &format!(
                        "Detection rate vs SNR, {} {} ({} trials/point)",
                        self.config.scheme, self.config.metric, self.config.trials
                    ),
                    x_label: "SNR (dB)",
                    y_label: "exact-detection rate",
                    series: &[plot::Series {
                        label: self.config.metric.as_str(),
                        points: &points,
                    }],
                    x_ticks: Some(&ticks),
                })
            }
        }
    }

    pub fn write_svg(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_svg()).map_err(|source| Error::Write {
            path: path.display().to_string(),
            source,
        })
    }
}

/// SplitMix64 finalizer; a cheap, well-mixed 64-bit permutation.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial RNG seed: mixes the master seed, the lane (operating-point
/// index), and the trial index so no two trials anywhere share a stream.
pub fn derive_seed(master: u64, lane: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ lane) ^ trial)
}

/// One synchronized trial: generate training, embed it in random traffic,
/// apply noise, evaluate the configured metric over `d_range` (absolute
/// stream offsets). Returns the series and the training-body start.
fn one_trial(
    config: &ExperimentConfig,
    modem: &ModemConfig,
    snr: Snr,
    d_range: Range<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<(TimingMetricSeries, usize)> {
    let training = match config.metric {
        MetricKind::Proposed => gen_training(modem, rng)?,
        MetricKind::Tian => gen_tian_training(modem, rng)?,
        MetricKind::Schmidl => gen_schmidl_training(modem, rng)?,
        MetricKind::Park => gen_park_training(modem, rng)?,
    };
    let stream = build_stream(modem, &training.frame, rng)?;
    let received = awgn(&stream.samples, snr, rng);
    let series = match config.metric {
        MetricKind::Proposed => {
            let sync = SyncConfig::new(modem.scheme, config.corr_len, training.bipolar)?;
            metric_proposed(&received, &sync, d_range)?
        }
        MetricKind::Tian => metric_tian(&received, modem.n_fft, d_range)?,
        MetricKind::Schmidl => metric_schmidl(&received, modem.n_fft, d_range)?,
        MetricKind::Park => metric_park(&received, modem.n_fft, d_range)?,
    };
    Ok((series, stream.true_start))
}

fn stream_len(modem: &ModemConfig) -> usize {
    3 * modem.frame_len()
}

fn true_start(modem: &ModemConfig) -> usize {
    modem.frame_len() + modem.cp_len
}

/// The offset window shown in curve plots: a frame's length either side of
/// the training start, clipped to where the metric is computable.
fn figure_range(config: &ExperimentConfig, modem: &ModemConfig) -> Range<usize> {
    let len = stream_len(modem);
    let start = true_start(modem);
    let feasible = config.metric.feasible_range(modem.n_fft, len);
    let lo = feasible.start.max(start.saturating_sub(modem.n_fft + modem.cp_len));
    let hi = feasible.end.min(start + modem.n_fft + 1);
    lo..hi
}

/// Averages the configured metric's offset curve over `config.trials`
/// independent trials at the *first* SNR point. The returned series is
/// rebased so offset 0 is the training-body start.
pub fn run_metric_average(config: &ExperimentConfig) -> Result<TrialReport> {
    config.validate()?;
    let started = Instant::now();
    let modem = config.modem()?;
    let snr = config.snr_points[0];
    let d_range = figure_range(config, &modem);
    let width = d_range.len();
    let trials = config.trials;
    let chunks = trials.div_ceil(CHUNK);

    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<f64>> {
            let mut sums = vec![0.0; width];
            let lo = chunk * CHUNK;
            let hi = ((chunk + 1) * CHUNK).min(trials);
            for trial in lo..hi {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 0, trial as u64));
                let (series, _) = one_trial(config, &modem, snr, d_range.clone(), &mut rng)?;
                for (sum, v) in sums.iter_mut().zip(series.values()) {
                    *sum += v;
                }
            }
            Ok(sums)
        })
        .collect::<Result<_>>()?;

    // Merge in chunk order; with the fixed chunk size this reproduces the
    // serial summation exactly, however many threads ran.
    let mut totals = vec![0.0; width];
    for partial in partials {
        for (total, v) in totals.iter_mut().zip(&partial) {
            *total += v;
        }
    }
    let inv = 1.0 / trials as f64;
    let means: Vec<f64> = totals.iter().map(|&v| v * inv).collect();
    let series = TimingMetricSeries::new(d_range.start as i64, means)?
        .rebased(true_start(&modem) as i64);

    Ok(TrialReport {
        config: config.clone(),
        averaged_metric: Some(series),
        sweep: Vec::new(),
        wall_time: started.elapsed(),
        kind: ReportKind::MetricAverage,
    })
}

/// For each SNR point, runs `config.trials` trials and counts how often the
/// metric's global peak (over the whole feasible window) lands exactly on
/// the training-body start plus the metric's structural peak offset.
pub fn run_detection_sweep(config: &ExperimentConfig) -> Result<TrialReport> {
    config.validate()?;
    let started = Instant::now();
    let modem = config.modem()?;
    let d_range = config.metric.feasible_range(modem.n_fft, stream_len(&modem));
    let peak_offset = config.metric.peak_offset(modem.n_fft);
    let trials = config.trials;
    let chunks = trials.div_ceil(CHUNK);

    let mut sweep = Vec::with_capacity(config.snr_points.len());
    for (lane, &snr) in config.snr_points.iter().enumerate() {
        let detections: u64 = (0..chunks)
            .into_par_iter()
            .map(|chunk| -> Result<u64> {
                let mut hits = 0u64;
                let lo = chunk * CHUNK;
                let hi = ((chunk + 1) * CHUNK).min(trials);
                for trial in lo..hi {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                        config.seed,
                        lane as u64,
                        trial as u64,
                    ));
                    let (series, start) =
                        one_trial(config, &modem, snr, d_range.clone(), &mut rng)?;
                    let expected = start as i64 + peak_offset;
                    if detect(&series, Some(expected)).correct == Some(true) {
                        hits += 1;
                    }
                }
                Ok(hits)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        sweep.push(SweepPoint::new(snr, detections, trials as u64));
    }

    Ok(TrialReport {
        config: config.clone(),
        averaged_metric: None,
        sweep,
        wall_time: started.elapsed(),
        kind: ReportKind::DetectionSweep,
    })
}
