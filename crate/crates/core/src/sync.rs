//! Frame-timing metrics for clipped optical OFDM.
//!
//! The schemes in [`crate::modem`] all satisfy a within-block symmetry that
//! clipping cannot destroy: for ACO and DHT blocks `x(n + N/2) = -x(n)`, for
//! PAM-DMT `x(N - n) = -x(n)`. Given a clipped block `w = max(x, 0)`, the
//! identity `max(a, 0) - max(-a, 0) = a` recovers the bipolar signal
//! exactly: `w(n) - w(n + N/2) = x(n)` (mirror variant for PAM-DMT). The
//! clipping-symmetry correlator below rebuilds the bipolar samples at each
//! candidate offset and correlates them against the known training block;
//! at the true offset the correlation is the template's own energy, while
//! misaligned windows mix unrelated frames and average toward zero.
//!
//! Three cross-correlation/autocorrelation baselines are provided for
//! comparison: a symmetric-product metric (`tian`), the classic half-block
//! repetition plateau metric (`schmidl`), and a centered-symmetry metric
//! (`park`), each paired with a generator for the training frame shape it
//! expects.

use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modem::{
    add_cp, clip_negative, draw_payload, map_aco, modulate, ModemConfig, Scheme, UnipolarFrame,
};
use crate::transforms::idft;
use num_complex::Complex64;

/// A training frame: the clipped samples that go on the wire plus the
/// unclipped bipolar body the receiver correlates against.
#[derive(Debug, Clone, PartialEq)]
pub struct Training {
    pub frame: UnipolarFrame,
    /// Pre-clip time-domain block, length `n_fft`.
    pub bipolar: Vec<f64>,
}

/// Receiver-side configuration for the clipping-symmetry correlator.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncConfig {
    scheme: Scheme,
    n_fft: usize,
    corr_len: usize,
    template: Vec<f64>,
}

impl SyncConfig {
    /// `template` is the unclipped bipolar training body (its length sets
    /// the block size); `corr_len` is how many reconstructed samples are
    /// correlated, at most half a block since the reconstruction pairs
    /// samples half a block apart.
    pub fn new(scheme: Scheme, corr_len: usize, template: Vec<f64>) -> Result<Self> {
        let n_fft = template.len();
        if !n_fft.is_power_of_two() || n_fft < 4 {
            return Err(Error::Config(format!(
                "template length must be a power of two >= 4, got {n_fft}"
            )));
        }
        if corr_len == 0 || corr_len > n_fft / 2 {
            return Err(Error::Config(format!(
                "corr_len must lie in 1..={}, got {corr_len}",
                n_fft / 2
            )));
        }
        if template.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("template contains non-finite samples".into()));
        }
        Ok(Self {
            scheme,
            n_fft,
            corr_len,
            template,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn corr_len(&self) -> usize {
        self.corr_len
    }

    pub fn template(&self) -> &[f64] {
        &self.template
    }
}

/// A timing metric evaluated over a contiguous run of candidate offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingMetricSeries {
    first_offset: i64,
    values: Vec<f64>,
}

impl TimingMetricSeries {
    pub fn new(first_offset: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("timing metric series"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "timing metric series contains non-finite values".into(),
            ));
        }
        Ok(Self {
            first_offset,
            values,
        })
    }

    pub fn first_offset(&self) -> i64 {
        self.first_offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Candidate offsets, parallel to [`values`](Self::values).
    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |i| self.first_offset + i)
    }

    /// The same series with offsets expressed relative to `new_zero`
    /// (typically the known training-body start).
    pub fn rebased(&self, new_zero: i64) -> TimingMetricSeries {
        TimingMetricSeries {
            first_offset: self.first_offset - new_zero,
            values: self.values.clone(),
        }
    }

    /// Metric value at one offset, if it lies inside the series.
    pub fn value_at(&self, offset: i64) -> Option<f64> {
        let idx = offset.checked_sub(self.first_offset)?;
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied()
    }

    /// `(offset, value)` of the maximum; the earliest offset wins ties.
    pub fn argmax(&self) -> (i64, f64) {
        let mut best = 0usize;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (self.first_offset + best as i64, self.values[best])
    }
}

/// Outcome of running a detector once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncResult {
    /// Offset at which the metric peaked.
    pub d_hat: i64,
    pub peak_value: f64,
    /// `Some(d_hat == expected)` when the caller knows the right answer.
    pub correct: Option<bool>,
}

/// Picks the metric peak and, when the expected offset is known, scores it.
pub fn detect(series: &TimingMetricSeries, expected: Option<i64>) -> SyncResult {
    let (d_hat, peak_value) = series.argmax();
    SyncResult {
        d_hat,
        peak_value,
        correct: expected.map(|e| e == d_hat),
    }
}

fn check_even_window(window: &[f64]) -> Result<usize> {
    if window.is_empty() || window.len() % 2 != 0 {
        return Err(Error::Config(format!(
            "reconstruction needs an even-length window, got {}",
            window.len()
        )));
    }
    Ok(window.len())
}

/// Bipolar reconstruction for half-block antisymmetric blocks (ACO, DHT):
/// `r(n) = w(n) - w(n + N/2)` for the first half-block.
pub fn reconstruct_bipolar_aco(window: &[f64]) -> Result<Vec<f64>> {
    let n = check_even_window(window)?;
    Ok((0..n / 2).map(|t| window[t] - window[t + n / 2]).collect())
}

/// Bipolar reconstruction for mirror-antisymmetric blocks (PAM-DMT):
/// `r(0) = 0`, `r(n) = w(n) - w(N - n)`.
pub fn reconstruct_bipolar_pamdmt(window: &[f64]) -> Result<Vec<f64>> {
    let n = check_even_window(window)?;
    let mut out = Vec::with_capacity(n / 2);
    out.push(0.0);
    out.extend((1..n / 2).map(|t| window[t] - window[n - t]));
    Ok(out)
}

fn check_metric_range(
    what: &'static str,
    stream_len: usize,
    lo_needed: usize,
    hi_needed_past_d: usize,
    d_range: &Range<usize>,
) -> Result<()> {
    if d_range.is_empty() {
        return Err(Error::Empty(what));
    }
    let last = d_range.end - 1;
    if d_range.start < lo_needed || last + hi_needed_past_d > stream_len {
        return Err(Error::Range {
            start: d_range.start,
            end: d_range.end,
            len: stream_len,
        });
    }
    Ok(())
}

/// Clipping-symmetry correlator: reconstruct the bipolar signal in the
/// window starting at each candidate `d` and correlate its first
/// `corr_len` samples against the training template, normalizing by
/// `corr_len`. Peaks at the true body start with the template's mean
/// energy; the caller compares offsets directly against that start.
pub fn metric_proposed(
    stream: &[f64],
    config: &SyncConfig,
    d_range: Range<usize>,
) -> Result<TimingMetricSeries> {
    let n = config.n_fft;
    check_metric_range("proposed-metric offsets", stream.len(), 0, n, &d_range)?;
    let l = config.corr_len;
    let template = &config.template;
    let inv_l = 1.0 / l as f64;
    let first = d_range.start as i64;
    let mut values = Vec::with_capacity(d_range.len());
    match config.scheme {
        Scheme::Aco | Scheme::Dht => {
            for d in d_range {
                let mut acc = 0.0;
                for t in 0..l {
                    acc += (stream[d + t] - stream[d + t + n / 2]) * template[t];
                }
                values.push(acc * inv_l);
            }
        }
        Scheme::PamDmt => {
            for d in d_range {
                let mut acc = 0.0;
                // t = 0 reconstructs to an exact zero; skip it.
                for t in 1..l {
                    acc += (stream[d + t] - stream[d + n - t]) * template[t];
                }
                values.push(acc * inv_l);
            }
        }
    }
    TimingMetricSeries::new(first, values)
}

/// Symmetric-product metric: averages `r(d - t) * r(d + t)` over
/// `t = 1..N/4`. Designed for clipped blocks whose positive samples mirror
/// around the block midpoint, so its peak sits half a block *after* the
/// body start. Requires `n_fft >= 16` so the average has at least one term
/// beyond the normalizer's reach.
pub fn metric_tian(
    stream: &[f64],
    n_fft: usize,
    d_range: Range<usize>,
) -> Result<TimingMetricSeries> {
    if !n_fft.is_power_of_two() || n_fft < 16 {
        return Err(Error::Config(format!(
            "symmetric-product metric needs n_fft as a power of two >= 16, got {n_fft}"
        )));
    }
    let reach = n_fft / 4 - 1;
    check_metric_range(
        "symmetric-product offsets",
        stream.len(),
        reach,
        reach + 1,
        &d_range,
    )?;
    let norm = 1.0 / (n_fft as f64 / 8.0 - 1.0);
    let first = d_range.start as i64;
    let mut values = Vec::with_capacity(d_range.len());
    for d in d_range {
        let mut acc = 0.0;
        for t in 1..=reach {
            acc += stream[d - t] * stream[d + t];
        }
        values.push(acc * norm);
    }
    TimingMetricSeries::new(first, values)
}

/// Half-block repetition metric: `(P/R)^2` with
/// `P(d) = sum r(d+m) r(d+m+N/2)` and `R(d) = sum r(d+m+N/2)^2` over half a
/// block. Plateaus at 1 across the cyclic prefix of a frame whose two
/// halves repeat. An all-zero normalizer yields 0.
pub fn metric_schmidl(
    stream: &[f64],
    n_fft: usize,
    d_range: Range<usize>,
) -> Result<TimingMetricSeries> {
    if !n_fft.is_power_of_two() || n_fft < 4 {
        return Err(Error::Config(format!(
            "repetition metric needs n_fft as a power of two >= 4, got {n_fft}"
        )));
    }
    check_metric_range("repetition-metric offsets", stream.len(), 0, n_fft, &d_range)?;
    let half = n_fft / 2;
    let first = d_range.start as i64;
    let mut values = Vec::with_capacity(d_range.len());
    for d in d_range {
        let mut p = 0.0;
        let mut r = 0.0;
        for m in 0..half {
            let late = stream[d + m + half];
            p += stream[d + m] * late;
            r += late * late;
        }
        values.push(if r == 0.0 { 0.0 } else { (p / r) * (p / r) });
    }
    TimingMetricSeries::new(first, values)
}

/// Centered-symmetry metric: `(P/R)^2` with
/// `P(d) = sum r(d-m) r(d+m)` and `R(d) = sum r(d+m)^2` over
/// `m = 1..N/2`. Peaks sharply wherever the signal is symmetric about `d`;
/// for the matching training frame the strongest such point is half a
/// block after the body start. An all-zero normalizer yields 0.
pub fn metric_park(
    stream: &[f64],
    n_fft: usize,
    d_range: Range<usize>,
) -> Result<TimingMetricSeries> {
    if !n_fft.is_power_of_two() || n_fft < 4 {
        return Err(Error::Config(format!(
            "centered-symmetry metric needs n_fft as a power of two >= 4, got {n_fft}"
        )));
    }
    let reach = n_fft / 2 - 1;
    check_metric_range(
        "centered-symmetry offsets",
        stream.len(),
        reach,
        reach + 1,
        &d_range,
    )?;
    let first = d_range.start as i64;
    let mut values = Vec::with_capacity(d_range.len());
    for d in d_range {
        let mut p = 0.0;
        let mut r = 0.0;
        for m in 1..=reach {
            let fwd = stream[d + m];
            p += stream[d - m] * fwd;
            r += fwd * fwd;
        }
        values.push(if r == 0.0 { 0.0 } else { (p / r) * (p / r) });
    }
    TimingMetricSeries::new(first, values)
}

/// Training for the clipping-symmetry correlator: an ordinary random data
/// frame. Any frame works because the receiver stores the bipolar template;
/// no dedicated spectrum shape is required.
pub fn gen_training<R: Rng + ?Sized>(config: &ModemConfig, rng: &mut R) -> Result<Training> {
    let payload = draw_payload(config, rng)?;
    let bipolar = crate::modem::bipolar_body(config, &payload)?;
    let frame = modulate(config, &payload)?;
    Ok(Training { frame, bipolar })
}

fn require_aco(config: &ModemConfig, what: &str) -> Result<()> {
    if config.scheme != Scheme::Aco {
        return Err(Error::Config(format!(
            "{what} training is defined for the ACO scheme, got {}",
            config.scheme
        )));
    }
    Ok(())
}

fn training_from_spectrum(config: &ModemConfig, spec: &[Complex64]) -> Result<Training> {
    let bipolar: Vec<f64> = idft(spec)?.iter().map(|c| c.re).collect();
    let with_cp = add_cp(&bipolar, config.cp_len)?;
    let frame = UnipolarFrame::new(clip_negative(&with_cp), config.n_fft, config.cp_len)?;
    Ok(Training { frame, bipolar })
}

/// Training for the symmetric-product metric: random `+/-1` values on the
/// odd bins with Hermitian mirrors. The real odd-bin spectrum makes the
/// block mirror-antisymmetric about the quarter points (exact zeros at
/// `N/4` and `3N/4`), which is the symmetry that metric exploits.
pub fn gen_tian_training<R: Rng + ?Sized>(config: &ModemConfig, rng: &mut R) -> Result<Training> {
    require_aco(config, "symmetric-product")?;
    let scale = config.power_scale();
    let payload: Vec<Complex64> = (0..config.n_fft / 4)
        .map(|_| {
            let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * scale, 0.0)
        })
        .collect();
    let spec = map_aco(&payload, config.n_fft)?;
    training_from_spectrum(config, &spec)
}

fn even_bin_count(n_fft: usize) -> Result<usize> {
    // Even bins 2, 4, …, N/2 - 2 on each side of the spectrum.
    if n_fft < 8 {
        return Err(Error::Config(format!(
            "even-bin training needs n_fft >= 8, got {n_fft}"
        )));
    }
    Ok(n_fft / 4 - 1)
}

/// Training for the half-block repetition metric: 4-QAM on the even bins
/// `2..N/2` with Hermitian mirrors and nothing on the odd bins, so the
/// block's two halves are identical copies and survive clipping as copies.
pub fn gen_schmidl_training<R: Rng + ?Sized>(
    config: &ModemConfig,
    rng: &mut R,
) -> Result<Training> {
    require_aco(config, "half-block repetition")?;
    let count = even_bin_count(config.n_fft)?;
    // 2(N/4 - 1) = N/2 - 2 active bins at symbol energy s^2 give mean sample
    // power (N/2 - 2) s^2 / N^2; s = N/sqrt(N/2 - 2) restores unit power.
    let scale = config.n_fft as f64 / (config.n_fft as f64 / 2.0 - 2.0).sqrt();
    let table = crate::constellation::qam_constellation(4)?;
    let mut spec = vec![Complex64::new(0.0, 0.0); config.n_fft];
    for i in 0..count {
        let k = 2 * (i + 1);
        let sym = table[rng.random_range(0..table.len())] * scale;
        spec[k] = sym;
        spec[config.n_fft - k] = sym.conj();
    }
    training_from_spectrum(config, &spec)
}

/// Training for the centered-symmetry metric: random `+/-1` values on the
/// same even bins. The real even-bin spectrum repeats every half block
/// *and* mirrors in time, so the block is symmetric about 0, N/4, N/2 and
/// 3N/4 — the strongest symmetry center the metric can lock to is half a
/// block after the body start.
pub fn gen_park_training<R: Rng + ?Sized>(config: &ModemConfig, rng: &mut R) -> Result<Training> {
    require_aco(config, "centered-symmetry")?;
    let count = even_bin_count(config.n_fft)?;
    let scale = config.n_fft as f64 / (config.n_fft as f64 / 2.0 - 2.0).sqrt();
    let mut spec = vec![Complex64::new(0.0, 0.0); config.n_fft];
    for i in 0..count {
        let k = 2 * (i + 1);
        let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
        spec[k] = Complex64::new(sign * scale, 0.0);
        spec[config.n_fft - k] = Complex64::new(sign * scale, 0.0);
    }
    training_from_spectrum(config, &spec)
}
