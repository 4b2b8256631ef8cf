//! Received-signal assembly: embed a training frame in random traffic, run
//! it through an optional FIR response, add white Gaussian noise.
//!
//! Noise power is expressed relative to the *unclipped* unit-power signal,
//! so `snr_db = 10` means noise variance `0.1` regardless of scheme.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::modem::{draw_payload, modulate, ModemConfig, UnipolarFrame};

/// Signal-to-noise operating point. `NoiseFree` skips noise generation
/// entirely instead of adding zero-variance samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    NoiseFree,
    Db(f64),
}

impl Snr {
    /// Noise variance against the unit-power unclipped signal; zero when
    /// noise-free.
    pub fn noise_variance(self) -> f64 {
        match self {
            Snr::NoiseFree => 0.0,
            Snr::Db(db) => 10f64.powf(-db / 10.0),
        }
    }
}

impl std::fmt::Display for Snr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Snr::NoiseFree => f.write_str("inf"),
            Snr::Db(db) => write!(f, "{db}"),
        }
    }
}

impl std::str::FromStr for Snr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("noise-free") {
            return Ok(Snr::NoiseFree);
        }
        t.parse::<f64>()
            .map_err(|_| Error::Config(format!("cannot parse SNR value `{s}`")))
            .and_then(|db| {
                if db.is_finite() {
                    Ok(Snr::Db(db))
                } else if db.is_infinite() && db > 0.0 {
                    Ok(Snr::NoiseFree)
                } else {
                    Err(Error::Config(format!("SNR must be finite or +inf, got `{s}`")))
                }
            })
    }
}

/// A sample stream with the known position of the embedded training block.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamLayout {
    /// Clipped transmit samples: random frame, training frame, random frame.
    pub samples: Vec<f64>,
    /// Index of the first sample of the training frame's *body* (the sample
    /// right after its cyclic prefix).
    pub true_start: usize,
}

/// Builds the canonical test stream: one random-payload frame, the given
/// training frame, another random-payload frame, all with cyclic prefixes.
pub fn build_stream<R: Rng + ?Sized>(
    config: &ModemConfig,
    training: &UnipolarFrame,
    rng: &mut R,
) -> Result<StreamLayout> {
    if training.n_fft() != config.n_fft || training.cp_len() != config.cp_len {
        return Err(Error::Config(format!(
            "training frame geometry {}+{} does not match config {}+{}",
            training.cp_len(),
            training.n_fft(),
            config.cp_len,
            config.n_fft
        )));
    }
    let frame_len = config.frame_len();
    let mut samples = Vec::with_capacity(3 * frame_len);
    let lead = modulate(config, &draw_payload(config, rng)?)?;
    samples.extend_from_slice(lead.samples());
    samples.extend_from_slice(training.samples());
    let tail = modulate(config, &draw_payload(config, rng)?)?;
    samples.extend_from_slice(tail.samples());
    Ok(StreamLayout {
        samples,
        true_start: frame_len + config.cp_len,
    })
}

/// Adds white Gaussian noise at the given operating point. Noise-free input
/// is returned unchanged (and consumes no randomness).
pub fn awgn<R: Rng + ?Sized>(signal: &[f64], snr: Snr, rng: &mut R) -> Vec<f64> {
    match snr {
        Snr::NoiseFree => signal.to_vec(),
        Snr::Db(_) => {
            let sigma = snr.noise_variance().sqrt();
            let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
            signal.iter().map(|&v| v + normal.sample(rng)).collect()
        }
    }
}

/// Convolves the signal with FIR taps, truncated to the input length
/// (causal; output sample `t` sums `taps[j] * signal[t - j]`).
pub fn fir(signal: &[f64], taps: &[f64]) -> Result<Vec<f64>> {
    if taps.is_empty() {
        return Err(Error::Empty("FIR taps"));
    }
    let mut out = vec![0.0; signal.len()];
    for (t, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &h) in taps.iter().enumerate().take(t + 1) {
            acc += h * signal[t - j];
        }
        *o = acc;
    }
    Ok(out)
}

/// End-to-end channel: optional FIR, then AWGN.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub snr: Snr,
    /// Optional impulse response; `None` means an ideal flat channel.
    pub taps: Option<Vec<f64>>,
}

impl ChannelConfig {
    pub fn new(snr: Snr, taps: Option<Vec<f64>>) -> Result<Self> {
        if let Some(h) = &taps {
            if h.is_empty() {
                return Err(Error::Empty("FIR taps"));
            }
            if h[0] == 0.0 {
                return Err(Error::Config(
                    "leading FIR tap must be non-zero so the response is causal with no dead delay"
                        .into(),
                ));
            }
        }
        Ok(Self { snr, taps })
    }

    /// Applies the configured impairments to a transmit stream.
    pub fn apply<R: Rng + ?Sized>(&self, signal: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let shaped = match &self.taps {
            Some(h) => fir(signal, h)?,
            None => signal.to_vec(),
        };
        Ok(awgn(&shaped, self.snr, rng))
    }
}
