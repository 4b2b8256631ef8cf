//! Unipolar OFDM modulators for intensity-modulated channels.
//!
//! Three schemes share one pipeline — place payload symbols on a spectrum,
//! inverse-transform, prepend a cyclic prefix, clip negatives to zero:
//!
//! * [`Scheme::Aco`]: QAM on the odd bins of the lower half with Hermitian
//!   mirrors, so the time signal is real and flips sign half a block later.
//!   Clipping then costs 3 dB on the odd bins and dumps all distortion on the
//!   even bins.
//! * [`Scheme::PamDmt`]: PAM loaded as purely imaginary values on every
//!   non-zero bin below N/2 with conjugate mirrors. The time signal obeys
//!   `x(N-n) = -x(n)`, so clipping distortion is confined to the real parts
//!   of the spectrum while the imaginary payload is halved intact.
//! * [`Scheme::Dht`]: PAM on all odd bins of a Hartley spectrum (no mirrors —
//!   the transform is real already); the same half-block sign flip and
//!   odd/even split as ACO apply in the Hartley domain.
//!
//! `demodulate` undoes the pipeline and doubles the payload bins to cancel
//! the clipping loss, which makes noise-free round trips exact.

use num_complex::Complex64;
use rand::Rng;

use crate::constellation::{pam_constellation, qam_constellation};
use crate::error::{Error, Result};
use crate::transforms::{dft, dht, idft};

/// Which clipped-OFDM flavour a config runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Aco,
    PamDmt,
    Dht,
}

impl Scheme {
    /// Number of payload symbols carried by one block of `n_fft` samples.
    pub fn payload_len(self, n_fft: usize) -> usize {
        match self {
            Scheme::Aco => n_fft / 4,
            Scheme::PamDmt => n_fft / 2 - 1,
            Scheme::Dht => n_fft / 2,
        }
    }

    /// Identifier used in CLI flags and CSV echoes.
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Aco => "aco",
            Scheme::PamDmt => "pamdmt",
            Scheme::Dht => "dht",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aco" => Ok(Scheme::Aco),
            "pamdmt" => Ok(Scheme::PamDmt),
            "dht" => Ok(Scheme::Dht),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Spectrum scale that gives the pre-clip time signal unit mean power.
///
/// With the 1/N inverse DFT, a scheme lighting `a` of the `N` bins with
/// unit-energy symbols produces mean sample power `a * s^2 / N^2`; solving
/// for `s` gives `N / sqrt(a)`. The Hartley path is unitary, so the same
/// argument gives `sqrt(N / a)`. Active bins: ACO and DHT use N/2, PAM-DMT
/// uses N-2.
pub fn compute_power_scale(scheme: Scheme, n_fft: usize) -> f64 {
    let n = n_fft as f64;
    match scheme {
        Scheme::Aco => (2.0 * n).sqrt(),
        Scheme::PamDmt => n / (n - 2.0).sqrt(),
        Scheme::Dht => 2f64.sqrt(),
    }
}

/// Static description of one modulator: scheme, block geometry, constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModemConfig {
    pub scheme: Scheme,
    pub n_fft: usize,
    pub cp_len: usize,
    pub constellation_order: usize,
    power_scale: f64,
}

impl ModemConfig {
    /// Validates the geometry and fixes the power scale.
    ///
    /// `n_fft` must be a power of two of at least 4 (the smallest block where
    /// every scheme carries payload); `cp_len` must be shorter than the
    /// block; the constellation order must fit the scheme family (square QAM
    /// for ACO, PAM for the real-payload schemes).
    pub fn new(
        scheme: Scheme,
        n_fft: usize,
        cp_len: usize,
        constellation_order: usize,
    ) -> Result<Self> {
        if !n_fft.is_power_of_two() || n_fft < 4 {
            return Err(Error::Config(format!(
                "n_fft must be a power of two >= 4, got {n_fft}"
            )));
        }
        if cp_len >= n_fft {
            return Err(Error::Config(format!(
                "cp_len {cp_len} must be shorter than n_fft {n_fft}"
            )));
        }
        match scheme {
            Scheme::Aco => drop(qam_constellation(constellation_order)?),
            Scheme::PamDmt | Scheme::Dht => drop(pam_constellation(constellation_order)?),
        }
        Ok(Self {
            scheme,
            n_fft,
            cp_len,
            constellation_order,
            power_scale: compute_power_scale(scheme, n_fft),
        })
    }

    /// Scale applied to every constellation point before mapping.
    pub fn power_scale(&self) -> f64 {
        self.power_scale
    }

    /// Samples per transmitted frame (block plus cyclic prefix).
    pub fn frame_len(&self) -> usize {
        self.n_fft + self.cp_len
    }

    /// Payload symbols per frame.
    pub fn payload_len(&self) -> usize {
        self.scheme.payload_len(self.n_fft)
    }
}

/// One frame's worth of payload: complex QAM for ACO, real PAM otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum PayloadSymbols {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

impl PayloadSymbols {
    pub fn len(&self) -> usize {
        match self {
            PayloadSymbols::Complex(v) => v.len(),
            PayloadSymbols::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest element-wise distance to `other`; infinite when the variants
    /// or lengths differ. Intended for round-trip checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match (self, other) {
            (PayloadSymbols::Complex(a), PayloadSymbols::Complex(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
            (PayloadSymbols::Real(a), PayloadSymbols::Real(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }
}

/// A transmitted clipped frame: cyclic prefix plus block, all samples >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct UnipolarFrame {
    samples: Vec<f64>,
    n_fft: usize,
    cp_len: usize,
}

impl UnipolarFrame {
    /// Wraps already-clipped samples, checking geometry and non-negativity.
    pub fn new(samples: Vec<f64>, n_fft: usize, cp_len: usize) -> Result<Self> {
        if samples.len() != n_fft + cp_len {
            return Err(Error::Length {
                context: "unipolar frame",
                expected: n_fft + cp_len,
                got: samples.len(),
            });
        }
        if let Some(bad) = samples.iter().find(|&&v| !(v >= 0.0)) {
            return Err(Error::Config(format!(
                "unipolar frame contains a negative or non-finite sample: {bad}"
            )));
        }
        Ok(Self {
            samples,
            n_fft,
            cp_len,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// The block without its cyclic prefix.
    pub fn body(&self) -> &[f64] {
        &self.samples[self.cp_len..]
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }
}

fn check_payload_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Length {
            context,
            expected,
            got,
        });
    }
    Ok(())
}

fn check_block_len(n_fft: usize) -> Result<()> {
    if !n_fft.is_power_of_two() || n_fft < 4 {
        return Err(Error::Config(format!(
            "block length must be a power of two >= 4, got {n_fft}"
        )));
    }
    Ok(())
}

/// ACO spectrum: payload on odd bins 1, 3, …, N/2-1, conjugates mirrored to
/// N-k, every even bin zero.
pub fn map_aco(payload: &[Complex64], n_fft: usize) -> Result<Vec<Complex64>> {
    check_block_len(n_fft)?;
    check_payload_len("ACO payload", n_fft / 4, payload.len())?;
    let mut spec = vec![Complex64::new(0.0, 0.0); n_fft];
    for (m, &sym) in payload.iter().enumerate() {
        let k = 2 * m + 1;
        spec[k] = sym;
        spec[n_fft - k] = sym.conj();
    }
    Ok(spec)
}

/// PAM-DMT spectrum: bin k carries `j*b(k-1)` for 1 <= k < N/2, the mirror
/// bin N-k carries the conjugate `-j*b(k-1)`, bins 0 and N/2 stay zero.
pub fn map_pamdmt(payload: &[f64], n_fft: usize) -> Result<Vec<Complex64>> {
    check_block_len(n_fft)?;
    check_payload_len("PAM-DMT payload", n_fft / 2 - 1, payload.len())?;
    let mut spec = vec![Complex64::new(0.0, 0.0); n_fft];
    for (i, &b) in payload.iter().enumerate() {
        let k = i + 1;
        spec[k] = Complex64::new(0.0, b);
        spec[n_fft - k] = Complex64::new(0.0, -b);
    }
    Ok(spec)
}

/// Hartley-domain spectrum: payload on every odd bin, no mirroring (the
/// transform maps real to real on its own).
pub fn map_dht(payload: &[f64], n_fft: usize) -> Result<Vec<f64>> {
    check_block_len(n_fft)?;
    check_payload_len("DHT payload", n_fft / 2, payload.len())?;
    let mut spec = vec![0.0; n_fft];
    for (m, &b) in payload.iter().enumerate() {
        spec[2 * m + 1] = b;
    }
    Ok(spec)
}

/// Asymmetric clipping: negatives to zero, everything else untouched.
pub fn clip_negative(signal: &[f64]) -> Vec<f64> {
    signal.iter().map(|&v| v.max(0.0)).collect()
}

/// Prepends the last `cp_len` samples of `body` as a cyclic prefix.
pub fn add_cp(body: &[f64], cp_len: usize) -> Result<Vec<f64>> {
    if cp_len > body.len() {
        return Err(Error::Config(format!(
            "cyclic prefix {cp_len} longer than block {}",
            body.len()
        )));
    }
    let mut out = Vec::with_capacity(body.len() + cp_len);
    out.extend_from_slice(&body[body.len() - cp_len..]);
    out.extend_from_slice(body);
    Ok(out)
}

/// Drops the first `cp_len` samples.
pub fn remove_cp(frame: &[f64], cp_len: usize) -> Result<Vec<f64>> {
    if cp_len >= frame.len() {
        return Err(Error::Config(format!(
            "cannot strip a {cp_len}-sample prefix from a {}-sample frame",
            frame.len()
        )));
    }
    Ok(frame[cp_len..].to_vec())
}

/// The bipolar (pre-clip) time-domain block for a payload: map, then inverse
/// transform. This is also the receiver's correlation template.
pub fn bipolar_body(config: &ModemConfig, payload: &PayloadSymbols) -> Result<Vec<f64>> {
    match (config.scheme, payload) {
        (Scheme::Aco, PayloadSymbols::Complex(symbols)) => {
            let spec = map_aco(symbols, config.n_fft)?;
            Ok(idft(&spec)?.iter().map(|c| c.re).collect())
        }
        (Scheme::PamDmt, PayloadSymbols::Real(symbols)) => {
            let spec = map_pamdmt(symbols, config.n_fft)?;
            Ok(idft(&spec)?.iter().map(|c| c.re).collect())
        }
        (Scheme::Dht, PayloadSymbols::Real(symbols)) => {
            let spec = map_dht(symbols, config.n_fft)?;
            dht(&spec)
        }
        (Scheme::Aco, PayloadSymbols::Real(_)) => Err(Error::Config(
            "ACO payload must be complex QAM symbols".into(),
        )),
        (_, PayloadSymbols::Complex(_)) => Err(Error::Config(
            "PAM-DMT and DHT payloads must be real PAM symbols".into(),
        )),
    }
}

/// Full transmit pipeline: map, inverse transform, add the cyclic prefix,
/// clip negatives. The prefix is copied before clipping; since clipping is
/// memoryless the prefix stays a faithful copy of the block tail.
pub fn modulate(config: &ModemConfig, payload: &PayloadSymbols) -> Result<UnipolarFrame> {
    let body = bipolar_body(config, payload)?;
    let with_cp = add_cp(&body, config.cp_len)?;
    UnipolarFrame::new(clip_negative(&with_cp), config.n_fft, config.cp_len)
}

/// Receive pipeline: strip the prefix, forward-transform, pull the payload
/// bins and double them to undo the clipping loss. Exact for noise-free
/// input; with noise it returns the perturbed symbol estimates.
pub fn demodulate(config: &ModemConfig, frame: &[f64]) -> Result<PayloadSymbols> {
    if frame.len() != config.frame_len() {
        return Err(Error::Length {
            context: "demodulate frame",
            expected: config.frame_len(),
            got: frame.len(),
        });
    }
    let body = remove_cp(frame, config.cp_len)?;
    let n = config.n_fft;
    match config.scheme {
        Scheme::Aco => {
            let complex: Vec<Complex64> = body.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let spec = dft(&complex)?;
            Ok(PayloadSymbols::Complex(
                (0..n / 4).map(|m| 2.0 * spec[2 * m + 1]).collect(),
            ))
        }
        Scheme::PamDmt => {
            let complex: Vec<Complex64> = body.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let spec = dft(&complex)?;
            Ok(PayloadSymbols::Real(
                (1..n / 2).map(|k| 2.0 * spec[k].im).collect(),
            ))
        }
        Scheme::Dht => {
            let spec = dht(&body)?;
            Ok(PayloadSymbols::Real(
                (0..n / 2).map(|m| 2.0 * spec[2 * m + 1]).collect(),
            ))
        }
    }
}

/// Draws one frame of uniformly random constellation symbols, already scaled
/// by the config's power factor.
pub fn draw_payload<R: Rng + ?Sized>(config: &ModemConfig, rng: &mut R) -> Result<PayloadSymbols> {
    let count = config.payload_len();
    let scale = config.power_scale;
    match config.scheme {
        Scheme::Aco => {
            let table = qam_constellation(config.constellation_order)?;
            Ok(PayloadSymbols::Complex(
                (0..count)
                    .map(|_| table[rng.random_range(0..table.len())] * scale)
                    .collect(),
            ))
        }
        Scheme::PamDmt | Scheme::Dht => {
            let table = pam_constellation(config.constellation_order)?;
            Ok(PayloadSymbols::Real(
                (0..count)
                    .map(|_| table[rng.random_range(0..table.len())] * scale)
                    .collect(),
            ))
        }
    }
}
