//! Baseband simulation of unipolar OFDM for intensity-modulated optical
//! links, plus the frame-timing estimators and Monte-Carlo experiments built
//! on top of it.
//!
//! The crate is layered bottom-up:
//!
//! * [`transforms`] — DFT/IDFT and the discrete Hartley transform.
//! * [`constellation`] — Gray-labelled unit-energy QAM and PAM tables.
//! * [`modem`] — spectrum mapping, clipping, cyclic prefix; the three
//!   schemes (ACO-OFDM, PAM-DMT, DHT-based OFDM) behind one config type.
//! * [`channel`] — stream assembly, AWGN, optional FIR taps.
//! * [`sync`] — timing metrics: the clipping-symmetry correlator and three
//!   published baselines, plus training-frame generators.
//! * [`experiment`] — seeded, parallel Monte-Carlo drivers with CSV/SVG
//!   output; this is what the CLI calls into.

pub mod channel;
pub mod constellation;
pub mod error;
pub mod experiment;
pub mod modem;
mod plot;
pub mod sync;
pub mod transforms;

pub use error::{Error, Result};
pub use modem::{ModemConfig, PayloadSymbols, Scheme, UnipolarFrame};

/// Complex sample type used throughout the crate, re-exported so dependents
/// can build payloads without naming the underlying crate.
pub use num_complex::Complex64;
