//! Shared fixtures for the criterion benchmarks: one standard modem
//! geometry and a pre-built noisy stream so the timed bodies measure the
//! algorithms, not the setup.

use acofdm::channel::{awgn, build_stream, Snr};
use acofdm::modem::{draw_payload, ModemConfig, PayloadSymbols};
use acofdm::sync::{gen_training, SyncConfig};
use acofdm::Scheme;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Benchmark geometry used throughout: 256-point blocks, 32-sample prefix.
pub const N_FFT: usize = 256;
pub const CP_LEN: usize = 32;

/// The standard modem for a scheme (4-QAM for ACO, 2-PAM otherwise).
pub fn standard_modem(scheme: Scheme) -> ModemConfig {
    let order = if scheme == Scheme::Aco { 4 } else { 2 };
    ModemConfig::new(scheme, N_FFT, CP_LEN, order).expect("standard geometry is valid")
}

/// Everything a metric benchmark needs, built once up front.
pub struct BenchSetup {
    pub modem: ModemConfig,
    pub sync: SyncConfig,
    /// Three frames (random, training, random) at 10 dB SNR.
    pub received: Vec<f64>,
    pub true_start: usize,
}

/// Builds a deterministic noisy stream with an embedded training frame.
pub fn setup(scheme: Scheme, seed: u64) -> BenchSetup {
    let modem = standard_modem(scheme);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let training = gen_training(&modem, &mut rng).expect("training generation");
    let stream = build_stream(&modem, &training.frame, &mut rng).expect("stream assembly");
    let received = awgn(&stream.samples, Snr::Db(10.0), &mut rng);
    let sync = SyncConfig::new(scheme, N_FFT / 2, training.bipolar).expect("sync config");
    BenchSetup {
        modem,
        sync,
        received,
        true_start: stream.true_start,
    }
}

/// A fixed random payload for modulator benchmarks.
pub fn payload(modem: &ModemConfig, seed: u64) -> PayloadSymbols {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_payload(modem, &mut rng).expect("payload draw")
}
