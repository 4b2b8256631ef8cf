//! Block transforms on power-of-two lengths.
//!
//! The inverse DFT carries the 1/N factor and the forward DFT is a bare sum,
//! so `dft(idft(x)) == x` without any extra scaling. The Hartley transform
//! uses the symmetric 1/sqrt(N) normalisation, which makes it its own
//! inverse. All three reject lengths that are not powers of two.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

thread_local! {
    // rustfft caches plans inside the planner; one planner per thread keeps
    // the hot Monte-Carlo loops allocation-free after warm-up.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len });
    }
    Ok(())
}

fn run_fft(buf: &mut [Complex64], inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        }
    });
    fft.process(buf);
}

/// Inverse DFT, `x(n) = (1/N) sum_k X(k) exp(+j 2 pi k n / N)`.
///
/// ```
/// use num_complex::Complex64;
/// let flat = vec![Complex64::new(1.0, 0.0); 4];
/// let x = acofdm::transforms::idft(&flat).unwrap();
/// assert!((x[0].re - 1.0).abs() < 1e-12 && x[1].norm() < 1e-12);
/// ```
pub fn idft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(spectrum.len())?;
    let mut buf = spectrum.to_vec();
    run_fft(&mut buf, true);
    let scale = 1.0 / spectrum.len() as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

/// Forward DFT, `X(k) = sum_n x(n) exp(-j 2 pi k n / N)` (no normalisation).
pub fn dft(signal: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(signal.len())?;
    let mut buf = signal.to_vec();
    run_fft(&mut buf, false);
    Ok(buf)
}

/// Discrete Hartley transform,
/// `y(k) = (1/sqrt(N)) sum_n x(n) (cos + sin)(2 pi k n / N)`.
///
/// Self-inverse under this normalisation: `dht(dht(x)) == x`. Computed via
/// the FFT using `cas`-spectrum = Re(X) - Im(X).
pub fn dht(signal: &[f64]) -> Result<Vec<f64>> {
    check_len(signal.len())?;
    let mut buf: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    run_fft(&mut buf, false);
    let scale = 1.0 / (signal.len() as f64).sqrt();
    Ok(buf.iter().map(|c| (c.re - c.im) * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    // Direct O(N^2) definitions, kept deliberately independent of the FFT
    // path so they can serve as oracles.
    fn direct_idft(spectrum: &[Complex64]) -> Vec<Complex64> {
        let n = spectrum.len();
        (0..n)
            .map(|t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, x) in spectrum.iter().enumerate() {
                    let ang = 2.0 * PI * (k * t) as f64 / n as f64;
                    acc += x * Complex64::new(ang.cos(), ang.sin());
                }
                acc / n as f64
            })
            .collect()
    }

    fn direct_dft(signal: &[Complex64]) -> Vec<Complex64> {
        let n = signal.len();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, x) in signal.iter().enumerate() {
                    let ang = 2.0 * PI * (k * t) as f64 / n as f64;
                    acc += x * Complex64::new(ang.cos(), -ang.sin());
                }
                acc
            })
            .collect()
    }

    fn direct_dht(signal: &[f64]) -> Vec<f64> {
        let n = signal.len();
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for (t, x) in signal.iter().enumerate() {
                    let ang = 2.0 * PI * (k * t) as f64 / n as f64;
                    acc += x * (ang.cos() + ang.sin());
                }
                acc / (n as f64).sqrt()
            })
            .collect()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn idft_of_flat_spectrum_is_impulse() {
        let x = idft(&[c(1.0, 0.0); 4]).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(
            max_err(&x, &expect) < 1e-12,
            "idft of flat spectrum should be a unit impulse, got {x:?}"
        );
    }

    #[test]
    fn idft_of_two_symmetric_bins_is_cosine() {
        let x = idft(&[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        assert!(
            max_err(&x, &expect) < 1e-12,
            "expected [1,0,-1,0], got {x:?}"
        );
    }

    #[test]
    fn dft_of_impulse_is_flat() {
        let x = dft(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(max_err(&x, &[c(1.0, 0.0); 4]) < 1e-12, "got {x:?}");
    }

    #[test]
    fn dft_of_cosine_hits_symmetric_bins() {
        let x = dft(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expect = [c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)];
        assert!(max_err(&x, &expect) < 1e-12, "got {x:?}");
    }

    #[test]
    fn dht_of_single_bin_matches_cas_kernel() {
        let y = dht(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        let expect = [0.5, 0.5, -0.5, -0.5];
        for (i, (&got, &want)) in y.iter().zip(&expect).enumerate() {
            assert!(
                (got - want).abs() < 1e-12,
                "dht sample {i}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn fast_paths_match_direct_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4usize, 8, 16, 32, 64] {
            let x = random_complex(&mut rng, n);
            assert!(
                max_err(&idft(&x).unwrap(), &direct_idft(&x)) < 1e-10,
                "idft mismatch vs direct sum at N={n}"
            );
            assert!(
                max_err(&dft(&x).unwrap(), &direct_dft(&x)) < 1e-10,
                "dft mismatch vs direct sum at N={n}"
            );
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let fast = dht(&r).unwrap();
            let slow = direct_dht(&r);
            let err = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "dht mismatch vs direct sum at N={n}: {err:e}");
        }
    }

    #[test]
    fn round_trips_recover_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [16usize, 64, 256, 1024] {
            for _ in 0..100 {
                let x = random_complex(&mut rng, n);
                let err = max_err(&dft(&idft(&x).unwrap()).unwrap(), &x);
                assert!(err < 1e-9, "dft(idft(x)) error {err:e} at N={n}");
                let err = max_err(&idft(&dft(&x).unwrap()).unwrap(), &x);
                assert!(err < 1e-9, "idft(dft(x)) error {err:e} at N={n}");

                let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let twice = dht(&dht(&r).unwrap()).unwrap();
                let err = twice
                    .iter()
                    .zip(&r)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(err < 1e-9, "dht(dht(x)) error {err:e} at N={n}");
            }
        }
    }

    #[test]
    fn parseval_holds_for_idft() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [16usize, 256] {
            let spec = random_complex(&mut rng, n);
            let x = idft(&spec).unwrap();
            let time_energy: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let spec_energy: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
            let rel = (time_energy - spec_energy).abs() / spec_energy;
            assert!(rel < 1e-9, "Parseval relative error {rel:e} at N={n}");
        }
    }

    #[test]
    fn hermitian_spectrum_gives_real_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 256;
        let mut spec = vec![c(0.0, 0.0); n];
        for k in 1..n / 2 {
            let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            spec[k] = v;
            spec[n - k] = v.conj();
        }
        let x = idft(&spec).unwrap();
        let worst = x.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        assert!(
            worst < 1e-12,
            "Hermitian spectrum should give a real signal, imaginary residue {worst:e}"
        );
    }

    #[test]
    fn odd_bin_spectrum_gives_antisymmetric_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let n = 256;
        let mut spec = vec![c(0.0, 0.0); n];
        for k in (1..n).step_by(2) {
            spec[k] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let x = idft(&spec).unwrap();
        for t in 0..n / 2 {
            let err = (x[t] + x[t + n / 2]).norm();
            assert!(
                err < 1e-12,
                "odd-bin signal must flip sign half a block later, sample {t} residue {err:e}"
            );
        }
    }

    #[test]
    fn zero_input_gives_zero_output() {
        assert!(dht(&[0.0; 16]).unwrap().iter().all(|&v| v == 0.0));
        assert!(idft(&[c(0.0, 0.0); 16]).unwrap().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn non_power_of_two_lengths_are_rejected() {
        for n in [3usize, 6, 12, 100] {
            assert!(matches!(
                idft(&vec![c(0.0, 0.0); n]),
                Err(Error::NotPowerOfTwo { len }) if len == n
            ));
            assert!(matches!(
                dft(&vec![c(0.0, 0.0); n]),
                Err(Error::NotPowerOfTwo { len }) if len == n
            ));
            assert!(matches!(
                dht(&vec![0.0; n]),
                Err(Error::NotPowerOfTwo { len }) if len == n
            ));
        }
        assert!(matches!(dht(&[]), Err(Error::NotPowerOfTwo { len: 0 })));
    }

    proptest! {
        #[test]
        fn prop_dft_idft_round_trip(
            exp in 3usize..6,
            seed in any::<u64>(),
        ) {
            let n = 1 << exp;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_complex(&mut rng, n);
            let back = dft(&idft(&x).unwrap()).unwrap();
            prop_assert!(max_err(&back, &x) < 1e-9);
        }

        #[test]
        fn prop_dht_is_self_inverse(
            exp in 3usize..6,
            seed in any::<u64>(),
        ) {
            let n = 1 << exp;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
            let back = dht(&dht(&x).unwrap()).unwrap();
            let err = back.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(err < 1e-7);
        }
    }
}
