//! Gray-labelled constellation tables at unit average energy.
//!
//! Entry `b` of a table is the point transmitted for bit pattern `b`; the
//! binary-reflected Gray labelling puts neighbouring amplitude levels one bit
//! apart. Tables are normalised so the mean symbol energy is exactly 1, which
//! lets the modem layer control transmit power with a single scale factor.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Evenly spaced bipolar levels `-(m-1), …, -1, +1, …, +(m-1)` before scaling.
fn level(i: usize, m: usize) -> f64 {
    (2 * i) as f64 - (m - 1) as f64
}

/// M-PAM amplitude table (orders 2, 4, 8), Gray-labelled, unit average energy.
pub fn pam_constellation(order: usize) -> Result<Vec<f64>> {
    if !matches!(order, 2 | 4 | 8) {
        return Err(Error::Config(format!(
            "unsupported PAM order {order} (expected 2, 4 or 8)"
        )));
    }
    // Mean energy of the raw +/-1, +/-3, … grid is (M^2 - 1) / 3.
    let m = order as f64;
    let scale = (3.0 / (m * m - 1.0)).sqrt();
    let mut points = vec![0.0; order];
    for i in 0..order {
        points[gray(i)] = level(i, order) * scale;
    }
    Ok(points)
}

/// Square M-QAM table (orders 4, 16, 64), Gray-labelled per axis, unit
/// average energy. The high half of the bit pattern picks the in-phase level,
/// the low half the quadrature level.
pub fn qam_constellation(order: usize) -> Result<Vec<Complex64>> {
    if !matches!(order, 4 | 16 | 64) {
        return Err(Error::Config(format!(
            "unsupported QAM order {order} (expected 4, 16 or 64)"
        )));
    }
    let side = (order as f64).sqrt() as usize;
    let axis_bits = side.trailing_zeros();
    // Two independent PAM axes with the same grid: mean energy 2(M-1)/3.
    let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
    let mut points = vec![Complex64::new(0.0, 0.0); order];
    for i in 0..side {
        for q in 0..side {
            let label = (gray(i) << axis_bits) | gray(q);
            points[label] = Complex64::new(level(i, side), level(q, side)) * scale;
        }
    }
    Ok(points)
}
