//! Layered BPSK encoder and two-stage demodulator, one- and two-dimensional,
//! plus plain BPSK/QPSK baselines.
//!
//! The transmitter sends `α·x` when the two bits agree and `(β/2)·z` when
//! they differ, so the sign of the transmitted amplitude always carries `z`.
//! The receiver decides `z` from the sign of the sample, subtracts `ẑ·β`, and
//! decides `x` from the sign of what is left. The residual amplitude is then
//! `±(α−β)` or `±β/2`.

use num_complex::Complex64;
use thiserror::Error;

use crate::domain::{Bit, WeightPair};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DemodError {
    #[error("received sample is not finite: {0}")]
    NonFinite(f64),
}

/// Output of the 1D two-stage demodulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demod1dResult {
    pub z_hat: Bit,
    pub x_hat: Bit,
    /// Sample after cancelling `ẑ·β`.
    pub x_tilde: f64,
}

/// Output of the 2D demodulator. Primed decisions are the `j` coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demod2dResult {
    pub z_hat: Bit,
    pub z_hat_prime: Bit,
    pub x_hat: Bit,
    pub x_hat_prime: Bit,
    pub x_tilde_prime: Complex64,
}

#[inline]
pub fn encode_1d(x: Bit, z: Bit, w: &WeightPair) -> f64 {
    if x == z {
        w.alpha() * x.value()
    } else {
        0.5 * w.beta() * z.value()
    }
}

/// Second stage only: cancel `z_ref·β` and decide `x`.
#[inline]
pub fn cancel_and_decide(y: f64, z_ref: Bit, w: &WeightPair) -> (f64, Bit) {
    let x_tilde = y - z_ref.value() * w.beta();
    (x_tilde, Bit::decide(x_tilde))
}

pub fn demod_1d(y: f64, w: &WeightPair) -> Result<Demod1dResult, DemodError> {
    if !y.is_finite() {
        return Err(DemodError::NonFinite(y));
    }
    let z_hat = Bit::decide(y);
    let (x_tilde, x_hat) = cancel_and_decide(y, z_hat, w);
    Ok(Demod1dResult {
        z_hat,
        x_hat,
        x_tilde,
    })
}

#[inline]
pub fn encode_2d(x: Bit, z: Bit, xp: Bit, zp: Bit, w: &WeightPair, wp: &WeightPair) -> Complex64 {
    Complex64::new(encode_1d(x, z, w), encode_1d(xp, zp, wp))
}

pub fn demod_2d(y: Complex64, w: &WeightPair, wp: &WeightPair) -> Result<Demod2dResult, DemodError> {
    if !y.re.is_finite() {
        return Err(DemodError::NonFinite(y.re));
    }
    if !y.im.is_finite() {
        return Err(DemodError::NonFinite(y.im));
    }
    let z_hat = Bit::decide(y.re);
    let z_hat_prime = Bit::decide(y.im);
    // β′ is cancelled on the imaginary axis
    let x_tilde_prime = y - Complex64::new(z_hat.value() * w.beta(), z_hat_prime.value() * wp.beta());
    Ok(Demod2dResult {
        z_hat,
        z_hat_prime,
        x_hat: Bit::decide(x_tilde_prime.re),
        x_hat_prime: Bit::decide(x_tilde_prime.im),
        x_tilde_prime,
    })
}

#[inline]
pub fn encode_bpsk(x: Bit, amplitude: f64) -> f64 {
    amplitude * x.value()
}

#[inline]
pub fn demod_bpsk(y: f64) -> Bit {
    Bit::decide(y)
}

/// Per-axis BPSK on both quadratures, no Gray mapping.
#[inline]
pub fn encode_qpsk(i: Bit, q: Bit, amplitude: f64) -> Complex64 {
    Complex64::new(encode_bpsk(i, amplitude), encode_bpsk(q, amplitude))
}

#[inline]
pub fn demod_qpsk(y: Complex64) -> (Bit, Bit) {
    (demod_bpsk(y.re), demod_bpsk(y.im))
}
