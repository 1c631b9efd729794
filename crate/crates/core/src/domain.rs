//! Domain types shared by the modem, channel, rate and simulation modules.
//!
//! Amplitudes are dimensionless signal units. SNRs are never stored on these
//! types; they are formed from a power and a [`NoiseSpec`] where needed.

use std::fmt;
use std::ops::Neg;

use thiserror::Error;

/// Validation failures for [`WeightPair`] and [`NoiseSpec`] construction.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("weights must be finite (alpha = {alpha}, beta = {beta})")]
    NonFiniteWeight { alpha: f64, beta: f64 },
    #[error("beta must be positive (got {0})")]
    BetaNotPositive(f64),
    #[error("alpha must exceed beta (alpha = {alpha}, beta = {beta})")]
    AlphaNotAboveBeta { alpha: f64, beta: f64 },
    #[error("alpha/beta ratio must be finite and exceed 1 (got {0})")]
    RatioNotAboveOne(f64),
    #[error("average power must be finite and positive (got {0})")]
    PowerNotPositive(f64),
    #[error("noise variance must be finite and positive (got {0})")]
    NoiseNotPositive(f64),
}

/// An antipodal symbol, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Minus,
    Plus,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Plus, Bit::Minus];

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Bit::Plus => 1.0,
            Bit::Minus => -1.0,
        }
    }

    /// Hard sign decision. Exactly zero decides `+1`.
    #[inline]
    pub fn decide(v: f64) -> Bit {
        if v >= 0.0 {
            Bit::Plus
        } else {
            Bit::Minus
        }
    }

    #[inline]
    pub fn from_bool(b: bool) -> Bit {
        if b {
            Bit::Plus
        } else {
            Bit::Minus
        }
    }
}

impl Neg for Bit {
    type Output = Bit;

    fn neg(self) -> Bit {
        match self {
            Bit::Plus => Bit::Minus,
            Bit::Minus => Bit::Plus,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bit::Plus => f.write_str("+1"),
            Bit::Minus => f.write_str("-1"),
        }
    }
}

/// Layering weights `(alpha, beta)` of one dimension, with `alpha > beta > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    alpha: f64,
    beta: f64,
}

impl WeightPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, DomainError> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(DomainError::NonFiniteWeight { alpha, beta });
        }
        if beta <= 0.0 {
            return Err(DomainError::BetaNotPositive(beta));
        }
        if alpha <= beta {
            return Err(DomainError::AlphaNotAboveBeta { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Weights with `alpha / beta = ratio` whose equiprobable four-point
    /// constellation `{±alpha, ±beta/2}` has mean power `avg_power`.
    pub fn from_ratio(ratio: f64, avg_power: f64) -> Result<Self, DomainError> {
        if !ratio.is_finite() || ratio <= 1.0 {
            return Err(DomainError::RatioNotAboveOne(ratio));
        }
        if !avg_power.is_finite() || avg_power <= 0.0 {
            return Err(DomainError::PowerNotPositive(avg_power));
        }
        // avg = alpha^2 * (1/2 + 1/(8 r^2))
        let alpha = (avg_power / (0.5 + 0.125 / (ratio * ratio))).sqrt();
        Self::new(alpha, alpha / ratio)
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ratio(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Mean transmitted power `½α² + ½(β/2)²`.
    pub fn average_power(&self) -> f64 {
        let half_beta = 0.5 * self.beta;
        0.5 * self.alpha * self.alpha + 0.5 * half_beta * half_beta
    }

    /// Mean power seen by the second-stage demodulator after a correct
    /// first-stage cancellation: `½(α−β)² + ½(β/2)²`.
    pub fn residual_power(&self) -> f64 {
        let gap = self.alpha - self.beta;
        let half_beta = 0.5 * self.beta;
        0.5 * gap * gap + 0.5 * half_beta * half_beta
    }

    /// The four equiprobable transmitted amplitudes.
    pub fn constellation(&self) -> [f64; 4] {
        let half_beta = 0.5 * self.beta;
        [self.alpha, -self.alpha, -half_beta, half_beta]
    }
}

/// Free-function form of [`WeightPair::new`].
pub fn make_weight_pair(alpha: f64, beta: f64) -> Result<WeightPair, DomainError> {
    WeightPair::new(alpha, beta)
}

/// Free-function form of [`WeightPair::from_ratio`].
pub fn weights_from_ratio(ratio: f64, avg_power: f64) -> Result<WeightPair, DomainError> {
    WeightPair::from_ratio(ratio, avg_power)
}

/// Additive white Gaussian noise description.
///
/// `sigma2` is the variance of every real dimension. A complex sample
/// therefore carries total noise power `2σ²`, which is also the reference
/// noise power `N0` used when forming SNRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    sigma2: f64,
}

impl NoiseSpec {
    pub fn new(sigma2: f64) -> Result<Self, DomainError> {
        if !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(DomainError::NoiseNotPositive(sigma2));
        }
        Ok(Self { sigma2 })
    }

    /// Noise whose reference power `N0` (total complex noise power) is `n0`.
    pub fn from_n0(n0: f64) -> Result<Self, DomainError> {
        Self::new(0.5 * n0)
    }

    #[inline]
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    #[inline]
    pub fn n0(&self) -> f64 {
        2.0 * self.sigma2
    }

    /// SNR of a signal with the given mean power.
    #[inline]
    pub fn snr(&self, power: f64) -> f64 {
        power / self.n0()
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { sigma2: 1.0 }
    }
}

/// One 1D transmission instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolFrame {
    pub x: Bit,
    pub z: Bit,
    pub tx_amplitude: f64,
    pub rx_sample: f64,
}

/// One 2D transmission instant. `x_prime` and `z_prime` are the ±1
/// coefficients of the `±j` symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolFrame2d {
    pub x: Bit,
    pub z: Bit,
    pub x_prime: Bit,
    pub z_prime: Bit,
    pub tx_amplitude: num_complex::Complex64,
    pub rx_sample: num_complex::Complex64,
}

/// One sweep sample. Rates are in bits/s/Hz, SNRs are linear and referenced
/// to `N0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RatePoint {
    pub snr_linear: f64,
    pub ebn0_db: f64,
    pub r_bpsk: f64,
    pub r_qpsk: f64,
    pub r_z: f64,
    pub r_x: f64,
    pub r_1: f64,
    pub r_2: f64,
    pub capacity: f64,
    /// Capacity at the total SNR of the two-dimensional signal.
    pub capacity_2d: f64,
    pub taylor_capacity: f64,
    pub taylor_r1: f64,
    pub rate_diff: f64,
    pub rho_z: f64,
    pub rho_x: f64,
    pub exact_mi_1d: f64,
}

/// Which `z` estimate feeds the interference cancellation of the `x` stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemodMode {
    /// The demodulated `ẑ`, possibly wrong.
    DecisionFeedback,
    /// The true transmitted `z`.
    GenieAided,
}

impl DemodMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DemodMode::DecisionFeedback => "decision-feedback",
            DemodMode::GenieAided => "genie-aided",
        }
    }
}

impl fmt::Display for DemodMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error counts of one layered axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AxisErrors {
    pub errors_z: u64,
    pub errors_x: u64,
}

/// Monte Carlo outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub n_symbols: u64,
    /// Real axis.
    pub real: AxisErrors,
    /// Imaginary axis, present for 2D runs.
    pub imag: Option<AxisErrors>,
    /// Sample mean of `-log2 p(y)` over the received samples, in bits.
    pub empirical_entropy: f64,
    pub entropy_std_error: f64,
    pub seed: u64,
    pub mode: DemodMode,
}

impl SimReport {
    fn rate(&self, errors: u64) -> f64 {
        errors as f64 / self.n_symbols as f64
    }

    pub fn ber_z(&self) -> f64 {
        self.rate(self.real.errors_z)
    }

    pub fn ber_x(&self) -> f64 {
        self.rate(self.real.errors_x)
    }

    pub fn ber_z_prime(&self) -> Option<f64> {
        self.imag.map(|a| self.rate(a.errors_z))
    }

    pub fn ber_x_prime(&self) -> Option<f64> {
        self.imag.map(|a| self.rate(a.errors_x))
    }

    /// Three binomial standard deviations around an estimated error rate.
    pub fn ci_radius(&self, ber: f64) -> f64 {
        3.0 * (ber * (1.0 - ber) / self.n_symbols as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weight_pair_validation() {
        let w = make_weight_pair(2.0, 1.0).unwrap();
        assert_eq!((w.alpha(), w.beta()), (2.0, 1.0));

        let e = make_weight_pair(1.0, 1.0).unwrap_err();
        assert!(matches!(e, DomainError::AlphaNotAboveBeta { .. }));
        assert!(e.to_string().contains("alpha must exceed beta"));

        let e = make_weight_pair(2.0, -1.0).unwrap_err();
        assert!(matches!(e, DomainError::BetaNotPositive(_)));
        assert!(e.to_string().contains("beta must be positive"));

        assert!(matches!(
            make_weight_pair(f64::NAN, 1.0),
            Err(DomainError::NonFiniteWeight { .. })
        ));
        assert!(matches!(
            make_weight_pair(f64::INFINITY, 1.0),
            Err(DomainError::NonFiniteWeight { .. })
        ));
    }

    #[test]
    fn from_ratio_known_point() {
        let w = weights_from_ratio(2.0, 2.125).unwrap();
        assert!((w.alpha() - 2.0).abs() < 1e-12);
        assert!((w.beta() - 1.0).abs() < 1e-12);
        assert!(weights_from_ratio(2.0, 0.0).is_err());
        assert!(matches!(
            weights_from_ratio(1.0, 1.0),
            Err(DomainError::RatioNotAboveOne(_))
        ));
        assert!(weights_from_ratio(0.5, 1.0).is_err());
    }

    #[test]
    fn from_ratio_large_ratio_limit() {
        let w = weights_from_ratio(1e9, 3.0).unwrap();
        assert!(w.beta() < 1e-8);
        assert!((w.alpha() - (2.0f64 * 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constellation_power() {
        let w = make_weight_pair(2.0, 1.0).unwrap();
        assert_eq!(w.average_power(), 2.125);
        assert_eq!(w.residual_power(), 0.625);
        let c = w.constellation();
        let mean: f64 = c.iter().map(|a| a * a).sum::<f64>() / 4.0;
        assert_eq!(mean, w.average_power());
    }

    #[test]
    fn noise_spec() {
        assert!(NoiseSpec::new(0.0).is_err());
        assert!(NoiseSpec::new(-1.0).is_err());
        assert!(NoiseSpec::new(f64::NAN).is_err());
        let n = NoiseSpec::from_n0(1.0).unwrap();
        assert_eq!(n.sigma2(), 0.5);
        assert_eq!(n.snr(2.125), 2.125);
    }

    #[test]
    fn bit_decisions() {
        assert_eq!(Bit::decide(0.0), Bit::Plus);
        assert_eq!(Bit::decide(-0.0), Bit::Plus);
        assert_eq!(Bit::decide(-1e-300), Bit::Minus);
        assert_eq!(-Bit::Plus, Bit::Minus);
        assert_eq!(Bit::Minus.value(), -1.0);
    }

    proptest! {
        #[test]
        fn ratio_round_trip(ratio in 1.0001f64..1e4, power in 1e-6f64..1e6) {
            let w = weights_from_ratio(ratio, power).unwrap();
            prop_assert!(((w.ratio() - ratio) / ratio).abs() < 1e-12);
            prop_assert!(((w.average_power() - power) / power).abs() < 1e-12);
        }

        #[test]
        fn constructed_pairs_are_ordered(alpha in -10.0f64..10.0, beta in -10.0f64..10.0) {
            if let Ok(w) = WeightPair::new(alpha, beta) {
                prop_assert!(w.alpha() > w.beta() && w.beta() > 0.0);
            } else {
                prop_assert!(!(alpha > beta && beta > 0.0));
            }
        }
    }
}
