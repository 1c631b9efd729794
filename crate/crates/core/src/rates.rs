//! Achievable-rate quantities for layered BPSK and the conventional baselines.
//!
//! Two noise quantities appear here and they are not interchangeable:
//!
//! * rate integrals use the per-dimension variance `σ²` of [`NoiseSpec`];
//! * SNRs (`ρ`, `ρ_BPSK`, `ρ_z`, `ρ_x`), the capacity `log2(1+ρ)`, the
//!   small-SNR Taylor terms and Eb/N0 are referenced to `N0 = 2σ²`.
//!
//! Under this convention a BPSK rate, a QPSK rate and the capacity all have
//! slope `log2 e` at `ρ = 0`.

use std::f64::consts::{E, LN_2, LOG2_E, PI};

use thiserror::Error;

use crate::domain::{DomainError, NoiseSpec, RatePoint, WeightPair};
use crate::quadrature::{check_rel_tol, integrate, xlog2x, IntegralSpec, QuadratureError};

/// Entropy integrals are truncated this many standard deviations beyond the
/// outermost component mean. The neglected `p·log2 p` tail is below 1e-25.
pub const TAIL_SIGMAS: f64 = 12.0;

/// SNR at which slopes near zero are evaluated, and the central-difference step.
pub const SLOPE_SNR: f64 = 1e-3;
pub const SLOPE_STEP: f64 = 1e-4;

const PANEL_OFFSETS: [f64; 9] = [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RateError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("amplitude must be finite and non-negative (got {0})")]
    InvalidAmplitude(f64),
    #[error("SNR must be finite and non-negative (got {0})")]
    InvalidSnr(f64),
    #[error("Eb/N0 is undefined at zero rate")]
    ZeroRate,
}

/// Equiprobable two-component density of a BPSK amplitude `a` in `N(0, σ²)`.
pub fn mixture_pdf(y: f64, a: f64, sigma2: f64) -> f64 {
    let norm = 0.5 / (2.0 * PI * sigma2).sqrt();
    let inv = 0.5 / sigma2;
    norm * ((-(y - a) * (y - a) * inv).exp() + (-(y + a) * (y + a) * inv).exp())
}

/// Differential entropy of `N(0, σ²)` in bits.
pub fn gaussian_entropy(sigma2: f64) -> f64 {
    0.5 * (2.0 * PI * E * sigma2).log2()
}

pub fn shannon_capacity(rho: f64) -> f64 {
    rho.ln_1p() / LN_2
}

pub fn taylor_capacity(rho: f64) -> f64 {
    rho * LOG2_E
}

pub fn rho_bpsk(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    noise.snr(w.average_power())
}

pub fn rho_z(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    rho_bpsk(w, noise)
}

pub fn rho_x(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    noise.snr(w.residual_power())
}

pub fn taylor_rate_bpsk(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    rho_bpsk(w, noise) * LOG2_E
}

pub fn taylor_rate_1d(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    (rho_z(w, noise) + rho_x(w, noise)) * LOG2_E
}

/// Small-SNR gain of the layered scheme over plain BPSK, `ρ_x·log2 e`.
pub fn rate_diff(w: &WeightPair, noise: &NoiseSpec) -> f64 {
    rho_x(w, noise) * LOG2_E
}

pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `signal_snr / rate`, the energy per bit over `N0`.
pub fn ebn0(signal_snr: f64, rate: f64) -> Result<f64, RateError> {
    if rate > 0.0 {
        Ok(signal_snr / rate)
    } else {
        Err(RateError::ZeroRate)
    }
}

/// Central-difference slope `(f(ρ+h) − f(ρ−h)) / 2h`.
pub fn rate_slope<F>(rate_fn: F, rho: f64, step: f64) -> Result<f64, RateError>
where
    F: Fn(f64) -> Result<f64, RateError>,
{
    Ok((rate_fn(rho + step)? - rate_fn(rho - step)?) / (2.0 * step))
}

/// Slope of a rate-vs-SNR curve at [`SLOPE_SNR`] with step [`SLOPE_STEP`].
pub fn rate_derivative_at_zero<F>(rate_fn: F) -> Result<f64, RateError>
where
    F: Fn(f64) -> Result<f64, RateError>,
{
    rate_slope(rate_fn, SLOPE_SNR, SLOPE_STEP)
}

/// All rate quantities of one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub r_z: f64,
    pub r_x: f64,
    pub r_1: f64,
    pub r_1_prime: f64,
    pub r_2: f64,
    pub capacity: f64,
    pub rho_bpsk: f64,
    pub rho_z: f64,
    pub rho_x: f64,
    pub taylor_capacity: f64,
    pub taylor_r1: f64,
    pub rate_diff: f64,
}

/// Numerical rate evaluator; holds the quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCalculator {
    rel_tol: f64,
    max_depth: u32,
}

impl Default for RateCalculator {
    fn default() -> Self {
        Self {
            rel_tol: IntegralSpec::DEFAULT_REL_TOL,
            max_depth: IntegralSpec::DEFAULT_MAX_DEPTH,
        }
    }
}

impl RateCalculator {
    pub fn new(rel_tol: f64) -> Result<Self, RateError> {
        check_rel_tol(rel_tol)?;
        Ok(Self {
            rel_tol,
            ..Self::default()
        })
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Entropy in bits of an equiprobable unit-variance Gaussian mixture.
    fn unit_mixture_entropy(&self, means: &[f64]) -> Result<f64, RateError> {
        let reach = means.iter().fold(0.0f64, |m, x| m.max(x.abs())) + TAIL_SIGMAS;
        let spec = IntegralSpec::new(-reach, reach)?
            .with_rel_tol(self.rel_tol)?
            .with_max_depth(self.max_depth)
            .with_breakpoints(
                means
                    .iter()
                    .flat_map(|m| PANEL_OFFSETS.iter().map(move |k| m + k)),
            );
        let norm = 1.0 / (means.len() as f64 * (2.0 * PI).sqrt());
        let density = |u: f64| {
            norm * means
                .iter()
                .map(|m| {
                    let d = u - m;
                    (-0.5 * d * d).exp()
                })
                .sum::<f64>()
        };
        Ok(-integrate(|u| xlog2x(density(u)), &spec)?)
    }

    /// Differential entropy `H(Y)` in bits of the equiprobable mixture of
    /// `N(m, σ²)` over the given means.
    ///
    /// Evaluated in `σ`-normalized coordinates: `H(Y) = H(Y/σ) + log2 σ`.
    pub fn mixture_entropy(&self, means: &[f64], sigma2: f64) -> Result<f64, RateError> {
        let noise = NoiseSpec::new(sigma2)?;
        if means.is_empty() || means.iter().any(|m| !m.is_finite()) {
            return Err(RateError::InvalidAmplitude(f64::NAN));
        }
        let sigma = noise.sigma();
        let unit: Vec<f64> = means.iter().map(|m| m / sigma).collect();
        Ok(self.unit_mixture_entropy(&unit)? + sigma.log2())
    }

    /// `H(Y) − H(N)` for equiprobable `±a` in `N(0, σ²)`, clamped to `[0, 1]`.
    pub fn bpsk_rate(&self, a: f64, sigma2: f64) -> Result<f64, RateError> {
        if !a.is_finite() || a < 0.0 {
            return Err(RateError::InvalidAmplitude(a));
        }
        let sigma = NoiseSpec::new(sigma2)?.sigma();
        if a == 0.0 {
            return Ok(0.0);
        }
        let u = a / sigma;
        let h = self.unit_mixture_entropy(&[u, -u])?;
        Ok((h - gaussian_entropy(1.0)).clamp(0.0, 1.0))
    }

    pub fn rate_z(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        let s2 = noise.sigma2();
        Ok(0.5 * self.bpsk_rate(w.alpha(), s2)? + 0.5 * self.bpsk_rate(0.5 * w.beta(), s2)?)
    }

    pub fn rate_x(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        let s2 = noise.sigma2();
        Ok(0.5 * self.bpsk_rate(w.alpha() - w.beta(), s2)? + 0.5 * self.bpsk_rate(0.5 * w.beta(), s2)?)
    }

    fn rate_parts(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<(f64, f64), RateError> {
        let s2 = noise.sigma2();
        let shared = self.bpsk_rate(0.5 * w.beta(), s2)?;
        let r_z = 0.5 * self.bpsk_rate(w.alpha(), s2)? + 0.5 * shared;
        let r_x = 0.5 * self.bpsk_rate(w.alpha() - w.beta(), s2)? + 0.5 * shared;
        Ok((r_z, r_x))
    }

    pub fn rate_1d(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        let (r_z, r_x) = self.rate_parts(w, noise)?;
        Ok(r_z + r_x)
    }

    pub fn rate_2d(&self, w: &WeightPair, wp: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        Ok(self.rate_1d(w, noise)? + self.rate_1d(wp, noise)?)
    }

    /// Exact mutual information of the four-point constellation
    /// `{±α, ±β/2}`: `H(Y) − H(N)` of the four-component mixture.
    pub fn exact_mi_1d(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        let sigma = noise.sigma();
        let unit = w.constellation().map(|m| m / sigma);
        let h = self.unit_mixture_entropy(&unit)?;
        Ok((h - gaussian_entropy(1.0)).clamp(0.0, 2.0))
    }

    /// Conventional BPSK at SNR `ρ = A²/N0`.
    pub fn bpsk_rate_at_snr(&self, rho: f64) -> Result<f64, RateError> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(RateError::InvalidSnr(rho));
        }
        // σ² = 1, N0 = 2
        self.bpsk_rate((2.0 * rho).sqrt(), 1.0)
    }

    /// Conventional QPSK at total SNR `ρ = 2A²/N0`, i.e. two BPSK axes of
    /// per-axis amplitude `A`.
    pub fn qpsk_rate_at_snr(&self, rho: f64) -> Result<f64, RateError> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(RateError::InvalidSnr(rho));
        }
        Ok(2.0 * self.bpsk_rate(rho.sqrt(), 1.0)?)
    }

    /// `(ρ_z + ρ_x) / R_1`.
    pub fn ebn0_1d(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        ebn0(rho_z(w, noise) + rho_x(w, noise), self.rate_1d(w, noise)?)
    }

    /// Total equivalent SNR of both axes over `R_2`; equals
    /// `2(ρ_z + ρ_x) / R_2` when both axes use the same weights.
    pub fn ebn0_2d(&self, w: &WeightPair, wp: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
        let snr = (rho_z(w, noise) + rho_x(w, noise)) + (rho_z(wp, noise) + rho_x(wp, noise));
        ebn0(snr, self.rate_2d(w, wp, noise)?)
    }

    /// `ρ / R_BPSK(ρ)` for conventional BPSK.
    pub fn bpsk_ebn0(&self, rho: f64) -> Result<f64, RateError> {
        ebn0(rho, self.bpsk_rate_at_snr(rho)?)
    }

    pub fn breakdown(&self, w: &WeightPair, wp: &WeightPair, noise: &NoiseSpec) -> Result<RateBreakdown, RateError> {
        let (r_z, r_x) = self.rate_parts(w, noise)?;
        let r_1 = r_z + r_x;
        let r_1_prime = self.rate_1d(wp, noise)?;
        let rho = rho_bpsk(w, noise);
        Ok(RateBreakdown {
            r_z,
            r_x,
            r_1,
            r_1_prime,
            r_2: r_1 + r_1_prime,
            capacity: shannon_capacity(rho),
            rho_bpsk: rho,
            rho_z: rho_z(w, noise),
            rho_x: rho_x(w, noise),
            taylor_capacity: taylor_capacity(rho),
            taylor_r1: taylor_rate_1d(w, noise),
            rate_diff: rate_diff(w, noise),
        })
    }

    /// Every sweep quantity at one operating point, with both axes using `w`.
    ///
    /// Baselines are evaluated at the same mean power on the same channel:
    /// BPSK with amplitude `√P`, QPSK with `√P` per axis.
    pub fn rate_point(&self, w: &WeightPair, noise: &NoiseSpec) -> Result<RatePoint, RateError> {
        let b = self.breakdown(w, w, noise)?;
        let s2 = noise.sigma2();
        let r_bpsk = self.bpsk_rate(w.average_power().sqrt(), s2)?;
        Ok(RatePoint {
            snr_linear: b.rho_bpsk,
            ebn0_db: to_db(ebn0(b.rho_z + b.rho_x, b.r_1)?),
            r_bpsk,
            r_qpsk: 2.0 * r_bpsk,
            r_z: b.r_z,
            r_x: b.r_x,
            r_1: b.r_1,
            r_2: b.r_2,
            capacity: b.capacity,
            capacity_2d: shannon_capacity(2.0 * b.rho_bpsk),
            taylor_capacity: b.taylor_capacity,
            taylor_r1: b.taylor_r1,
            rate_diff: b.rate_diff,
            rho_z: b.rho_z,
            rho_x: b.rho_x,
            exact_mi_1d: self.exact_mi_1d(w, noise)?,
        })
    }

    /// [`rate_point`](Self::rate_point) for the weights of ratio `α/β` whose
    /// SNR is `snr`. `snr = 0` gives the all-zero point, with Eb/N0 left NaN.
    pub fn rate_point_at_snr(&self, ratio: f64, snr: f64, noise: &NoiseSpec) -> Result<RatePoint, RateError> {
        if !snr.is_finite() || snr < 0.0 {
            return Err(RateError::InvalidSnr(snr));
        }
        if snr == 0.0 {
            return Ok(RatePoint {
                ebn0_db: f64::NAN,
                ..RatePoint::default()
            });
        }
        let w = WeightPair::from_ratio(ratio, snr * noise.n0())?;
        self.rate_point(&w, noise)
    }

    /// Smallest SNR probed when inverting Eb/N0.
    pub const EBN0_SEARCH_FLOOR: f64 = 1e-5;

    /// The SNR at which layered BPSK of ratio `α/β` reaches `ebn0_target`
    /// (linear). `None` when the target lies below what is attainable above
    /// [`EBN0_SEARCH_FLOOR`](Self::EBN0_SEARCH_FLOOR); Eb/N0 is increasing in SNR.
    pub fn snr_for_ebn0(&self, ratio: f64, ebn0_target: f64, noise: &NoiseSpec) -> Result<Option<f64>, RateError> {
        let eval = |snr: f64| -> Result<f64, RateError> {
            let w = WeightPair::from_ratio(ratio, snr * noise.n0())?;
            self.ebn0_1d(&w, noise)
        };
        let mut lo = Self::EBN0_SEARCH_FLOOR;
        if eval(lo)? > ebn0_target {
            return Ok(None);
        }
        let mut hi = 1.0;
        while eval(hi)? < ebn0_target {
            lo = hi;
            hi *= 10.0;
            if hi > 1e12 {
                return Ok(None);
            }
        }
        while hi / lo - 1.0 > 1e-12 {
            let mid = (lo * hi).sqrt();
            if eval(mid)? < ebn0_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some((lo * hi).sqrt()))
    }
}

/// Convenience wrapper over [`RateCalculator::default`].
pub fn bpsk_rate(a: f64, sigma2: f64) -> Result<f64, RateError> {
    RateCalculator::default().bpsk_rate(a, sigma2)
}

pub fn rate_z(w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
    RateCalculator::default().rate_z(w, noise)
}

pub fn rate_x(w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
    RateCalculator::default().rate_x(w, noise)
}

pub fn rate_1d(w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
    RateCalculator::default().rate_1d(w, noise)
}

pub fn rate_2d(w: &WeightPair, wp: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
    RateCalculator::default().rate_2d(w, wp, noise)
}

pub fn exact_mi_1d(w: &WeightPair, noise: &NoiseSpec) -> Result<f64, RateError> {
    RateCalculator::default().exact_mi_1d(w, noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Frozen from an independent mpmath evaluation of
    // 1 − E[log2(1 + exp(−2a(a+n)))], n ~ N(0, 1).
    const BPSK_1: f64 = 0.485_944_154_132_935_3;
    const BPSK_2: f64 = 0.912_822_285_774_482_2;
    const BPSK_HALF: f64 = 0.160_747_219_796_416_9;

    fn calc() -> RateCalculator {
        RateCalculator::default()
    }

    fn unit() -> NoiseSpec {
        NoiseSpec::new(1.0).unwrap()
    }

    fn w21() -> WeightPair {
        WeightPair::new(2.0, 1.0).unwrap()
    }

    fn normal_pdf(y: f64, mean: f64, sigma2: f64) -> f64 {
        (-(y - mean) * (y - mean) / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt()
    }

    #[test]
    fn mixture_pdf_values() {
        let expected = (-0.5f64).exp() / (2.0 * PI).sqrt();
        assert!((mixture_pdf(0.0, 1.0, 1.0) - expected).abs() < 1e-15);
        assert!((mixture_pdf(0.0, 1.0, 1.0) - 0.241_970_724_519_143_37).abs() < 1e-15);
        for y in [-3.0, -0.2, 0.0, 1.7, 5.0] {
            assert!((mixture_pdf(y, 0.0, 2.0) - normal_pdf(y, 0.0, 2.0)).abs() < 1e-15);
            assert_eq!(mixture_pdf(y, 1.3, 0.7), mixture_pdf(-y, 1.3, 0.7));
        }
    }

    #[test]
    fn bpsk_rate_values() {
        assert_eq!(calc().bpsk_rate(0.0, 1.0).unwrap(), 0.0);
        assert!((calc().bpsk_rate(1.0, 1.0).unwrap() - BPSK_1).abs() < 1e-9);
        assert!((calc().bpsk_rate(2.0, 1.0).unwrap() - BPSK_2).abs() < 1e-9);
        assert!((calc().bpsk_rate(0.5, 1.0).unwrap() - BPSK_HALF).abs() < 1e-9);
        assert!(calc().bpsk_rate(6.0, 1.0).unwrap() >= 0.999);
        assert!(calc().bpsk_rate(-1.0, 1.0).is_err());
        assert!(calc().bpsk_rate(1.0, 0.0).is_err());
    }

    #[test]
    fn layered_rates_compose() {
        let n = unit();
        let rz = calc().rate_z(&w21(), &n).unwrap();
        let rx = calc().rate_x(&w21(), &n).unwrap();
        assert!((rz - 0.5 * (BPSK_2 + BPSK_HALF)).abs() < 1e-9);
        assert!((rx - 0.5 * (BPSK_1 + BPSK_HALF)).abs() < 1e-9);
        let r1 = calc().rate_1d(&w21(), &n).unwrap();
        assert!((r1 - (rz + rx)).abs() < 1e-12);
        assert_eq!(calc().rate_2d(&w21(), &w21(), &n).unwrap(), 2.0 * r1);
    }

    #[test]
    fn rates_vanish_in_heavy_noise() {
        let n = NoiseSpec::new(1e8).unwrap();
        assert!(calc().rate_z(&w21(), &n).unwrap() < 1e-7);
        assert!(calc().rate_1d(&w21(), &n).unwrap() < 1e-7);
    }

    #[test]
    fn rate_x_first_term_vanishes() {
        let n = unit();
        let w = WeightPair::new(1.0 + 1e-9, 1.0).unwrap();
        let rx = calc().rate_x(&w, &n).unwrap();
        let half = 0.5 * calc().bpsk_rate(0.5, 1.0).unwrap();
        assert!((rx - half).abs() < 1e-8);
    }

    #[test]
    fn rate_z_continuous_toward_alpha_equals_beta() {
        let n = unit();
        let w = WeightPair::new(1.0 + 1e-9, 1.0).unwrap();
        let limit = 0.5 * BPSK_1 + 0.5 * BPSK_HALF;
        assert!((calc().rate_z(&w, &n).unwrap() - limit).abs() < 1e-8);
    }

    #[test]
    fn capacity_and_taylor() {
        assert_eq!(shannon_capacity(1.0), 1.0);
        assert!((shannon_capacity(3.0) - 2.0).abs() < 1e-15);
        assert_eq!(shannon_capacity(0.0), 0.0);
        assert!((taylor_capacity(0.01) - 0.014_426_950_408_889_634).abs() < 1e-15);
        assert_eq!(taylor_capacity(0.0), 0.0);
        for rho in [1e-6, 1e-3, 0.1, 1.0, 10.0] {
            assert!(taylor_capacity(rho) >= shannon_capacity(rho));
        }
    }

    #[test]
    fn equivalent_snrs() {
        let n = NoiseSpec::from_n0(1.0).unwrap();
        assert_eq!(rho_bpsk(&w21(), &n), 2.125);
        assert_eq!(rho_z(&w21(), &n), rho_bpsk(&w21(), &n));
        assert_eq!(rho_x(&w21(), &n), 0.625);
        assert!((taylor_rate_1d(&w21(), &n) - 2.75 * LOG2_E).abs() < 1e-14);
        assert!((taylor_rate_1d(&w21(), &n) - 3.967_411_362_444_649).abs() < 1e-12);
        let identity = taylor_rate_1d(&w21(), &n) - taylor_rate_bpsk(&w21(), &n);
        assert!((rate_diff(&w21(), &n) - identity).abs() < 1e-14);
    }

    #[test]
    fn rate_diff_small_beta_limit() {
        let n = NoiseSpec::from_n0(1.0).unwrap();
        let w = WeightPair::new(3.0, 1e-9).unwrap();
        assert!((rate_diff(&w, &n) - 4.5 * LOG2_E).abs() < 1e-8);
    }

    #[test]
    fn ebn0_relations() {
        let n = unit();
        let w = w21();
        assert_eq!(
            calc().ebn0_2d(&w, &w, &n).unwrap(),
            calc().ebn0_1d(&w, &n).unwrap()
        );
        assert_eq!(ebn0(1.0, 0.0), Err(RateError::ZeroRate));
        let limit = to_db(calc().bpsk_ebn0(1e-4).unwrap());
        assert!((limit - to_db(LN_2)).abs() < 0.02, "{limit}");
    }

    #[test]
    fn slopes_at_zero() {
        let c = calc();
        let cap = rate_derivative_at_zero(|r| Ok(shannon_capacity(r))).unwrap();
        assert!((cap / LOG2_E - 1.0).abs() < 1e-3);
        let b = rate_derivative_at_zero(|r| c.bpsk_rate_at_snr(r)).unwrap();
        assert!((b / LOG2_E - 1.0).abs() < 0.01, "{b}");
        let q = rate_derivative_at_zero(|r| c.qpsk_rate_at_snr(r)).unwrap();
        assert!((q / LOG2_E - 1.0).abs() < 0.01, "{q}");
    }

    #[test]
    fn exact_mi_against_frozen_value() {
        // Independent 4·10^6-node trapezoid over [−16, 16].
        let v = calc().exact_mi_1d(&w21(), &unit()).unwrap();
        assert!((v - 0.804_779_270_074_912_6).abs() < 1e-8, "{v}");
    }

    #[test]
    fn exact_mi_bounded_by_two_bits() {
        let w = WeightPair::new(60.0, 20.0).unwrap();
        let v = calc().exact_mi_1d(&w, &unit()).unwrap();
        assert!(v <= 2.0 && v > 1.999, "{v}");
    }

    #[test]
    fn four_point_mixture_collapses_to_bpsk() {
        let c = calc();
        let h4 = c.mixture_entropy(&[1.5, -1.5, 1.5, -1.5], 0.8).unwrap();
        let h2 = c.mixture_entropy(&[1.5, -1.5], 0.8).unwrap();
        assert!((h4 - h2).abs() < 1e-10);
        let r = h2 - gaussian_entropy(0.8);
        assert!((r - c.bpsk_rate(1.5, 0.8).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn low_snr_gap_to_capacity_is_higher_order() {
        let c = calc();
        for rho in [1e-4, 1e-3, 1e-2] {
            let gap = (c.bpsk_rate_at_snr(rho).unwrap() - shannon_capacity(rho)).abs();
            assert!(gap <= 0.01 * rho * LOG2_E, "rho {rho}: gap {gap}");
        }
    }

    #[test]
    fn ebn0_inversion() {
        let c = calc();
        let n = unit();
        let target = from_db(3.0);
        let snr = c.snr_for_ebn0(4.0, target, &n).unwrap().unwrap();
        let w = WeightPair::from_ratio(4.0, snr * n.n0()).unwrap();
        assert!((c.ebn0_1d(&w, &n).unwrap() / target - 1.0).abs() < 1e-9);
        assert_eq!(c.snr_for_ebn0(4.0, from_db(-3.0), &n).unwrap(), None);
    }

    #[test]
    fn zero_snr_point() {
        let p = calc().rate_point_at_snr(2.0, 0.0, &unit()).unwrap();
        assert_eq!(p.r_1 - p.capacity, 0.0);
        assert_eq!(p.r_2 - p.capacity_2d, 0.0);
    }

    #[test]
    fn rate_x_below_rate_z_and_diff_positive() {
        let c = calc();
        let n = unit();
        for ratio in [1.1, 2.0, 4.0, 8.0, 50.0] {
            for db in [-20.0, -5.0, 0.0, 5.0, 15.0] {
                let w = WeightPair::from_ratio(ratio, from_db(db) * n.n0()).unwrap();
                let (rx, rz) = (c.rate_x(&w, &n).unwrap(), c.rate_z(&w, &n).unwrap());
                // the differing terms R(α) and R(α−β) both saturate at high SNR
                if c.bpsk_rate(w.alpha() - w.beta(), n.sigma2()).unwrap() < 1.0 - 1e-6 {
                    assert!(rx < rz, "ratio {ratio}, {db} dB");
                } else {
                    assert!(rx <= rz);
                }
                assert!(rate_diff(&w, &n) > 0.0);
                assert!(rho_x(&w, &n) < rho_bpsk(&w, &n));
            }
        }
    }

    #[test]
    fn exact_mi_dominates_rate_z() {
        let c = calc();
        let n = unit();
        for ratio in [1.5, 2.0, 4.0, 8.0] {
            for db in [-20.0, -10.0, 0.0, 10.0, 20.0] {
                let w = WeightPair::from_ratio(ratio, from_db(db) * n.n0()).unwrap();
                let mi = c.exact_mi_1d(&w, &n).unwrap();
                assert!(mi <= 2.0);
                assert!(mi >= c.rate_z(&w, &n).unwrap(), "ratio {ratio}, {db} dB");
            }
        }
    }

    #[test]
    fn saturation() {
        let c = calc();
        let n = unit();
        let w = WeightPair::new(20.0, 10.0).unwrap();
        assert!((c.rate_1d(&w, &n).unwrap() - 2.0).abs() < 1e-2);
        assert!((c.rate_2d(&w, &w, &n).unwrap() - 4.0).abs() < 2e-2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scale_invariance(a in 0.01f64..8.0, sigma2 in 0.05f64..5.0, c in 0.01f64..100.0) {
            let r1 = calc().bpsk_rate(a, sigma2).unwrap();
            let r2 = calc().bpsk_rate(c * a, c * c * sigma2).unwrap();
            prop_assert!((r1 - r2).abs() < 1e-8, "{} vs {}", r1, r2);
        }

        #[test]
        fn bpsk_rate_increasing_and_bounded(a in 0.0f64..4.5, da in 0.01f64..1.0) {
            let lo = calc().bpsk_rate(a, 1.0).unwrap();
            let hi = calc().bpsk_rate(a + da, 1.0).unwrap();
            prop_assert!(hi > lo);
            prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }
}
