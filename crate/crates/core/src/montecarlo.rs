//! Seeded Monte Carlo link simulation of layered BPSK.
//!
//! Symbols are processed in fixed chunks of [`CHUNK_SYMBOLS`]. Chunk `k`
//! draws its bits and its noise from substream `k`, and chunk tallies are
//! merged in chunk order, so a report depends only on the configuration and
//! seed, never on the worker count.

use std::f64::consts::{LOG2_E, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::channel::NoiseStream;
use crate::domain::{AxisErrors, Bit, DemodMode, NoiseSpec, SimReport, WeightPair};
use crate::modem::{cancel_and_decide, encode_1d, encode_2d};
use crate::par::map_indexed;

pub const MIN_SYMBOLS: u64 = 10_000;
pub const DEFAULT_SYMBOLS: u64 = 1_000_000;
pub const CHUNK_SYMBOLS: u64 = 1 << 16;

/// Keys the bit generator apart from the noise generator under one seed.
const BIT_STREAM_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("at least {MIN_SYMBOLS} symbols are required (got {0})")]
    TooFewSymbols(u64),
    #[error("constellation must contain at least one finite amplitude")]
    EmptyConstellation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_symbols: u64,
    /// Real-axis weights.
    pub w: WeightPair,
    /// Imaginary-axis weights, used by [`simulate_2d`].
    pub wp: WeightPair,
    pub noise: NoiseSpec,
    pub seed: u64,
    pub mode: DemodMode,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs inline.
    pub workers: Option<usize>,
}

impl SimConfig {
    pub fn new(n_symbols: u64, w: WeightPair, noise: NoiseSpec, seed: u64, mode: DemodMode) -> Result<Self, SimError> {
        if n_symbols < MIN_SYMBOLS {
            return Err(SimError::TooFewSymbols(n_symbols));
        }
        Ok(Self {
            n_symbols,
            w,
            wp: w,
            noise,
            seed,
            mode,
            workers: None,
        })
    }

    pub fn with_imag_weights(mut self, wp: WeightPair) -> Self {
        self.wp = wp;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.n_symbols < MIN_SYMBOLS {
            return Err(SimError::TooFewSymbols(self.n_symbols));
        }
        Ok(())
    }
}

/// Gaussian tail probability `Q(t) = ½·erfc(t/√2)`.
pub fn qfunc(t: f64) -> f64 {
    0.5 * libm::erfc(t / SQRT_2)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Closed-form `(BER_z, BER_x)` of one layered axis.
///
/// `z` errs when the noise flips the sign of `α` or `β/2`. With a genie `z`,
/// `x` sees amplitude `α−β` or `β/2`. With decision feedback a wrong `ẑ`
/// shifts the cancellation by `2β`, which gives the two three-term
/// expressions below.
pub fn predicted_ber(w: &WeightPair, noise: &NoiseSpec, mode: DemodMode) -> (f64, f64) {
    let s = noise.sigma();
    let (a, b) = (w.alpha(), w.beta());
    let ber_z = 0.5 * qfunc(a / s) + 0.5 * qfunc(0.5 * b / s);
    let ber_x = match mode {
        DemodMode::GenieAided => 0.5 * qfunc((a - b) / s) + 0.5 * qfunc(0.5 * b / s),
        DemodMode::DecisionFeedback => {
            let agree = qfunc((a - b) / s) - qfunc(a / s) + qfunc((a + b) / s);
            let differ = 2.0 * qfunc(0.5 * b / s) - qfunc(1.5 * b / s);
            0.5 * agree + 0.5 * differ
        }
    };
    (ber_z, ber_x)
}

/// `-log2 p(y)` for the equiprobable mixture of `N(m, σ²)` over `means`,
/// via log-sum-exp.
pub fn neg_log2_mixture(y: f64, means: &[f64], sigma2: f64) -> f64 {
    let inv = 0.5 / sigma2;
    let mut max = f64::NEG_INFINITY;
    for m in means {
        max = max.max(-(y - m) * (y - m) * inv);
    }
    let sum: f64 = means.iter().map(|m| (-(y - m) * (y - m) * inv - max).exp()).sum();
    let ln_p = max + sum.ln() - (means.len() as f64).ln() - 0.5 * (2.0 * PI * sigma2).ln();
    -ln_p * LOG2_E
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    n: u64,
    real: AxisErrors,
    imag: AxisErrors,
    h_sum: f64,
    h_sq: f64,
}

impl Tally {
    fn add_entropy(&mut self, h: f64) {
        self.h_sum += h;
        self.h_sq += h * h;
    }

    fn merge(mut self, other: &Tally) -> Tally {
        self.n += other.n;
        self.real.errors_z += other.real.errors_z;
        self.real.errors_x += other.real.errors_x;
        self.imag.errors_z += other.imag.errors_z;
        self.imag.errors_x += other.imag.errors_x;
        self.h_sum += other.h_sum;
        self.h_sq += other.h_sq;
        self
    }

    /// Sample mean and its standard error.
    fn entropy(&self) -> (f64, f64) {
        let n = self.n as f64;
        let mean = self.h_sum / n;
        let var = ((self.h_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    }
}

struct ChunkStreams {
    bits: ChaCha8Rng,
    noise: NoiseStream,
    len: u64,
}

fn chunk_streams(seed: u64, n_symbols: u64, noise: NoiseSpec, chunk: usize) -> ChunkStreams {
    let start = chunk as u64 * CHUNK_SYMBOLS;
    let mut bits = ChaCha8Rng::seed_from_u64(seed ^ BIT_STREAM_KEY);
    bits.set_stream(chunk as u64);
    ChunkStreams {
        bits,
        noise: NoiseStream::new(seed, chunk as u64, noise),
        len: CHUNK_SYMBOLS.min(n_symbols - start),
    }
}

fn run_chunks<F>(n_symbols: u64, workers: Option<usize>, chunk_fn: F) -> Tally
where
    F: Fn(usize) -> Tally + Sync + Send,
{
    let chunks = n_symbols.div_ceil(CHUNK_SYMBOLS) as usize;
    map_indexed(chunks, workers, chunk_fn)
        .iter()
        .fold(Tally::default(), Tally::merge)
}

#[inline]
fn random_bit(rng: &mut ChaCha8Rng) -> Bit {
    Bit::from_bool(rng.random::<bool>())
}

#[inline]
fn layered_axis(y: f64, z: Bit, x: Bit, w: &WeightPair, mode: DemodMode, errors: &mut AxisErrors) {
    let z_hat = Bit::decide(y);
    let z_ref = match mode {
        DemodMode::DecisionFeedback => z_hat,
        DemodMode::GenieAided => z,
    };
    let (_, x_hat) = cancel_and_decide(y, z_ref, w);
    errors.errors_z += u64::from(z_hat != z);
    errors.errors_x += u64::from(x_hat != x);
}

fn report(cfg: &SimConfig, t: Tally, two_d: bool) -> SimReport {
    let (h, se) = t.entropy();
    SimReport {
        n_symbols: t.n,
        real: t.real,
        imag: two_d.then_some(t.imag),
        empirical_entropy: h,
        entropy_std_error: se,
        seed: cfg.seed,
        mode: cfg.mode,
    }
}

/// Transmit equiprobable `(x, z)` pairs through real AWGN and count `z` and
/// `x` errors against the transmitted bits.
pub fn simulate_1d(cfg: &SimConfig) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let w = cfg.w;
    let means = w.constellation();
    let sigma2 = cfg.noise.sigma2();
    let tally = run_chunks(cfg.n_symbols, cfg.workers, |chunk| {
        let mut s = chunk_streams(cfg.seed, cfg.n_symbols, cfg.noise, chunk);
        let mut t = Tally {
            n: s.len,
            ..Tally::default()
        };
        for _ in 0..s.len {
            let x = random_bit(&mut s.bits);
            let z = random_bit(&mut s.bits);
            let y = s.noise.awgn_real(encode_1d(x, z, &w));
            layered_axis(y, z, x, &w, cfg.mode, &mut t.real);
            t.add_entropy(neg_log2_mixture(y, &means, sigma2));
        }
        t
    });
    Ok(report(cfg, tally, false))
}

/// Two layered axes on the real and imaginary parts, complex AWGN with `σ²`
/// per part. The entropy column is the joint `-log2 p(y′)`, the sum of the
/// two per-axis terms.
pub fn simulate_2d(cfg: &SimConfig) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let (w, wp) = (cfg.w, cfg.wp);
    let (means, means_p) = (w.constellation(), wp.constellation());
    let sigma2 = cfg.noise.sigma2();
    let tally = run_chunks(cfg.n_symbols, cfg.workers, |chunk| {
        let mut s = chunk_streams(cfg.seed, cfg.n_symbols, cfg.noise, chunk);
        let mut t = Tally {
            n: s.len,
            ..Tally::default()
        };
        for _ in 0..s.len {
            let x = random_bit(&mut s.bits);
            let z = random_bit(&mut s.bits);
            let xp = random_bit(&mut s.bits);
            let zp = random_bit(&mut s.bits);
            let y = s.noise.awgn_complex(encode_2d(x, z, xp, zp, &w, &wp));
            layered_axis(y.re, z, x, &w, cfg.mode, &mut t.real);
            layered_axis(y.im, zp, xp, &wp, cfg.mode, &mut t.imag);
            t.add_entropy(neg_log2_mixture(y.re, &means, sigma2) + neg_log2_mixture(y.im, &means_p, sigma2));
        }
        t
    });
    Ok(report(cfg, tally, true))
}

/// Source for [`empirical_entropy`]: equiprobable amplitudes in AWGN.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyConfig {
    pub points: Vec<f64>,
    pub noise: NoiseSpec,
    pub n_samples: u64,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl EntropyConfig {
    pub fn new(points: Vec<f64>, noise: NoiseSpec, n_samples: u64, seed: u64) -> Result<Self, SimError> {
        if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
            return Err(SimError::EmptyConstellation);
        }
        if n_samples < MIN_SYMBOLS {
            return Err(SimError::TooFewSymbols(n_samples));
        }
        Ok(Self {
            points,
            noise,
            n_samples,
            seed,
            workers: None,
        })
    }

    pub fn bpsk(amplitude: f64, noise: NoiseSpec, n_samples: u64, seed: u64) -> Result<Self, SimError> {
        let points = if amplitude == 0.0 {
            vec![0.0]
        } else {
            vec![amplitude, -amplitude]
        };
        Self::new(points, noise, n_samples, seed)
    }

    pub fn layered(w: &WeightPair, noise: NoiseSpec, n_samples: u64, seed: u64) -> Result<Self, SimError> {
        Self::new(w.constellation().to_vec(), noise, n_samples, seed)
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    /// Sample mean of `-log2 p(y)`, bits.
    pub bits: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

/// Plug-in estimate of the received-signal entropy `E[-log2 p(y)]`.
pub fn empirical_entropy(cfg: &EntropyConfig) -> Result<EntropyEstimate, SimError> {
    if cfg.n_samples < MIN_SYMBOLS {
        return Err(SimError::TooFewSymbols(cfg.n_samples));
    }
    if cfg.points.is_empty() {
        return Err(SimError::EmptyConstellation);
    }
    let sigma2 = cfg.noise.sigma2();
    let k = cfg.points.len();
    let tally = run_chunks(cfg.n_samples, cfg.workers, |chunk| {
        let mut s = chunk_streams(cfg.seed, cfg.n_samples, cfg.noise, chunk);
        let mut t = Tally {
            n: s.len,
            ..Tally::default()
        };
        for _ in 0..s.len {
            let tx = cfg.points[s.bits.random_range(0..k)];
            let y = s.noise.awgn_real(tx);
            t.add_entropy(neg_log2_mixture(y, &cfg.points, sigma2));
        }
        t
    });
    let (bits, std_error) = tally.entropy();
    Ok(EntropyEstimate {
        bits,
        std_error,
        n_samples: tally.n,
    })
}
