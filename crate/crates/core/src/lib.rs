//! Layered ("cocktail") BPSK: two BPSK streams superposed with
//! data-dependent weights and separated at the receiver by sign decision
//! followed by cancellation.
//!
//! * [`domain`]: bits, weights, noise and report types
//! * [`modem`]: 1D/2D encoder and two-stage demodulator, BPSK/QPSK baselines
//! * [`channel`]: seeded real and complex AWGN
//! * [`quadrature`]: adaptive Simpson integration and `p·log2 p`
//! * [`rates`]: achievable rates, capacity, small-SNR approximations, Eb/N0
//! * [`montecarlo`]: BER and entropy simulation with Q-function predictions
//! * [`sweep`] and [`cli`]: deterministic CSV sweeps

pub mod channel;
pub mod cli;
pub mod domain;
pub mod modem;
pub mod montecarlo;
pub mod par;
pub mod quadrature;
pub mod rates;
pub mod sweep;

pub use domain::{Bit, DemodMode, NoiseSpec, RatePoint, SimReport, WeightPair};
pub use rates::RateCalculator;
