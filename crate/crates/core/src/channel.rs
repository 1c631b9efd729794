//! Seeded AWGN for real and complex transmissions.
//!
//! Each [`NoiseStream`] is a ChaCha8 generator keyed by `seed` and positioned
//! on its own `stream_id`, so parallel workers draw from disjoint,
//! reproducible substreams. Normal variates come from the ziggurat sampler in
//! `rand_distr::StandardNormal`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::NoiseSpec;

#[derive(Debug, Clone)]
pub struct NoiseStream {
    seed: u64,
    stream_id: u64,
    spec: NoiseSpec,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, stream_id: u64, spec: NoiseSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            spec,
            sigma: spec.sigma(),
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn spec(&self) -> NoiseSpec {
        self.spec
    }

    /// One `N(0, σ²)` draw.
    #[inline]
    pub fn sample(&mut self) -> f64 {
        let n: f64 = self.rng.sample(StandardNormal);
        self.sigma * n
    }

    #[inline]
    pub fn awgn_real(&mut self, tx: f64) -> f64 {
        tx + self.sample()
    }

    /// Adds independent `N(0, σ²)` noise to each of the real and imaginary parts.
    #[inline]
    pub fn awgn_complex(&mut self, tx: Complex64) -> Complex64 {
        let re = self.sample();
        let im = self.sample();
        tx + Complex64::new(re, im)
    }
}

/// Free-function form of [`NoiseStream::awgn_real`].
pub fn awgn_real(tx: f64, stream: &mut NoiseStream) -> f64 {
    stream.awgn_real(tx)
}

/// Free-function form of [`NoiseStream::awgn_complex`].
pub fn awgn_complex(tx: Complex64, stream: &mut NoiseStream) -> Complex64 {
    stream.awgn_complex(tx)
}
