//! Rates checked against oracles that share no code with the crate.

use std::f64::consts::PI;

use cocktail_bpsk::domain::{NoiseSpec, WeightPair};
use cocktail_bpsk::rates::RateCalculator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn mixture_pdf(y: f64, means: &[f64], sigma2: f64) -> f64 {
    let c = 1.0 / (means.len() as f64 * (2.0 * PI * sigma2).sqrt());
    means.iter().map(|m| c * (-(y - m).powi(2) / (2.0 * sigma2)).exp()).sum()
}

#[test]
fn exact_mi_matches_sampled_mutual_information() {
    let w = WeightPair::new(2.0, 1.0).unwrap();
    let means = [2.0, -2.0, -0.5, 0.5];
    let sigma2 = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 10_000_000;
    let mut acc = 0.0;
    for _ in 0..n {
        let m = means[rng.random_range(0..4)];
        let noise: f64 = rng.sample(StandardNormal);
        let y = m + noise;
        // log2 p(y|m) − log2 p(y)
        acc += (-(noise * noise) / 2.0 / sigma2) * std::f64::consts::LOG2_E
            - (2.0 * PI * sigma2).sqrt().log2()
            - mixture_pdf(y, &means, sigma2).log2();
    }
    let sampled = acc / n as f64;
    let exact = RateCalculator::default()
        .exact_mi_1d(&w, &NoiseSpec::new(sigma2).unwrap())
        .unwrap();
    assert!((sampled - exact).abs() < 1e-3, "sampled {sampled}, quadrature {exact}");
}

#[test]
fn bpsk_rate_matches_midpoint_rule() {
    for (a, s2) in [(0.5, 1.0), (2.0, 1.0), (1.0, 0.25)] {
        let sigma = f64::sqrt(s2);
        let (lo, hi) = (-a - 14.0 * sigma, a + 14.0 * sigma);
        let n = 400_000;
        let h = (hi - lo) / n as f64;
        let hy: f64 = (0..n)
            .map(|i| {
                let p = mixture_pdf(lo + (i as f64 + 0.5) * h, &[a, -a], s2);
                if p > 0.0 { -p * p.log2() * h } else { 0.0 }
            })
            .sum();
        let oracle = hy - 0.5 * (2.0 * PI * std::f64::consts::E * s2).log2();
        let got = RateCalculator::default().bpsk_rate(a, s2).unwrap();
        assert!((got - oracle).abs() < 1e-7, "A={a} σ²={s2}: {got} vs {oracle}");
    }
}
