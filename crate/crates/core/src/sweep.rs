//! Deterministic CSV sweeps over SNR or Eb/N0 grids.
//!
//! Grid points are evaluated on the worker pool and rows are emitted in
//! ratio-major, axis-minor order. Numbers are written with 12 significant
//! digits in scientific notation, LF line endings, header first.

use std::fmt;
use std::io::Write;

use thiserror::Error;

use crate::domain::{DemodMode, DomainError, NoiseSpec, WeightPair};
use crate::montecarlo::{predicted_ber, simulate_1d, SimConfig, SimError};
use crate::par::map_indexed;
use crate::rates::{from_db, rate_slope, shannon_capacity, RateCalculator, RateError};

pub const DEFAULT_RATIOS: [f64; 3] = [2.0, 4.0, 8.0];
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("alpha/beta ratios must be finite and exceed 1 (got {0})")]
    InvalidRatio(f64),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Rate(#[from] RateError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cannot write CSV: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// Quantity on the x-axis of a rate sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    Ebn0Db,
}

impl Axis {
    pub fn column(&self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::Ebn0Db => "ebn0_db",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Inclusive dB grid `min, min+step, …, ≤ max`. `min == max` is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min_db: f64,
    pub max_db: f64,
    pub step_db: f64,
}

impl Grid {
    pub fn new(min_db: f64, max_db: f64, step_db: f64) -> Result<Self, SweepError> {
        if !(min_db.is_finite() && max_db.is_finite() && step_db.is_finite()) {
            return Err(SweepError::InvalidGrid("bounds and step must be finite".into()));
        }
        if step_db <= 0.0 {
            return Err(SweepError::InvalidGrid(format!("step must be positive (got {step_db})")));
        }
        if min_db > max_db {
            return Err(SweepError::InvalidGrid(format!(
                "min ({min_db}) must not exceed max ({max_db})"
            )));
        }
        Ok(Self { min_db, max_db, step_db })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.min_db == self.max_db {
            return Vec::new();
        }
        let n = ((self.max_db - self.min_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.min_db + i as f64 * self.step_db).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub grid: Grid,
    pub ratios: Vec<f64>,
    pub noise: NoiseSpec,
    pub calc: RateCalculator,
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(axis: Axis, grid: Grid, ratios: Vec<f64>, noise: NoiseSpec) -> Result<Self, SweepError> {
        let ratios = if ratios.is_empty() {
            DEFAULT_RATIOS.to_vec()
        } else {
            ratios
        };
        if let Some(bad) = ratios.iter().find(|r| !(r.is_finite() && **r > 1.0)) {
            return Err(SweepError::InvalidRatio(*bad));
        }
        Ok(Self {
            axis,
            grid,
            ratios,
            noise,
            calc: RateCalculator::default(),
            workers: None,
        })
    }

    pub fn with_calculator(mut self, calc: RateCalculator) -> Self {
        self.calc = calc;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    fn jobs(&self) -> Vec<(f64, f64)> {
        let points = self.grid.points();
        self.ratios
            .iter()
            .flat_map(|&r| points.iter().map(move |&v| (r, v)))
            .collect()
    }

    /// Linear SNR of the operating point at axis value `value` (dB).
    fn operating_snr(&self, ratio: f64, value: f64) -> Result<Option<f64>, RateError> {
        match self.axis {
            Axis::SnrDb => Ok(Some(from_db(value))),
            Axis::Ebn0Db => self.calc.snr_for_ebn0(ratio, from_db(value), &self.noise),
        }
    }

    fn evaluate<R, F>(&self, row: F) -> Result<Vec<R>, SweepError>
    where
        R: Send,
        F: Fn(f64, f64, f64) -> Result<R, RateError> + Sync + Send,
    {
        let jobs = self.jobs();
        let rows = map_indexed(jobs.len(), self.workers, |i| {
            let (ratio, value) = jobs[i];
            match self.operating_snr(ratio, value)? {
                Some(snr) => row(ratio, value, snr).map(Some),
                None => Ok(None),
            }
        });
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            if let Some(r) = r? {
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// A CSV table of preformatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SweepError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>, SweepError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }
}

/// 12 significant digits; negative zero prints as zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Rate comparison: layered 1D/2D against BPSK, QPSK and capacity.
pub fn rate_sweep(spec: &SweepSpec) -> Result<Table, SweepError> {
    let mut table = Table::new(&[
        spec.axis.column(),
        "alpha_over_beta",
        "r_z_bps_hz",
        "r_x_bps_hz",
        "r_1_bps_hz",
        "r_2_bps_hz",
        "bpsk_rate_bps_hz",
        "qpsk_rate_bps_hz",
        "capacity_bps_hz",
        "exact_mi_1d_bps_hz",
    ]);
    table.rows = spec.evaluate(|ratio, value, snr| {
        let p = spec.calc.rate_point_at_snr(ratio, snr, &spec.noise)?;
        Ok([value, ratio, p.r_z, p.r_x, p.r_1, p.r_2, p.r_bpsk, p.r_qpsk, p.capacity, p.exact_mi_1d]
            .map(fmt_num)
            .to_vec())
    })?;
    Ok(table)
}

/// Gap to capacity. `r_1` is compared with `log2(1+ρ)`, `r_2` with the
/// capacity at the two-dimensional signal's total SNR `2ρ`.
pub fn capacity_gap(spec: &SweepSpec) -> Result<Table, SweepError> {
    let mut table = Table::new(&[
        spec.axis.column(),
        "alpha_over_beta",
        "r1_minus_c_bps_hz",
        "r2_minus_c_bps_hz",
    ]);
    table.rows = spec.evaluate(|ratio, value, snr| {
        let p = spec.calc.rate_point_at_snr(ratio, snr, &spec.noise)?;
        Ok([value, ratio, p.r_1 - p.capacity, p.r_2 - p.capacity_2d]
            .map(fmt_num)
            .to_vec())
    })?;
    Ok(table)
}

/// Capacity, QPSK and BPSK rates against linear SNR, with central-difference
/// slopes (step `ρ/10`).
pub fn appendix(grid: &Grid, calc: &RateCalculator, workers: Option<usize>) -> Result<Table, SweepError> {
    let mut table = Table::new(&[
        "rho_linear",
        "capacity_bps_hz",
        "qpsk_rate_bps_hz",
        "bpsk_rate_bps_hz",
        "capacity_slope",
        "qpsk_slope",
        "bpsk_slope",
    ]);
    let points = grid.points();
    let rows = map_indexed(points.len(), workers, |i| -> Result<Vec<String>, RateError> {
        let rho = from_db(points[i]);
        let h = 0.1 * rho;
        let bpsk = |r: f64| calc.bpsk_rate_at_snr(r);
        let qpsk = |r: f64| calc.qpsk_rate_at_snr(r);
        let cap = |r: f64| Ok(shannon_capacity(r));
        Ok([
            rho,
            shannon_capacity(rho),
            qpsk(rho)?,
            bpsk(rho)?,
            rate_slope(cap, rho, h)?,
            rate_slope(qpsk, rho, h)?,
            rate_slope(bpsk, rho, h)?,
        ]
        .map(fmt_num)
        .to_vec())
    });
    table.rows = rows.into_iter().collect::<Result<_, _>>()?;
    Ok(table)
}

/// Monte Carlo BER sweep over an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BerSweep {
    pub grid: Grid,
    pub ratios: Vec<f64>,
    pub noise: NoiseSpec,
    pub seed: u64,
    pub n_symbols: u64,
    pub modes: Vec<DemodMode>,
    pub workers: Option<usize>,
}

pub fn ber_sweep(spec: &BerSweep) -> Result<Table, SweepError> {
    if let Some(bad) = spec.ratios.iter().find(|r| !(r.is_finite() && **r > 1.0)) {
        return Err(SweepError::InvalidRatio(*bad));
    }
    let mut table = Table::new(&[
        "snr_db",
        "alpha_over_beta",
        "mode",
        "ber_z",
        "ber_x",
        "ber_z_pred",
        "ber_x_pred",
        "ci_radius",
        "seed",
    ]);
    let points = spec.grid.points();
    for &ratio in &spec.ratios {
        for &snr_db in &points {
            let w = WeightPair::from_ratio(ratio, from_db(snr_db) * spec.noise.n0())?;
            for &mode in &spec.modes {
                let cfg = SimConfig::new(spec.n_symbols, w, spec.noise, spec.seed, mode)?.with_workers(spec.workers);
                let r = simulate_1d(&cfg)?;
                let (pz, px) = predicted_ber(&w, &spec.noise, mode);
                let ci = r.ci_radius(r.ber_z()).max(r.ci_radius(r.ber_x()));
                let mut row = vec![fmt_num(snr_db), fmt_num(ratio), mode.to_string()];
                row.extend([r.ber_z(), r.ber_x(), pz, px, ci].map(fmt_num));
                row.push(spec.seed.to_string());
                table.rows.push(row);
            }
        }
    }
    Ok(table)
}
