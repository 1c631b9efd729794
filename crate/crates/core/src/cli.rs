//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::domain::{DemodMode, NoiseSpec};
use crate::montecarlo::DEFAULT_SYMBOLS;
use crate::quadrature::IntegralSpec;
use crate::rates::RateCalculator;
use crate::sweep::{self, Axis, BerSweep, Grid, SweepError, SweepSpec, Table, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "cocktail", version, about = "Layered BPSK rate sweeps and link simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Layered 1D/2D rates against BPSK, QPSK and capacity.
    RateSweep(SweepArgs),
    /// r_1 − C and r_2 − C.
    CapacityGap(SweepArgs),
    /// Capacity, QPSK and BPSK rates near zero SNR, with slopes.
    Appendix(AppendixArgs),
    /// Monte Carlo bit error rates against closed-form predictions.
    Ber(BerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    #[value(name = "snr_db")]
    SnrDb,
    #[value(name = "ebn0_db")]
    Ebn0Db,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::SnrDb => Axis::SnrDb,
            AxisArg::Ebn0Db => Axis::Ebn0Db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    DecisionFeedback,
    GenieAided,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<DemodMode> {
        match self {
            ModeArg::DecisionFeedback => vec![DemodMode::DecisionFeedback],
            ModeArg::GenieAided => vec![DemodMode::GenieAided],
            ModeArg::Both => vec![DemodMode::DecisionFeedback, DemodMode::GenieAided],
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "ebn0_db")]
    pub axis: AxisArg,
    #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
    pub min_db: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub max_db: f64,
    #[arg(long, default_value_t = 0.5)]
    pub step_db: f64,
    /// α/β ratio; repeat for several curves. Defaults to 2, 4 and 8.
    #[arg(long = "ratio")]
    pub ratios: Vec<f64>,
    /// Noise variance per real dimension.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Relative tolerance of the entropy quadrature.
    #[arg(long, default_value_t = IntegralSpec::DEFAULT_REL_TOL)]
    pub tolerance: f64,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AppendixArgs {
    #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
    pub min_db: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub max_db: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step_db: f64,
    #[arg(long, default_value_t = IntegralSpec::DEFAULT_REL_TOL)]
    pub tolerance: f64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub min_db: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub max_db: f64,
    #[arg(long, default_value_t = 2.0)]
    pub step_db: f64,
    #[arg(long = "ratio")]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SYMBOLS)]
    pub symbols: u64,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SweepArgs {
    fn spec(&self) -> Result<SweepSpec, SweepError> {
        let grid = Grid::new(self.min_db, self.max_db, self.step_db)?;
        let noise = NoiseSpec::new(self.sigma2)?;
        let calc = RateCalculator::new(self.tolerance)?;
        Ok(SweepSpec::new(self.axis.into(), grid, self.ratios.clone(), noise)?
            .with_calculator(calc)
            .with_workers(self.workers))
    }
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<(), SweepError> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            table.write_csv(&mut f)?;
            f.flush()?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

/// Builds the table a command produces.
pub fn build(command: &Command) -> Result<Table, SweepError> {
    match command {
        Command::RateSweep(a) => sweep::rate_sweep(&a.spec()?),
        Command::CapacityGap(a) => sweep::capacity_gap(&a.spec()?),
        Command::Appendix(a) => {
            let grid = Grid::new(a.min_db, a.max_db, a.step_db)?;
            sweep::appendix(&grid, &RateCalculator::new(a.tolerance)?, a.workers)
        }
        Command::Ber(a) => {
            let ratios = if a.ratios.is_empty() {
                sweep::DEFAULT_RATIOS.to_vec()
            } else {
                a.ratios.clone()
            };
            sweep::ber_sweep(&BerSweep {
                grid: Grid::new(a.min_db, a.max_db, a.step_db)?,
                ratios,
                noise: NoiseSpec::new(a.sigma2)?,
                seed: a.seed,
                n_symbols: a.symbols,
                modes: a.mode.modes(),
                workers: a.workers,
            })
        }
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::RateSweep(a) | Command::CapacityGap(a) => a.out.as_ref(),
        Command::Appendix(a) => a.out.as_ref(),
        Command::Ber(a) => a.out.as_ref(),
    }
}

pub fn run(cli: &Cli) -> Result<(), SweepError> {
    // validate before touching the output path
    let table = build(&cli.command)?;
    emit(&table, out_path(&cli.command))
}
