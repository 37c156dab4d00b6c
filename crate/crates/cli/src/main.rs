use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cstar_core::{Error, ToleranceConfig};

mod commands;
mod output;

/// Deformed products and involutions on finite-dimensional C*-algebras.
#[derive(Debug, Parser)]
#[command(name = "cstar", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions of the algebra, its commutant, bicommutant and center, and
    /// the minimal central projections.
    Analyze {
        algebra: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Validate a deformation file and run the construction laws on it.
    Deform {
        deformation: PathBuf,
        /// Random samples on top of the basis.
        #[arg(long, visible_alias = "cases", default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the structure constants of the deformed product here.
        #[arg(long, value_name = "PATH")]
        emit_structure: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every property suite on an algebra file or a block algebra.
    Verify {
        #[arg(required_unless_present = "blocks", conflicts_with = "blocks")]
        algebra: Option<PathBuf>,
        /// Block sizes of a canned algebra, e.g. `2,3` for M_2 ⊕ M_3.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per suite on top of the basis.
        #[arg(long, default_value_t = 50)]
        cases: u32,
        /// Break the hypotheses of one suite (by law id) as a negative control.
        #[arg(long, value_name = "LAW")]
        inject: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Find the unitary that makes an invertible element positive.
    Positivize {
        algebra: PathBuf,
        element: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random unitaries in the uniqueness spot-check.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Recover (u, p) from structure constants of a deformed product.
    Recover {
        algebra: PathBuf,
        structure: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Relative tolerance; the absolute tolerance is a thousandth of it.
    #[arg(long, env = "CSTAR_TOL")]
    tol: Option<f64>,
    /// Write the machine-readable report to this file.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> cstar_core::Result<ToleranceConfig> {
        match self.tol {
            Some(t) => ToleranceConfig::with_tol(t),
            None => Ok(ToleranceConfig::default()),
        }
    }
}

/// 0 when every check passed, 1 on a mathematical violation.
pub(crate) type Outcome = cstar_core::Result<bool>;

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { algebra, common } => {
            commands::analyze(&algebra, &common.config()?, common.json.as_deref())
        }
        Command::Deform {
            deformation,
            samples,
            seed,
            emit_structure,
            common,
        } => commands::deform(
            &deformation,
            samples,
            seed,
            emit_structure.as_deref(),
            &common.config()?,
            common.json.as_deref(),
        ),
        Command::Verify {
            algebra,
            blocks,
            seed,
            cases,
            inject,
            common,
        } => {
            if cases == 0 {
                return Err(Error::InvalidInput("cases must be ≥ 1".into()));
            }
            let source = match (algebra, blocks) {
                (Some(path), _) => commands::Source::File(path),
                (None, Some(blocks)) => commands::Source::Blocks(blocks),
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::verify(
                &source,
                seed,
                cases as usize,
                inject.as_deref(),
                &common.config()?,
                common.json.as_deref(),
            )
        }
        Command::Positivize {
            algebra,
            element,
            seed,
            trials,
            common,
        } => commands::positivize(
            &algebra,
            &element,
            seed,
            trials,
            &common.config()?,
            common.json.as_deref(),
        ),
        Command::Recover {
            algebra,
            structure,
            common,
        } => commands::recover(
            &algebra,
            &structure,
            &common.config()?,
            common.json.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
