use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mub_balanced::{Error, Field};

#[derive(Debug, Parser)]
#[command(name = "mubw", version, about = "Build and verify MUB-balanced qudit states")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MUBW_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the balanced state; writes its JSON and the Wigner grid.
    Build {
        #[command(flatten)]
        dim: DimArgs,
        /// State JSON path; the grid goes next to it as `<stem>.wigner.<format>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Format of the Wigner grid.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run every check and print the residual table. Exit status 1 on any failure.
    Verify {
        #[command(flatten)]
        dim: DimArgs,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the report in this format instead of the table.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Replace every floating-point tolerance with this value.
        #[arg(long)]
        tol: Option<f64>,
        /// Largest d for the full phase-space purity product.
        #[arg(long, default_value_t = 11)]
        max_moyal_d: u32,
    },
    /// Histogram of the rescaled state-vector components with a semicircle fit.
    Histogram {
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long, default_value_t = 100)]
        bins: usize,
        /// Histogram path; the fit summary goes to `<stem>.fit.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Export the complete set of mutually unbiased bases as JSON.
    Mubs {
        #[command(flatten)]
        dim: DimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
pub struct DimArgs {
    /// Dimension, a power of an odd prime.
    #[arg(long, required_unless_present = "r", conflicts_with_all = ["r", "n"])]
    pub d: Option<u64>,
    /// Characteristic, given together with --n instead of --d.
    #[arg(long, requires = "n")]
    pub r: Option<u64>,
    #[arg(long, requires = "r")]
    pub n: Option<u32>,
    /// Irreducible modulus as comma-separated coefficients c0,c1,...,cn (monic, cn = 1).
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

impl DimArgs {
    pub fn order(&self) -> Result<(u64, u32), Error> {
        match (self.d, self.r, self.n) {
            (Some(d), _, _) => {
                let (r, n) = mub_balanced::prime_power(d).ok_or(Error::NotPrimePower(d))?;
                if r == 2 {
                    return Err(Error::PowerOfTwo(d));
                }
                Ok((r, n))
            }
            (None, Some(r), Some(n)) => Ok((r, n)),
            _ => unreachable!("clap enforces --d or --r/--n"),
        }
    }

    pub fn field(&self) -> Result<Arc<Field>, Error> {
        let (r, n) = self.order()?;
        let mut builder = Field::builder(r, n);
        if let Some(m) = &self.modulus {
            builder = builder.modulus(m.clone());
        }
        Ok(Arc::new(builder.build()?))
    }
}
