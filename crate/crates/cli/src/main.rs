mod args;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;
use mub_balanced::balanced::{component_histogram, semicircle_fit, state_vector};
use mub_balanced::report::{verify_dimension, VerifyOptions};
use mub_balanced::{build_mubs, BalancedState, Field, MoyalCaps};
use serde_json::json;

use args::{Cli, Command, DimArgs, Format};

/// Largest `d` for commands that hold the full `d × d` phase-space grid.
const GRID_MAX_D: u32 = 1024;
/// Largest `d` for the MUB export, which holds `d(d+1)` vectors.
const MUBS_MAX_D: u32 = 256;
/// Largest `d` for the histogram; one density-matrix column costs `O(d²)`.
const HISTOGRAM_MAX_D: u32 = 200_000;

enum Failure {
    /// Bad flags or an unsupported dimension.
    Usage(String),
    /// Checks ran and at least one failed, or output could not be written.
    Run(String),
}

impl From<mub_balanced::Error> for Failure {
    fn from(e: mub_balanced::Error) -> Self {
        use mub_balanced::Error::*;
        match e {
            Io(_) | Json(_) | EigenResidual(_) | DegenerateColumns | NotHermitian(_) | NotReal(_) => {
                Failure::Run(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Build { dim, out, format } => build(&dim, out, format),
        Command::Verify { dim, out, format, tol, max_moyal_d } => {
            verify(&dim, out, format, tol, max_moyal_d)
        }
        Command::Histogram { dim, bins, out, format } => histogram(&dim, bins, out, format),
        Command::Mubs { dim, out } => mubs(&dim, out),
    }
}

/// Field for a command that needs the balanced state, with its size limit.
fn state_field(dim: &DimArgs, max_d: u32) -> Result<Arc<Field>, Failure> {
    let field = dim.field()?;
    mub_balanced::balanced::check_scope(&field)?;
    limit(&field, max_d)?;
    Ok(field)
}

fn limit(field: &Field, max_d: u32) -> Outcome {
    if field.order() > max_d {
        return Err(Failure::Usage(format!(
            "d = {} is above this command's limit of {max_d}",
            field.order()
        )));
    }
    Ok(())
}

fn describe(field: &Field) -> String {
    format!(
        "d = {} = {}^{}, modulus {:?}",
        field.order(),
        field.characteristic(),
        field.degree(),
        field.modulus()
    )
}

/// Twelve decimals, with rounding noise around zero printed as `0`.
fn format_probs(probs: &[f64]) -> String {
    let items: Vec<String> = probs
        .iter()
        .map(|&p| format!("{:.12}", if p.abs() < 1e-12 { 0.0 } else { p }))
        .collect();
    format!("[{}]", items.join(", "))
}

/// `<stem><suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Outcome {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn build(dim: &DimArgs, out: Option<PathBuf>, format: Format) -> Outcome {
    let field = state_field(dim, GRID_MAX_D)?;
    let state = BalancedState::build(field.clone())?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("balanced_{}.json", field.order())));
    write_json(&out, &state)?;
    let grid = sibling(&out, &format!(".wigner.{}", format.extension()));
    match format {
        Format::Csv => {
            let mut w = create(&grid)?;
            state.wigner().write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => write_json(&grid, state.wigner())?,
    }
    println!("{}", describe(&field));
    println!("probabilities {}", format_probs(state.prob_multiset()));
    println!("wrote {} and {}", out.display(), grid.display());
    Ok(())
}

fn verify(
    dim: &DimArgs,
    out: Option<PathBuf>,
    format: Option<Format>,
    tol: Option<f64>,
    max_moyal_d: u32,
) -> Outcome {
    let field = state_field(dim, GRID_MAX_D)?;
    let opts = VerifyOptions {
        caps: MoyalCaps { full: max_moyal_d, ..MoyalCaps::default() },
        tolerance: tol,
        ..VerifyOptions::default()
    };
    let report = verify_dimension(field.clone(), &opts)?;
    match format {
        None => {
            println!("{}", describe(&field));
            println!("probabilities {}", format_probs(&report.prob_multiset));
            print!("{}", report.table());
        }
        Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&report)?),
        Some(Format::Csv) => {
            println!("check,residual,tolerance,passed");
            for c in &report.checks {
                println!("{},{},{},{}", c.name, c.residual, c.tolerance, c.passed);
            }
        }
    }
    if let Some(path) = out {
        write_json(&path, &report)?;
    }
    if report.passed {
        return Ok(());
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    Err(Failure::Run(format!("failed checks: {}", failed.join(", "))))
}

fn histogram(dim: &DimArgs, bins: usize, out: Option<PathBuf>, format: Format) -> Outcome {
    if bins == 0 {
        return Err(Failure::Usage("--bins must be positive".into()));
    }
    let field = state_field(dim, HISTOGRAM_MAX_D)?;
    let start = Instant::now();
    let sv = state_vector(&field)?;
    let hist = component_histogram(&sv.psi, bins);
    let d = field.order() as u64;
    // powers of 3 do not approach the semicircle
    let fit = (field.characteristic() != 3).then(|| semicircle_fit(&hist, d));
    let elapsed = start.elapsed();

    let out = out.unwrap_or_else(|| PathBuf::from(format!("histogram_{d}.{}", format.extension())));
    match format {
        Format::Csv => {
            let mut w = create(&out)?;
            hist.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => {
            let value = json!({ "bin_centers": hist.centers(), "counts": hist.counts });
            write_json(&out, &value)?;
        }
    }
    let max_abs = sv.psi.iter().map(|x| x.abs()).fold(0.0, f64::max) * (d as f64).sqrt();
    let summary = json!({
        "d": d,
        "bins": bins,
        "column_index": sv.column_index.index(),
        "column_norm_residual": sv.column_norm_residual,
        "max_abs_component": max_abs,
        "outside_range": hist.outside,
        "fit": fit,
        "fit_skipped": fit.is_none().then_some("power of 3: semicircle fit skipped"),
    });
    let fit_path = sibling(&out, ".fit.json");
    write_json(&fit_path, &summary)?;

    println!("{}", describe(&field));
    println!("max |√d ψ_j| = {max_abs:.6}");
    match &fit {
        Some(f) => println!(
            "semicircle fit: β̂ = {:.6e}, β = 2/√d = {:.6e}, relative error {:.3}%, α̂ = {:.6e}, α = {:.6e}",
            f.beta_hat,
            f.beta,
            100.0 * f.beta_relative_error,
            f.alpha_hat,
            f.alpha
        ),
        None => println!("power of 3: semicircle fit skipped"),
    }
    println!("wrote {} and {}", out.display(), fit_path.display());
    println!("wall time {:.2}s", elapsed.as_secs_f64());
    Ok(())
}

fn mubs(dim: &DimArgs, out: Option<PathBuf>) -> Outcome {
    let field = dim.field()?;
    limit(&field, MUBS_MAX_D)?;
    let set = build_mubs(&field)?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("mubs_{}.json", field.order())));
    write_json(&out, &set)?;
    println!("{}", describe(&field));
    println!(
        "{} bases, unbiasedness residual {:.3e}, orthonormality residual {:.3e}",
        set.len(),
        set.unbiasedness_residual(),
        set.orthonormality_residual()
    );
    println!("wrote {}", out.display());
    Ok(())
}
