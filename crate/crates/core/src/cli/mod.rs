//! The `courant-verify` command line: background loading, suite execution
//! and reports.

mod background;
mod random;
mod report;
mod suite;

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use background::{
    beta_from_str, kappa_from_str, load_background, load_beta, load_kappa, Background, MAX_COEFFICIENT_DEGREE,
    MAX_DIM,
};
pub use random::RandomPolys;
pub use report::{emit_report, Check, ConfigEcho, Format, Status, VerificationReport};
pub use suite::{
    run_suite, Suite, SuiteConfig, FUNCTORIALITY_PAIRS, PROPERTY_CASES, QUADRATURE_POINTS, QUADRATURE_TOLERANCE,
};

use crate::error::Result;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exact verification of the standard and exact Courant algebroid
/// constructions and their integration.
#[derive(Debug, Parser)]
#[command(name = "courant-verify", version)]
pub struct Args {
    /// Dimension d of M = R^d; defaults to the dimension of the background forms, or 3.
    #[arg(long)]
    pub dim: Option<u8>,
    /// Closed 3-form document.
    #[arg(long, value_name = "FILE")]
    pub kappa: Option<PathBuf>,
    /// 2-form document.
    #[arg(long, value_name = "FILE")]
    pub beta: Option<PathBuf>,
    /// Suites to run; repeatable.
    #[arg(long = "suite", value_enum, default_values_t = [Suite::All])]
    pub suites: Vec<Suite>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Highest simplicial level used by exhaustive checks (at most 4).
    #[arg(long, default_value_t = 3)]
    pub level_cap: u8,
    /// Lift the dimension and coefficient-degree caps.
    #[arg(long)]
    pub unsafe_caps: bool,
    /// Record wall time in the report (breaks byte-stability).
    #[arg(long)]
    pub timing: bool,
}

/// Builds the suite configuration, loading background documents.
pub fn config_from_args(args: &Args) -> Result<SuiteConfig> {
    let kappa = args.kappa.as_ref().map(|p| load_kappa(p, args.unsafe_caps)).transpose()?;
    let beta = args.beta.as_ref().map(|p| load_beta(p, args.unsafe_caps)).transpose()?;
    let dim = args
        .dim
        .or(kappa.as_ref().map(|k| k.dim()))
        .or(beta.as_ref().map(|b| b.dim()))
        .unwrap_or(3);
    let mut config = SuiteConfig::new(dim).with_suites(args.suites.clone());
    if let (Some(k), Some(p)) = (kappa, &args.kappa) {
        config = config.with_kappa(k, p.display().to_string());
    }
    if let (Some(b), Some(p)) = (beta, &args.beta) {
        config = config.with_beta(b, p.display().to_string());
    }
    config.seed = args.seed;
    config.level_cap = args.level_cap;
    config.unsafe_caps = args.unsafe_caps;
    config.timing = args.timing;
    Ok(config)
}

/// Runs the command line; returns the process exit code.
pub fn main_with(argv: impl IntoIterator<Item = std::ffi::OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let report = match config_from_args(&args).and_then(|c| run_suite(&c)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let _ = out.write_all(&emit_report(&report, args.format));
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
