//! Command-line front end. Every run prints one JSON report
//! `{command, params, checks, tables, version}` and exits with 0 when all
//! checks pass, 1 when a check fails and 2 on a parameter error.

mod commands;
mod report;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub use report::{num, Cell, Check, Echo, RunReport, Table};

use crate::numerics::{ScaleMode, TolerancePolicy};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "qosc", version, about = "Tridiagonal q-oscillator representations and their certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub params: ParamArgs,

    /// JSON parameter file; flags take precedence over its entries.
    #[arg(long = "params", global = true, value_name = "PATH")]
    pub params_file: Option<PathBuf>,

    /// Also write every table as `<command>_<table>.csv` here.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv_dir: Option<PathBuf>,

    /// JSON report on stdout (default); `--json false` prints a text summary.
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub json: bool,
}

/// Numeric parameters, accepted as flags or from `--params`.
#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct ParamArgs {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub size: Option<usize>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub zeta0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a3: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a4: Option<f64>,
    /// Pencil coefficient of the Askey–Wilson algebra.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Lowest eigenvalue of the canonical pair.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Truncation order N of the finite families.
    #[arg(long = "n", global = true)]
    #[serde(rename = "n")]
    pub big_n: Option<usize>,
}

impl ParamArgs {
    fn or(self, file: ParamArgs) -> ParamArgs {
        ParamArgs {
            q: self.q.or(file.q),
            size: self.size.or(file.size),
            abs_tol: self.abs_tol.or(file.abs_tol),
            rel_tol: self.rel_tol.or(file.rel_tol),
            xi0: self.xi0.or(file.xi0),
            zeta0: self.zeta0.or(file.zeta0),
            s1: self.s1.or(file.s1),
            s2: self.s2.or(file.s2),
            c1: self.c1.or(file.c1),
            c2: self.c2.or(file.c2),
            c3: self.c3.or(file.c3),
            a1: self.a1.or(file.a1),
            a2: self.a2.or(file.a2),
            a3: self.a3.or(file.a3),
            a4: self.a4.or(file.a4),
            mu: self.mu.or(file.mu),
            a: self.a.or(file.a),
            big_n: self.big_n.or(file.big_n),
        }
    }

    fn policy(&self) -> crate::Result<TolerancePolicy> {
        let d = TolerancePolicy::default();
        TolerancePolicy::new(
            self.abs_tol.unwrap_or(d.abs_tol),
            self.rel_tol.unwrap_or(d.rel_tol),
            ScaleMode::OperatorNormProduct,
        )
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build (A, B) and report the construction data.
    Build {
        #[arg(value_enum)]
        parameterization: Parameterization,
    },
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Pair checked by the qosc suite.
        #[arg(long, value_enum, default_value = "canonical")]
        pair: Pair,
    },
    /// Eigenvalues of a finite family against its claimed lattice.
    Spectrum {
        #[arg(value_enum)]
        family: FiniteFamily,
        /// Also split the representation into chains.
        #[arg(long)]
        decompose: bool,
    },
    /// Table of monic polynomial values P_n(x).
    Poly {
        #[arg(value_enum)]
        family: PolyFamily,
        /// Highest degree; 5 by default, capped at N + 1 for finite families.
        #[arg(long)]
        n_max: Option<usize>,
        /// Evaluation points, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.5, 1.0, 2.0])]
        x: Vec<f64>,
    },
    /// The algebra suites of `verify`.
    Algebra {
        #[arg(value_enum)]
        suite: AlgebraSuite,
    },
    /// Chain decomposition of a finite family's representation.
    Decompose {
        #[arg(value_enum)]
        family: FiniteFamily,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Parameterization {
    General,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Qosc,
    BigqjacobiAlgebra,
    AwAlgebra,
    AwMatch,
    Qdiff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraSuite {
    BigqjacobiAlgebra,
    AwAlgebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pair {
    Canonical,
    General,
    Structured,
    QHahn,
    QParaKrawtchouk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiniteFamily {
    QHahn,
    QParaKrawtchouk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyFamily {
    BigQJacobi,
    AskeyWilson,
    QHahn,
    QParaKrawtchouk,
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub enum CliError {
    Param(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Param(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Param(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "{s}"),
        }
    }
}

fn load_params(path: &std::path::Path) -> Result<ParamArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Param(Error::InvalidParameter(format!("{}: {e}", path.display()))))
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    let file = match &cli.params_file {
        Some(p) => load_params(p)?,
        None => ParamArgs::default(),
    };
    let params = cli.params.clone().or(file);
    let pol = params.policy()?;
    let ctx = commands::Ctx { p: params, pol };
    let report = match &cli.command {
        Command::Build { parameterization } => commands::build(&ctx, *parameterization)?,
        Command::Verify { suite, pair } => commands::verify(&ctx, "verify", *suite, *pair)?,
        Command::Algebra { suite } => {
            let s = match suite {
                AlgebraSuite::BigqjacobiAlgebra => Suite::BigqjacobiAlgebra,
                AlgebraSuite::AwAlgebra => Suite::AwAlgebra,
            };
            commands::verify(&ctx, "algebra", s, Pair::Canonical)?
        }
        Command::Spectrum { family, decompose } => commands::spectrum(&ctx, *family, *decompose)?,
        Command::Poly { family, n_max, x } => commands::poly(&ctx, *family, *n_max, x)?,
        Command::Decompose { family } => commands::decompose(&ctx, *family)?,
    };
    Ok(report)
}

/// Entry point of the binary; returns the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(dir) = &cli.csv_dir {
        if let Err(e) = report.write_csv(dir) {
            eprintln!("error: cannot write CSV to {}: {e}", dir.display());
            return 2;
        }
    }
    if cli.json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.pass() {
        0
    } else {
        1
    }
}
