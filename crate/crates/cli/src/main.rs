//! `linrec`: command-line front end for the `linrec` library.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 property violation.

mod commands;
mod source;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use source::{ModRange, Source};

#[derive(Parser, Debug)]
#[command(
    name = "linrec",
    version,
    about = "Linear recurrences: terms, periods mod m, closed forms, gcd structure"
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a_n for n in [from, from + count), exactly or mod m.
    Terms {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Preperiod, cycle length and fundamental period mod m.
    Period {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        moduli: Moduli,
        /// Also test this shift with every period criterion.
        #[arg(long, value_name = "L")]
        check: Option<u64>,
        #[arg(long, default_value_t = linrec::period::DEFAULT_STATE_CAP)]
        state_cap: u64,
    },
    /// Fibonacci mod 5q+2 for odd q <= q-max with 5q+2 prime.
    Family {
        #[arg(long)]
        q_max: u64,
    },
    /// Run the invariant suite on one recurrence and modulus.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Strong divisibility is tested up to this index.
        #[arg(long, default_value_t = 30)]
        bound: u64,
        #[arg(long, hide = true)]
        corrupt_mk: bool,
    },
    /// The coefficients C_{k,1}, ..., C_{k,k}.
    Coeffs {
        #[command(flatten)]
        source: Source,
    },
    /// The matrix M_k with (a_{k+1}, ..., a_{2k}) = M_k (a_1, ..., a_k).
    Matrix {
        #[command(flatten)]
        source: Source,
    },
    /// Test gcd(a_m, a_n) = a_gcd(m,n) for all m, n <= bound.
    Sd {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 30)]
        bound: u64,
    },
    /// Residues [a_l]_m allowed for a period l, and the periods l <= bound
    /// they single out.
    SolveResidue {
        #[command(flatten)]
        source: Source,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Moduli {
    #[arg(long = "mod", value_name = "M")]
    pub modulus: Option<u64>,
    #[arg(long, value_name = "A..B")]
    pub mod_range: Option<ModRange>,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or input: exit 1.
    Usage(String),
    /// A guaranteed property was observed to fail: exit 2.
    Violation(String),
}

impl From<linrec::Error> for Failure {
    fn from(e: linrec::Error) -> Self {
        match e {
            linrec::Error::InvariantViolation(msg) => Failure::Violation(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Rendered standard output plus any violations found while producing it.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub violations: Vec<String>,
}

impl Output {
    pub fn text(text: String) -> Self {
        Output {
            text,
            violations: Vec::new(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.is_empty())
                .collect();
            eprintln!("{}", first.join(" "));
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            if out.violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                for v in &out.violations {
                    eprintln!("violation: {v}");
                }
                ExitCode::from(2)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}
