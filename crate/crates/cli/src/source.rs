use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use linrec::Recurrence;
use num_bigint::BigInt;

use crate::Failure;

/// Where the recurrence comes from: `--coeffs` with `--init`, or `--file`.
#[derive(Args, Debug)]
pub struct Source {
    /// Comma-separated f_1, ..., f_k.
    #[arg(long, value_name = "F1,...,FK", allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Comma-separated a_1, ..., a_k.
    #[arg(long, value_name = "A1,...,AK", allow_hyphen_values = true)]
    pub init: Option<String>,
    /// Recurrence JSON: {"k": .., "coeffs": [..], "init": [..]}.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["coeffs", "init"])]
    pub file: Option<PathBuf>,
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(|x| {
            BigInt::from_str(x.trim())
                .map_err(|_| Failure::Usage(format!("--{flag}: {:?} is not an integer", x.trim())))
        })
        .collect()
}

impl Source {
    pub fn load(&self) -> Result<Recurrence, Failure> {
        match (&self.coeffs, &self.init, &self.file) {
            (None, None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
            }
            (Some(c), Some(a), None) => Ok(Recurrence::new(
                parse_list("coeffs", c)?,
                parse_list("init", a)?,
            )?),
            (None, None, None) => Err(Failure::Usage(
                "no recurrence given; use --coeffs and --init, or --file".into(),
            )),
            _ => Err(Failure::Usage(
                "give both --coeffs and --init, or --file alone".into(),
            )),
        }
    }
}

/// Inclusive modulus range `A..B` with `1 <= A <= B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for ModRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or("expected A..B")?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        let (start, end) = (parse(a)?, parse(b)?);
        if start == 0 {
            return Err("moduli start at 1".into());
        }
        if start > end {
            return Err(format!("empty range {start}..{end}"));
        }
        Ok(ModRange { start, end })
    }
}
