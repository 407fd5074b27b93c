use std::fmt::Write as _;

use linrec::closedform::{coeff_table, matrix_mk};
use linrec::gcdlib::is_strong_divisibility;
use linrec::json::decimal_strings;
use linrec::period::{
    candidate_periods_via_residue, is_period, period_report, solve_period_residue,
    sufficient_condition_check, theorem29_check,
};
use linrec::scan::{family_scan, map_ordered};
use linrec::{Execution, PeriodReport, Recurrence};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::{verify, Cli, Command, Failure, Moduli, Output};

pub fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Terms {
            source,
            from,
            count,
            modulus,
        } => {
            if *count == 0 {
                return Ok(Output::text(if json {
                    "[]\n".into()
                } else {
                    String::new()
                }));
            }
            terms(&source.load()?, *from, *count, *modulus, json)
        }
        Command::Period {
            source,
            moduli,
            check,
            state_cap,
        } => period(&source.load()?, moduli, *check, *state_cap, json),
        Command::Family { q_max } => family(*q_max, json),
        Command::Verify {
            source,
            modulus,
            bound,
            corrupt_mk,
        } => verify::run(&source.load()?, *modulus, *bound, *corrupt_mk, json),
        Command::Coeffs { source } => {
            let table = coeff_table(&source.load()?);
            Ok(Output::text(if json {
                json_line(&decimal_strings(table.values()))
            } else {
                format!("{}\n", join(table.values(), " "))
            }))
        }
        Command::Matrix { source } => {
            let mk = matrix_mk(&source.load()?)?;
            Ok(Output::text(if json {
                json_line(&mk)
            } else {
                let rows = mk
                    .to_rows()
                    .iter()
                    .map(|r| format!("[{}]", join(r, ",")))
                    .collect::<Vec<_>>();
                format!("[{}]\ndet {}\n", rows.join(","), mk.det()?)
            }))
        }
        Command::Sd { source, bound } => {
            let holds = is_strong_divisibility(&source.load()?, *bound);
            Ok(Output::text(if json {
                json_line(&SdReport {
                    bound: *bound,
                    strong_divisibility: holds,
                })
            } else {
                format!("strong divisibility up to {bound}: {holds}\n")
            }))
        }
        Command::SolveResidue {
            source,
            modulus,
            bound,
        } => {
            let s = source.load()?.reduce(*modulus)?;
            let report = ResidueReport {
                m: s.modulus(),
                residues: solve_period_residue(&s)?,
                candidates: candidate_periods_via_residue(&s, *bound)?,
            };
            Ok(Output::text(if json {
                json_line(&report)
            } else {
                format!(
                    "residues {{{}}}\ncandidates [{}]\n",
                    join(&report.residues, ","),
                    join(&report.candidates, ",")
                )
            }))
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct SdReport {
    pub bound: u64,
    pub strong_divisibility: bool,
}

#[derive(Serialize, Deserialize)]
pub struct ResidueReport {
    pub m: u32,
    pub residues: Vec<u32>,
    pub candidates: Vec<u64>,
}

fn terms(
    r: &Recurrence,
    from: u64,
    count: u64,
    modulus: Option<u64>,
    json: bool,
) -> Result<Output, Failure> {
    let values: Vec<BigInt> = match modulus {
        None => {
            let count =
                usize::try_from(count).map_err(|_| Failure::Usage("--count too large".into()))?;
            r.term_block(from, count)?
        }
        Some(m) => {
            let s = r.reduce(m)?;
            let mut state = s.state_fast(from)?;
            (0..count)
                .map(|_| {
                    let x = state[0];
                    s.step(&mut state);
                    BigInt::from(x)
                })
                .collect()
        }
    };
    Ok(Output::text(if json {
        json_line(&decimal_strings(&values))
    } else {
        format!("{}\n", join(&values, " "))
    }))
}

/// Verdicts of the period criteria for one shift.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub ell: u64,
    pub is_period: bool,
    /// `None` when the order is below 2.
    pub theorem29: Option<bool>,
    /// `None` when `ell` is below the order.
    pub sufficient: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodRow {
    #[serde(flatten)]
    pub report: PeriodReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<ShiftCheck>,
}

fn shift_check(
    r: &Recurrence,
    m: u64,
    ell: u64,
    report: &PeriodReport,
    violations: &mut Vec<String>,
) -> Result<ShiftCheck, Failure> {
    let s = r.reduce(m)?;
    let k = s.order() as u64;
    let check = ShiftCheck {
        ell,
        is_period: is_period(&s, ell)?,
        theorem29: if k >= 2 {
            Some(theorem29_check(&s, ell)?)
        } else {
            None
        },
        sufficient: if ell >= k {
            Some(sufficient_condition_check(&s, ell)?)
        } else {
            None
        },
    };
    let expected = report
        .fundamental_period
        .is_some_and(|p| ell.is_multiple_of(p));
    if check.is_period != expected {
        violations.push(format!(
            "m = {m}: is_period({ell}) = {} disagrees with the cycle structure",
            check.is_period
        ));
    }
    if check.is_period && check.theorem29 == Some(false) {
        violations.push(format!(
            "m = {m}: period {ell} fails the necessary congruence"
        ));
    }
    if check.sufficient == Some(true) && !check.is_period {
        violations.push(format!(
            "m = {m}: sufficient condition holds but {ell} is not a period"
        ));
    }
    Ok(check)
}

fn period(
    r: &Recurrence,
    moduli: &Moduli,
    check: Option<u64>,
    cap: u64,
    json: bool,
) -> Result<Output, Failure> {
    let ms: Vec<u64> = match (moduli.modulus, moduli.mod_range) {
        (Some(m), _) => vec![m],
        (None, Some(range)) => (range.start..=range.end).collect(),
        (None, None) => return Err(Failure::Usage("give --mod or --mod-range".into())),
    };
    if check == Some(0) {
        return Err(Failure::Usage("--check must be positive".into()));
    }
    let results = map_ordered(&ms, Execution::default(), |&m| -> Result<_, Failure> {
        let report = period_report(&r.reduce(m)?, cap)?;
        let mut violations = Vec::new();
        let check = check
            .map(|ell| shift_check(r, m, ell, &report, &mut violations))
            .transpose()?;
        Ok((PeriodRow { report, check }, violations))
    });
    let mut out = Output::default();
    let mut rows = Vec::with_capacity(results.len());
    for result in results {
        let (row, violations) = result?;
        out.violations.extend(violations);
        rows.push(row);
    }
    if json {
        out.text = json_line(&rows);
        return Ok(out);
    }
    let verdict = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
    for row in &rows {
        let rep = &row.report;
        let fundamental = rep
            .fundamental_period
            .map_or("none".to_string(), |p| p.to_string());
        let _ = writeln!(
            out.text,
            "m={} preperiod={} cycle_len={} fundamental={}",
            rep.modulus, rep.cycle.preperiod, rep.cycle.cycle_len, fundamental
        );
        if let Some(c) = &row.check {
            let _ = writeln!(
                out.text,
                "  ell={} is_period={} theorem29={} sufficient={}",
                c.ell,
                c.is_period,
                verdict(c.theorem29),
                verdict(c.sufficient)
            );
        }
    }
    Ok(out)
}

fn family(q_max: u64, json: bool) -> Result<Output, Failure> {
    if q_max < 1 {
        return Err(Failure::Usage("--q-max must be at least 1".into()));
    }
    let rows = family_scan(q_max, Execution::default())?;
    let fib = Recurrence::fibonacci();
    let mut out = Output::default();
    for row in &rows {
        if !is_period(&fib.reduce(row.m as u64)?, row.ell)? {
            out.violations.push(format!(
                "q = {}: {} is not a period mod {}",
                row.q, row.ell, row.m
            ));
        }
    }
    if json {
        out.text = json_line(&rows);
        return Ok(out);
    }
    out.text.push_str("q m ell fundamental is_multiple\n");
    for row in &rows {
        let _ = writeln!(
            out.text,
            "{} {} {} {} {}",
            row.q, row.m, row.ell, row.fundamental, row.is_multiple
        );
    }
    Ok(out)
}
