//! The invariant suite behind `linrec verify`.

use std::fmt::Write as _;

use linrec::closedform::{
    companion_matrix, gcd_block_check, matrix_mk, mk_last_row_via_step, term_via_c,
    term_via_corollary,
};
use linrec::gcdlib::{is_strong_divisibility, prop24_witness, prop25_witness};
use linrec::period::{fundamental_period, is_period, theorem29_check};
use linrec::{commutation_check, Error, Recurrence};
use serde::{Deserialize, Serialize};

use crate::commands::json_line;
use crate::{Failure, Output};

const COMMUTATION_RANGE: u64 = 50;
const WITNESS_RANGE: u64 = 10;
const PERIOD_MULTIPLES: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub m: u32,
    pub checks: Vec<CheckResult>,
    pub failures: usize,
}

fn pass(name: &str, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: Status::Pass,
        detail: detail.into(),
    }
}

fn fail(name: &str, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: Status::Fail,
        detail: detail.into(),
    }
}

fn skip(name: &str, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: Status::Skip,
        detail: format!("skipped: {}", detail.into()),
    }
}

/// Failures collected as strings; library errors other than violations
/// propagate as input errors.
fn first_failure(
    items: impl IntoIterator<Item = Result<Option<String>, Error>>,
) -> Result<Option<String>, Failure> {
    for item in items {
        match item {
            Ok(None) => {}
            Ok(Some(msg)) => return Ok(Some(msg)),
            Err(Error::InvariantViolation(msg)) => return Ok(Some(msg)),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

fn verdict(name: &str, found: Option<String>, ok: String) -> CheckResult {
    match found {
        Some(msg) => fail(name, msg),
        None => pass(name, ok),
    }
}

pub fn run(
    r: &Recurrence,
    m: u64,
    sd_bound: u64,
    corrupt_mk: bool,
    json: bool,
) -> Result<Output, Failure> {
    let s = r.reduce(m)?;
    let k = r.order();
    let mut checks = Vec::new();

    let found = first_failure((1..=COMMUTATION_RANGE).map(|i| {
        commutation_check(r, m, i).map(|ok| (!ok).then(|| format!("square fails at i = {i}")))
    }))?;
    checks.push(verdict(
        "commutation",
        found,
        format!("i = 1..{COMMUTATION_RANGE}"),
    ));

    let upper = r.term_block(k as u64 + 1, k)?;
    let found = first_failure((1..=k).map(|i| {
        term_via_c(r, i).map(|x| {
            (x != upper[i - 1])
                .then(|| format!("a_{} = {} but expansion gives {x}", k + i, upper[i - 1]))
        })
    }))?;
    checks.push(verdict(
        "closed-form",
        found,
        format!("a_{}..a_{}", k + 1, 2 * k),
    ));

    if k < 2 {
        checks.push(skip("regrouped-form", "order 1"));
        checks.push(skip("mk-companion", "order 1"));
    } else {
        let found = first_failure((1..k).map(|i| {
            term_via_corollary(r, i).map(|x| {
                (x != upper[i - 1])
                    .then(|| format!("a_{} = {} but regrouping gives {x}", k + i, upper[i - 1]))
            })
        }))?;
        checks.push(verdict(
            "regrouped-form",
            found,
            format!("a_{}..a_{}", k + 1, 2 * k - 1),
        ));

        let mut mk = matrix_mk(r)?;
        if corrupt_mk {
            *mk.get_mut(k - 1, 0) += 1;
        }
        let power = companion_matrix(r).pow(k as u64)?;
        let found = if mk != power {
            Some("M_k differs from the k-th power of the companion matrix".to_string())
        } else if mk_last_row_via_step(r)? != mk.row(k - 1) {
            Some("last row of M_k disagrees with one recurrence step".to_string())
        } else if mk.mul_vec(r.init())? != upper {
            Some("M_k (a_1..a_k) differs from (a_{k+1}..a_{2k})".to_string())
        } else {
            None
        };
        checks.push(verdict(
            "mk-companion",
            found,
            format!("{k}x{k}, det {}", mk.det()?),
        ));
    }

    let fundamental = fundamental_period(&s)?;
    match fundamental {
        None => checks.push(skip("period-necessity", "no fundamental period")),
        Some(_) if k < 2 => checks.push(skip("period-necessity", "order 1")),
        Some(p) => {
            let found = first_failure((1..=PERIOD_MULTIPLES).map(|j| {
                let ell = j * p;
                Ok(match (is_period(&s, ell)?, theorem29_check(&s, ell)?) {
                    (false, _) => {
                        Some(format!("{ell} is a multiple of the period but is rejected"))
                    }
                    (true, false) => Some(format!("period {ell} fails the necessary congruence")),
                    (true, true) => None,
                })
            }))?;
            checks.push(verdict(
                "period-necessity",
                found,
                format!("l = {p}, ..., {}", PERIOD_MULTIPLES * p),
            ));
        }
    }

    let strong = is_strong_divisibility(r, sd_bound);
    let not_sd = format!("not a strong divisibility sequence up to {sd_bound}");
    match fundamental {
        None => {
            checks.push(skip("witnesses", "no fundamental period"));
            checks.push(skip("multiple-witnesses", "no fundamental period"));
        }
        Some(_) if !strong => {
            checks.push(skip("witnesses", not_sd.clone()));
            checks.push(skip("multiple-witnesses", not_sd));
        }
        Some(p) => {
            let pairs: Vec<(u64, u64)> = (1..=WITNESS_RANGE)
                .flat_map(|i| (1..=WITNESS_RANGE).map(move |j| (i, j)))
                .collect();
            checks.push(witness_check("witnesses", &pairs, |i, j| {
                prop24_witness(r, i, j, m, p).map(|w| {
                    (w.lhs_residue != w.rhs_residue)
                        .then(|| format!("unequal residues at ({i}, {j})"))
                })
            }));
            checks.push(witness_check("multiple-witnesses", &pairs, |i, j| {
                prop25_witness(r, i, j, m, p).map(|out| match out.witness {
                    Some(w) if w.lhs_residue != w.rhs_residue => {
                        Some(format!("unequal residues at ({i}, {j})"))
                    }
                    None if out.z > 0 => {
                        Some(format!("no witness at ({i}, {j}) although z = {}", out.z))
                    }
                    _ => None,
                })
            }));
        }
    }

    checks.push(if k < 2 {
        skip("gcd-block", "order 1")
    } else {
        match gcd_block_check(r, sd_bound.max(2 * k as u64)) {
            Ok(true) => pass("gcd-block", "gcd(a_{k+1}..a_{2k}) = gcd(a_1..a_k) = a_1"),
            Ok(false) => fail("gcd-block", "gcd of the second block differs"),
            Err(Error::InvariantViolation(msg)) => fail("gcd-block", msg),
            Err(Error::HypothesisNotMet(msg)) => skip("gcd-block", msg),
            Err(e) => return Err(e.into()),
        }
    });

    render(s.modulus(), checks, json)
}

/// Runs `f` over index pairs; errors that are not violations mean the
/// construction does not apply and skip the check.
fn witness_check(
    name: &str,
    pairs: &[(u64, u64)],
    f: impl Fn(u64, u64) -> Result<Option<String>, Error>,
) -> CheckResult {
    for &(i, j) in pairs {
        match f(i, j) {
            Ok(None) => {}
            Ok(Some(msg)) => return fail(name, msg),
            Err(Error::InvariantViolation(msg)) => return fail(name, format!("({i}, {j}): {msg}")),
            Err(e) => return skip(name, format!("({i}, {j}): {e}")),
        }
    }
    pass(name, format!("i, j = 1..{WITNESS_RANGE}"))
}

fn render(m: u32, checks: Vec<CheckResult>, json: bool) -> Result<Output, Failure> {
    let violations: Vec<String> = checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let text = if json {
        json_line(&VerifyReport {
            m,
            failures: violations.len(),
            checks,
        })
    } else {
        let mut text = String::new();
        for c in &checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = writeln!(text, "{tag} {}: {}", c.name, c.detail);
        }
        let _ = writeln!(text, "{} failure(s)", violations.len());
        text
    };
    Ok(Output { text, violations })
}
