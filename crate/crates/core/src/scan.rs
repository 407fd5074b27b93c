//! Batch analyses over many independent inputs (moduli, family parameters).
//!
//! With the `parallel` feature (on by default) work items run on the rayon
//! pool; without it [`Execution::Parallel`] degrades to a sequential loop.
//! Output order never depends on the execution mode.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::period::{
    fibonacci_family_period, fundamental_period, is_prime, period_report, PeriodReport,
};
use crate::recurrence::Recurrence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `items`, keeping input order.
pub fn map_ordered<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// One [`PeriodReport`] per modulus, ordered by modulus.
pub fn period_reports(
    r: &Recurrence,
    moduli: RangeInclusive<u64>,
    state_cap: u64,
    exec: Execution,
) -> Result<Vec<PeriodReport>> {
    let moduli: Vec<u64> = moduli.collect();
    map_ordered(&moduli, exec, |&m| period_report(&r.reduce(m)?, state_cap))
        .into_iter()
        .collect()
}

/// A row of the Fibonacci `5q + 2` family scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub q: u64,
    pub m: u32,
    pub ell: u64,
    pub fundamental: u64,
    /// `ell` is a proper multiple of the fundamental period.
    pub is_multiple: bool,
}

/// For each odd `q <= q_max` with `5q + 2` prime: the family period
/// `2(5q + 3)` next to the fundamental period of Fibonacci mod `5q + 2`.
pub fn family_scan(q_max: u64, exec: Execution) -> Result<Vec<FamilyRow>> {
    if q_max < 1 {
        return Err(Error::Range {
            index: q_max,
            min: 1,
            max: u64::MAX,
        });
    }
    let qs: Vec<u64> = (1..=q_max)
        .step_by(2)
        .filter(|&q| is_prime(5 * q + 2))
        .collect();
    let fib = Recurrence::fibonacci();
    map_ordered(&qs, exec, |&q| {
        let (m, ell) = fibonacci_family_period(q)?;
        let fundamental = fundamental_period(&fib.reduce(m as u64)?)?.ok_or_else(|| {
            Error::InvariantViolation(format!("Fibonacci mod {m} has a preperiod"))
        })?;
        Ok(FamilyRow {
            q,
            m,
            ell,
            fundamental,
            is_multiple: ell != fundamental,
        })
    })
    .into_iter()
    .collect()
}
