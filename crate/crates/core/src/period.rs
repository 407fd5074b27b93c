//! Periods of residue sequences.
//!
//! A sequence is periodic modulo m with period `l` when `[a_{n+l}]_m = [a_n]_m`
//! for every `n >= 1`. That requires the state orbit to be purely periodic
//! (preperiod 0); when it is not, only the [`CycleStructure`] is reported.
//! For a linear recurrence, agreement on the first k shifted terms already
//! forces periodicity, which is what [`is_period`] checks.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gcdlib::solve_linear_congruence;
use crate::recurrence::{add_mod, check_modulus, mul_mod, Recurrence, ResidueRecurrence};

/// Default bound on the number of distinct states stored by
/// [`cycle_structure`].
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

/// Preperiod `lambda` and cycle length `mu` of the state orbit
/// `s_n = ([a_n]_m, ..., [a_{n+k-1}]_m)`: `s_{n+mu} = s_n` for all
/// `n > lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleStructure {
    pub preperiod: u64,
    pub cycle_len: u64,
}

impl CycleStructure {
    /// Present iff the orbit is purely periodic.
    pub fn fundamental_period(&self) -> Option<u64> {
        (self.preperiod == 0).then_some(self.cycle_len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodReport {
    pub modulus: u32,
    pub cycle: CycleStructure,
    pub fundamental_period: Option<u64>,
}

impl PeriodReport {
    pub fn new(modulus: u32, cycle: CycleStructure) -> Self {
        Self {
            modulus,
            cycle,
            fundamental_period: cycle.fundamental_period(),
        }
    }
}

pub fn cycle_structure(s: &ResidueRecurrence) -> Result<CycleStructure> {
    cycle_structure_with_cap(s, DEFAULT_STATE_CAP)
}

/// Exact `(lambda, mu)` by recording every visited state until the first
/// repeat. Fails once more than `cap` distinct states have been stored.
pub fn cycle_structure_with_cap(s: &ResidueRecurrence, cap: u64) -> Result<CycleStructure> {
    let bits = (u32::BITS - (s.modulus() - 1).leading_zeros()).max(1) as usize;
    if bits * s.order() <= 128 {
        detect_cycle(s, cap, |state| {
            state
                .iter()
                .fold(0u128, |acc, &r| (acc << bits) | r as u128)
        })
    } else {
        detect_cycle(s, cap, |state| state.iter().copied().collect::<Vec<u32>>())
    }
}

fn detect_cycle<K, F>(s: &ResidueRecurrence, cap: u64, key: F) -> Result<CycleStructure>
where
    K: Hash + Eq,
    F: Fn(&VecDeque<u32>) -> K,
{
    let mut first_seen: HashMap<K, u64> = HashMap::new();
    let mut state = s.initial_state();
    let mut n = 1u64;
    loop {
        let stored = first_seen.len() as u64;
        match first_seen.entry(key(&state)) {
            Entry::Occupied(e) => {
                let first = *e.get();
                return Ok(CycleStructure {
                    preperiod: first - 1,
                    cycle_len: n - first,
                });
            }
            Entry::Vacant(e) => {
                if stored >= cap {
                    return Err(Error::StateCapExceeded { cap });
                }
                e.insert(n);
            }
        }
        s.step(&mut state);
        n += 1;
    }
}

pub fn period_report(s: &ResidueRecurrence, cap: u64) -> Result<PeriodReport> {
    Ok(PeriodReport::new(
        s.modulus(),
        cycle_structure_with_cap(s, cap)?,
    ))
}

/// The minimal period, or `None` when the orbit has a nonzero preperiod.
pub fn fundamental_period(s: &ResidueRecurrence) -> Result<Option<u64>> {
    Ok(cycle_structure(s)?.fundamental_period())
}

fn check_shift(ell: u64) -> Result<()> {
    if ell == 0 {
        return Err(Error::Range {
            index: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    Ok(())
}

/// True iff `[a_{j+l}]_m = [a_j]_m` for `j = 1..k`, which for a linear
/// recurrence is equivalent to `l` being a period.
pub fn is_period(s: &ResidueRecurrence, ell: u64) -> Result<bool> {
    check_shift(ell)?;
    let shifted = s.state_fast(1 + ell)?;
    Ok(shifted.iter().eq(s.init()))
}

/// Sufficient condition for `l` to be a period: for every `i` in `1..=k`,
/// `[f_i] = [a_i]`, `[a_{2i+l-k-1}] = [1]` and
/// `sum_{j != i} [f_j][a_{i+l-k+j-1}] = [0]`. Requires `l > k - 1`.
pub fn sufficient_condition_check(s: &ResidueRecurrence, ell: u64) -> Result<bool> {
    check_shift(ell)?;
    let k = s.order();
    if ell < k as u64 {
        return Err(Error::InvalidShift { ell, order: k });
    }
    let m = s.modulus();
    let one = (1 % m as u64) as u32;
    // residues a_{l-k+1} ..= a_{l+k-1}
    let start = ell - k as u64 + 1;
    let mut window: Vec<u32> = s.state_fast(start)?.into();
    let mut state: VecDeque<u32> = window.iter().copied().collect();
    for _ in 1..k {
        s.step(&mut state);
        window.push(state[k - 1]);
    }
    let at = |index: u64| window[(index - start) as usize];
    let (coeffs, init) = (s.coeffs(), s.init());
    Ok((1..=k).all(|i| {
        let iu = i as u64;
        let cross = (1..=k).filter(|&j| j != i).fold(0, |acc, j| {
            add_mod(
                acc,
                mul_mod(coeffs[j - 1], at(iu + ell + j as u64 - k as u64 - 1), m),
                m,
            )
        });
        coeffs[i - 1] == init[i - 1] && at(2 * iu + ell - k as u64 - 1) == one && cross == 0
    }))
}

fn require_order_two(s: &ResidueRecurrence) -> Result<()> {
    if s.order() < 2 {
        return Err(Error::OrderTooSmall {
            order: s.order(),
            min: 2,
        });
    }
    Ok(())
}

/// `[a_k]_m = [f_1]_m [a_l]_m + sum_{i=2}^{k} [f_i]_m [a_{i-1}]_m`, a
/// necessary condition for `l` to be a period. Needs `k >= 2`.
pub fn theorem29_check(s: &ResidueRecurrence, ell: u64) -> Result<bool> {
    require_order_two(s)?;
    check_shift(ell)?;
    let m = s.modulus();
    let (coeffs, init) = (s.coeffs(), s.init());
    let tail = (2..=s.order()).fold(0, |acc, i| {
        add_mod(acc, mul_mod(coeffs[i - 1], init[i - 2], m), m)
    });
    let rhs = add_mod(mul_mod(coeffs[0], s.term_fast(ell)?, m), tail, m);
    Ok(init[s.order() - 1] == rhs)
}

/// Every residue `x` with `[f_1] x = [a_k] - sum_{i=2}^{k} [f_i][a_{i-1}]`,
/// i.e. the possible values of `[a_l]_m` for a period `l`.
pub fn solve_period_residue(s: &ResidueRecurrence) -> Result<Vec<u32>> {
    require_order_two(s)?;
    let m = s.modulus();
    let (coeffs, init) = (s.coeffs(), s.init());
    let tail = (2..=s.order()).fold(0, |acc, i| {
        add_mod(acc, mul_mod(coeffs[i - 1], init[i - 2], m), m)
    });
    let rhs = add_mod(init[s.order() - 1], m - tail, m);
    Ok(
        solve_linear_congruence(coeffs[0] as u64, rhs as u64, m as u64)?
            .into_iter()
            .map(|x| x as u32)
            .collect(),
    )
}

/// Every `l <= bound`, increasing, whose residue `[a_l]_m` solves the
/// period congruence and which passes [`is_period`].
pub fn candidate_periods_via_residue(s: &ResidueRecurrence, bound: u64) -> Result<Vec<u64>> {
    let admissible = solve_period_residue(s)?;
    let mut out = Vec::new();
    let mut state = s.initial_state();
    for ell in 1..=bound {
        let a_ell = state[0];
        s.step(&mut state);
        if state.iter().eq(s.init()) && admissible.binary_search(&a_ell).is_ok() {
            out.push(ell);
        }
    }
    Ok(out)
}

/// A shift suggested by the strong-divisibility construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdCandidate {
    /// `g = gcd(i, j)`.
    pub g: u64,
    /// `t = g h - i`.
    pub t: u64,
    /// Whether `[a_{gcd(i+t, j)}]_m = [a_g]_m`.
    pub verified: bool,
}

/// With `g = gcd(i, j)`, `gcd(h, j) = 1` and `g h > i`, returns
/// `t = g h - i` and checks `[a_{gcd(i+t, j)}]_m = [a_g]_m`. The recurrence
/// is assumed to be a strong divisibility sequence.
pub fn sd_candidate(r: &Recurrence, i: u64, j: u64, h: u64, m: u64) -> Result<SdCandidate> {
    if i == 0 || j == 0 || h == 0 {
        return Err(Error::IndexOutOfDomain(0));
    }
    if h.gcd(&j) != 1 {
        return Err(Error::CoprimalityViolation { h, j });
    }
    let g = i.gcd(&j);
    let t = g
        .checked_mul(h)
        .and_then(|gh| gh.checked_sub(i))
        .filter(|&t| t > 0)
        .ok_or(Error::NonpositiveShift { g, h, i })?;
    let s = r.reduce(m)?;
    let verified = s.term_fast((i + t).gcd(&j))? == s.term_fast(g)?;
    Ok(SdCandidate { g, t, verified })
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `(m, l) = (5q + 2, 2(5q + 3))` for odd `q` with `5q + 2` prime; `l` is
/// a period of the Fibonacci sequence modulo `m`.
pub fn fibonacci_family_period(q: u64) -> Result<(u32, u64)> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenFamilyParameter(q));
    }
    let m = q
        .checked_mul(5)
        .and_then(|x| x.checked_add(2))
        .ok_or(Error::ModulusTooLarge(u64::MAX))?;
    let modulus = check_modulus(m)?;
    if !is_prime(m) {
        return Err(Error::NonPrimeModulus(m));
    }
    Ok((modulus, 2 * (5 * q + 3)))
}
