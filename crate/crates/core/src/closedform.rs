//! Expansion of `a_{k+1}, ..., a_{2k}` as integer combinations of the
//! initial values.
//!
//! The coefficients `C_{k,n}` (`1 <= n <= k`) satisfy `C_{k,1} = 1` and
//! `C_{k,n} = sum_{j=1}^{n-1} f_{k-j+1} C_{k,n-j}`. They give two expansions
//! of `a_{k+i}` and the k x k matrix `M_k` with
//! `(a_{k+1}, ..., a_{2k}) = M_k (a_1, ..., a_k)`, which must coincide with
//! the k-th power of the companion matrix.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gcdlib::{cramer_delta, is_strong_divisibility, multi_gcd};
use crate::matrix::IntMatrix;
use crate::recurrence::Recurrence;

/// `C_{k,1}, ..., C_{k,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffTable {
    values: Vec<BigInt>,
}

impl CoeffTable {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `C_{k,n}` for `1 <= n <= k`; other `n` are rejected rather than
    /// extrapolated.
    pub fn get(&self, n: usize) -> Result<&BigInt> {
        if n == 0 || n > self.order() {
            return Err(Error::Range {
                index: n as u64,
                min: 1,
                max: self.order() as u64,
            });
        }
        Ok(&self.values[n - 1])
    }

    fn c(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }
}

/// 1-based `f_j`.
fn f(r: &Recurrence, j: usize) -> &BigInt {
    &r.coeffs()[j - 1]
}

/// 1-based `a_j` for `j <= k`.
fn a(r: &Recurrence, j: usize) -> &BigInt {
    &r.init()[j - 1]
}

pub fn coeff_table(r: &Recurrence) -> CoeffTable {
    let k = r.order();
    let mut values: Vec<BigInt> = Vec::with_capacity(k);
    values.push(BigInt::from(1));
    for n in 2..=k {
        let c = (1..n).fold(BigInt::zero(), |acc, j| {
            acc + f(r, k - j + 1) * &values[n - j - 1]
        });
        values.push(c);
    }
    CoeffTable { values }
}

fn require_order(r: &Recurrence, min: usize) -> Result<usize> {
    let k = r.order();
    if k < min {
        return Err(Error::OrderTooSmall { order: k, min });
    }
    Ok(k)
}

/// `a_{k+i} = sum_{m=1}^{i} C_{k,i-m+1} sum_{j=m}^{k} f_{j-m+1} a_j`,
/// for `1 <= i <= k`.
pub fn term_via_c(r: &Recurrence, i: usize) -> Result<BigInt> {
    let k = r.order();
    if i == 0 || i > k {
        return Err(Error::Range {
            index: i as u64,
            min: 1,
            max: k as u64,
        });
    }
    let table = coeff_table(r);
    Ok((1..=i).fold(BigInt::zero(), |acc, m| {
        let inner = (m..=k).fold(BigInt::zero(), |s, j| s + f(r, j - m + 1) * a(r, j));
        acc + table.c(i - m + 1) * inner
    }))
}

/// `a_{k+i}` regrouped by initial value:
/// `sum_{m<=i} a_m sum_{j=1}^{m} f_j C_{k,i-m+j}
///  + sum_{m>i} a_m sum_{j=1}^{i} f_{m-i+j} C_{k,j}`, for `k >= 2`,
/// `1 <= i < k`.
pub fn term_via_corollary(r: &Recurrence, i: usize) -> Result<BigInt> {
    let k = require_order(r, 2)?;
    if i == 0 || i >= k {
        return Err(Error::Range {
            index: i as u64,
            min: 1,
            max: k as u64 - 1,
        });
    }
    let row = corollary_row(r, &coeff_table(r), i);
    Ok(row
        .iter()
        .zip(r.init())
        .fold(BigInt::zero(), |acc, (c, x)| acc + c * x))
}

/// Row `i` of `M_k` from the regrouped expansion; meaningful for `i < k`.
fn corollary_row(r: &Recurrence, table: &CoeffTable, i: usize) -> Vec<BigInt> {
    let k = r.order();
    (1..=k)
        .map(|m| {
            if m <= i {
                (1..=m).fold(BigInt::zero(), |acc, j| acc + f(r, j) * table.c(i - m + j))
            } else {
                (1..=i).fold(BigInt::zero(), |acc, j| acc + f(r, m - i + j) * table.c(j))
            }
        })
        .collect()
}

/// Row `k` of `M_k` read off the `C_{k,n}` expansion at `i = k`: the
/// coefficient of `a_l` is `sum_{m=1}^{l} C_{k,k-m+1} f_{l-m+1}`.
fn theorem_last_row(r: &Recurrence, table: &CoeffTable) -> Vec<BigInt> {
    let k = r.order();
    (1..=k)
        .map(|l| {
            (1..=l).fold(BigInt::zero(), |acc, m| {
                acc + table.c(k - m + 1) * f(r, l - m + 1)
            })
        })
        .collect()
}

/// The matrix `M_k` with `a_{k+i} = sum_m (M_k)_{i,m} a_m`. Rows `1..k-1`
/// use the regrouped expansion and row `k` the `C_{k,n}` expansion.
pub fn matrix_mk(r: &Recurrence) -> Result<IntMatrix> {
    let k = require_order(r, 2)?;
    let table = coeff_table(r);
    let mut rows: Vec<Vec<BigInt>> = (1..k).map(|i| corollary_row(r, &table, i)).collect();
    rows.push(theorem_last_row(r, &table));
    IntMatrix::from_rows(rows)
}

/// Row `k` of `M_k` from one more recurrence step instead:
/// `a_{2k} = f_1 a_k + sum_{j=2}^{k} f_j a_{k+j-1}`, substituting rows
/// `1..k-1` for `a_{k+1}, ..., a_{2k-1}`.
pub fn mk_last_row_via_step(r: &Recurrence) -> Result<Vec<BigInt>> {
    let k = require_order(r, 2)?;
    let table = coeff_table(r);
    let mut row = vec![BigInt::zero(); k];
    row[k - 1] += f(r, 1);
    for j in 2..=k {
        for (acc, c) in row.iter_mut().zip(corollary_row(r, &table, j - 1)) {
            *acc += f(r, j) * c;
        }
    }
    Ok(row)
}

/// Advances `(a_n, ..., a_{n+k-1})` to `(a_{n+1}, ..., a_{n+k})`.
pub fn companion_matrix(r: &Recurrence) -> IntMatrix {
    let k = r.order();
    let mut m = IntMatrix::new(k, k, vec![BigInt::zero(); k * k]).expect("k >= 1");
    for i in 0..k - 1 {
        *m.get_mut(i, i + 1) = BigInt::from(1);
    }
    for (j, c) in r.coeffs().iter().enumerate() {
        *m.get_mut(k - 1, j) = c.clone();
    }
    m
}

/// Exact determinant; see [`IntMatrix::det`].
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    m.det()
}

/// For a strong divisibility sequence whose `M_k` has determinant `+-1`,
/// or a nonzero determinant dividing every `Delta_i(M_k)`, checks
/// `gcd(a_{k+1}, ..., a_{2k}) = gcd(a_1, ..., a_k) = a_1`.
///
/// Strong divisibility is verified up to `sd_bound`, which must be at least
/// `2k`. Unmet hypotheses are errors, distinct from a `false` verdict.
pub fn gcd_block_check(r: &Recurrence, sd_bound: u64) -> Result<bool> {
    let k = require_order(r, 2)?;
    if sd_bound < 2 * k as u64 {
        return Err(Error::HypothesisNotMet(format!(
            "strong divisibility bound {sd_bound} is below 2k = {}",
            2 * k
        )));
    }
    if !is_strong_divisibility(r, sd_bound) {
        return Err(Error::HypothesisNotMet(format!(
            "not a strong divisibility sequence up to index {sd_bound}"
        )));
    }
    let mk = matrix_mk(r)?;
    let upper = r.term_block(k as u64 + 1, k)?;
    let d = mk.det()?;
    if d.is_zero() {
        return Err(Error::HypothesisNotMet("det(M_k) = 0".into()));
    }
    if !d.abs().is_one() {
        for i in 1..=k {
            if !(cramer_delta(&mk, &upper, i)? % &d).is_zero() {
                return Err(Error::HypothesisNotMet(format!(
                    "det(M_k) = {d} does not divide Delta_{i}(M_k)"
                )));
            }
        }
    }
    let g_upper = multi_gcd(&upper)?;
    let g_init = multi_gcd(r.init())?;
    Ok(g_upper == g_init && &g_init == a(r, 1))
}
