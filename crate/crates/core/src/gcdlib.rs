//! Euclid, Bezout and the gcd structure of recurrence terms: strong
//! divisibility, gcd preservation under unimodular maps, and explicit
//! witnesses for the residue congruences satisfied by periodic strong
//! divisibility sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::period::is_period;
use crate::recurrence::{canonical_residue, mul_mod, Recurrence};

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd<T: Integer + Signed + Clone>(a: &T, b: &T) -> T {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = a.mod_floor(&b);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// `x a + y b = g` with `g = gcd(a, b) >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BezoutTriple<T> {
    pub g: T,
    pub x: T,
    pub y: T,
}

/// Iterative extended Euclid with truncated quotients. The result is
/// normalized so that `g >= 0`; `(a, 0)` yields `(|a|, sign(a), 0)`.
pub fn extended_gcd<T: Integer + Signed + Clone>(a: &T, b: &T) -> BezoutTriple<T> {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_x, mut x) = (T::one(), T::zero());
    let (mut old_y, mut y) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.clone() / r.clone();
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = old_x - q.clone() * x.clone();
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = old_y - q * y.clone();
        old_y = std::mem::replace(&mut y, next_y);
    }
    if old_r.is_zero() {
        return BezoutTriple {
            g: T::zero(),
            x: T::zero(),
            y: T::zero(),
        };
    }
    if old_r.is_negative() {
        BezoutTriple {
            g: -old_r,
            x: -old_x,
            y: -old_y,
        }
    } else {
        BezoutTriple {
            g: old_r,
            x: old_x,
            y: old_y,
        }
    }
}

/// Left fold of [`gcd`] over a non-empty slice.
pub fn multi_gcd<T: Integer + Signed + Clone>(xs: &[T]) -> Result<T> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptyInput)?;
    Ok(rest.iter().fold(first.abs(), |acc, x| gcd(&acc, x)))
}

/// All `x` in `[0, m-1]` with `a x = b (mod m)`. Empty when
/// `gcd(a, m)` does not divide `b`; otherwise exactly `gcd(a, m)` solutions,
/// in increasing order.
pub fn solve_linear_congruence(a: u64, b: u64, m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::InvalidModulus);
    }
    let (a, b) = ((a % m) as i128, (b % m) as i128);
    let m = m as i128;
    let bezout = extended_gcd(&a, &m);
    let g = if a == 0 { m } else { bezout.g };
    if b % g != 0 {
        return Ok(Vec::new());
    }
    let step = m / g;
    // a/g is invertible mod m/g, with inverse x from a x + m y = g.
    let inverse = bezout.x.rem_euclid(step);
    let base = ((b / g) % step * inverse).rem_euclid(step);
    Ok((0..g).map(|t| (base + t * step) as u64).collect())
}

/// True iff `gcd(a_m, a_n) = a_{gcd(m, n)}` for every `1 <= m, n <= bound`.
pub fn is_strong_divisibility(r: &Recurrence, bound: u64) -> bool {
    let terms: Vec<BigInt> = r.terms().take(bound as usize).collect();
    (1..=bound as usize).all(|m| {
        (m..=bound as usize).all(|n| gcd(&terms[m - 1], &terms[n - 1]) == terms[m.gcd(&n) - 1])
    })
}

/// `Delta_i(A)`: the determinant of `A` with column `i` (1-based) replaced
/// by `y`.
pub fn cramer_delta(a: &IntMatrix, y: &[BigInt], i: usize) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::Shape("Cramer's rule needs a square matrix".into()));
    }
    if i == 0 || i > a.cols() {
        return Err(Error::Shape(format!(
            "column {i} out of range for an {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    a.with_column(i - 1, y)?.det()
}

/// Which hypothesis admitted a matrix into [`unimodular_preserves_gcd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdHypothesis {
    /// `det(A) = +-1`.
    Unimodular,
    /// `det(A) != 0` divides every `Delta_i(A)`.
    DeterminantDividesDeltas,
}

/// Outcome of [`unimodular_preserves_gcd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdPreservation {
    pub hypothesis: GcdHypothesis,
    pub image: Vec<BigInt>,
    pub gcd_before: BigInt,
    pub gcd_after: BigInt,
}

impl GcdPreservation {
    pub fn preserved(&self) -> bool {
        self.gcd_before == self.gcd_after
    }
}

/// Computes `y = A x` and compares `gcd(y)` with `gcd(x)`.
///
/// Requires `A` square of size `n >= 2`, `x` and `y` entrywise positive, and
/// either `|det A| = 1` or `det A != 0` dividing every `Delta_i(A)`.
pub fn unimodular_preserves_gcd(a: &IntMatrix, xs: &[BigInt]) -> Result<GcdPreservation> {
    if !a.is_square() || a.rows() < 2 {
        return Err(Error::Shape(format!(
            "expected an n x n matrix with n >= 2, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if xs.len() != a.cols() {
        return Err(Error::Shape(format!(
            "vector of length {} for an {}x{} matrix",
            xs.len(),
            a.rows(),
            a.cols()
        )));
    }
    if xs.iter().any(|x| !x.is_positive()) {
        return Err(Error::HypothesisNotMet("inputs must be positive".into()));
    }
    let det = a.det()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let image = a.mul_vec(xs)?;
    if image.iter().any(|y| !y.is_positive()) {
        return Err(Error::HypothesisNotMet("image A x must be positive".into()));
    }
    let hypothesis = if det.abs().is_one() {
        GcdHypothesis::Unimodular
    } else {
        for i in 1..=a.cols() {
            if !cramer_delta(a, &image, i)?.is_multiple_of(&det) {
                return Err(Error::HypothesisNotMet(format!(
                    "det(A) = {det} does not divide Delta_{i}(A)"
                )));
            }
        }
        GcdHypothesis::DeterminantDividesDeltas
    };
    Ok(GcdPreservation {
        hypothesis,
        gcd_before: multi_gcd(xs)?,
        gcd_after: multi_gcd(&image)?,
        image,
    })
}

/// [`unimodular_preserves_gcd`], reporting a changed gcd as
/// [`Error::InvariantViolation`].
pub fn check_gcd_preserved(a: &IntMatrix, xs: &[BigInt]) -> Result<GcdPreservation> {
    let outcome = unimodular_preserves_gcd(a, xs)?;
    if !outcome.preserved() {
        return Err(Error::InvariantViolation(format!(
            "gcd changed from {} to {} under a {:?} matrix",
            outcome.gcd_before, outcome.gcd_after, outcome.hypothesis
        )));
    }
    Ok(outcome)
}

/// A certified congruence `[a_index]_m = [w]_m [a_base]_m`.
///
/// `lhs_residue = [a_index]_m` and `rhs_residue = [w]_m [a_base]_m`; a
/// constructed witness always has them equal. The witness depends on the
/// period it was built from, so the period is recorded with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub w: BigInt,
    pub modulus: u32,
    pub period: u64,
    pub index: u64,
    pub base_index: u64,
    pub lhs_residue: u32,
    pub rhs_residue: u32,
}

/// The Bezout construction shared by both witnesses: with
/// `x a_{i+l} + y a_j = gcd(a_{i+l}, a_j)`, returns the exact quotient
/// `w = (x a_i + y a_j) / gcd(a_i, a_j)`.
fn bezout_multiplier(r: &Recurrence, i: u64, j: u64, ell: u64) -> Result<BigInt> {
    let a_i = r.term(i)?;
    let a_j = r.term(j)?;
    let a_shifted = r.term(i + ell)?;
    let bezout = extended_gcd(&a_shifted, &a_j);
    let combination = &bezout.x * &a_i + &bezout.y * &a_j;
    let g = gcd(&a_i, &a_j);
    if g.is_zero() {
        // a_i = a_j = 0: any w certifies 0 = w * 0.
        return Ok(BigInt::zero());
    }
    let (w, rem) = combination.div_rem(&g);
    if !rem.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "gcd(a_{i}, a_{j}) = {g} does not divide x a_{i} + y a_{j} = {combination}"
        )));
    }
    Ok(w)
}

fn require_period(r: &Recurrence, m: u64, ell: u64) -> Result<crate::ResidueRecurrence> {
    let reduced = r.reduce(m)?;
    if ell == 0 || !is_period(&reduced, ell)? {
        return Err(Error::InvalidPeriod {
            ell,
            modulus: reduced.modulus(),
        });
    }
    Ok(reduced)
}

/// Witness `w` for `[a_{(i+l, j)}]_m = [w]_m [a_{(i, j)}]_m`, where `l` is a
/// period of `r` modulo `m` and `r` is a strong divisibility sequence (the
/// latter is the caller's responsibility).
pub fn prop24_witness(r: &Recurrence, i: u64, j: u64, m: u64, ell: u64) -> Result<Witness> {
    if i == 0 || j == 0 {
        return Err(Error::IndexOutOfDomain(0));
    }
    let reduced = require_period(r, m, ell)?;
    let modulus = reduced.modulus();
    let w = bezout_multiplier(r, i, j, ell)?;
    let index = (i + ell).gcd(&j);
    let base_index = i.gcd(&j);
    let witness = Witness {
        lhs_residue: reduced.term_fast(index)?,
        rhs_residue: mul_mod(
            canonical_residue(&w, modulus),
            reduced.term_fast(base_index)?,
            modulus,
        ),
        w,
        modulus,
        period: ell,
        index,
        base_index,
    };
    certified(witness)
}

/// Result of [`prop25_witness`]: the multiplier `z` from
/// `(i+l, j) = x (i+l) + y j = z (i, j) + x l`, and a witness for
/// `[a_{z (i,j)}]_m = [w_z]_m [a_{(i,j)}]_m` when `z > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipleWitness {
    pub z: i128,
    pub witness: Option<Witness>,
}

/// Witness for the congruence at index `z (i, j)`. Only `z > 0` is
/// constructed; for `z <= 0` the multiplier is reported without a witness.
pub fn prop25_witness(r: &Recurrence, i: u64, j: u64, m: u64, ell: u64) -> Result<MultipleWitness> {
    if i == 0 || j == 0 {
        return Err(Error::IndexOutOfDomain(0));
    }
    let reduced = require_period(r, m, ell)?;
    let modulus = reduced.modulus();
    let (shifted, j_wide, i_wide) = ((i + ell) as i128, j as i128, i as i128);
    let bezout = extended_gcd(&shifted, &j_wide);
    let g = i.gcd(&j);
    let (z, rem) = (bezout.x * i_wide + bezout.y * j_wide).div_rem(&(g as i128));
    if rem != 0 {
        return Err(Error::InvariantViolation(format!(
            "(i, j) = {g} does not divide x i + y j"
        )));
    }
    debug_assert_eq!(bezout.g, z * g as i128 + bezout.x * ell as i128);
    if z <= 0 {
        return Ok(MultipleWitness { z, witness: None });
    }
    let index = u64::try_from(z)
        .ok()
        .and_then(|z| z.checked_mul(g))
        .ok_or_else(|| {
            Error::InvariantViolation(format!("index z (i, j) = {z} * {g} overflows"))
        })?;
    let w = bezout_multiplier(r, i, j, ell)?;
    let witness = Witness {
        lhs_residue: reduced.term_fast(index)?,
        rhs_residue: mul_mod(
            canonical_residue(&w, modulus),
            reduced.term_fast(g)?,
            modulus,
        ),
        w,
        modulus,
        period: ell,
        index,
        base_index: g,
    };
    Ok(MultipleWitness {
        z,
        witness: Some(certified(witness)?),
    })
}

fn certified(witness: Witness) -> Result<Witness> {
    if witness.lhs_residue != witness.rhs_residue {
        return Err(Error::InvariantViolation(format!(
            "[a_{}] = {} but [w][a_{}] = {} modulo {} (w = {}, period {})",
            witness.index,
            witness.lhs_residue,
            witness.base_index,
            witness.rhs_residue,
            witness.modulus,
            witness.w,
            witness.period
        )));
    }
    Ok(witness)
}
