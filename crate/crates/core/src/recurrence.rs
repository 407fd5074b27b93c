//! Exact evaluation of k-th order linear recurrences and their reduction
//! modulo m.
//!
//! Indices are 1-based: the initial values are `a_1..a_k` and for `i >= 1`
//!
//! ```text
//! a_{i+k} = f_1 a_i + f_2 a_{i+1} + ... + f_k a_{i+k-1}
//! ```
//!
//! There is no `a_0`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Recurrence::reduce`]: `2^31 - 1`.
///
/// Residues fit in `u32` and every product fits in `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A k-th order linear recurrence over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recurrence {
    coeffs: Vec<BigInt>,
    init: Vec<BigInt>,
}

impl Recurrence {
    /// Builds the recurrence with coefficients `f_1..f_k` and initial values
    /// `a_1..a_k`. Zero coefficients (including `f_1` or `f_k`) are allowed.
    pub fn new(coeffs: Vec<BigInt>, init: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidRecurrence("order must be at least 1".into()));
        }
        if coeffs.len() != init.len() {
            return Err(Error::InvalidRecurrence(format!(
                "{} coefficients but {} initial values",
                coeffs.len(),
                init.len()
            )));
        }
        Ok(Self { coeffs, init })
    }

    pub fn from_i64(coeffs: &[i64], init: &[i64]) -> Result<Self> {
        Self::new(
            coeffs.iter().copied().map(BigInt::from).collect(),
            init.iter().copied().map(BigInt::from).collect(),
        )
    }

    /// `F_1 = F_2 = 1`, so `term(n) = F_n` for every `n >= 1`.
    pub fn fibonacci() -> Self {
        Self::from_i64(&[1, 1], &[1, 1]).expect("valid fibonacci recurrence")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `f_1..f_k`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `a_1..a_k`.
    pub fn init(&self) -> &[BigInt] {
        &self.init
    }

    /// Same coefficients, new initial values.
    pub fn with_init(&self, init: Vec<BigInt>) -> Result<Self> {
        Self::new(self.coeffs.clone(), init)
    }

    /// Applies the linear map `f(x_1..x_k) = sum f_j x_j` to a window.
    pub fn apply(&self, window: &[BigInt]) -> BigInt {
        debug_assert_eq!(window.len(), self.order());
        self.coeffs
            .iter()
            .zip(window)
            .fold(BigInt::zero(), |acc, (f, a)| acc + f * a)
    }

    /// The infinite sequence `a_1, a_2, ...`.
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            recurrence: self,
            window: self.init.iter().cloned().collect(),
        }
    }

    /// `a_n`, by iterating a sliding window of k values.
    pub fn term(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::IndexOutOfDomain(0));
        }
        let k = self.order() as u64;
        if n <= k {
            return Ok(self.init[(n - 1) as usize].clone());
        }
        let mut terms = self.terms();
        for _ in 1..n {
            terms.advance();
        }
        Ok(terms.window[0].clone())
    }

    /// `(a_start, ..., a_{start+count-1})`.
    pub fn term_block(&self, start: u64, count: usize) -> Result<Vec<BigInt>> {
        if start == 0 {
            return Err(Error::IndexOutOfDomain(0));
        }
        let mut terms = self.terms();
        for _ in 1..start {
            terms.advance();
        }
        Ok(terms.take(count).collect())
    }

    /// Maps coefficients and initial values onto canonical residues in
    /// `[0, m-1]`.
    pub fn reduce(&self, m: u64) -> Result<ResidueRecurrence> {
        let modulus = check_modulus(m)?;
        let lift = |xs: &[BigInt]| xs.iter().map(|x| canonical_residue(x, modulus)).collect();
        Ok(ResidueRecurrence {
            modulus,
            coeffs: lift(&self.coeffs),
            init: lift(&self.init),
        })
    }
}

/// Iterator over the exact terms of a [`Recurrence`], starting at `a_1`.
#[derive(Debug, Clone)]
pub struct Terms<'a> {
    recurrence: &'a Recurrence,
    window: VecDeque<BigInt>,
}

impl Terms<'_> {
    fn advance(&mut self) {
        let next = self
            .recurrence
            .coeffs
            .iter()
            .zip(&self.window)
            .fold(BigInt::zero(), |acc, (f, a)| acc + f * a);
        self.window.pop_front();
        self.window.push_back(next);
    }
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let head = self.window[0].clone();
        self.advance();
        Some(head)
    }
}

/// Validates `1 <= m <= 2^31 - 1`.
pub fn check_modulus(m: u64) -> Result<u32> {
    match m {
        0 => Err(Error::InvalidModulus),
        m if m > MAX_MODULUS => Err(Error::ModulusTooLarge(m)),
        m => Ok(m as u32),
    }
}

/// The representative of `x mod m` in `[0, m-1]`, negatives included.
pub fn canonical_residue(x: &BigInt, m: u32) -> u32 {
    x.mod_floor(&BigInt::from(m))
        .to_u32()
        .expect("residue is below the modulus")
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 + b as u64) % m as u64) as u32
}

/// A recurrence reduced modulo `m`; every stored value lies in `[0, m-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueRecurrence {
    modulus: u32,
    coeffs: Vec<u32>,
    init: Vec<u32>,
}

impl ResidueRecurrence {
    /// Builds a residue recurrence directly, normalizing every value modulo
    /// `m`.
    pub fn new(modulus: u64, coeffs: &[u64], init: &[u64]) -> Result<Self> {
        let modulus = check_modulus(modulus)?;
        if coeffs.is_empty() || coeffs.len() != init.len() {
            return Err(Error::InvalidRecurrence(format!(
                "{} coefficients but {} initial values",
                coeffs.len(),
                init.len()
            )));
        }
        let lift = |xs: &[u64]| xs.iter().map(|&x| (x % modulus as u64) as u32).collect();
        Ok(Self {
            modulus,
            coeffs: lift(coeffs),
            init: lift(init),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn init(&self) -> &[u32] {
        &self.init
    }

    /// `psi_f`: the recurrence map evaluated entirely in residues.
    pub fn apply(&self, window: &[u32]) -> u32 {
        debug_assert_eq!(window.len(), self.order());
        let m = self.modulus;
        self.coeffs
            .iter()
            .zip(window)
            .fold(0, |acc, (&f, &a)| add_mod(acc, mul_mod(f, a, m), m))
    }

    /// The infinite residue sequence `[a_1]_m, [a_2]_m, ...`.
    pub fn residues(&self) -> Residues<'_> {
        Residues {
            recurrence: self,
            window: self.init.iter().copied().collect(),
        }
    }

    /// The state vector `s_1 = ([a_1]_m, ..., [a_k]_m)`; stepping it with
    /// [`ResidueRecurrence::step`] yields `s_2, s_3, ...`.
    pub fn initial_state(&self) -> VecDeque<u32> {
        self.init.iter().copied().collect()
    }

    /// Advances a state vector `s_n` to `s_{n+1}` in place.
    pub fn step(&self, state: &mut VecDeque<u32>) {
        let m = self.modulus;
        let next = self
            .coeffs
            .iter()
            .zip(state.iter())
            .fold(0, |acc, (&f, &a)| add_mod(acc, mul_mod(f, a, m), m));
        state.pop_front();
        state.push_back(next);
    }

    /// `[a_n]_m` by direct iteration, O(n k).
    pub fn term(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::IndexOutOfDomain(0));
        }
        let k = self.order() as u64;
        if n <= k {
            return Ok(self.init[(n - 1) as usize]);
        }
        let mut state = self.initial_state();
        for _ in 1..n {
            self.step(&mut state);
        }
        Ok(state[0])
    }

    /// The state vector `s_n = ([a_n]_m, ..., [a_{n+k-1}]_m)` via
    /// `s_n = C^{n-1} s_1`.
    pub fn state_fast(&self, n: u64) -> Result<VecDeque<u32>> {
        if n == 0 {
            return Err(Error::IndexOutOfDomain(0));
        }
        let power = ResidueMatrix::companion(self).pow(n - 1);
        let m = self.modulus;
        Ok((0..self.order())
            .map(|i| {
                power
                    .row(i)
                    .iter()
                    .zip(&self.init)
                    .fold(0, |acc, (&c, &a)| add_mod(acc, mul_mod(c, a, m), m))
            })
            .collect())
    }

    /// `[a_n]_m` by raising the companion matrix to the power `n - k`,
    /// O(k^3 log n) residue multiplications.
    pub fn term_fast(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::IndexOutOfDomain(0));
        }
        let k = self.order();
        if n <= k as u64 {
            return Ok(self.init[(n - 1) as usize]);
        }
        let power = ResidueMatrix::companion(self).pow(n - k as u64);
        // s_{1+t} = C^t s_1 and a_n is the last entry of s_{n-k+1}.
        let m = self.modulus;
        Ok(power
            .row(k - 1)
            .iter()
            .zip(&self.init)
            .fold(0, |acc, (&c, &a)| add_mod(acc, mul_mod(c, a, m), m)))
    }
}

/// Iterator over residues of a [`ResidueRecurrence`], starting at `[a_1]_m`.
#[derive(Debug, Clone)]
pub struct Residues<'a> {
    recurrence: &'a ResidueRecurrence,
    window: VecDeque<u32>,
}

impl Iterator for Residues<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let head = self.window[0];
        self.recurrence.step(&mut self.window);
        Some(head)
    }
}

/// Dense square matrix over `Z/mZ`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ResidueMatrix {
    size: usize,
    modulus: u32,
    entries: Vec<u32>,
}

impl ResidueMatrix {
    fn identity(size: usize, modulus: u32) -> Self {
        let mut entries = vec![0; size * size];
        let one = (1 % modulus as u64) as u32;
        for i in 0..size {
            entries[i * size + i] = one;
        }
        Self {
            size,
            modulus,
            entries,
        }
    }

    fn companion(s: &ResidueRecurrence) -> Self {
        let k = s.order();
        let mut entries = vec![0; k * k];
        for i in 0..k - 1 {
            entries[i * k + i + 1] = (1 % s.modulus as u64) as u32;
        }
        entries[(k - 1) * k..].copy_from_slice(&s.coeffs);
        Self {
            size: k,
            modulus: s.modulus,
            entries,
        }
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.size;
        let m = self.modulus as u128;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let acc: u128 = (0..n)
                    .map(|l| self.entries[i * n + l] as u128 * other.entries[l * n + j] as u128)
                    .sum();
                entries[i * n + j] = (acc % m) as u32;
            }
        }
        Self {
            size: n,
            modulus: self.modulus,
            entries,
        }
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.size, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Checks that reduction mod m commutes with one application of the
/// recurrence map at position `i`: `pi_m(f(a_i..a_{i+k-1}))` computed with
/// exact integers equals `psi_f([a_i]_m..[a_{i+k-1}]_m)` computed in residues.
pub fn commutation_check(r: &Recurrence, m: u64, i: u64) -> Result<bool> {
    let window = r.term_block(i, r.order())?;
    commutation_check_window(r, m, &window)
}

/// [`commutation_check`] on an explicit window of k consecutive exact terms.
pub fn commutation_check_window(r: &Recurrence, m: u64, window: &[BigInt]) -> Result<bool> {
    if window.len() != r.order() {
        return Err(Error::Shape(format!(
            "window of length {} for a recurrence of order {}",
            window.len(),
            r.order()
        )));
    }
    let reduced = r.reduce(m)?;
    let modulus = reduced.modulus();
    let lhs = canonical_residue(&r.apply(window), modulus);
    let projected: Vec<u32> = window
        .iter()
        .map(|a| canonical_residue(a, modulus))
        .collect();
    Ok(lhs == reduced.apply(&projected))
}

/// `F_n` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci_number(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Checks `F_{n+m} = F_m F_{n+1} + F_{m-1} F_n` exactly. Here `m >= 1` is an
/// index, not a modulus.
pub fn fib_identity_check(n: u64, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::IndexOutOfDomain(0));
    }
    let lhs = fibonacci_number(n + m);
    let rhs = fibonacci_number(m) * fibonacci_number(n + 1)
        + fibonacci_number(m - 1) * fibonacci_number(n);
    Ok(lhs == rhs)
}
