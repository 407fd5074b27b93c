//! # linrec
//!
//! Exact arithmetic for k-th order linear recurrences over the integers:
//! term evaluation, reduction modulo m, periods of the residue sequences,
//! the `C_{k,n}` / `M_k` closed-form expansions, and gcd structure of the
//! terms.
//!
//! ```
//! use linrec::{period, Recurrence};
//!
//! let fib = Recurrence::fibonacci();
//! assert_eq!(fib.term(10).unwrap().to_string(), "55");
//! let residues = fib.reduce(10).unwrap();
//! assert_eq!(period::fundamental_period(&residues).unwrap(), Some(60));
//! ```

pub mod closedform;
pub mod error;
pub mod gcdlib;
pub mod json;
pub mod matrix;
pub mod period;
pub mod recurrence;
pub mod scan;

pub use closedform::CoeffTable;
pub use error::{Error, Result};
pub use gcdlib::{BezoutTriple, Witness};
pub use matrix::IntMatrix;
pub use period::{CycleStructure, PeriodReport};
pub use recurrence::{
    commutation_check, fib_identity_check, Recurrence, ResidueRecurrence, MAX_MODULUS,
};
pub use scan::Execution;
