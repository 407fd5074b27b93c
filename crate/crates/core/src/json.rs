//! JSON encodings shared by the library and the command line.
//!
//! * recurrence: `{"k": 2, "coeffs": [1, 1], "init": [1, 1]}`
//! * matrix: `{"rows": 2, "cols": 2, "entries": [["1", "1"], ["1", "2"]]}`
//! * period report: `{"m": 7, "preperiod": 0, "cycle_len": 16, "fundamental_period": 16}`
//!
//! Integers are read from JSON numbers or decimal strings; anything beyond
//! 64 bits must be a string.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::period::{CycleStructure, PeriodReport};
use crate::recurrence::Recurrence;

/// A big integer read from a JSON number or decimal string, written as a
/// number when it fits in `i64` and as a string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

/// A big integer always written as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalString(pub BigInt);

struct BigIntVisitor;

impl Visitor<'_> for BigIntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_f64<E: de::Error>(self, _: f64) -> Result<BigInt, E> {
        Err(E::custom(
            "integer out of 64-bit range; encode it as a decimal string",
        ))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(|_| E::custom(format!("invalid integer {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(JsonInt)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for DecimalString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(DecimalString)
    }
}

impl Serialize for DecimalString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub fn decimal_strings(xs: &[BigInt]) -> Vec<DecimalString> {
    xs.iter().cloned().map(DecimalString).collect()
}

#[derive(Serialize, Deserialize)]
struct RecurrenceRepr {
    k: usize,
    coeffs: Vec<JsonInt>,
    init: Vec<JsonInt>,
}

impl Serialize for Recurrence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wrap = |xs: &[BigInt]| xs.iter().cloned().map(JsonInt).collect();
        RecurrenceRepr {
            k: self.order(),
            coeffs: wrap(self.coeffs()),
            init: wrap(self.init()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Recurrence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RecurrenceRepr::deserialize(d)?;
        if repr.coeffs.len() != repr.k || repr.init.len() != repr.k {
            return Err(de::Error::custom(format!(
                "k = {} but {} coefficients and {} initial values",
                repr.k,
                repr.coeffs.len(),
                repr.init.len()
            )));
        }
        let unwrap = |xs: Vec<JsonInt>| xs.into_iter().map(|x| x.0).collect();
        Recurrence::new(unwrap(repr.coeffs), unwrap(repr.init)).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<DecimalString>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.to_rows().iter().map(|r| decimal_strings(r)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = repr
            .entries
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        if rows.len() != repr.rows || rows.iter().any(|r| r.len() != repr.cols) {
            return Err(de::Error::custom("entries do not match rows and cols"));
        }
        IntMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PeriodReportRepr {
    m: u32,
    preperiod: u64,
    cycle_len: u64,
    fundamental_period: Option<u64>,
}

impl Serialize for PeriodReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PeriodReportRepr {
            m: self.modulus,
            preperiod: self.cycle.preperiod,
            cycle_len: self.cycle.cycle_len,
            fundamental_period: self.fundamental_period,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PeriodReportRepr::deserialize(d)?;
        let report = PeriodReport::new(
            repr.m,
            CycleStructure {
                preperiod: repr.preperiod,
                cycle_len: repr.cycle_len,
            },
        );
        if report.fundamental_period != repr.fundamental_period {
            return Err(de::Error::custom(
                "fundamental_period must equal cycle_len exactly when preperiod is 0",
            ));
        }
        Ok(report)
    }
}
