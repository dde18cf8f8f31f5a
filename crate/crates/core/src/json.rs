//! Exact JSON encoding of big integers.
//!
//! `serde_json` is built with `arbitrary_precision`, so integers of any size
//! are written as plain JSON numbers without passing through `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};
use serde_json::{Number, Value};

use crate::zmatrix::IntMatrix;

pub fn number(n: &BigInt) -> Number {
    Number::from_str(&n.to_string()).expect("decimal integer is a valid json number")
}

pub fn int(n: &BigInt) -> Value {
    Value::Number(number(n))
}

pub fn vector(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn to_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        _ => None,
    }
}

pub fn to_vector(v: &Value) -> Option<Vec<BigInt>> {
    v.as_array()?.iter().map(to_bigint).collect()
}

pub fn to_matrix(v: &Value) -> Option<IntMatrix> {
    let rows = v
        .as_array()?
        .iter()
        .map(to_vector)
        .collect::<Option<Vec<_>>>()?;
    IntMatrix::try_from_rows(rows).ok()
}

pub(crate) fn ser_vector<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&number(x))?;
    }
    seq.end()
}

pub(crate) fn ser_matrix<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        seq.serialize_element(&vector(m.row(i)))?;
    }
    seq.end()
}

pub(crate) fn ser_opt_matrix<S: Serializer>(
    m: &Option<IntMatrix>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => ser_matrix(m, s),
        None => s.serialize_none(),
    }
}
