//! JSON encodings of polynomials, polynomial matrices and transfer matrices,
//! plus the fixed float format used in CSV output.
//!
//! Polynomials are arrays of exact rational strings in ascending powers,
//! e.g. `s^2 + 10 s + 10` is `["10", "10", "1"]`. Plain JSON numbers are
//! accepted on input.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::polyrat::{format_rational, parse_rational, Poly, RatFunc, Rational};
use crate::tfm::TransferMatrix;

/// 17 significant digits in scientific notation; `inf`, `-inf`, `nan` for
/// non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn parse_err(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, found {v}"))
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(parse_err("rational string or number", v)),
    }
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(format_rational(c))).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| parse_err("coefficient array", v))?;
    Ok(Poly::from_coeffs(arr.iter().map(rational_from_json).collect::<Result<_>>()?))
}

pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    json!({"num": poly_to_json(f.num()), "den": poly_to_json(f.den())})
}

/// Accepts `{"num": [...], "den": [...]}`, a bare coefficient array
/// (polynomial) or a scalar (constant).
pub fn ratfunc_from_json(v: &Value) -> Result<RatFunc> {
    match v {
        Value::Object(o) => {
            let num = poly_from_json(o.get("num").ok_or_else(|| parse_err("\"num\" field", v))?)?;
            let den = match o.get("den") {
                Some(d) => poly_from_json(d)?,
                None => Poly::one(),
            };
            RatFunc::new(num, den)
        }
        Value::Array(_) => Ok(RatFunc::from_poly(poly_from_json(v)?)),
        _ => Ok(RatFunc::constant(rational_from_json(v)?)),
    }
}

fn grid_from_json(v: &Value) -> Result<(usize, usize, Vec<&Value>)> {
    let rows = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"entries\" array".into()))?;
    let r = rows.len();
    let c = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut cells = Vec::with_capacity(r * c);
    for row in rows {
        let row = row.as_array().ok_or_else(|| parse_err("row array", row))?;
        if row.len() != c {
            return Err(Error::Parse("ragged entries".into()));
        }
        cells.extend(row.iter());
    }
    for (key, actual) in [("rows", r), ("cols", c)] {
        if let Some(declared) = v.get(key) {
            if declared.as_u64() != Some(actual as u64) {
                return Err(Error::Parse(format!("\"{key}\" is {declared} but entries give {actual}")));
            }
        }
    }
    if r == 0 || c == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    Ok((r, c, cells))
}

pub fn polymatrix_to_json(m: &PolyMatrix) -> Value {
    let entries: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(poly_to_json).collect()))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn polymatrix_from_json(v: &Value) -> Result<PolyMatrix> {
    let (r, c, cells) = grid_from_json(v)?;
    PolyMatrix::new(r, c, cells.into_iter().map(poly_from_json).collect::<Result<_>>()?)
}

pub fn tfm_to_json(m: &TransferMatrix) -> Value {
    let entries: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(ratfunc_to_json).collect()))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn tfm_from_json(v: &Value) -> Result<TransferMatrix> {
    let (r, c, cells) = grid_from_json(v)?;
    TransferMatrix::new(r, c, cells.into_iter().map(ratfunc_from_json).collect::<Result<_>>()?)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
