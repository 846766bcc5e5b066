//! JSON encodings shared by every module and the CLI.
//!
//! * exact scalar: `{"re": "p/q", "im": "p/q"}`
//! * floating scalar: `[re, im]`
//! * matrices: nested row arrays (3×3, or 2×2 for [`crate::so3c::Mat2`])
//!
//! A document is exact when every scalar uses the rational-string form and
//! floating when every scalar is a pair of numbers; mixing is an error.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::{Complex64, ComplexValue, GaussianRational, Scalar};

/// A scalar with a JSON encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for GaussianRational {
    fn to_json(&self) -> Value {
        let (re, im) = self.to_strings();
        json!({ "re": re, "im": im })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let part = |key: &str| -> Result<&str> {
            v.get(key).and_then(Value::as_str).ok_or_else(|| {
                Error::Parse(format!("exact scalar needs string field `{key}`: {v}"))
            })
        };
        GaussianRational::from_strings(part("re")?, part("im")?)
    }
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse(format!("floating scalar must be [re, im]: {v}")))?;
        let re = arr[0].as_f64();
        let im = arr[1].as_f64();
        match (re, im) {
            (Some(re), Some(im)) if re.is_finite() && im.is_finite() => Ok(Complex64::new(re, im)),
            (Some(_), Some(_)) => Err(Error::NonFinite),
            _ => Err(Error::Parse(format!(
                "floating scalar must be [re, im]: {v}"
            ))),
        }
    }
}

/// Which encoding a scalar uses.
fn is_exact_scalar(v: &Value) -> Option<bool> {
    match v {
        Value::Object(_) => Some(true),
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => Some(false),
        _ => None,
    }
}

/// Walks nested arrays down to the scalars and reports whether all of them
/// are exact, all floating, or mixed/invalid.
fn detect_kind(v: &Value, depth: usize) -> Result<bool> {
    if depth == 0 {
        return is_exact_scalar(v)
            .ok_or_else(|| Error::Parse(format!("not a complex scalar: {v}")));
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a nested array: {v}")))?;
    let mut kind = None;
    for x in arr {
        let k = detect_kind(x, depth - 1)?;
        match kind {
            None => kind = Some(k),
            Some(prev) if prev != k => {
                return Err(Error::Parse("mixed exact and floating scalars".into()))
            }
            _ => {}
        }
    }
    kind.ok_or_else(|| Error::Parse("empty array".into()))
}

fn fixed_array<'a>(v: &'a Value, n: usize, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .filter(|a| a.len() == n)
        .ok_or_else(|| Error::Parse(format!("{what} must be an array of length {n}")))
}

pub fn vec_to_json<S: JsonScalar>(v: &Vec3<S>) -> Value {
    Value::Array(v.0.iter().map(JsonScalar::to_json).collect())
}

pub fn vec_from_json<S: JsonScalar>(v: &Value) -> Result<Vec3<S>> {
    let a = fixed_array(v, 3, "vector")?;
    Ok(Vec3([
        S::from_json(&a[0])?,
        S::from_json(&a[1])?,
        S::from_json(&a[2])?,
    ]))
}

pub fn mat_to_json<S: JsonScalar>(m: &Mat3<S>) -> Value {
    Value::Array(
        m.m.iter()
            .map(|row| Value::Array(row.iter().map(JsonScalar::to_json).collect()))
            .collect(),
    )
}

pub fn mat_from_json<S: JsonScalar>(v: &Value) -> Result<Mat3<S>> {
    let rows = fixed_array(v, 3, "matrix")?;
    let mut out = Mat3::zero();
    for (i, row) in rows.iter().enumerate() {
        let row = fixed_array(row, 3, "matrix row")?;
        for (j, x) in row.iter().enumerate() {
            out[(i, j)] = S::from_json(x)?;
        }
    }
    out.checked()
}

/// A 3×3 matrix in whichever precision its JSON used.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMat3 {
    Exact(Mat3<GaussianRational>),
    Float(Mat3<Complex64>),
}

impl AnyMat3 {
    pub fn parse(v: &Value) -> Result<Self> {
        fixed_array(v, 3, "matrix")?;
        if detect_kind(v, 2)? {
            mat_from_json(v).map(Self::Exact)
        } else {
            mat_from_json(v).map(Self::Float)
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Exact(m) => mat_to_json(m),
            Self::Float(m) => mat_to_json(m),
        }
    }

    pub fn to_c64(&self) -> Mat3<Complex64> {
        match self {
            Self::Exact(m) => m.to_c64(),
            Self::Float(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }
}

pub fn complex_value_to_json(c: &ComplexValue) -> Value {
    match c {
        ComplexValue::Exact(g) => g.to_json(),
        ComplexValue::Float(z) => z.to_json(),
    }
}

pub fn complex_value_from_json(v: &Value) -> Result<ComplexValue> {
    match is_exact_scalar(v) {
        Some(true) => GaussianRational::from_json(v).map(ComplexValue::Exact),
        Some(false) => Complex64::from_json(v).map(ComplexValue::Float),
        None => Err(Error::Parse(format!("not a complex scalar: {v}"))),
    }
}

/// Exact Frobenius norm squared rendered as a rational string; `"0"` for
/// the zero matrix.
pub fn exact_norm_sqr_string(m: &Mat3<GaussianRational>) -> String {
    let total = m.m.iter().flatten().fold(
        num_rational::BigRational::from_integer(0.into()),
        |acc, x| acc + x.norm_sqr(),
    );
    total.to_string()
}

pub(crate) fn depth_kind(v: &Value, depth: usize) -> Result<bool> {
    detect_kind(v, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_matrix_round_trip() {
        let m = Mat3::from_fn(|i, j| GaussianRational::from_fracs(i as i64 - 1, 3, j as i64, 2));
        let v = mat_to_json(&m);
        assert_eq!(v[0][0], json!({"re": "-1/3", "im": "0/1"}));
        let back = AnyMat3::parse(&v).unwrap();
        assert_eq!(back, AnyMat3::Exact(m));
    }

    #[test]
    fn float_matrix_round_trip_is_bit_exact() {
        let m = Mat3::from_fn(|i, j| Complex64::new(0.1 * i as f64 + 1.0 / 3.0, -(j as f64) / 7.0));
        let text = serde_json::to_string(&mat_to_json(&m)).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(AnyMat3::parse(&v).unwrap(), AnyMat3::Float(m));
    }

    #[test]
    fn rejects_bad_shapes_and_mixing() {
        let mixed = json!([
            [[1, 0], [0, 0], [0, 0]],
            [[0, 0], {"re": "1", "im": "0"}, [0, 0]],
            [[0, 0], [0, 0], [1, 0]]
        ]);
        assert!(AnyMat3::parse(&mixed).is_err());
        let short = json!([[[1, 0], [0, 0]], [[0, 0], [1, 0]]]);
        assert!(AnyMat3::parse(&short).is_err());
        let bad_scalar = json!([
            [[1, 0, 0], [0, 0], [0, 0]],
            [[0, 0], [1, 0], [0, 0]],
            [[0, 0], [0, 0], [1, 0]]
        ]);
        assert!(AnyMat3::parse(&bad_scalar).is_err());
    }

    #[test]
    fn complex_values() {
        let e = complex_value_from_json(&json!({"re": "1/2", "im": "-1"})).unwrap();
        assert_eq!(
            e,
            ComplexValue::Exact(GaussianRational::from_fracs(1, 2, -1, 1))
        );
        let f = complex_value_from_json(&json!([0.25, 2.0])).unwrap();
        assert_eq!(f, ComplexValue::Float(Complex64::new(0.25, 2.0)));
        assert!(complex_value_from_json(&json!("x")).is_err());
    }
}
