//! The curve input format: a JSON object with `field_minpoly` (integers,
//! low-to-high, monic) and either `A` and `B` or `j`, each a list of
//! rationals in the power basis of θ. Integers may be JSON numbers or
//! decimal strings; rationals may also be `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{Map, Value};

use crate::algebra::{QPoly, ZPoly};
use crate::ellcurve::CurveNF;
use crate::error::{Error, Result};
use crate::numberfield::NumberField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveCoeffs {
    AB { a: Vec<BigRational>, b: Vec<BigRational> },
    J(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub field_minpoly: Vec<BigInt>,
    pub coeffs: CurveCoeffs,
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigInt::from_str(&n.to_string()).unwrap()),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::input(format!("{what}: bad integer {s:?}"))),
        _ => Err(Error::input(format!("{what}: expected an integer, got {v}"))),
    }
}

fn parse_rational(v: &Value, what: &str) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| Error::input(format!("{what}: bad rational {s:?}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| Error::input(format!("{what}: bad rational {s:?}")))?;
            if d == BigInt::from(0) {
                return Err(Error::input(format!("{what}: zero denominator in {s:?}")));
            }
            return Ok(BigRational::new(n, d));
        }
    }
    parse_int(v, what).map(BigRational::from_integer)
}

fn list<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<Option<&'a Vec<Value>>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(a)) => Ok(Some(a)),
        Some(v) => Err(Error::input(format!("{key}: expected a list, got {v}"))),
    }
}

fn rationals(vals: &[Value], key: &str) -> Result<Vec<BigRational>> {
    vals.iter().enumerate().map(|(i, v)| parse_rational(v, &format!("{key}[{i}]"))).collect()
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(n.to_string()),
    }
}

fn rational_json(q: &BigRational) -> Value {
    if q.denom().is_one() {
        int_json(q.numer())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::input("curve file must be a JSON object"))?;
        let t = list(obj, "field_minpoly")?.ok_or_else(|| Error::input("missing field_minpoly"))?;
        let field_minpoly =
            t.iter().enumerate().map(|(i, v)| parse_int(v, &format!("field_minpoly[{i}]"))).collect::<Result<_>>()?;
        let coeffs = match (list(obj, "A")?, list(obj, "B")?, list(obj, "j")?) {
            (Some(a), Some(b), None) => CurveCoeffs::AB { a: rationals(a, "A")?, b: rationals(b, "B")? },
            (None, None, Some(j)) => CurveCoeffs::J(rationals(j, "j")?),
            _ => return Err(Error::input("give exactly one of (A, B) or j")),
        };
        Ok(CurveSpec { field_minpoly, coeffs })
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("field_minpoly".into(), Value::Array(self.field_minpoly.iter().map(int_json).collect()));
        let qs = |v: &[BigRational]| Value::Array(v.iter().map(rational_json).collect());
        match &self.coeffs {
            CurveCoeffs::AB { a, b } => {
                obj.insert("A".into(), qs(a));
                obj.insert("B".into(), qs(b));
            }
            CurveCoeffs::J(j) => {
                obj.insert("j".into(), qs(j));
            }
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// The field and the curve; fails on reducible or non-monic `T` and on
    /// singular curves.
    pub fn build(&self) -> Result<CurveNF> {
        let field = NumberField::new(ZPoly::new(self.field_minpoly.clone()))?;
        let elem = |cs: &[BigRational]| field.element(QPoly::new(cs.to_vec()));
        match &self.coeffs {
            CurveCoeffs::AB { a, b } => CurveNF::new(elem(a), elem(b)),
            CurveCoeffs::J(j) => Ok(CurveNF::from_j(&elem(j))),
        }
    }

    /// The `(A, B)` spec of an existing curve.
    pub fn from_curve(curve: &CurveNF) -> Self {
        let coeffs = |e: &crate::NfElement| e.rep().coeffs().to_vec();
        CurveSpec {
            field_minpoly: curve.field().minpoly().coeffs().to_vec(),
            coeffs: CurveCoeffs::AB { a: coeffs(curve.a()), b: coeffs(curve.b()) },
        }
    }
}
