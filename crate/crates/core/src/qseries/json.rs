use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{parse_rational, rational_to_string, FracSeries, ModSeries, Rationals, Series, Zmod};
use crate::error::{invalid, Result};

fn is_one(x: &u32) -> bool {
    *x == 1
}

fn one() -> u32 {
    1
}

/// Wire format shared by the CLI and the golden fixtures.
///
/// `coeffs[i]` is the coefficient of `q^{(valuation + stride·i)/denom}`.
/// Integers are written as JSON numbers when they fit in an `i64`, other
/// rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub denom: u32,
    pub valuation: i64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub stride: u32,
    pub modulus: Option<u64>,
    pub coeffs: Vec<Value>,
}

impl SeriesJson {
    pub fn from_frac(s: &FracSeries) -> Self {
        let coeffs = s
            .coeffs()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    if let Some(i) = c.numer().to_i64() {
                        return Value::from(i);
                    }
                }
                Value::from(rational_to_string(c))
            })
            .collect();
        SeriesJson { denom: s.denom(), valuation: s.valuation(), stride: s.stride(), modulus: None, coeffs }
    }

    pub fn from_mod(s: &ModSeries) -> Self {
        SeriesJson {
            denom: s.denom(),
            valuation: s.valuation(),
            stride: s.stride(),
            modulus: Some(s.modulus()),
            coeffs: s.coeffs().iter().map(|&c| Value::from(c)).collect(),
        }
    }

    fn parsed(&self) -> Result<Vec<num_rational::BigRational>> {
        self.coeffs
            .iter()
            .map(|v| match v {
                Value::Number(n) => match n.as_i64() {
                    Some(i) => Ok(num_rational::BigRational::from_integer(BigInt::from(i))),
                    None => match n.as_u64() {
                        Some(u) => Ok(num_rational::BigRational::from_integer(BigInt::from(u))),
                        None => invalid(format!("non-integral JSON number {n}; write rationals as \"p/q\"")),
                    },
                },
                Value::String(s) => parse_rational(s),
                other => invalid(format!("unexpected coefficient {other}")),
            })
            .collect()
    }

    pub fn to_frac(&self) -> Result<FracSeries> {
        if self.modulus.is_some() {
            return invalid("series carries a modulus; read it as a modular series");
        }
        Series::new(Rationals, self.denom, self.valuation, self.stride, self.parsed()?)
    }

    pub fn to_mod(&self) -> Result<ModSeries> {
        let Some(m) = self.modulus else {
            return invalid("series has no modulus");
        };
        let ring = Zmod::new(m)?;
        let coeffs = self.parsed()?.iter().map(|c| ring.reduce_rational(c)).collect::<Result<Vec<_>>>()?;
        Series::new(ring, self.denom, self.valuation, self.stride, coeffs)
    }
}
