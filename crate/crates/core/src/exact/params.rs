//! Loosely typed model parameters as they arrive from flags or JSON.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// Parses `"3"`, `"-2/5"`, `"0.125"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let fail = || Error::InvalidInput(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = t.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| fail())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| fail())?;
        if den.is_zero() {
            return Err(fail());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| fail())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() { return Err(fail()) } else { digits };
    let value = BigInt::from_str(&digits).map_err(|_| fail())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(value * ten.pow(scale as u32))
    } else {
        Rational::new(value, ten.pow((-scale) as u32))
    })
}

/// One parameter value: a JSON number or a string such as `"1/2"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Param(pub Rational);

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.to_integer().to_i64() {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ParamVisitor;
        impl Visitor<'_> for ParamVisitor {
            type Value = Param;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a rational string like \"1/2\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Param, E> {
                Ok(Param(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Param, E> {
                Ok(Param(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Param, E> {
                // Shortest round-trip decimal, so 0.1 becomes 1/10.
                parse_rational(&format!("{v:?}")).map(Param).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Param, E> {
                parse_rational(v).map(Param).map_err(E::custom)
            }
        }
        d.deserialize_any(ParamVisitor)
    }
}

/// Named parameters; every field is optional and each model picks its own.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Param>,
}

impl Params {
    /// Sets a parameter by name.
    pub fn set(&mut self, name: &str, value: Rational) -> Result<()> {
        *self.slot(name)? = Some(Param(value));
        Ok(())
    }

    fn slot(&mut self, name: &str) -> Result<&mut Option<Param>> {
        Ok(match name {
            "n" => &mut self.n,
            "j" => &mut self.j,
            "k" => &mut self.k,
            "ell" => &mut self.ell,
            "m" => &mut self.m,
            "alpha" => &mut self.alpha,
            "beta" => &mut self.beta,
            "gamma" => &mut self.gamma,
            "delta" => &mut self.delta,
            "w0" => &mut self.w0,
            "b0" => &mut self.b0,
            "a" => &mut self.a,
            "theta" => &mut self.theta,
            "d" => &mut self.d,
            "r" => &mut self.r,
            "kappa" => &mut self.kappa,
            other => return Err(Error::Config(format!("unknown parameter `{other}`"))),
        })
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        let slot = match name {
            "n" => &self.n,
            "j" => &self.j,
            "k" => &self.k,
            "ell" => &self.ell,
            "m" => &self.m,
            "alpha" => &self.alpha,
            "beta" => &self.beta,
            "gamma" => &self.gamma,
            "delta" => &self.delta,
            "w0" => &self.w0,
            "b0" => &self.b0,
            "a" => &self.a,
            "theta" => &self.theta,
            "d" => &self.d,
            "r" => &self.r,
            "kappa" => &self.kappa,
            _ => return None,
        };
        slot.as_ref().map(|p| &p.0)
    }

    pub fn rational(&self, name: &str) -> Result<Rational> {
        self.get(name).cloned().ok_or_else(|| Error::Config(format!("missing parameter `{name}`")))
    }

    /// A non-negative integer parameter.
    pub fn uint(&self, name: &str) -> Result<u64> {
        let v = self.rational(name)?;
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Domain(format!("parameter `{name}` must be a non-negative integer, got {v}")));
        }
        v.to_integer()
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("parameter `{name}` is too large")))
    }

    pub fn uint_default(&self, name: &str, default: u64) -> Result<u64> {
        if self.get(name).is_some() {
            self.uint(name)
        } else {
            Ok(default)
        }
    }

    /// `primary`, falling back to `alias` when only that one is given.
    pub fn uint_or(&self, primary: &str, alias: &str) -> Result<u64> {
        if self.get(primary).is_none() && self.get(alias).is_some() {
            self.uint(alias)
        } else {
            self.uint(primary)
        }
    }

    pub fn small(&self, name: &str) -> Result<u32> {
        u32::try_from(self.uint(name)?).map_err(|_| Error::Domain(format!("parameter `{name}` is too large")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), rational(3, 1));
        assert_eq!(parse_rational(" -2/6 ").unwrap(), rational(-1, 3));
        assert_eq!(parse_rational("0.125").unwrap(), rational(1, 8));
        assert_eq!(parse_rational("1.5e-3").unwrap(), rational(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), rational(200, 1));
        for bad in ["", "x", "1/0", "1.2.3", "-", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_numbers_and_strings() {
        let p: Params = serde_json::from_str(r#"{"n": 5, "alpha": "1/2", "kappa": 0.1}"#).unwrap();
        assert_eq!(p.uint("n").unwrap(), 5);
        assert_eq!(p.rational("alpha").unwrap(), rational(1, 2));
        assert_eq!(p.rational("kappa").unwrap(), rational(1, 10));
        assert!(serde_json::from_str::<Params>(r#"{"n": 5, "zeta": 1}"#).is_err());
        assert!(p.uint("alpha").is_err());
    }
}
