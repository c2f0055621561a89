//! Exact rationals and the measure parameter.
//!
//! Everything measured in this crate is an arbitrary-precision reduced
//! fraction. The wire form is always `"p/q"`, including integers (`"1/1"`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `"p/q"` with the fraction reduced and the sign on the numerator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
    let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Returns `k` with `r = a / 2^k` for some integer `a`, if `r` is dyadic.
pub fn dyadic_exponent(r: &Rational) -> Option<u32> {
    let d = r.denom();
    if d.is_zero() || d.is_negative() {
        return None;
    }
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz) == BigInt::one() {
        u32::try_from(tz).ok()
    } else {
        None
    }
}

/// The parameter of the product measure: a rational strictly between 0 and 1.
///
/// A cylinder `[u]` gets mass `lambda^#zeros(u) * (1 - lambda)^#ones(u)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lambda(Rational);

impl Lambda {
    pub fn new(value: Rational) -> Result<Self> {
        if value <= Rational::zero() || value >= Rational::one() {
            return Err(Error::Parse(format!(
                "lambda must lie strictly between 0 and 1, got {}",
                format_rational(&value)
            )));
        }
        Ok(Lambda(value))
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        Self::new(ratio(p, q))
    }

    pub fn half() -> Self {
        Lambda(ratio(1, 2))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// Mass of a zero digit.
    pub fn zero_mass(&self) -> Rational {
        self.0.clone()
    }

    /// Mass of a one digit.
    pub fn one_mass(&self) -> Rational {
        Rational::one() - &self.0
    }

    pub fn is_half(&self) -> bool {
        self.0 == ratio(1, 2)
    }

    /// `lambda^zeros * (1 - lambda)^ones`.
    pub fn cylinder_mass(&self, zeros: u32, ones: u32) -> Rational {
        num_traits::pow::pow(self.zero_mass(), zeros as usize)
            * num_traits::pow::pow(self.one_mass(), ones as usize)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lambda({self})")
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lambda::new(parse_rational(s)?)
    }
}

/// Caches `lambda^z (1-lambda)^o` for repeated mass evaluation.
pub(crate) struct MassTable {
    zero_pows: Vec<Rational>,
    one_pows: Vec<Rational>,
}

impl MassTable {
    pub(crate) fn new(lambda: &Lambda) -> Self {
        MassTable {
            zero_pows: vec![Rational::one()],
            one_pows: vec![Rational::one()],
        }
        .with_base(lambda)
    }

    fn with_base(mut self, lambda: &Lambda) -> Self {
        self.zero_pows.push(lambda.zero_mass());
        self.one_pows.push(lambda.one_mass());
        self
    }

    fn grow(pows: &mut Vec<Rational>, k: usize) {
        while pows.len() <= k {
            let next = &pows[pows.len() - 1] * &pows[1];
            pows.push(next);
        }
    }

    pub(crate) fn mass(&mut self, zeros: u32, ones: u32) -> Rational {
        Self::grow(&mut self.zero_pows, zeros as usize);
        Self::grow(&mut self.one_pows, ones as usize);
        &self.zero_pows[zeros as usize] * &self.one_pows[ones as usize]
    }
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = rs.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl Serialize for Lambda {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Lambda {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&ratio(-3, 6)), "-1/2");
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("1/0").unwrap_err().is_parse());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn lambda_bounds() {
        assert!(Lambda::from_ratio(0, 1).is_err());
        assert!(Lambda::from_ratio(1, 1).is_err());
        assert!(Lambda::from_ratio(3, 2).is_err());
        let l: Lambda = "4/6".parse().unwrap();
        assert_eq!(l.to_string(), "2/3");
        assert_eq!(l.cylinder_mass(1, 1), ratio(2, 9));
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_exponent(&ratio(3, 8)), Some(3));
        assert_eq!(dyadic_exponent(&int(1)), Some(0));
        assert_eq!(dyadic_exponent(&ratio(1, 3)), None);
    }

    #[test]
    fn mass_table_matches_direct_powers() {
        let l = Lambda::from_ratio(2, 3).unwrap();
        let mut t = MassTable::new(&l);
        for z in 0..6 {
            for o in 0..6 {
                assert_eq!(t.mass(z, o), l.cylinder_mass(z, o));
            }
        }
    }
}
