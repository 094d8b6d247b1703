//! Exact rationals over arbitrary-precision integers and singularity labels.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRational {
    num: BigInt,
    den: BigInt,
}

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::InvalidRational("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self { num: n.into(), den: BigInt::one() }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Strictly greater than one.
    pub fn exceeds_one(&self) -> bool {
        self.num > self.den
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in rational {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ExactRational", 2)?;
        st.serialize_field("num", &self.num.to_string())?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num: BigInt = raw.num.parse().map_err(de::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(de::Error::custom)?;
        ExactRational::new(num, den).map_err(de::Error::custom)
    }
}

pub(crate) fn bigint_as_string<S: Serializer>(v: &BigInt, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&v.to_string())
}

/// The cyclic quotient singularity 1/m(1,q): coprime 0 < q < m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularityLabel {
    m: BigInt,
    q: BigInt,
}

impl SingularityLabel {
    pub fn new(m: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (m, q) = (m.into(), q.into());
        if m < BigInt::from(2) {
            return Err(Error::InvalidLabel(format!("m = {m} must be at least 2")));
        }
        if !(q.is_positive() && q < m) {
            return Err(Error::InvalidLabel(format!("q = {q} must satisfy 0 < q < m = {m}")));
        }
        if !m.gcd(&q).is_one() {
            return Err(Error::InvalidLabel(format!("gcd({m}, {q}) != 1")));
        }
        Ok(Self { m, q })
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// m/q, the value whose expansion is the minimal resolution.
    pub fn resolution_value(&self) -> ExactRational {
        ExactRational { num: self.m.clone(), den: self.q.clone() }
    }

    /// m/(m-q), the value of the dual chain.
    pub fn dual_value(&self) -> ExactRational {
        ExactRational { num: self.m.clone(), den: &self.m - &self.q }
    }
}

impl fmt::Display for SingularityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.m, self.q)
    }
}

impl Serialize for SingularityLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SingularityLabel", 2)?;
        st.serialize_field("m", &self.m.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.end()
    }
}
