//! Hirzebruch-Jung continued fractions `[e_1, ..., e_r] = e_1 - 1/(e_2 - 1/(... - 1/e_r))`.
//!
//! Everything is exact: values are computed with back-to-front numerator and
//! denominator recursion over [`BigInt`], never through floating point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ExactRational, SingularityLabel};

/// A nonempty sequence of positive integers read as a HJ continued fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct HJChain(Vec<u64>);

impl HJChain {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidChain("chain must be nonempty".into()));
        }
        if let Some(pos) = entries.iter().position(|&e| e == 0) {
            return Err(Error::InvalidChain(format!("entry {} is 0, entries must be >= 1", pos + 1)));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    /// All entries at least 2, the shape of minimal resolutions and their duals.
    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|&e| e >= 2)
    }

    fn require_reduced(&self, what: &str) -> Result<()> {
        if self.is_reduced() {
            Ok(())
        } else {
            Err(Error::InvalidChain(format!("{what} needs every entry >= 2, got {self}")))
        }
    }
}

impl TryFrom<Vec<u64>> for HJChain {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        HJChain::new(v)
    }
}

impl From<HJChain> for Vec<u64> {
    fn from(c: HJChain) -> Self {
        c.0
    }
}

impl fmt::Display for HJChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Parses comma-separated entries, optionally wrapped in brackets: `2,1,2` or `[2,1,2]`.
impl FromStr for HJChain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HJChain::new(parse_entries(s)?)
    }
}

pub(crate) fn parse_entries(s: &str) -> Result<Vec<u64>> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    if body.trim().is_empty() {
        return Err(Error::Parse("empty chain".into()));
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad chain entry {:?} in {s:?}", t.trim())))
        })
        .collect()
}

/// Value of an admissible chain, or `None` when some proper tail is not
/// strictly positive or the full value is negative.
pub fn eval_chain(chain: &HJChain) -> Option<ExactRational> {
    eval_entries(chain.entries())
}

pub(crate) fn eval_entries(entries: &[u64]) -> Option<ExactRational> {
    let (last, rest) = entries.split_last()?;
    // tail value num/den, den > 0 throughout
    let mut num = BigInt::from(*last);
    let mut den = BigInt::one();
    for &e in rest.iter().rev() {
        if !num.is_positive() {
            return None;
        }
        let next = BigInt::from(e) * &num - &den;
        den = std::mem::replace(&mut num, next);
    }
    if num.is_negative() {
        return None;
    }
    // continuants of consecutive tails are coprime, but normalize anyway
    ExactRational::new(num, den).ok()
}

/// Numerator continuant `K(e_1, ..., e_r)` with `K() = 1`.
pub(crate) fn continuant(entries: &[u64]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for &e in entries {
        let next = BigInt::from(e) * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The unique chain with entries >= 2 evaluating to `value`.
pub fn expand_rational(value: &ExactRational) -> Result<HJChain> {
    if !value.exceeds_one() {
        return Err(Error::InvalidRational(format!("{value} is not greater than 1")));
    }
    let mut num = value.numer().clone();
    let mut den = value.denom().clone();
    let mut out = Vec::new();
    while !den.is_zero() {
        let e = num.div_ceil(&den);
        let rem = &e * &den - &num;
        out.push(
            e.to_u64()
                .ok_or_else(|| Error::OutOfRange(format!("entry {e} does not fit in 64 bits")))?,
        );
        num = std::mem::replace(&mut den, rem);
    }
    HJChain::new(out)
}

/// The chain of m/(m-q) when `chain` evaluates to m/q, by the dot-diagram rewrite.
///
/// Write the chain as `2^{a_1}, b_1, 2^{a_2}, ..., b_{c-1}, 2^{a_c}` with every
/// `b_i >= 3`; the dual is `a_1+2, 2^{b_1-3}, a_2+3, ..., 2^{b_{c-1}-3}, a_c+2`.
pub fn dual_chain(chain: &HJChain) -> Result<HJChain> {
    chain.require_reduced("dual_chain")?;
    let mut runs = vec![0u64];
    let mut bigs = Vec::new();
    for &e in chain.entries() {
        if e == 2 {
            *runs.last_mut().expect("nonempty") += 1;
        } else {
            bigs.push(e);
            runs.push(0);
        }
    }
    if bigs.is_empty() {
        // [2,...,2] of length a is (a+1)/a, whose dual is (a+1)/1
        return HJChain::new(vec![runs[0] + 1]);
    }
    let c = runs.len();
    let mut out = Vec::with_capacity(chain.len() + 2);
    for (i, &a) in runs.iter().enumerate() {
        let end = i == 0 || i == c - 1;
        out.push(a + if end { 2 } else { 3 });
        if let Some(&b) = bigs.get(i) {
            out.extend(std::iter::repeat(2).take((b - 3) as usize));
        }
    }
    HJChain::new(out)
}

/// True iff the chain is admissible and evaluates to exactly zero.
pub fn is_zero_chain(chain: &HJChain) -> bool {
    is_zero_entries(chain.entries())
}

pub(crate) fn is_zero_entries(entries: &[u64]) -> bool {
    eval_entries(entries).is_some_and(|v| v.is_zero())
}

/// `[e_1, ..., e_r] -> [2, e_1, ..., e_r + 1]`
pub fn l_operation(chain: &HJChain) -> HJChain {
    let mut v = Vec::with_capacity(chain.len() + 1);
    v.push(2);
    v.extend_from_slice(chain.entries());
    *v.last_mut().expect("nonempty") += 1;
    HJChain(v)
}

/// `[e_1, ..., e_r] -> [e_1 + 1, ..., e_r, 2]`
pub fn r_operation(chain: &HJChain) -> HJChain {
    let mut v = chain.entries().to_vec();
    v[0] += 1;
    v.push(2);
    HJChain(v)
}

/// `[k_1, ..., k_s] -> [2, k_1, ..., k_s + 1]` on dual W-chains.
pub fn r_dual_operation(chain: &HJChain) -> HJChain {
    l_operation(chain)
}

/// `[k_1, ..., k_s] -> [k_1 + 1, ..., k_s, 2]` on dual W-chains.
pub fn l_dual_operation(chain: &HJChain) -> HJChain {
    r_operation(chain)
}

/// Parameters of a Wahl singularity 1/n^2(1, na-1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WahlParameters {
    #[serde(serialize_with = "crate::rational::bigint_as_string")]
    pub n: BigInt,
    #[serde(serialize_with = "crate::rational::bigint_as_string")]
    pub a: BigInt,
}

/// Recognizes W-chains by undoing L/R operations down to `[4]`.
///
/// L outputs start with 2 and end with an entry >= 3; R outputs do the
/// reverse, so at most one inverse applies at each step.
pub fn recognize_w_chain(chain: &HJChain) -> Option<WahlParameters> {
    if !chain.is_reduced() {
        return None;
    }
    let mut v = chain.entries().to_vec();
    loop {
        if v.as_slice() == [4] {
            break;
        }
        if v.len() < 2 {
            return None;
        }
        let first = v[0];
        let last = *v.last().expect("nonempty");
        match (first == 2, last == 2) {
            (true, false) => {
                v.remove(0);
                *v.last_mut().expect("nonempty") -= 1;
            }
            (false, true) => {
                v.pop();
                v[0] -= 1;
            }
            _ => return None,
        }
        if v.iter().any(|&e| e < 2) {
            return None;
        }
    }
    // (n, a) from the value n^2/(na-1) of the original chain
    let value = eval_chain(chain)?;
    let n = value.numer().sqrt();
    if &(&n * &n) != value.numer() {
        return None;
    }
    let (a, r) = (value.denom() + BigInt::one()).div_rem(&n);
    if !r.is_zero() || !a.is_positive() || a >= n || !n.gcd(&a).is_one() {
        return None;
    }
    Some(WahlParameters { n, a })
}

/// The label 1/m(1,q) whose dual chain m/(m-q) is `dual`.
pub fn singularity_from_dual(dual: &HJChain) -> Result<SingularityLabel> {
    dual.require_reduced("singularity_from_dual")?;
    let value = eval_chain(dual)
        .ok_or_else(|| Error::InvalidChain(format!("{dual} is not admissible")))?;
    let m = value.numer().clone();
    let q = &m - value.denom();
    SingularityLabel::new(m, q)
}
