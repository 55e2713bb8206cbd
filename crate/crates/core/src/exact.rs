//! Exact rational arithmetic support.
//!
//! Big rationals come from `num-rational`; this module adds what the
//! expected-posterior sums need on top: literal parsing, correctly scaled
//! conversion of huge ratios to `f64`/`ln`, binomial rows, and summation of
//! many fractions by binary splitting without intermediate gcd reductions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parse `"p/q"`, an integer, or a decimal literal (`"0.65"`, `"-1.5e-3"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a rational literal: {text:?}")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// The decimal a human typed for `x`: shortest round-trip representation, read exactly.
pub fn rational_from_f64_decimal(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x}")));
    }
    parse_rational(&format!("{x:e}"))
}

/// Canonical `"p/q"` rendering (always reduced, `q >= 1`).
pub fn format_rational(r: &Rational) -> String {
    let r = r.reduced();
    format!("{}/{}", r.numer(), r.denom())
}

/// `ln |num/den|` for arbitrarily large integers.
pub fn ln_ratio(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mn, sn) = top_bits(num.magnitude());
    let (md, sd) = top_bits(den.magnitude());
    (mn / md).ln() + (sn as i64 - sd as i64) as f64 * std::f64::consts::LN_2
}

/// `x ≈ mantissa · 2^shift` with `mantissa` holding the top 64 bits.
fn top_bits(x: &BigUint) -> (f64, u64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().unwrap() as f64, 0)
    } else {
        let shift = bits - 64;
        ((x >> shift).to_u64().unwrap() as f64, shift)
    }
}

/// `num/den` as a double, correct to a few ulps even for million-bit operands.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    let (mn, sn) = top_bits(num.magnitude());
    let (md, sd) = top_bits(den.magnitude());
    let exp = sn as i64 - sd as i64;
    sign * (mn / md) * 2f64.powi(exp.clamp(-1100, 1100) as i32)
}

pub fn to_f64(r: &Rational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

pub fn ln(r: &Rational) -> f64 {
    ln_ratio(r.numer(), r.denom())
}

/// Row `C(n, 0..=n)` of Pascal's triangle.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// A nonnegative fraction kept unreduced. Cheap to build, exact to compare.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: BigUint,
    pub den: BigUint,
}

impl Frac {
    pub fn new(num: BigUint, den: BigUint) -> Self {
        debug_assert!(!den.is_zero());
        Frac { num, den }
    }

    pub fn zero() -> Self {
        Frac::new(BigUint::zero(), BigUint::one())
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new_raw(BigInt::from(self.num.clone()), BigInt::from(self.den.clone()))
    }

    pub fn cmp_exact(&self, other: &Frac) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// `Σ num_i/den_i` by pairwise binary splitting; no gcd is taken.
pub fn sum_fractions(mut terms: Vec<Frac>) -> Frac {
    if terms.is_empty() {
        return Frac::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => {
                    let num = &a.num * &b.den + &b.num * &a.den;
                    next.push(Frac::new(num, a.den * b.den));
                }
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Exact comparison of rationals that may be stored unreduced with huge parts.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    let lhs = a.numer() * b.denom();
    let rhs = b.numer() * a.denom();
    let flip = (a.denom().is_negative()) != (b.denom().is_negative());
    let ord = lhs.cmp(&rhs);
    if flip {
        ord.reverse()
    } else {
        ord
    }
}

/// gcd-reduce a rational that may have been stored raw.
pub fn reduce(r: &Rational) -> Rational {
    let g = r.numer().gcd(r.denom());
    if g.is_one() {
        r.clone()
    } else {
        Rational::new_raw(r.numer() / &g, r.denom() / &g)
    }
}

/// A real parameter carried either exactly or as a double.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    /// Same number, compared exactly when both sides are exact.
    pub fn same_as(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}", format_rational(r)),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<Value> for String {
    fn from(v: Value) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for Value {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        parse_rational(&s).map(Value::Exact)
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
