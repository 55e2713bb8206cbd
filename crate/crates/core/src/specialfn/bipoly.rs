use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A polynomial in `(m, θ)` with exact integer coefficients.
///
/// Stored sparsely as `(i, j) ↦ c` for the monomial `c·m^i θ^j`; zero
/// coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, m_exp: u32, theta_exp: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((m_exp, theta_exp), c.into());
        p
    }

    pub fn m() -> Self {
        BiPoly::monomial(1, 1, 0)
    }

    pub fn theta() -> Self {
        BiPoly::monomial(1, 0, 1)
    }

    /// Build from `(coefficient, m exponent, θ exponent)` triples.
    pub fn from_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = BiPoly::zero();
        for &(c, i, j) in terms {
            p.add_term((i, j), BigInt::from(c));
        }
        p
    }

    /// A polynomial in θ alone from ascending coefficients.
    pub fn in_theta(coeffs: &[i64]) -> Self {
        let mut p = BiPoly::zero();
        for (j, &c) in coeffs.iter().enumerate() {
            p.add_term((0, j as u32), BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m_exp: u32, theta_exp: u32) -> BigInt {
        self.terms.get(&(m_exp, theta_exp)).cloned().unwrap_or_default()
    }

    pub fn degree_m(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_theta(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Coefficient of `m^i` as ascending θ-coefficients (trailing zeros trimmed).
    pub fn coeff_in_m(&self, i: u32) -> Vec<BigInt> {
        let deg = self.terms.keys().filter(|k| k.0 == i).map(|k| k.1).max();
        match deg {
            None => Vec::new(),
            Some(d) => (0..=d).map(|j| self.coefficient(i, j)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replace `m` and `θ` by polynomials.
    pub fn substitute(&self, m: &BiPoly, theta: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let term = &(&m.pow(i) * &theta.pow(j)) * &BiPoly::constant(c.clone());
            out = &out + &term;
        }
        out
    }

    pub fn eval(&self, m: f64, theta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap_or(f64::NAN) * m.powi(i as i32) * theta.powi(j as i32))
            .sum()
    }
}

/// Evaluate ascending θ-coefficients at a point.
pub(crate) fn eval_theta(coeffs: &[BigInt], theta: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * theta + c.to_f64().unwrap_or(f64::NAN))
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    /// Graded order: higher total degree first, then higher power of `m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (key.0 == 0 && key.1 == 0) {
                parts.push(mag.to_string());
            }
            for (var, e) in [("m", key.0), ("θ", key.1)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", parts.join("·"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((-50i64..50, 0u32..4, 0u32..4), 0..6).prop_map(|t| BiPoly::from_terms(&t))
    }

    proptest! {
        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_poly(), b in arb_poly(), m in -2.0f64..2.0, t in -2.0f64..2.0) {
            let lhs = (&a * &b).eval(m, t);
            let rhs = a.eval(m, t) * b.eval(m, t);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn basics() {
        let p = &(&BiPoly::m() + &BiPoly::theta()).pow(2) - &BiPoly::constant(1);
        assert_eq!(p.to_string(), "m^2 + 2·m·θ + θ^2 - 1");
        assert_eq!(p.coeff_in_m(1), vec![BigInt::zero(), BigInt::from(2)]);
        assert!((&p - &p).is_zero());
        let shifted = p.substitute(&(&BiPoly::m() + &BiPoly::constant(2)), &BiPoly::theta());
        assert_eq!(shifted.coefficient(0, 0), BigInt::from(3));
    }
}
