//! Legendre polynomials outside `[-1, 1]`, carried as consecutive ratios.
//!
//! For `x ≥ 1` every `P_n(x)` is positive and the three-term recurrence
//! `(n+1)P_{n+1} = (2n+1)x P_n − n P_{n−1}` becomes
//!
//! ```text
//! r_{n+1} = ((2n+1)x − n / r_n) / (n+1),   r_n = P_n / P_{n−1},  r_1 = x.
//! ```
//!
//! No term cancels catastrophically (`(2n+1)x − n/r_n ≥ n+1`), and the Turán
//! ratio `R_n = P_{n−1}P_{n+1}/P_n²` is simply `r_{n+1}/r_n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exact::{self, Rational};
use crate::logspace::ln_binomial;

/// `P_n(x)` as sign and log-magnitude, with the last ratio `P_n/P_{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LegendreEval {
    pub n: u64,
    pub x: f64,
    pub ln_abs: f64,
    pub sign: f64,
    /// `P_n(x)/P_{n−1}(x)`; `None` for `n = 0`.
    pub ratio: Option<f64>,
}

impl LegendreEval {
    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }
}

fn check_outside(x: f64) -> Result<()> {
    if !(x.abs() >= 1.0) {
        return Err(domain(format!("legendre evaluation supported for |x| >= 1, got x = {x}")));
    }
    Ok(())
}

/// Ratios `r_n = P_n(x)/P_{n−1}(x)` for `n = 1..=max_n`, at `x ≥ 1`.
/// Entry 0 is a placeholder `1.0`.
pub fn legendre_ratios(x: f64, max_n: u64) -> Result<Vec<f64>> {
    if !(x >= 1.0) {
        return Err(domain(format!("ratio recurrence needs x >= 1, got x = {x}")));
    }
    let mut r = Vec::with_capacity(max_n as usize + 1);
    r.push(1.0);
    if max_n == 0 {
        return Ok(r);
    }
    r.push(x);
    for n in 1..max_n {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * x - nf / r[n as usize]) / (nf + 1.0);
        r.push(next);
    }
    Ok(r)
}

/// `P_n(x)` for `|x| ≥ 1`; negative arguments use `P_n(−x) = (−1)^n P_n(x)`.
pub fn legendre_p(n: u64, x: f64) -> Result<LegendreEval> {
    check_outside(x)?;
    let r = legendre_ratios(x.abs(), n)?;
    let ln_abs = r[1..].iter().map(|v| v.ln()).sum();
    let odd = n % 2 == 1;
    let sign = if x < 0.0 && odd { -1.0 } else { 1.0 };
    let ratio = (n > 0).then(|| if x < 0.0 { -r[n as usize] } else { r[n as usize] });
    Ok(LegendreEval { n, x, ln_abs, sign, ratio })
}

/// Plain recurrence on `[-1, 1]`, where values stay bounded by 1.
pub fn legendre_p_inside(n: u64, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(domain(format!("inside evaluation needs |x| <= 1, got x = {x}")));
    }
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return Ok(1.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Leading coefficient `b_n = C(2n, n)/2^n` of `P_n`.
pub fn legendre_leading_coefficient(n: u64) -> Rational {
    Rational::new(exact::binomial(2 * n, n).into(), BigInt::one() << n)
}

/// `a_n = (n+1)²/(n(n+2))`, the upper bound on `R_n` for `|x| > 1`.
pub fn turan_bound(n: u64) -> Rational {
    let n = BigInt::from(n);
    Rational::new((&n + 1u32) * (&n + 1u32), &n * (&n + 2u32))
}

/// `R_n(∞) = n(2n+1)/((n+1)(2n−1))`, from the leading coefficients.
pub fn turan_limit(n: u64) -> Rational {
    let n = BigInt::from(n);
    Rational::new(&n * (2u32 * &n + 1u32), (&n + 1u32) * (2u32 * &n - 1u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuranRatio {
    pub n: u64,
    pub x: f64,
    /// `P_{n−1}(x)P_{n+1}(x)/P_n(x)²`
    pub ratio: f64,
    pub bound: Rational,
    pub limit: Rational,
}

/// Turán ratio `R_n(x)` for `n ≥ 1`, `|x| > 1`.
pub fn turan_ratio(n: u64, x: f64) -> Result<TuranRatio> {
    if n == 0 {
        return Err(domain("turan ratio needs n >= 1"));
    }
    if !(x.abs() > 1.0) {
        return Err(domain(format!("turan ratio supported for |x| > 1, got x = {x}")));
    }
    let r = legendre_ratios(x.abs(), n + 1)?;
    Ok(TuranRatio {
        n,
        x,
        ratio: r[n as usize + 1] / r[n as usize],
        bound: turan_bound(n),
        limit: turan_limit(n),
    })
}

/// `ln S_n(y, z)` for `n = 0..=max_n`, where `S_n(y, z) = (n+1) Σ_k C(n,k)² y^k z^(n−k)`.
///
/// Uses `S_n = |y−z|^n (n+1) P_n((y+z)/|y−z|)` off the diagonal and
/// `S_n(y, y) = y^n (n+1) C(2n, n)` on it.
pub fn s_n(y: f64, z: f64, max_n: u64) -> Result<Vec<f64>> {
    if !(y >= 0.0 && z >= 0.0) || (y == 0.0 && z == 0.0) {
        return Err(domain(format!("S_n needs y, z >= 0 not both zero, got ({y}, {z})")));
    }
    let mut out = Vec::with_capacity(max_n as usize + 1);
    if y == z {
        for n in 0..=max_n {
            out.push(n as f64 * y.ln() + (n as f64 + 1.0).ln() + ln_binomial(2 * n, n));
        }
        return Ok(out);
    }
    let d = (y - z).abs();
    let x = ((y + z) / d).max(1.0);
    let r = legendre_ratios(x, max_n)?;
    let mut ln_p = 0.0;
    for n in 0..=max_n {
        if n > 0 {
            ln_p += r[n as usize].ln();
        }
        out.push(n as f64 * d.ln() + (n as f64 + 1.0).ln() + ln_p);
    }
    Ok(out)
}

/// Exact `S_n(y, z)` for rational arguments.
pub fn s_n_exact(y: &Rational, z: &Rational, n: u64) -> Rational {
    let row = exact::binomial_row(n);
    let mut total = Rational::zero();
    let mut y_pow = Rational::one();
    let z_pows: Vec<Rational> = std::iter::successors(Some(Rational::one()), |p| Some(p * z)).take(n as usize + 1).collect();
    for (k, c) in row.iter().enumerate() {
        let c = BigInt::from(c * c);
        total += Rational::from_integer(c) * &y_pow * &z_pows[n as usize - k];
        y_pow *= y;
    }
    total * Rational::from_integer((n + 1).into())
}
