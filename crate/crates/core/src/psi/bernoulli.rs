//! Bernoulli observations: sums over the number of successes `u_n = k`.
//!
//! For a discrete prior,
//!
//! ```text
//! ψ(n) = Σ_k C(n,k)² θ0^k (1−θ0)^(n−k) θ1^k (1−θ1)^(n−k) π(θ0) / P(u_n = k).
//! ```
//!
//! The exact route scales every probability to integers over a common
//! denominator `L` (so `θ_j = P_j/L`, `1 − θ_j = R_j/L`), which cancels from
//! the posterior. Each term becomes `N_k / M_k` with
//!
//! ```text
//! N_k = C(n,k) a_0 (T_1 P_0)^k (U_1 R_0)^(n−k),   M_k = Σ_j a_j P_j^k R_j^(n−k),
//! ```
//!
//! where `a_j` are the prior weights over their common denominator and
//! `θ1 = T_1/L`. The fractions are summed by binary splitting without gcds and
//! the result divided by `L^n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{Method, PsiSequence};
use crate::error::{domain, Error, Result};
use crate::exact::{self, sum_fractions, Frac, Rational, Value};
use crate::families::FamilySpec;
use crate::logspace::{ln_binomial, ln_gamma, log_sum_exp, xlny};
use crate::priors::DiscretePrior;
use crate::specialfn::{legendre_ratios, s_n};

/// Largest `n` the brute-force oracle will enumerate (`2^n` sequences).
pub const BRUTE_FORCE_CAP: u32 = 14;

fn check_unit_closed(theta: &Value, name: &str) -> Result<()> {
    let t = theta.to_f64();
    let ok = match theta {
        Value::Exact(r) => !r.is_negative() && *r <= Rational::one(),
        Value::Float(_) => (0.0..=1.0).contains(&t),
    };
    if !ok {
        return Err(domain(format!("{name} = {theta} outside [0, 1]")));
    }
    Ok(())
}

/// `ψ(1..=horizon)` for a discrete prior; exact when `exact` is set.
pub fn psi_bernoulli_finite(
    prior: &DiscretePrior,
    theta0: &Value,
    theta1: &Value,
    horizon: u64,
    exact: bool,
) -> Result<PsiSequence> {
    prior.validate_for(&FamilySpec::Bernoulli)?;
    let i0 = prior.index_of(theta0).ok_or_else(|| Error::NotAnAtom(theta0.to_string()))?;
    check_unit_closed(theta1, "theta1")?;
    if exact {
        let thetas = prior
            .exact_thetas()
            .ok_or_else(|| Error::Unsupported("exact mode needs rational atoms".into()))?;
        let t1 = theta1
            .as_exact()
            .ok_or_else(|| Error::Unsupported("exact mode needs a rational theta1".into()))?;
        let weights: Vec<Rational> = prior.atoms().iter().map(|a| a.weight.clone()).collect();
        let values = finite_exact(&thetas, &weights, i0, t1, horizon);
        return Ok(PsiSequence::from_exact(1, Method::ExactRational, values));
    }
    let thetas: Vec<f64> = prior.atoms().iter().map(|a| a.theta.to_f64()).collect();
    let ln_w: Vec<f64> = prior.atoms().iter().map(|a| exact::ln(&a.weight)).collect();
    let t1 = theta1.to_f64();
    let ln_psi = (1..=horizon)
        .into_par_iter()
        .map(|n| finite_float_one(&thetas, &ln_w, i0, t1, n))
        .collect();
    Ok(PsiSequence::from_ln(1, Method::LogSpaceSum, ln_psi))
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("nonnegative")
}

fn powers(base: &BigUint, max: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigUint::one());
    for k in 0..max {
        let next = &out[k] * base;
        out.push(next);
    }
    out
}

fn finite_exact(thetas: &[Rational], weights: &[Rational], i0: usize, theta1: &Rational, horizon: u64) -> Vec<Rational> {
    let l = thetas.iter().chain(std::iter::once(theta1)).fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scale = |t: &Rational| to_biguint(&(t * Rational::from_integer(l.clone())).to_integer());
    let lu = to_biguint(&l);
    let p: Vec<BigUint> = thetas.iter().map(scale).collect();
    let r: Vec<BigUint> = p.iter().map(|pj| &lu - pj).collect();
    let t1 = scale(theta1);
    let u1 = &lu - &t1;
    let wden = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let a: Vec<BigUint> = weights
        .iter()
        .map(|w| to_biguint(&(w * Rational::from_integer(wden.clone())).to_integer()))
        .collect();

    let max = horizon as usize;
    let pow_p: Vec<Vec<BigUint>> = p.iter().map(|b| powers(b, max)).collect();
    let pow_r: Vec<Vec<BigUint>> = r.iter().map(|b| powers(b, max)).collect();
    let pow_x = powers(&(&t1 * &p[i0]), max);
    let pow_y = powers(&(&u1 * &r[i0]), max);
    let pow_l = powers(&lu, max);

    (1..=horizon)
        .into_par_iter()
        .map(|n| {
            let n = n as usize;
            let row = exact::binomial_row(n as u64);
            let terms: Vec<Frac> = (0..=n)
                .filter(|&k| !pow_x[k].is_zero() && !pow_y[n - k].is_zero())
                .map(|k| {
                    let num = &row[k] * &a[i0] * &pow_x[k] * &pow_y[n - k];
                    let den = (0..a.len()).fold(BigUint::zero(), |acc, j| acc + &a[j] * &pow_p[j][k] * &pow_r[j][n - k]);
                    Frac::new(num, den)
                })
                .collect();
            let s = sum_fractions(terms);
            Rational::new_raw(BigInt::from(s.num), BigInt::from(s.den * &pow_l[n]))
        })
        .collect()
}

fn finite_float_one(thetas: &[f64], ln_w: &[f64], i0: usize, t1: f64, n: u64) -> f64 {
    let nf = n as f64;
    let t0 = thetas[i0];
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut mix = vec![0.0; thetas.len()];
    for k in 0..=n {
        let kf = k as f64;
        let top = ln_binomial(n, k) + ln_w[i0] + xlny(kf, t0) + xlny(kf, t1) + xlny(nf - kf, 1.0 - t0) + xlny(nf - kf, 1.0 - t1);
        if top == f64::NEG_INFINITY {
            continue;
        }
        for (j, &t) in thetas.iter().enumerate() {
            mix[j] = ln_w[j] + xlny(kf, t) + xlny(nf - kf, 1.0 - t);
        }
        terms.push(top - log_sum_exp(&mix));
    }
    log_sum_exp(&terms)
}

/// Enumerate all `2^n` raw sequences: `Σ_s P_θ1(s) q_n^θ0(s)`. Exact.
pub fn psi_bruteforce(prior: &DiscretePrior, theta0: &Value, theta1: &Value, n: u32) -> Result<Rational> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::EnumerationCap { n, cap: BRUTE_FORCE_CAP });
    }
    prior.validate_for(&FamilySpec::Bernoulli)?;
    let i0 = prior.index_of(theta0).ok_or_else(|| Error::NotAnAtom(theta0.to_string()))?;
    check_unit_closed(theta1, "theta1")?;
    let thetas = prior
        .exact_thetas()
        .ok_or_else(|| Error::Unsupported("brute force needs rational atoms".into()))?;
    let t1 = theta1
        .as_exact()
        .ok_or_else(|| Error::Unsupported("brute force needs a rational theta1".into()))?
        .clone();
    let weights: Vec<Rational> = prior.atoms().iter().map(|a| a.weight.clone()).collect();

    // Depth-first over sequences, carrying π_j·P_θj(prefix) and P_θ1(prefix).
    fn walk(depth: u32, joint: &[Rational], p1: &Rational, thetas: &[Rational], t1: &Rational, i0: usize, acc: &mut Rational) {
        if depth == 0 {
            let total: Rational = joint.iter().sum();
            if !total.is_zero() && !p1.is_zero() {
                *acc += p1 * &joint[i0] / total;
            }
            return;
        }
        for x in [0u8, 1] {
            let step = |t: &Rational| crate::families::bernoulli_pmf_exact(t, x);
            let next: Vec<Rational> = joint.iter().zip(thetas).map(|(j, t)| j * step(t)).collect();
            let p1_next = p1 * step(t1);
            if p1_next.is_zero() {
                continue;
            }
            walk(depth - 1, &next, &p1_next, thetas, t1, i0, acc);
        }
    }

    let mut acc = Rational::zero();
    walk(n, &weights, &Rational::one(), &thetas, &t1, i0, &mut acc);
    Ok(acc)
}

fn check_open_unit(theta: &Value, name: &str) -> Result<()> {
    let f = FamilySpec::Bernoulli;
    match theta {
        Value::Exact(r) => f.check_theta_exact(r),
        Value::Float(t) => f.check_theta(*t),
    }
    .map_err(|e| domain(format!("{name}: {e}")))
}

/// Uniform prior on `(0, 1)`: `ψ_{θ0,θ1}(n) = S_n(θ0θ1, (1−θ0)(1−θ1))`.
pub fn psi_bernoulli_uniform(theta0: &Value, theta1: &Value, horizon: u64, exact: bool) -> Result<PsiSequence> {
    check_open_unit(theta0, "theta0")?;
    check_open_unit(theta1, "theta1")?;
    if let (true, Value::Exact(t0), Value::Exact(t1)) = (exact, theta0, theta1) {
        let one = Rational::one();
        let y = t0 * t1;
        let z = (&one - t0) * (&one - t1);
        let values = s_sequence_exact(&y, &z, horizon);
        return Ok(PsiSequence::from_exact(1, Method::ExactRational, values));
    }
    let (t0, t1) = (theta0.to_f64(), theta1.to_f64());
    let y = t0 * t1;
    let z = (1.0 - t0) * (1.0 - t1);
    let ln_s = s_n(y, z, horizon + 1)?;
    let mut seq = PsiSequence::from_ln(1, Method::UniformPriorLegendre, ln_s[1..=horizon as usize].to_vec());
    let (steps, curvature) = uniform_steps_and_curvature(y, z, horizon)?;
    seq.ln_steps = Some(steps);
    seq.ln_curvature = Some(curvature);
    Ok(seq)
}

/// Cancellation-free `ln S_{n+1}/S_n` (n = 1..horizon−1) and
/// `ln S_{n−1}S_{n+1}/S_n²` (n = 2..horizon−1).
fn uniform_steps_and_curvature(y: f64, z: f64, horizon: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = horizon as usize;
    let mut steps = Vec::with_capacity(h);
    let mut curvature = Vec::with_capacity(h);
    if y == z {
        for n in 1..h {
            let nf = n as f64;
            steps.push(y.ln() + ((nf + 2.0) / (nf + 1.0)).ln() + (2.0 * (2.0 * nf + 1.0) / (nf + 1.0)).ln());
        }
        for n in 2..h {
            let nf = n as f64;
            // ln(n(n+2)/(n+1)²) + ln R_n(∞)
            let r_inf = nf * (2.0 * nf + 1.0) / ((nf + 1.0) * (2.0 * nf - 1.0));
            curvature.push((-1.0 / ((nf + 1.0) * (nf + 1.0))).ln_1p() + r_inf.ln());
        }
        return Ok((steps, curvature));
    }
    let d = (y - z).abs();
    let x = ((y + z) / d).max(1.0);
    let r = legendre_ratios(x, horizon + 1)?;
    for n in 1..h {
        let nf = n as f64;
        steps.push(d.ln() + (1.0 / (nf + 1.0)).ln_1p() + r[n + 1].ln());
    }
    for n in 2..h {
        let nf = n as f64;
        curvature.push((-1.0 / ((nf + 1.0) * (nf + 1.0))).ln_1p() + (r[n + 1] / r[n]).ln());
    }
    Ok((steps, curvature))
}

/// Exact `S_n(y, z)` for `n = 1..=horizon`, over the common denominator of `y, z`.
fn s_sequence_exact(y: &Rational, z: &Rational, horizon: u64) -> Vec<Rational> {
    let d = y.denom().lcm(z.denom());
    let dr = Rational::from_integer(d.clone());
    let yi = to_biguint(&(y * &dr).to_integer());
    let zi = to_biguint(&(z * &dr).to_integer());
    let max = horizon as usize;
    let py = powers(&yi, max);
    let pz = powers(&zi, max);
    let pd = powers(&to_biguint(&d), max);
    (1..=horizon)
        .into_par_iter()
        .map(|n| {
            let n = n as usize;
            let row = exact::binomial_row(n as u64);
            let sum = (0..=n).fold(BigUint::zero(), |acc, k| acc + &row[k] * &row[k] * &py[k] * &pz[n - k]);
            Rational::new_raw(BigInt::from(sum * BigUint::from(n + 1)), BigInt::from(pd[n].clone()))
        })
        .collect()
}

fn rising(x: u64, m: u64) -> BigUint {
    (0..m).fold(BigUint::one(), |acc, i| acc * BigUint::from(x + i))
}

/// Beta(a, b) prior. Exact for integer `a, b` and rational `θ0, θ1`.
pub fn psi_bernoulli_beta(a: f64, b: f64, theta0: &Value, theta1: &Value, horizon: u64, exact: bool) -> Result<PsiSequence> {
    check_open_unit(theta0, "theta0")?;
    check_open_unit(theta1, "theta1")?;
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("beta prior needs a, b > 0, got ({a}, {b})")));
    }
    let prior = crate::priors::NamedPrior::Beta { a, b };
    let small = |x: f64| (x.fract() == 0.0 && x >= 1.0 && x <= 1e6).then(|| x.to_u64().unwrap());
    if let (true, Some(ai), Some(bi), Value::Exact(t0), Value::Exact(t1)) = (exact, small(a), small(b), theta0, theta1) {
        let pi0 = prior.density_exact(t0).expect("integer beta density is rational");
        let one = Rational::one();
        let y = t0 * t1;
        let z = (&one - t0) * (&one - t1);
        let values = (1..=horizon)
            .into_par_iter()
            .map(|n| {
                let row = exact::binomial_row(n);
                let top = Rational::from_integer(BigInt::from(rising(ai + bi, n)));
                let mut total = Rational::zero();
                for k in 0..=n {
                    let bottom = BigInt::from(rising(ai, k) * rising(bi, n - k));
                    let term = Rational::from_integer(BigInt::from(row[k as usize].clone()))
                        * num_traits::pow(y.clone(), k as usize)
                        * num_traits::pow(z.clone(), (n - k) as usize)
                        / Rational::from_integer(bottom);
                    total += term;
                }
                total * &top * &pi0
            })
            .collect();
        return Ok(PsiSequence::from_exact(1, Method::ExactRational, values));
    }
    let (t0, t1) = (theta0.to_f64(), theta1.to_f64());
    let ln_pi0 = prior.ln_density(t0);
    let ln_rising = |x: f64, m: u64| ln_gamma(x + m as f64) - ln_gamma(x);
    let ln_psi = (1..=horizon)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let terms: Vec<f64> = (0..=n)
                .map(|k| {
                    let kf = k as f64;
                    ln_binomial(n, k) + kf * (t0 * t1).ln() + (nf - kf) * ((1.0 - t0) * (1.0 - t1)).ln()
                        - ln_rising(a, k)
                        - ln_rising(b, n - k)
                })
                .collect();
            ln_pi0 + ln_rising(a + b, n) + log_sum_exp(&terms)
        })
        .collect();
    Ok(PsiSequence::from_ln(1, Method::LogSpaceSum, ln_psi))
}
