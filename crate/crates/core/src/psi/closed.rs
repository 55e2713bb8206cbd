//! Closed forms for the Normal–Normal and Exponential–Exponential pairs.
//!
//! Both reduce the off-diagonal case to the diagonal one at the midpoint
//! `θ = (θ0+θ1)/2`, times `π(θ0)/π(θ)` and the geometric factor `w^n`. Steps
//! and curvatures of `ln ψ` are produced from formulas that never subtract
//! nearly equal logarithms, so sign decisions stay reliable at large `n`.

use std::f64::consts::PI;

use super::{Method, PsiSequence};
use crate::error::{domain, Result};
use crate::logspace::ln_factorial;
use crate::quadrature::{integrate, Domain, QuadOptions, QuadResult};
use crate::specialfn::{bessel_k_half, q_n_of_rho};

/// Normal(θ, σ²) observations, standard normal prior.
pub fn psi_normal(theta0: f64, theta1: f64, sigma: f64, horizon: u64) -> Result<PsiSequence> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain(format!("sigma must be > 0, got {sigma}")));
    }
    if !(theta0.is_finite() && theta1.is_finite()) {
        return Err(domain("normal means must be finite"));
    }
    let s = sigma * sigma;
    let theta = 0.5 * (theta0 + theta1);
    let ln_w = -(theta0 - theta1).powi(2) / (4.0 * s);
    let shift = 0.5 * (theta * theta - theta0 * theta0);
    let ln_psi = (1..=horizon)
        .map(|n| {
            let nf = n as f64;
            (nf + s).ln() - sigma.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * (2.0 * nf + s).ln()
                - theta * theta * s / (4.0 * nf + 2.0 * s)
                + shift
                + nf * ln_w
        })
        .collect();
    let h = horizon as usize;
    let steps = (1..h)
        .map(|n| {
            let nf = n as f64;
            (1.0 / (nf + s)).ln_1p() - 0.5 * (2.0 / (2.0 * nf + s)).ln_1p()
                + 4.0 * theta * theta * s / ((4.0 * nf + 2.0 * s) * (4.0 * nf + 4.0 + 2.0 * s))
                + ln_w
        })
        .collect();
    let curvature = (2..h)
        .map(|n| {
            let nf = n as f64;
            let (a, b) = (2.0 * s, 4.0);
            let prod = (a + b * (nf - 1.0)) * (a + b * nf) * (a + b * (nf + 1.0));
            (-1.0 / ((nf + s) * (nf + s))).ln_1p() - 0.5 * (-4.0 / ((2.0 * nf + s) * (2.0 * nf + s))).ln_1p()
                - theta * theta * s * 2.0 * b * b / prod
        })
        .collect();
    let mut seq = PsiSequence::from_ln(1, Method::ClosedFormNormal, ln_psi);
    seq.ln_steps = Some(steps);
    seq.ln_curvature = Some(curvature);
    Ok(seq)
}

/// Exponential(θ) observations, Exp(λ) prior.
///
/// Rescaling `θ → λθ` maps the Exp(λ) prior to Exp(1), so
/// `ψ_λ(θ0, θ1)(n) = λ ψ_1(λθ0, λθ1)(n)`.
pub fn psi_exponential(theta0: f64, theta1: f64, lambda: f64, horizon: u64) -> Result<PsiSequence> {
    if !(theta0 > 0.0 && theta1 > 0.0) {
        return Err(domain(format!("exponential rates must be > 0, got ({theta0}, {theta1})")));
    }
    if !(lambda > 0.0) {
        return Err(domain(format!("exponential prior needs lambda > 0, got {lambda}")));
    }
    let (t0, t1) = (lambda * theta0, lambda * theta1);
    let theta = 0.5 * (t0 + t1);
    let delta = (t0 - t1) / (t0 + t1);
    let ln_w = (-delta * delta).ln_1p();
    let bessel = bessel_k_half(theta, horizon as usize + 1)?;
    let (k, rho) = (&bessel.ln_k, &bessel.rho);
    let ln_psi = (1..=horizon)
        .map(|n| {
            let nf = n as f64;
            let i = n as usize;
            let diag = (nf - 0.5) * theta.ln() - (nf + 0.5) * 2f64.ln() - ln_factorial(n) - 0.5 * PI.ln()
                + k[i]
                + (nf + theta + theta * rho[i]).ln();
            lambda.ln() + diag + (theta - t0) + nf * ln_w
        })
        .collect();
    let h = horizon as usize;
    let steps = (1..h)
        .map(|n| {
            let nf = n as f64;
            theta.ln() - 2f64.ln() - (nf + 1.0).ln() - rho[n + 1].ln()
                + ((nf + 1.0 + theta + theta * rho[n + 1]) / (nf + theta + theta * rho[n])).ln()
                + ln_w
        })
        .collect();
    let curvature = (2..h)
        .map(|n| q_n_of_rho(n as u64, theta, rho[n]).map(f64::ln))
        .collect::<Result<Vec<_>>>()?;
    let mut seq = PsiSequence::from_ln(1, Method::ClosedFormExpBessel, ln_psi);
    seq.ln_steps = Some(steps);
    seq.ln_curvature = Some(curvature);
    Ok(seq)
}

fn tight() -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_evals: 400_000 }
}

/// Diagonal `ψ_{θ,θ}(n)` for the Exp–Exp pair by direct quadrature of
/// `e^{−θ} θ^{2n} / ((n−1)! n!) ∫ u^{n−1} (u+1)^{n+1} e^{−2θu} du`.
pub fn psi_exponential_integral(theta: f64, n: u64) -> Result<QuadResult> {
    if !(theta > 0.0) || n == 0 {
        return Err(domain(format!("need theta > 0 and n >= 1, got ({theta}, {n})")));
    }
    let nf = n as f64;
    let ln_pre = -theta + 2.0 * nf * theta.ln() - ln_factorial(n - 1) - ln_factorial(n);
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        (ln_pre + (nf - 1.0) * u.ln() + (nf + 1.0) * u.ln_1p() - 2.0 * theta * u).exp()
    };
    integrate(f, Domain::UpperInfinite { a: 0.0, scale: nf / theta }, tight())
}

/// `I_{n,m} = ∫_0^∞ u^n (u+1)^m e^{−2θu} du` by quadrature.
pub fn exp_moment_integral(n: u64, m: u64, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(domain(format!("need theta > 0, got {theta}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let f = |u: f64| {
        if u < 0.0 {
            return 0.0;
        }
        let ln_un = if n == 0 { 0.0 } else { nf * u.ln() };
        (ln_un + mf * u.ln_1p() - 2.0 * theta * u).exp()
    };
    let scale = ((nf + mf) / (2.0 * theta)).max(1.0 / theta);
    Ok(integrate(f, Domain::UpperInfinite { a: 0.0, scale }, tight())?.value)
}
