//! Modified Bessel functions of the second kind at half-integer order,
//! `k_n = K_{n+1/2}(θ)`.
//!
//! `k_{−1} = k_0 = √(π/(2θ)) e^{−θ}` (from `K_{−ν} = K_ν`), and the upward
//! recurrence `k_{n+1} = ((2n+1)/θ) k_n + k_{n−1}` only adds positive terms, so
//! it is stable. We run it on the ratios `ρ_n = k_{n−1}/k_n`:
//!
//! ```text
//! ρ_0 = 1,   ρ_{n+1} = 1 / ((2n+1)/θ + ρ_n),   ln k_{n+1} = ln k_n − ln ρ_{n+1}.
//! ```

use std::f64::consts::PI;

use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BesselHalfSeq {
    pub theta: f64,
    /// `ln k_n` for `n = 0..=N`.
    pub ln_k: Vec<f64>,
    /// `ρ_n = k_{n−1}/k_n` for `n = 0..=N` (`ρ_0 = 1`).
    pub rho: Vec<f64>,
}

impl BesselHalfSeq {
    pub fn k(&self, n: usize) -> f64 {
        self.ln_k[n].exp()
    }
}

pub fn bessel_k_half(theta: f64, max_n: usize) -> Result<BesselHalfSeq> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(domain(format!("bessel K needs theta > 0, got {theta}")));
    }
    let mut ln_k = Vec::with_capacity(max_n + 1);
    let mut rho = Vec::with_capacity(max_n + 1);
    ln_k.push(0.5 * (PI / (2.0 * theta)).ln() - theta);
    rho.push(1.0);
    for n in 0..max_n {
        let next = 1.0 / ((2 * n + 1) as f64 / theta + rho[n]);
        rho.push(next);
        ln_k.push(ln_k[n] - next.ln());
    }
    Ok(BesselHalfSeq { theta, ln_k, rho })
}

/// Lower and upper bounds `η_n < ρ_n ≤ θ` on the Bessel ratio, `n ≥ 2`.
pub fn segura_bounds(n: u64, theta: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(domain(format!("ratio bounds stated for n >= 2, got n = {n}")));
    }
    if !(theta > 0.0) {
        return Err(domain(format!("ratio bounds need theta > 0, got {theta}")));
    }
    let nf = n as f64;
    let eta = theta / (nf + 0.5 + ((nf - 1.5).powi(2) + theta * theta).sqrt());
    Ok((eta, theta))
}

/// `Q_n(ρ)`: the value of `ψ(n−1)ψ(n+1)/ψ(n)²` on the Exp–Exp diagonal
/// when `ρ` is the Bessel ratio `ρ_n`.
pub fn q_n_of_rho(n: u64, theta: f64, rho: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("Q_n defined for n >= 2, got n = {n}")));
    }
    if !(theta > 0.0) {
        return Err(domain(format!("Q_n needs theta > 0, got {theta}")));
    }
    if !(0.0..=theta).contains(&rho) {
        return Err(domain(format!("Q_n needs rho in [0, theta], got {rho}")));
    }
    let nf = n as f64;
    let first = (2.0 * nf * nf + 3.0 * nf + 1.0) / theta + 2.0 * nf + 1.0 + theta + (nf + 1.0 + theta) * rho;
    let second = theta - (nf - theta) * rho;
    let den = nf + theta + theta * rho;
    Ok(nf * first * second / ((nf + 1.0) * den * den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Domain, QuadOptions};

    fn k_by_quadrature(nu: f64, x: f64) -> f64 {
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_evals: 200_000 };
        integrate(|t| (-x * t.cosh()).exp() * (nu * t).cosh(), Domain::UpperInfinite { a: 0.0, scale: 2.0 }, opts)
            .unwrap()
            .value
    }

    #[test]
    fn low_orders() {
        let s = bessel_k_half(1.0, 3).unwrap();
        let k0 = (PI / 2.0).sqrt() * (-1f64).exp();
        assert!((s.k(0) - k0).abs() < 1e-15);
        assert!((s.k(0) - 0.461_069).abs() < 1e-6);
        assert!((s.k(1) - 2.0 * k0).abs() < 1e-15);
        assert!((s.k(2) - 7.0 * k0).abs() < 1e-14);
        assert!((s.rho[2] - 2.0 / 7.0).abs() < 1e-16);
    }

    #[test]
    fn matches_integral_representation() {
        for &theta in &[0.3, 1.0, 4.5] {
            let s = bessel_k_half(theta, 10).unwrap();
            for n in 0..=10 {
                let q = k_by_quadrature(n as f64 + 0.5, theta);
                assert!((s.k(n) - q).abs() <= 1e-11 * q, "theta={theta} n={n}");
            }
        }
        // K_{-1/2} = K_{1/2}
        assert!((k_by_quadrature(-0.5, 1.3) - k_by_quadrature(0.5, 1.3)).abs() < 1e-14);
    }

    #[test]
    fn segura_examples() {
        let (eta, up) = segura_bounds(2, 1.0).unwrap();
        assert!((eta - 0.276_393_202_250_021).abs() < 1e-12);
        assert!(eta < 2.0 / 7.0 && 2.0 / 7.0 <= up);
        let s = bessel_k_half(5.0, 10).unwrap();
        let (eta, up) = segura_bounds(10, 5.0).unwrap();
        assert!(eta < s.rho[10] && s.rho[10] <= up);
        assert!(segura_bounds(10, 1e-300).unwrap().0 < 1e-299);
        assert!(segura_bounds(1, 1.0).is_err());
    }

    #[test]
    fn q_is_decreasing_in_rho() {
        for n in [2u64, 3, 10, 100] {
            for &theta in &[0.1, 1.0, 7.0, 50.0] {
                let mut prev = f64::INFINITY;
                for i in 0..=50 {
                    let q = q_n_of_rho(n, theta, theta * i as f64 / 50.0).unwrap();
                    assert!(q < prev);
                    prev = q;
                }
            }
        }
    }
}
