//! One-dimensional exponential families.
//!
//! Each family is written as `p_θ(x) = exp(η(θ)T(x) − A(η(θ)) − B(x))` with the
//! parameterizations below. The sufficient statistic used throughout the crate
//! is the plain sum `u_n = Σ x_i` of the observations (the "carrier" of `T`).
//!
//! | family       | Θ       | η(θ)          | T(x)   | law of `u_n` |
//! |--------------|---------|---------------|--------|--------------|
//! | Bernoulli    | (0, 1)  | ln(θ/(1−θ))   | x      | Binomial(n, θ) |
//! | Normal(σ)    | ℝ       | θ             | x/σ²   | Normal(nθ, nσ²) |
//! | Poisson      | (0, ∞)  | ln θ          | x      | Poisson(nθ) |
//! | Exponential  | (0, ∞)  | θ             | −x     | Gamma(n, θ) |
//!
//! The geometric-average reduction maps a pair `(θ0, θ1)` to
//! `θ2 = η⁻¹((η(θ0)+η(θ1))/2)` and `w = (∫√(p_θ0 p_θ1))²`, so that
//! `p_θ0 · p_θ1 = w · p_θ2²` pointwise.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::Rational;
use crate::logspace::{ln_factorial, ln_gamma, xlny};
use crate::quadrature::{integrate, Domain, QuadOptions};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub enum FamilySpec {
    Bernoulli,
    /// Normal with known standard deviation `sigma`.
    Normal { sigma: f64 },
    Poisson,
    Exponential,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
}

impl TryFrom<FamilyRepr> for FamilySpec {
    type Error = Error;
    fn try_from(r: FamilyRepr) -> Result<Self> {
        let family = match (r.kind.as_str(), r.sigma) {
            ("normal", Some(sigma)) => FamilySpec::normal(sigma)?,
            ("normal", None) => return Err(Error::Parse("family.sigma is required for kind \"normal\"".into())),
            (kind, Some(_)) if ["bernoulli", "poisson", "exponential"].contains(&kind) => {
                return Err(Error::Parse(format!("family.sigma is only allowed for kind \"normal\", not {kind:?}")))
            }
            ("bernoulli", None) => FamilySpec::Bernoulli,
            ("poisson", None) => FamilySpec::Poisson,
            ("exponential", None) => FamilySpec::Exponential,
            (other, _) => return Err(Error::Parse(format!("unknown family.kind {other:?}"))),
        };
        Ok(family)
    }
}

impl From<FamilySpec> for FamilyRepr {
    fn from(f: FamilySpec) -> Self {
        let sigma = match f {
            FamilySpec::Normal { sigma } => Some(sigma),
            _ => None,
        };
        FamilyRepr {
            kind: f.name().to_string(),
            sigma,
        }
    }
}

impl FamilySpec {
    pub fn normal(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("normal sigma must be > 0, got {sigma}")));
        }
        Ok(FamilySpec::Normal { sigma })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Bernoulli => "bernoulli",
            FamilySpec::Normal { .. } => "normal",
            FamilySpec::Poisson => "poisson",
            FamilySpec::Exponential => "exponential",
        }
    }

    /// Open parameter interval Θ.
    pub fn theta_domain(&self) -> (f64, f64) {
        match self {
            FamilySpec::Bernoulli => (0.0, 1.0),
            FamilySpec::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            FamilySpec::Poisson | FamilySpec::Exponential => (0.0, f64::INFINITY),
        }
    }

    pub fn check_theta(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.theta_domain();
        if theta.is_nan() {
            return Err(domain(format!("{}: theta is NaN", self.name())));
        }
        if theta <= lo {
            return Err(domain(format!("{}: theta = {theta} must be > {lo}", self.name())));
        }
        if theta >= hi {
            return Err(domain(format!("{}: theta = {theta} must be < {hi}", self.name())));
        }
        Ok(())
    }

    /// Exact variant of [`check_theta`](Self::check_theta) for rational parameters.
    pub fn check_theta_exact(&self, theta: &Rational) -> Result<()> {
        match self {
            FamilySpec::Bernoulli => {
                if !theta.is_positive() {
                    return Err(domain(format!("bernoulli: theta = {theta} must be > 0")));
                }
                if *theta >= Rational::one() {
                    return Err(domain(format!("bernoulli: theta = {theta} must be < 1")));
                }
                Ok(())
            }
            FamilySpec::Poisson | FamilySpec::Exponential if !theta.is_positive() => {
                Err(domain(format!("{}: theta = {theta} must be > 0", self.name())))
            }
            _ => Ok(()),
        }
    }

    pub fn eta(&self, theta: f64) -> f64 {
        match self {
            FamilySpec::Bernoulli => (theta / (1.0 - theta)).ln(),
            FamilySpec::Normal { .. } | FamilySpec::Exponential => theta,
            FamilySpec::Poisson => theta.ln(),
        }
    }

    pub fn eta_inverse(&self, eta: f64) -> f64 {
        match self {
            FamilySpec::Bernoulli => 1.0 / (1.0 + (-eta).exp()),
            FamilySpec::Normal { .. } | FamilySpec::Exponential => eta,
            FamilySpec::Poisson => eta.exp(),
        }
    }

    /// Sufficient statistic `T(x)`.
    pub fn t_stat(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Normal { sigma } => x / (sigma * sigma),
            FamilySpec::Exponential => -x,
            _ => x,
        }
    }

    /// Log-partition `A(η)`.
    pub fn log_partition(&self, eta: f64) -> f64 {
        match self {
            FamilySpec::Bernoulli => eta.max(0.0) + (-eta.abs()).exp().ln_1p(),
            FamilySpec::Normal { sigma } => eta * eta / (2.0 * sigma * sigma),
            FamilySpec::Poisson => eta.exp(),
            FamilySpec::Exponential => -eta.ln(),
        }
    }

    /// Base measure term `B(x)` (on the support).
    pub fn base_measure(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Normal { sigma } => x * x / (2.0 * sigma * sigma) + 0.5 * (2.0 * PI * sigma * sigma).ln(),
            FamilySpec::Poisson => ln_factorial(x as u64),
            _ => 0.0,
        }
    }

    pub fn fisher_information(&self, theta: f64) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(match self {
            FamilySpec::Bernoulli => 1.0 / (theta * (1.0 - theta)),
            FamilySpec::Normal { sigma } => 1.0 / (sigma * sigma),
            FamilySpec::Poisson => 1.0 / theta,
            FamilySpec::Exponential => 1.0 / (theta * theta),
        })
    }

    /// `(θ2, w)` from the per-family closed forms.
    pub fn theta2_and_w(&self, theta0: f64, theta1: f64) -> Result<(f64, f64)> {
        self.check_theta(theta0)?;
        self.check_theta(theta1)?;
        if theta0 == theta1 {
            return Ok((theta0, 1.0));
        }
        Ok(match self {
            FamilySpec::Bernoulli => {
                let a = (theta0 * theta1).sqrt();
                let b = ((1.0 - theta0) * (1.0 - theta1)).sqrt();
                (a / (a + b), (a + b) * (a + b))
            }
            FamilySpec::Normal { sigma } => {
                let d = theta0 - theta1;
                (0.5 * (theta0 + theta1), (-d * d / (4.0 * sigma * sigma)).exp())
            }
            FamilySpec::Poisson => {
                let d = theta0.sqrt() - theta1.sqrt();
                ((theta0 * theta1).sqrt(), (-d * d).exp())
            }
            FamilySpec::Exponential => {
                let t2 = 0.5 * (theta0 + theta1);
                (t2, theta0 * theta1 / (t2 * t2))
            }
        })
    }

    /// `(θ2, w)` through the exponential-family form: `θ2 = η⁻¹(mean η)`,
    /// `w = exp(2A(η2) − A(η0) − A(η1))`.
    pub fn theta2_and_w_via_partition(&self, theta0: f64, theta1: f64) -> Result<(f64, f64)> {
        self.check_theta(theta0)?;
        self.check_theta(theta1)?;
        let (e0, e1) = (self.eta(theta0), self.eta(theta1));
        let e2 = 0.5 * (e0 + e1);
        let log_w = 2.0 * self.log_partition(e2) - self.log_partition(e0) - self.log_partition(e1);
        Ok((self.eta_inverse(e2), log_w.exp()))
    }

    /// `w = (Σ or ∫ √(p_θ0 p_θ1))²` evaluated numerically over the observation space.
    pub fn bhattacharyya_numeric(&self, theta0: f64, theta1: f64) -> Result<f64> {
        self.check_theta(theta0)?;
        self.check_theta(theta1)?;
        let affinity = |x: f64| (0.5 * (self.log_density(theta0, x) + self.log_density(theta1, x))).exp();
        let coefficient = match self {
            FamilySpec::Bernoulli => affinity(0.0) + affinity(1.0),
            FamilySpec::Poisson => {
                let mut total = 0.0;
                let peak = theta0.max(theta1);
                let mut x = 0.0;
                loop {
                    let term = affinity(x);
                    total += term;
                    if x > peak && term < 1e-18 * total {
                        break;
                    }
                    x += 1.0;
                }
                total
            }
            FamilySpec::Normal { sigma } => {
                let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_evals: 400_000 };
                let center = 0.5 * (theta0 + theta1);
                integrate(affinity, Domain::Real { center, scale: *sigma }, opts)?.value
            }
            FamilySpec::Exponential => {
                let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_evals: 400_000 };
                let scale = 2.0 / (theta0 + theta1);
                integrate(affinity, Domain::UpperInfinite { a: 0.0, scale }, opts)?.value
            }
        };
        Ok(coefficient * coefficient)
    }

    /// Is `x` in the observation space?
    pub fn in_support(&self, x: f64) -> bool {
        match self {
            FamilySpec::Bernoulli => x == 0.0 || x == 1.0,
            FamilySpec::Normal { .. } => x.is_finite(),
            FamilySpec::Poisson => x >= 0.0 && x.fract() == 0.0 && x.is_finite(),
            FamilySpec::Exponential => x >= 0.0 && x.is_finite(),
        }
    }

    /// `ln p_θ(x)`; negative infinity off the support.
    pub fn log_density(&self, theta: f64, x: f64) -> f64 {
        if !self.in_support(x) {
            return f64::NEG_INFINITY;
        }
        match self {
            FamilySpec::Bernoulli => {
                if x == 1.0 {
                    theta.ln()
                } else {
                    (1.0 - theta).ln()
                }
            }
            FamilySpec::Normal { sigma } => {
                let z = (x - theta) / sigma;
                -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * PI).ln()
            }
            FamilySpec::Poisson => xlny(x, theta) - theta - ln_factorial(x as u64),
            FamilySpec::Exponential => theta.ln() - theta * x,
        }
    }

    /// Is `u` a possible value of `u_n`?
    pub fn suff_stat_in_support(&self, n: u64, u: f64) -> bool {
        match self {
            FamilySpec::Bernoulli => u >= 0.0 && u <= n as f64 && u.fract() == 0.0,
            FamilySpec::Normal { .. } => u.is_finite(),
            FamilySpec::Poisson => u >= 0.0 && u.fract() == 0.0 && u.is_finite(),
            FamilySpec::Exponential => u.is_finite() && (u > 0.0 || (u == 0.0 && n == 1)),
        }
    }

    /// `ln p_θ(u_n = u)`; negative infinity off the support.
    pub fn suff_stat_log_density(&self, theta: f64, n: u64, u: f64) -> Result<f64> {
        if n == 0 {
            return Err(domain("suff_stat_log_density requires n >= 1"));
        }
        if !self.suff_stat_in_support(n, u) {
            return Ok(f64::NEG_INFINITY);
        }
        let nf = n as f64;
        Ok(match self {
            FamilySpec::Bernoulli => {
                let k = u as u64;
                crate::logspace::ln_binomial(n, k) + xlny(u, theta) + xlny(nf - u, 1.0 - theta)
            }
            FamilySpec::Normal { sigma } => {
                let var = nf * sigma * sigma;
                let d = u - nf * theta;
                -0.5 * d * d / var - 0.5 * (2.0 * PI * var).ln()
            }
            FamilySpec::Poisson => {
                let mean = nf * theta;
                xlny(u, mean) - mean - ln_factorial(u as u64)
            }
            FamilySpec::Exponential => {
                nf * theta.ln() + xlny(nf - 1.0, u) - theta * u - ln_gamma(nf)
            }
        })
    }
}

/// Exact Bernoulli pmf `θ^x (1−θ)^(1−x)`.
pub fn bernoulli_pmf_exact(theta: &Rational, x: u8) -> Rational {
    if x == 1 {
        theta.clone()
    } else {
        Rational::one() - theta
    }
}

/// Exact `θ^k (1−θ)^(n−k)` (without the binomial coefficient).
pub fn bernoulli_path_prob_exact(theta: &Rational, n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let one_minus = Rational::one() - theta;
    num_traits::pow(theta.clone(), k as usize) * num_traits::pow(one_minus, (n - k) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAMILIES: [FamilySpec; 4] = [
        FamilySpec::Bernoulli,
        FamilySpec::Normal { sigma: 1.7 },
        FamilySpec::Poisson,
        FamilySpec::Exponential,
    ];

    fn grid(f: &FamilySpec) -> Vec<f64> {
        match f {
            FamilySpec::Bernoulli => (1..20).map(|i| i as f64 / 20.0).collect(),
            FamilySpec::Normal { .. } => (-10..=10).map(|i| i as f64 * 0.7).collect(),
            _ => (1..=20).map(|i| i as f64 * 0.45).collect(),
        }
    }

    #[test]
    fn fisher_information_values() {
        assert_eq!(FamilySpec::Bernoulli.fisher_information(0.5).unwrap(), 4.0);
        assert_eq!(FamilySpec::normal(2.0).unwrap().fisher_information(-3.0).unwrap(), 0.25);
        assert_eq!(FamilySpec::Exponential.fisher_information(2.0).unwrap(), 0.25);
        assert_eq!(FamilySpec::Poisson.fisher_information(4.0).unwrap(), 0.25);
    }

    #[test]
    fn domain_errors_name_the_bound() {
        let e = FamilySpec::Bernoulli.fisher_information(1.0).unwrap_err();
        assert!(e.to_string().contains("< 1"), "{e}");
        let e = FamilySpec::Exponential.theta2_and_w(-1.0, 1.0).unwrap_err();
        assert!(e.to_string().contains("> 0"), "{e}");
        assert!(FamilySpec::normal(0.0).is_err());
    }

    #[test]
    fn eta_increasing_and_information_positive() {
        for f in FAMILIES {
            let g = grid(&f);
            for w in g.windows(2) {
                assert!(f.eta(w[1]) > f.eta(w[0]));
            }
            for &t in &g {
                assert!(f.fisher_information(t).unwrap() > 0.0);
                assert!((f.eta_inverse(f.eta(t)) - t).abs() < 1e-12 * t.abs().max(1.0));
            }
        }
    }

    #[test]
    fn fisher_information_matches_variance_of_t_times_eta_prime_squared() {
        for f in FAMILIES {
            for &t in &grid(&f) {
                let h = 1e-5 * t.abs().max(1.0);
                let eta_prime = (f.eta(t + h) - f.eta(t - h)) / (2.0 * h);
                let e = f.eta(t);
                let he = 1e-4;
                let a2 = (f.log_partition(e + he) - 2.0 * f.log_partition(e) + f.log_partition(e - he)) / (he * he);
                let info = a2 * eta_prime * eta_prime;
                let exact = f.fisher_information(t).unwrap();
                assert!((info - exact).abs() / exact < 1e-5, "{f:?} {t}: {info} vs {exact}");
            }
        }
    }

    #[test]
    fn theta2_w_examples() {
        let (t2, w) = FamilySpec::normal(1.0).unwrap().theta2_and_w(0.0, 2.0).unwrap();
        assert_eq!(t2, 1.0);
        assert!((w - (-1f64).exp()).abs() < 1e-16);
        for f in FAMILIES {
            assert_eq!(f.theta2_and_w(0.3, 0.3).unwrap(), (0.3, 1.0));
        }
        // frozen from a 40-digit evaluation of the closed forms
        let (t2, w) = FamilySpec::Bernoulli.theta2_and_w(0.5, 0.65).unwrap();
        assert!((t2 - 0.576_767_997_638_423_9).abs() < 1e-12, "{t2}");
        assert!((w - 0.976_969_600_708_472_8).abs() < 1e-12, "{w}");
        assert!((FamilySpec::Bernoulli.bhattacharyya_numeric(0.5, 0.65).unwrap() - w).abs() < 1e-15);
    }

    #[test]
    fn closed_form_w_matches_numeric_and_partition_routes() {
        for f in FAMILIES {
            let g = grid(&f);
            for (i, &a) in g.iter().enumerate().step_by(3) {
                for &b in g.iter().skip(i + 1).step_by(4) {
                    let (t2, w) = f.theta2_and_w(a, b).unwrap();
                    let (t2p, wp) = f.theta2_and_w_via_partition(a, b).unwrap();
                    let wn = f.bhattacharyya_numeric(a, b).unwrap();
                    assert!((wp - w).abs() <= 1e-10 * w, "{f:?} {a} {b}: {w} vs {wp}");
                    assert!((wn - w).abs() <= 1e-10 * w, "{f:?} {a} {b}: {w} vs numeric {wn}");
                    assert!((t2p - t2).abs() <= 1e-12 * t2.abs().max(1.0));
                    assert!(w > 0.0 && w < 1.0);
                    assert!(t2 >= a.min(b) && t2 <= a.max(b));
                    let (t2s, ws) = f.theta2_and_w(b, a).unwrap();
                    assert!((ws - w).abs() <= 1e-15 && (t2s - t2).abs() <= 1e-15 * t2.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn geometric_average_identity() {
        let xs: Vec<f64> = vec![0.0, 1.0, 2.0, 3.0, 7.0, 0.25, 1.5, -2.0];
        for f in FAMILIES {
            let g = grid(&f);
            let (a, b) = (g[2], g[g.len() - 3]);
            let (t2, w) = f.theta2_and_w(a, b).unwrap();
            for &x in xs.iter().filter(|&&x| f.in_support(x)) {
                let lhs = f.log_density(a, x) + f.log_density(b, x);
                let rhs = w.ln() + 2.0 * f.log_density(t2, x);
                assert!(((lhs - rhs).exp() - 1.0).abs() < 1e-12, "{f:?} x={x}");
            }
        }
    }

    #[test]
    fn log_density_examples() {
        assert_eq!(FamilySpec::Bernoulli.log_density(0.5, 1.0), 0.5f64.ln());
        assert_eq!(FamilySpec::Exponential.log_density(1.0, 0.0), 0.0);
        let p = FamilySpec::Poisson.log_density(2.0, 3.0);
        assert!((p - (3.0 * 2f64.ln() - 2.0 - 6f64.ln())).abs() < 1e-14);
        assert_eq!(FamilySpec::Bernoulli.log_density(0.5, 2.0), f64::NEG_INFINITY);
        assert_eq!(FamilySpec::Exponential.log_density(0.5, -1.0), f64::NEG_INFINITY);
        assert_eq!(FamilySpec::Poisson.log_density(0.5, 1.5), f64::NEG_INFINITY);
    }

    #[test]
    fn suff_stat_examples() {
        let b = FamilySpec::Bernoulli.suff_stat_log_density(0.5, 2, 1.0).unwrap();
        assert!((b - 0.5f64.ln()).abs() < 1e-15);
        let nrm = FamilySpec::normal(1.0).unwrap().suff_stat_log_density(0.0, 4, 0.0).unwrap();
        assert!((nrm - (1.0 / (8.0 * PI).sqrt()).ln()).abs() < 1e-14);
        let e = FamilySpec::Exponential.suff_stat_log_density(1.0, 2, 1.0).unwrap();
        assert!((e + 1.0).abs() < 1e-15);
        assert_eq!(FamilySpec::Bernoulli.suff_stat_log_density(0.5, 2, 3.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn suff_stat_at_one_matches_density() {
        let xs = [0.0, 1.0, 2.0, 0.3, -1.2, 5.0];
        for f in FAMILIES {
            for &t in grid(&f).iter().step_by(5) {
                for &x in xs.iter().filter(|&&x| f.in_support(x)) {
                    let a = f.log_density(t, x);
                    let b = f.suff_stat_log_density(t, 1, x).unwrap();
                    assert!((a - b).abs() < 1e-13, "{f:?} {t} {x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn densities_normalize() {
        for f in FAMILIES {
            for &t in grid(&f).iter().step_by(6) {
                let total = match f {
                    FamilySpec::Bernoulli => f.log_density(t, 0.0).exp() + f.log_density(t, 1.0).exp(),
                    FamilySpec::Poisson => (0..200).map(|x| f.log_density(t, x as f64).exp()).sum(),
                    FamilySpec::Normal { sigma } => integrate(
                        |x| f.log_density(t, x).exp(),
                        Domain::Real { center: t, scale: sigma },
                        QuadOptions { abs_tol: 1e-13, ..Default::default() },
                    )
                    .unwrap()
                    .value,
                    FamilySpec::Exponential => integrate(
                        |x| f.log_density(t, x).exp(),
                        Domain::UpperInfinite { a: 0.0, scale: 1.0 / t },
                        QuadOptions { abs_tol: 1e-13, ..Default::default() },
                    )
                    .unwrap()
                    .value,
                };
                assert!((total - 1.0).abs() < 1e-11, "{f:?} {t}: {total}");
            }
        }
    }

    #[test]
    fn exponential_family_form_reproduces_density() {
        let xs = [0.0, 1.0, 3.0, 0.4];
        for f in FAMILIES {
            for &t in grid(&f).iter().step_by(4) {
                for &x in xs.iter().filter(|&&x| f.in_support(x)) {
                    let e = f.eta(t);
                    let lp = e * f.t_stat(x) - f.log_partition(e) - f.base_measure(x);
                    assert!((lp - f.log_density(t, x)).abs() < 1e-12, "{f:?} {t} {x}");
                }
            }
        }
    }

    #[test]
    fn json_schema() {
        let f: FamilySpec = serde_json::from_str(r#"{"kind":"normal","sigma":100}"#).unwrap();
        assert_eq!(f, FamilySpec::Normal { sigma: 100.0 });
        assert!(serde_json::from_str::<FamilySpec>(r#"{"kind":"normal"}"#).is_err());
        assert!(serde_json::from_str::<FamilySpec>(r#"{"kind":"poisson","sigma":1}"#).is_err());
        assert!(serde_json::from_str::<FamilySpec>(r#"{"kind":"gamma"}"#).is_err());
        let s = serde_json::to_string(&FamilySpec::Exponential).unwrap();
        assert_eq!(s, r#"{"kind":"exponential"}"#);
    }
}
