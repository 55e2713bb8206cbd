//! The expected-posterior sequence `ψ_{θ0,θ1}(n) = E_{θ1}[q_n^{θ0}]`.
//!
//! Several interchangeable routes compute it:
//!
//! * exact rational sums over the sufficient statistic (Bernoulli with a
//!   discrete, uniform or integer Beta prior);
//! * log-space floating-point sums of the same terms;
//! * closed forms (Normal–Normal, Exponential–Exponential via Bessel K,
//!   Bernoulli–Uniform via Legendre polynomials);
//! * adaptive quadrature over the sufficient statistic (any supported pair);
//! * brute-force enumeration of raw sequences (small `n`, an oracle).
//!
//! Exact values may be kept unreduced: at horizon 500 a single `ψ(n)` has
//! numerator and denominator of a few million bits, and a gcd at that size
//! costs far more than the sum itself. Comparisons cross-multiply instead.

mod bernoulli;
mod closed;
mod quad;

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{self, Rational, Value};
use crate::families::FamilySpec;
use crate::priors::{NamedPrior, Prior};

pub use bernoulli::{psi_bernoulli_beta, psi_bernoulli_finite, psi_bernoulli_uniform, psi_bruteforce, BRUTE_FORCE_CAP};
pub use closed::{exp_moment_integral, psi_exponential, psi_exponential_integral, psi_normal};
pub use quad::{psi_quadrature, psi_quadrature_sequence};

/// Relative tie tolerance for float comparisons without a stable closed form.
pub const FLOAT_TIE_TOLERANCE: f64 = 1e-13;

/// Exact comparisons first look at the logarithms, which are accurate to a
/// few ulps; only differences inside this margin fall back to big-integer
/// cross-multiplication. The margin is orders of magnitude above the log
/// error, so the answer is the exact one.
const EXACT_FILTER_MARGIN: f64 = 1e-9;

/// Above this horizon `auto` mode switches discrete Bernoulli priors to floats.
pub const AUTO_EXACT_HORIZON: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactRational,
    LogSpaceSum,
    ClosedFormNormal,
    ClosedFormExpBessel,
    UniformPriorLegendre,
    Quadrature,
    BruteForce,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ExactRational => "exact_rational",
            Method::LogSpaceSum => "log_space_sum",
            Method::ClosedFormNormal => "closed_form_normal",
            Method::ClosedFormExpBessel => "closed_form_exp_bessel",
            Method::UniformPriorLegendre => "uniform_prior_legendre",
            Method::Quadrature => "quadrature",
            Method::BruteForce => "brute_force",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericMode {
    Exact,
    Float,
    #[default]
    Auto,
}

impl std::str::FromStr for NumericMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NumericMode::Exact),
            "float" => Ok(NumericMode::Float),
            "auto" => Ok(NumericMode::Auto),
            other => Err(Error::Parse(format!("unknown numeric mode {other:?} (expected exact, float or auto)"))),
        }
    }
}

/// `ψ(n)` for `n = first_n, first_n + 1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSequence {
    pub first_n: u64,
    pub method: Method,
    /// Exact values when computed in rational arithmetic (possibly unreduced).
    pub exact: Option<Vec<Rational>>,
    pub ln_psi: Vec<f64>,
    /// `ln ψ(n+1) − ln ψ(n)` from a cancellation-free formula, when available.
    pub ln_steps: Option<Vec<f64>>,
    /// `ln ψ(n−1) + ln ψ(n+1) − 2 ln ψ(n)` at interior points, when available.
    pub ln_curvature: Option<Vec<f64>>,
    /// Per-value absolute error estimates (quadrature).
    pub errors: Option<Vec<f64>>,
}

impl PsiSequence {
    pub(crate) fn from_exact(first_n: u64, method: Method, values: Vec<Rational>) -> Self {
        let ln_psi = values.iter().map(exact::ln).collect();
        PsiSequence { first_n, method, exact: Some(values), ln_psi, ln_steps: None, ln_curvature: None, errors: None }
    }

    pub(crate) fn from_ln(first_n: u64, method: Method, ln_psi: Vec<f64>) -> Self {
        PsiSequence { first_n, method, exact: None, ln_psi, ln_steps: None, ln_curvature: None, errors: None }
    }

    pub fn len(&self) -> usize {
        self.ln_psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_psi.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn repr(&self) -> &'static str {
        if self.is_exact() {
            "exact"
        } else {
            "float"
        }
    }

    /// Last `n` in the sequence.
    pub fn horizon(&self) -> u64 {
        self.first_n + self.len() as u64 - 1
    }

    pub fn n_at(&self, i: usize) -> u64 {
        self.first_n + i as u64
    }

    pub fn index_of(&self, n: u64) -> Option<usize> {
        (n >= self.first_n && n <= self.horizon()).then(|| (n - self.first_n) as usize)
    }

    pub fn psi_f64(&self, i: usize) -> f64 {
        match &self.exact {
            Some(v) => exact::to_f64(&v[i]),
            None => self.ln_psi[i].exp(),
        }
    }

    pub fn value(&self, i: usize) -> Value {
        match &self.exact {
            Some(v) => Value::Exact(v[i].clone()),
            None => Value::Float(self.psi_f64(i)),
        }
    }

    pub fn floats(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.psi_f64(i)).collect()
    }

    /// Compare `ψ(n_{i+1})` with `ψ(n_i)`.
    pub fn step_cmp(&self, i: usize) -> Ordering {
        if let Some(v) = &self.exact {
            let d = self.ln_psi[i + 1] - self.ln_psi[i];
            if d.abs() > EXACT_FILTER_MARGIN {
                return if d > 0.0 { Ordering::Greater } else { Ordering::Less };
            }
            return exact::cmp_rational(&v[i + 1], &v[i]);
        }
        let d = match &self.ln_steps {
            Some(s) => return s[i].partial_cmp(&0.0).unwrap_or(Ordering::Equal),
            None => self.ln_psi[i + 1] - self.ln_psi[i],
        };
        tolerant_sign(d, self.ln_psi[i + 1].abs().max(self.ln_psi[i].abs()))
    }

    /// Compare `ψ(n_{i−1})ψ(n_{i+1})` with `ψ(n_i)²`, for `1 ≤ i ≤ len−2`.
    /// `Greater` is a log-concavity violation.
    pub fn curvature_cmp(&self, i: usize) -> Ordering {
        if let Some(v) = &self.exact {
            let d = self.ln_psi[i - 1] + self.ln_psi[i + 1] - 2.0 * self.ln_psi[i];
            if d.abs() > EXACT_FILTER_MARGIN {
                return if d > 0.0 { Ordering::Greater } else { Ordering::Less };
            }
            let (a, b, c) = (&v[i - 1], &v[i], &v[i + 1]);
            let lhs: BigInt = a.numer() * c.numer() * b.denom() * b.denom();
            let rhs: BigInt = b.numer() * b.numer() * a.denom() * c.denom();
            return lhs.cmp(&rhs);
        }
        if let Some(c) = &self.ln_curvature {
            return c[i - 1].partial_cmp(&0.0).unwrap_or(Ordering::Equal);
        }
        let d = self.ln_psi[i - 1] + self.ln_psi[i + 1] - 2.0 * self.ln_psi[i];
        let scale = self.ln_psi[i - 1].abs().max(self.ln_psi[i].abs()).max(self.ln_psi[i + 1].abs());
        tolerant_sign(d, scale)
    }
}

fn tolerant_sign(d: f64, scale: f64) -> Ordering {
    if d.abs() <= FLOAT_TIE_TOLERANCE * scale.max(1.0) {
        Ordering::Equal
    } else if d > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// `ψ(0) = π(θ0)`: mass or density of the prior at `θ0`.
pub fn psi_at_zero(prior: &Prior, theta0: &Value) -> Result<Value> {
    match prior {
        Prior::Atoms(d) => d
            .weight_of(theta0)
            .map(|w| Value::Exact(w.clone()))
            .ok_or_else(|| Error::NotAnAtom(theta0.to_string())),
        Prior::Named(p) => Ok(match theta0.as_exact().and_then(|t| p.density_exact(t)) {
            Some(r) => Value::Exact(r),
            None => Value::Float(p.density(theta0.to_f64())),
        }),
    }
}

/// Compute `ψ(1..=horizon)` by the best route available for the pair.
///
/// Preference: closed form, then exact rational sums, then quadrature.
pub fn compute_psi(
    family: &FamilySpec,
    prior: &Prior,
    theta0: &Value,
    theta1: &Value,
    horizon: u64,
    mode: NumericMode,
) -> Result<PsiSequence> {
    if horizon == 0 {
        return Err(domain("horizon must be at least 1"));
    }
    prior.validate_for(family)?;
    match (family, prior) {
        (FamilySpec::Bernoulli, Prior::Atoms(d)) => {
            let float = match mode {
                NumericMode::Float => true,
                NumericMode::Exact => false,
                NumericMode::Auto => !d.is_exact() || !theta1.is_exact() || horizon > AUTO_EXACT_HORIZON,
            };
            psi_bernoulli_finite(d, theta0, theta1, horizon, !float)
        }
        (FamilySpec::Bernoulli, Prior::Named(NamedPrior::Uniform01)) => {
            psi_bernoulli_uniform(theta0, theta1, horizon, mode != NumericMode::Float)
        }
        (FamilySpec::Bernoulli, Prior::Named(NamedPrior::Beta { a, b })) => {
            psi_bernoulli_beta(*a, *b, theta0, theta1, horizon, mode != NumericMode::Float)
        }
        (FamilySpec::Normal { sigma }, Prior::Named(NamedPrior::StdNormal)) => {
            reject_exact(mode, "normal closed form")?;
            psi_normal(theta0.to_f64(), theta1.to_f64(), *sigma, horizon)
        }
        (FamilySpec::Exponential, Prior::Named(NamedPrior::Exp { lambda })) => {
            reject_exact(mode, "exponential closed form")?;
            psi_exponential(theta0.to_f64(), theta1.to_f64(), *lambda, horizon)
        }
        _ => {
            reject_exact(mode, "quadrature")?;
            psi_quadrature_sequence(family, prior, theta0, theta1, horizon, Default::default())
        }
    }
}

fn reject_exact(mode: NumericMode, route: &str) -> Result<()> {
    if mode == NumericMode::Exact {
        return Err(Error::Unsupported(format!("exact arithmetic is not available for the {route} route")));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
