//! Priors, posteriors over discrete atoms, and prior-predictive laws of `u_n`.
//!
//! Discrete priors are lists of `(θ, weight)` atoms with exact rational weights.
//! For the Bernoulli family with rational atoms every posterior weight is an
//! exact rational; other families fall back to doubles.
//!
//! Named continuous priors only carry the closed forms needed downstream:
//!
//! | family      | prior        | marginal of `u_n`                         |
//! |-------------|--------------|-------------------------------------------|
//! | Bernoulli   | Uniform(0,1) | uniform on `{0, …, n}`                    |
//! | Bernoulli   | Beta(a, b)   | beta-binomial                             |
//! | Normal(σ)   | N(0, 1)      | N(0, n² + nσ²)                            |
//! | Exponential | Exp(λ)       | `λ n u^(n−1) / (u+λ)^(n+1)`               |
//! | Poisson     | Exp(λ)       | `λ n^u / (n+λ)^(u+1)`                     |

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{self, format_rational, parse_rational, Rational, Value};
use crate::families::{bernoulli_path_prob_exact, FamilySpec};
use crate::logspace::{ln_binomial, ln_gamma, log_sum_exp, xlny};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub theta: Value,
    pub weight: Rational,
}

/// A prior with finitely many atoms. Weights are positive and sum to exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretePrior {
    atoms: Vec<Atom>,
}

impl DiscretePrior {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(domain("prior needs at least one atom"));
        }
        let mut total = Rational::zero();
        for a in &atoms {
            if !a.weight.is_positive() {
                return Err(domain(format!("atom weight must be positive, got {}", format_rational(&a.weight))));
            }
            total += &a.weight;
        }
        if !total.is_one() {
            return Err(domain(format!("atom weights must sum to 1, got {}", format_rational(&total))));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.theta.same_as(&a.theta)) {
                return Err(domain(format!("duplicate atom theta = {}", a.theta)));
            }
        }
        Ok(DiscretePrior { atoms })
    }

    /// Convenience constructor from `(θ, weight)` rational pairs.
    pub fn from_rationals(pairs: &[(Rational, Rational)]) -> Result<Self> {
        DiscretePrior::new(
            pairs
                .iter()
                .map(|(t, w)| Atom { theta: Value::Exact(t.clone()), weight: w.clone() })
                .collect(),
        )
    }

    /// A single atom of weight 1.
    pub fn point_mass(theta: Value) -> Self {
        DiscretePrior { atoms: vec![Atom { theta, weight: Rational::one() }] }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.atoms.iter().all(|a| a.theta.is_exact())
    }

    pub fn index_of(&self, theta: &Value) -> Option<usize> {
        self.atoms.iter().position(|a| a.theta.same_as(theta))
    }

    pub fn weight_of(&self, theta: &Value) -> Option<&Rational> {
        self.index_of(theta).map(|i| &self.atoms[i].weight)
    }

    /// Check that every atom lies in the parameter space of `family`.
    ///
    /// Bernoulli atoms may sit on the closed interval `[0, 1]`: finite priors
    /// over coin biases routinely include the endpoints.
    pub fn validate_for(&self, family: &FamilySpec) -> Result<()> {
        for a in &self.atoms {
            match (family, &a.theta) {
                (FamilySpec::Bernoulli, Value::Exact(t)) => {
                    if t.is_negative() || *t > Rational::one() {
                        return Err(domain(format!("bernoulli atom {} outside [0, 1]", format_rational(t))));
                    }
                }
                (FamilySpec::Bernoulli, Value::Float(t)) => {
                    if !(0.0..=1.0).contains(t) {
                        return Err(domain(format!("bernoulli atom {t} outside [0, 1]")));
                    }
                }
                (f, v) => f.check_theta(v.to_f64())?,
            }
        }
        Ok(())
    }

    /// Prior mean `Σ θ π(θ)`.
    pub fn mean(&self) -> Value {
        if let Some(thetas) = self.exact_thetas() {
            let m = thetas.iter().zip(&self.atoms).map(|(t, a)| t * &a.weight).sum();
            Value::Exact(m)
        } else {
            Value::Float(self.atoms.iter().map(|a| a.theta.to_f64() * exact::to_f64(&a.weight)).sum())
        }
    }

    pub(crate) fn exact_thetas(&self) -> Option<Vec<Rational>> {
        self.atoms.iter().map(|a| a.theta.as_exact().cloned()).collect()
    }
}

/// Named continuous priors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedPrior {
    Uniform01,
    Beta { a: f64, b: f64 },
    StdNormal,
    Exp { lambda: f64 },
}

impl NamedPrior {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(domain(format!("beta prior needs a, b > 0, got ({a}, {b})")));
        }
        Ok(NamedPrior::Beta { a, b })
    }

    pub fn exp(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(format!("exponential prior needs lambda > 0, got {lambda}")));
        }
        Ok(NamedPrior::Exp { lambda })
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedPrior::Uniform01 => "uniform01",
            NamedPrior::Beta { .. } => "beta",
            NamedPrior::StdNormal => "stdnormal",
            NamedPrior::Exp { .. } => "exp",
        }
    }

    /// Support of the density as an open interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            NamedPrior::Uniform01 | NamedPrior::Beta { .. } => (0.0, 1.0),
            NamedPrior::StdNormal => (f64::NEG_INFINITY, f64::INFINITY),
            NamedPrior::Exp { .. } => (0.0, f64::INFINITY),
        }
    }

    pub fn ln_density(&self, theta: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(theta > lo && theta < hi) {
            return f64::NEG_INFINITY;
        }
        match *self {
            NamedPrior::Uniform01 => 0.0,
            NamedPrior::Beta { a, b } => {
                xlny(a - 1.0, theta) + xlny(b - 1.0, 1.0 - theta) - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
            }
            NamedPrior::StdNormal => -0.5 * theta * theta - 0.5 * (2.0 * PI).ln(),
            NamedPrior::Exp { lambda } => lambda.ln() - lambda * theta,
        }
    }

    pub fn density(&self, theta: f64) -> f64 {
        self.ln_density(theta).exp()
    }

    /// Exact density at a rational point, when the density is rational there.
    pub fn density_exact(&self, theta: &Rational) -> Option<Rational> {
        match *self {
            NamedPrior::Uniform01 => {
                (theta.is_positive() && *theta < Rational::one()).then(Rational::one)
            }
            NamedPrior::Beta { a, b } => {
                let (ai, bi) = (small_integer(a)?, small_integer(b)?);
                if !(theta.is_positive() && *theta < Rational::one()) {
                    return None;
                }
                // 1/B(a, b) = (a+b−1)! / ((a−1)! (b−1)!) = a·C(a+b−1, a)
                let inv_beta = exact::binomial(ai + bi - 1, ai) * num_bigint::BigUint::from(ai);
                let one_minus = Rational::one() - theta;
                Some(
                    num_traits::pow(theta.clone(), (ai - 1) as usize)
                        * num_traits::pow(one_minus, (bi - 1) as usize)
                        * Rational::from_integer(inv_beta.into()),
                )
            }
            _ => None,
        }
    }

    /// Exact beta-binomial `P(u_n = k)` when `a`, `b` are rational.
    pub fn beta_binomial_exact(a: &Rational, b: &Rational, n: u64, k: u64) -> Rational {
        let rising = |x: &Rational, m: u64| -> Rational {
            let mut acc = Rational::one();
            for i in 0..m {
                acc *= x + Rational::from_integer(i.into());
            }
            acc
        };
        let ab = a + b;
        Rational::from_integer(exact::binomial(n, k).into()) * rising(a, k) * rising(b, n - k) / rising(&ab, n)
    }
}

fn small_integer(x: f64) -> Option<u64> {
    (x.fract() == 0.0 && x >= 1.0 && x < 1e6).then_some(x as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Prior {
    Atoms(DiscretePrior),
    Named(NamedPrior),
}

impl Prior {
    pub fn validate_for(&self, family: &FamilySpec) -> Result<()> {
        match self {
            Prior::Atoms(d) => d.validate_for(family),
            Prior::Named(p) => {
                let (plo, phi) = p.support();
                let (flo, fhi) = family.theta_domain();
                if plo < flo || phi > fhi {
                    return Err(domain(format!(
                        "{} prior support ({plo}, {phi}) is not inside the {} parameter space ({flo}, {fhi})",
                        p.name(),
                        family.name()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Prior mass (discrete) or density (continuous) at `theta`.
    pub fn mass_or_density(&self, theta: &Value) -> f64 {
        match self {
            Prior::Atoms(d) => d.weight_of(theta).map(exact::to_f64).unwrap_or(0.0),
            Prior::Named(p) => p.density(theta.to_f64()),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Prior::Atoms(_))
    }
}

/// Posterior weights per atom.
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Weights::Exact(w) => w.iter().map(exact::to_f64).collect(),
            Weights::Float(w) => w.clone(),
        }
    }
}

/// Posterior over the atoms of a discrete prior after conditioning on `u_n = u`.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorVector {
    pub thetas: Vec<Value>,
    pub weights: Weights,
    pub n: u64,
    pub u: f64,
}

impl PosteriorVector {
    pub fn weight_of(&self, theta: &Value) -> Option<Value> {
        let i = self.thetas.iter().position(|t| t.same_as(theta))?;
        Some(match &self.weights {
            Weights::Exact(w) => Value::Exact(w[i].clone()),
            Weights::Float(w) => Value::Float(w[i]),
        })
    }

    pub fn as_prior(&self) -> Result<DiscretePrior> {
        match &self.weights {
            Weights::Exact(w) => {
                let atoms = self
                    .thetas
                    .iter()
                    .zip(w)
                    .filter(|(_, w)| w.is_positive())
                    .map(|(t, w)| Atom { theta: t.clone(), weight: w.clone() })
                    .collect();
                DiscretePrior::new(atoms)
            }
            Weights::Float(_) => Err(Error::Unsupported("float posterior cannot seed an exact prior".into())),
        }
    }
}

/// Bayes rule over the atoms, conditioning on the sufficient statistic.
///
/// `n = 0` returns the prior. Exact for Bernoulli with rational atoms.
pub fn posterior_given_suffstat(family: &FamilySpec, prior: &DiscretePrior, n: u64, u: f64) -> Result<PosteriorVector> {
    let thetas: Vec<Value> = prior.atoms.iter().map(|a| a.theta.clone()).collect();
    if n == 0 {
        return Ok(PosteriorVector {
            thetas,
            weights: Weights::Exact(prior.atoms.iter().map(|a| a.weight.clone()).collect()),
            n,
            u,
        });
    }
    if let (FamilySpec::Bernoulli, Some(exact_thetas)) = (family, prior.exact_thetas()) {
        if !family.suff_stat_in_support(n, u) {
            return Err(Error::ImpossibleObservation);
        }
        let k = u as u64;
        let joint: Vec<Rational> = exact_thetas
            .iter()
            .zip(&prior.atoms)
            .map(|(t, a)| &a.weight * bernoulli_path_prob_exact(t, n, k))
            .collect();
        let total: Rational = joint.iter().sum();
        if total.is_zero() {
            return Err(Error::ImpossibleObservation);
        }
        let weights = joint.into_iter().map(|j| j / &total).collect();
        return Ok(PosteriorVector { thetas, weights: Weights::Exact(weights), n, u });
    }
    let logs: Vec<f64> = prior
        .atoms
        .iter()
        .map(|a| {
            let ll = atom_log_likelihood(family, a.theta.to_f64(), n, u)?;
            Ok(exact::ln(&a.weight) + ll)
        })
        .collect::<Result<_>>()?;
    let norm = log_sum_exp(&logs);
    if norm == f64::NEG_INFINITY {
        return Err(Error::ImpossibleObservation);
    }
    let weights = logs.iter().map(|l| (l - norm).exp()).collect();
    Ok(PosteriorVector { thetas, weights: Weights::Float(weights), n, u })
}

/// `ln P_θ(u_n = u)` allowing Bernoulli endpoints θ ∈ {0, 1}.
pub(crate) fn atom_log_likelihood(family: &FamilySpec, theta: f64, n: u64, u: f64) -> Result<f64> {
    if let FamilySpec::Bernoulli = family {
        if !family.suff_stat_in_support(n, u) {
            return Ok(f64::NEG_INFINITY);
        }
        let nf = n as f64;
        return Ok(ln_binomial(n, u as u64) + xlny(u, theta) + xlny(nf - u, 1.0 - theta));
    }
    family.suff_stat_log_density(theta, n, u)
}

/// Posterior mean parameter `θ̄_n = Σ θ q(θ)`.
pub fn mean_parameter(posterior: &PosteriorVector) -> Value {
    match &posterior.weights {
        Weights::Exact(w) => {
            let exact_thetas: Option<Vec<&Rational>> = posterior.thetas.iter().map(|t| t.as_exact()).collect();
            if let Some(ts) = exact_thetas {
                return Value::Exact(ts.into_iter().zip(w).map(|(t, q)| t * q).sum());
            }
            Value::Float(posterior.thetas.iter().zip(w).map(|(t, q)| t.to_f64() * exact::to_f64(q)).sum())
        }
        Weights::Float(w) => Value::Float(posterior.thetas.iter().zip(w).map(|(t, q)| t.to_f64() * q).sum()),
    }
}

/// Log prior-predictive mass/density of `u_n = u`.
pub fn marginal_suffstat_logpmf(family: &FamilySpec, prior: &Prior, n: u64, u: f64) -> Result<f64> {
    if n == 0 {
        return Ok(if u == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    match prior {
        Prior::Atoms(d) => {
            let logs: Vec<f64> = d
                .atoms
                .iter()
                .map(|a| Ok(exact::ln(&a.weight) + atom_log_likelihood(family, a.theta.to_f64(), n, u)?))
                .collect::<Result<_>>()?;
            Ok(log_sum_exp(&logs))
        }
        Prior::Named(p) => named_marginal_logpmf(family, p, n, u),
    }
}

fn named_marginal_logpmf(family: &FamilySpec, prior: &NamedPrior, n: u64, u: f64) -> Result<f64> {
    let nf = n as f64;
    if !family.suff_stat_in_support(n, u) {
        return Ok(f64::NEG_INFINITY);
    }
    match (family, *prior) {
        (FamilySpec::Bernoulli, NamedPrior::Uniform01) => Ok(-(nf + 1.0).ln()),
        (FamilySpec::Bernoulli, NamedPrior::Beta { a, b }) => {
            let k = u;
            let ln_beta = |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
            Ok(ln_binomial(n, k as u64) + ln_beta(k + a, nf - k + b) - ln_beta(a, b))
        }
        (FamilySpec::Normal { sigma }, NamedPrior::StdNormal) => {
            let var = nf * nf + nf * sigma * sigma;
            Ok(-0.5 * u * u / var - 0.5 * (2.0 * PI * var).ln())
        }
        (FamilySpec::Exponential, NamedPrior::Exp { lambda }) => {
            Ok(lambda.ln() + nf.ln() + xlny(nf - 1.0, u) - (nf + 1.0) * (u + lambda).ln())
        }
        (FamilySpec::Poisson, NamedPrior::Exp { lambda }) => {
            Ok(lambda.ln() + u * nf.ln() - (u + 1.0) * (nf + lambda).ln())
        }
        (f, p) => Err(Error::UnsupportedConjugacy { family: f.name().into(), prior: p.name().into() }),
    }
}

/// Exact prior-predictive `P(u_n = k)` for Bernoulli with rational atoms.
pub fn marginal_bernoulli_exact(prior: &DiscretePrior, n: u64, k: u64) -> Option<Rational> {
    let thetas = prior.exact_thetas()?;
    let c = Rational::from_integer(exact::binomial(n, k).into());
    Some(c * thetas.iter().zip(&prior.atoms).map(|(t, a)| &a.weight * bernoulli_path_prob_exact(t, n, k)).sum::<Rational>())
}

// --- JSON schema -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomRepr {
    theta: serde_json::Value,
    weight: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorRepr {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<Vec<AtomRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

/// Read a number given either as a JSON number or as a rational/decimal string.
pub fn json_to_value(v: &serde_json::Value, exact_numbers: bool) -> Result<Value> {
    match v {
        serde_json::Value::String(s) => Ok(Value::Exact(parse_rational(s)?)),
        serde_json::Value::Number(num) => {
            let x = num.as_f64().ok_or_else(|| Error::Parse(format!("bad number {num}")))?;
            if exact_numbers {
                Ok(Value::Exact(exact::rational_from_f64_decimal(x)?))
            } else {
                Ok(Value::Float(x))
            }
        }
        other => Err(Error::Parse(format!("expected a number or rational string, got {other}"))),
    }
}

/// Inverse of [`json_to_value`]: exact values become `"p/q"` strings.
pub fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Exact(r) => serde_json::Value::String(format_rational(r)),
        Value::Float(x) => serde_json::json!(x),
    }
}

impl Prior {
    /// Parse the prior JSON object. Numeric atom thetas are read as the exact
    /// decimal they spell.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: PriorRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("prior: {e}")))?;
        let require_none = |name: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::Parse(format!("prior.{name} not allowed for type {:?}", repr.kind)))
            } else {
                Ok(())
            }
        };
        match repr.kind.as_str() {
            "atoms" => {
                require_none("a", repr.a.is_some())?;
                require_none("b", repr.b.is_some())?;
                require_none("lambda", repr.lambda.is_some())?;
                let atoms = repr.atoms.ok_or_else(|| Error::Parse("prior.atoms is required for type \"atoms\"".into()))?;
                let atoms = atoms
                    .iter()
                    .map(|a| {
                        let theta = json_to_value(&a.theta, true)?;
                        let weight = match json_to_value(&a.weight, true)? {
                            Value::Exact(w) => w,
                            Value::Float(_) => unreachable!(),
                        };
                        Ok(Atom { theta, weight })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Prior::Atoms(DiscretePrior::new(atoms)?))
            }
            "uniform01" | "stdnormal" => {
                require_none("atoms", repr.atoms.is_some())?;
                require_none("a", repr.a.is_some())?;
                require_none("b", repr.b.is_some())?;
                require_none("lambda", repr.lambda.is_some())?;
                Ok(Prior::Named(if repr.kind == "uniform01" { NamedPrior::Uniform01 } else { NamedPrior::StdNormal }))
            }
            "beta" => {
                require_none("atoms", repr.atoms.is_some())?;
                require_none("lambda", repr.lambda.is_some())?;
                let a = repr.a.ok_or_else(|| Error::Parse("prior.a is required for type \"beta\"".into()))?;
                let b = repr.b.ok_or_else(|| Error::Parse("prior.b is required for type \"beta\"".into()))?;
                Ok(Prior::Named(NamedPrior::beta(a, b)?))
            }
            "exp" => {
                require_none("atoms", repr.atoms.is_some())?;
                require_none("a", repr.a.is_some())?;
                require_none("b", repr.b.is_some())?;
                Ok(Prior::Named(NamedPrior::exp(repr.lambda.unwrap_or(1.0))?))
            }
            other => Err(Error::Parse(format!("unknown prior.type {other:?}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Prior::Atoms(d) => serde_json::json!({
                "type": "atoms",
                "atoms": d.atoms.iter().map(|a| serde_json::json!({
                    "theta": value_to_json(&a.theta),
                    "weight": format_rational(&a.weight),
                })).collect::<Vec<_>>(),
            }),
            Prior::Named(NamedPrior::Uniform01) => serde_json::json!({"type": "uniform01"}),
            Prior::Named(NamedPrior::StdNormal) => serde_json::json!({"type": "stdnormal"}),
            Prior::Named(NamedPrior::Beta { a, b }) => serde_json::json!({"type": "beta", "a": a, "b": b}),
            Prior::Named(NamedPrior::Exp { lambda }) => serde_json::json!({"type": "exp", "lambda": lambda}),
        }
    }
}

/// Shorthand used in tests and docs: a discrete prior from `(θ, weight)` as `(p, q)` pairs.
pub fn atoms(pairs: &[((i64, i64), (i64, i64))]) -> DiscretePrior {
    DiscretePrior::from_rationals(
        &pairs
            .iter()
            .map(|&((tp, tq), (wp, wq))| (exact::rat(tp, tq), exact::rat(wp, wq)))
            .collect::<Vec<_>>(),
    )
    .expect("valid prior")
}

impl From<DiscretePrior> for Prior {
    fn from(d: DiscretePrior) -> Self {
        Prior::Atoms(d)
    }
}

impl From<NamedPrior> for Prior {
    fn from(p: NamedPrior) -> Self {
        Prior::Named(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn half_one() -> DiscretePrior {
        atoms(&[((1, 2), (1, 2)), ((1, 1), (1, 2))])
    }

    #[test]
    fn posterior_examples() {
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &half_one(), 1, 1.0).unwrap();
        assert_eq!(p.weights, Weights::Exact(vec![rat(1, 3), rat(2, 3)]));
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &half_one(), 1, 0.0).unwrap();
        assert_eq!(p.weights, Weights::Exact(vec![rat(1, 1), rat(0, 1)]));
        let single = DiscretePrior::point_mass(Value::Exact(rat(3, 10)));
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &single, 5, 2.0).unwrap();
        assert_eq!(p.weights, Weights::Exact(vec![rat(1, 1)]));
        let single = DiscretePrior::point_mass(Value::Float(2.5));
        let p = posterior_given_suffstat(&FamilySpec::Poisson, &single, 3, 4.0).unwrap();
        assert_eq!(p.weights, Weights::Float(vec![1.0]));
    }

    #[test]
    fn impossible_observation() {
        let prior = atoms(&[((1, 1), (1, 1))]);
        let e = posterior_given_suffstat(&FamilySpec::Bernoulli, &prior, 2, 1.0).unwrap_err();
        assert_eq!(e, Error::ImpossibleObservation);
        assert_eq!(e.to_string(), "impossible observation under prior support");
    }

    #[test]
    fn n_zero_returns_prior() {
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &half_one(), 0, 0.0).unwrap();
        assert_eq!(p.weights, Weights::Exact(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn mean_parameter_examples() {
        let prior = atoms(&[((3, 10), (1, 2)), ((7, 10), (1, 2))]);
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &prior, 0, 0.0).unwrap();
        assert_eq!(mean_parameter(&p), Value::Exact(rat(1, 2)));
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &half_one(), 1, 1.0).unwrap();
        assert_eq!(mean_parameter(&p), Value::Exact(rat(5, 6)));
        let single = DiscretePrior::point_mass(Value::Exact(rat(2, 7)));
        let p = posterior_given_suffstat(&FamilySpec::Bernoulli, &single, 3, 1.0).unwrap();
        assert_eq!(mean_parameter(&p), Value::Exact(rat(2, 7)));
    }

    #[test]
    fn float_posterior_matches_exact() {
        let prior = atoms(&[((1, 5), (1, 3)), ((1, 2), (1, 3)), ((4, 5), (1, 3))]);
        let float_prior = DiscretePrior::new(
            prior.atoms().iter().map(|a| Atom { theta: Value::Float(a.theta.to_f64()), weight: a.weight.clone() }).collect(),
        )
        .unwrap();
        for k in 0..=6 {
            let e = posterior_given_suffstat(&FamilySpec::Bernoulli, &prior, 6, k as f64).unwrap();
            let f = posterior_given_suffstat(&FamilySpec::Bernoulli, &float_prior, 6, k as f64).unwrap();
            for (a, b) in e.weights.to_f64().iter().zip(f.weights.to_f64()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn marginal_examples() {
        let b = FamilySpec::Bernoulli;
        let m = marginal_suffstat_logpmf(&b, &Prior::Named(NamedPrior::Uniform01), 7, 3.0).unwrap();
        assert!((m - (1.0f64 / 8.0).ln()).abs() < 1e-15);
        let m = marginal_suffstat_logpmf(&b, &Prior::Atoms(half_one()), 1, 1.0).unwrap();
        assert!((m - 0.75f64.ln()).abs() < 1e-15);
        let e = FamilySpec::Exponential;
        let m = marginal_suffstat_logpmf(&e, &Prior::Named(NamedPrior::Exp { lambda: 1.0 }), 1, 1.0).unwrap();
        assert!((m - 0.25f64.ln()).abs() < 1e-15);
        let err = marginal_suffstat_logpmf(&e, &Prior::Named(NamedPrior::StdNormal), 1, 1.0).unwrap_err();
        assert!(matches!(err, Error::UnsupportedConjugacy { .. }));
        assert!(err.to_string().contains("unsupported conjugacy"));
    }

    #[test]
    fn named_marginals_normalize() {
        let n = 6u64;
        let beta = Prior::Named(NamedPrior::Beta { a: 2.5, b: 0.7 });
        let total: f64 = (0..=n).map(|k| marginal_suffstat_logpmf(&FamilySpec::Bernoulli, &beta, n, k as f64).unwrap().exp()).sum();
        assert!((total - 1.0).abs() < 1e-13);
        let pois = Prior::Named(NamedPrior::Exp { lambda: 0.8 });
        let total: f64 = (0..2000).map(|k| marginal_suffstat_logpmf(&FamilySpec::Poisson, &pois, n, k as f64).unwrap().exp()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        use crate::quadrature::{integrate, Domain, QuadOptions};
        let opts = QuadOptions { abs_tol: 1e-13, ..Default::default() };
        let fam = FamilySpec::normal(1.5).unwrap();
        let nrm = Prior::Named(NamedPrior::StdNormal);
        let total = integrate(|u| marginal_suffstat_logpmf(&fam, &nrm, n, u).unwrap().exp(), Domain::Real { center: 0.0, scale: 7.0 }, opts).unwrap();
        assert!((total.value - 1.0).abs() < 1e-11);
        let ex = Prior::Named(NamedPrior::Exp { lambda: 2.0 });
        let total = integrate(|u| marginal_suffstat_logpmf(&FamilySpec::Exponential, &ex, n, u).unwrap().exp(), Domain::UpperInfinite { a: 0.0, scale: 6.0 }, opts).unwrap();
        assert!((total.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn beta_binomial_exact_matches_float() {
        let (a, b) = (rat(7, 1), rat(1, 1));
        for k in 0..=5u64 {
            let e = exact::to_f64(&NamedPrior::beta_binomial_exact(&a, &b, 5, k));
            let f = marginal_suffstat_logpmf(&FamilySpec::Bernoulli, &Prior::Named(NamedPrior::Beta { a: 7.0, b: 1.0 }), 5, k as f64).unwrap().exp();
            assert!((e - f).abs() < 1e-14);
        }
        let total: Rational = (0..=5u64).map(|k| NamedPrior::beta_binomial_exact(&a, &b, 5, k)).sum();
        assert!(total.is_one());
    }

    #[test]
    fn beta_density_exact() {
        let p = NamedPrior::Beta { a: 7.0, b: 1.0 };
        assert_eq!(p.density_exact(&rat(3, 4)).unwrap(), rat(7 * 729, 4096));
        assert!((p.density(0.75) - 7.0 * 0.75f64.powi(6)).abs() < 1e-13);
        assert_eq!(NamedPrior::Beta { a: 2.5, b: 1.0 }.density_exact(&rat(1, 2)), None);
        assert_eq!(NamedPrior::Beta { a: 2.0, b: 3.0 }.density_exact(&rat(1, 2)).unwrap(), rat(3, 2));
    }

    #[test]
    fn invalid_priors() {
        assert!(DiscretePrior::from_rationals(&[(rat(1, 2), rat(1, 2))]).is_err());
        assert!(DiscretePrior::from_rationals(&[(rat(1, 2), rat(3, 2)), (rat(1, 3), rat(-1, 2))]).is_err());
        assert!(DiscretePrior::from_rationals(&[(rat(1, 2), rat(1, 2)), (rat(1, 2), rat(1, 2))]).is_err());
        let p = atoms(&[((3, 2), (1, 1))]);
        assert!(p.validate_for(&FamilySpec::Bernoulli).is_err());
        assert!(Prior::Named(NamedPrior::StdNormal).validate_for(&FamilySpec::Exponential).is_err());
        assert!(Prior::Named(NamedPrior::Uniform01).validate_for(&FamilySpec::Exponential).is_ok());
    }

    #[test]
    fn prior_json_roundtrip() {
        let v: serde_json::Value = serde_json::from_str(
            r#"{"type":"atoms","atoms":[{"theta":0.5,"weight":"4100/5001"},{"theta":"13/20","weight":"1/5001"},{"theta":0.85,"weight":"900/5001"}]}"#,
        )
        .unwrap();
        let p = Prior::from_json(&v).unwrap();
        match &p {
            Prior::Atoms(d) => {
                assert_eq!(d.atoms()[1].theta, Value::Exact(rat(13, 20)));
                assert_eq!(d.atoms()[2].theta, Value::Exact(rat(17, 20)));
            }
            _ => panic!(),
        }
        let back = Prior::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let beta = Prior::from_json(&serde_json::json!({"type":"beta","a":7,"b":1})).unwrap();
        assert_eq!(beta, Prior::Named(NamedPrior::Beta { a: 7.0, b: 1.0 }));
        assert!(Prior::from_json(&serde_json::json!({"type":"beta","a":7})).is_err());
        assert!(Prior::from_json(&serde_json::json!({"type":"uniform01","lambda":2})).is_err());
        assert!(Prior::from_json(&serde_json::json!({"type":"cauchy"})).is_err());
    }
}
