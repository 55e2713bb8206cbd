//! Generic route: integrate (or sum) over the sufficient statistic,
//!
//! ```text
//! ψ(n) = ∫ π(θ0) p_θ0(u) p_θ1(u) / p(u) dν(u),
//! ```
//!
//! where `p(u)` is the prior predictive of `u_n`. When the prior has no
//! closed-form predictive, `p(u)` is itself a quadrature over `θ`.

use rayon::prelude::*;

use super::{Method, PsiSequence};
use crate::error::{domain, Error, Result};
use crate::exact::{self, Value};
use crate::families::FamilySpec;
use crate::logspace::{log_sum_exp, neumaier_sum};
use crate::priors::{atom_log_likelihood, marginal_suffstat_logpmf, NamedPrior, Prior};
use crate::quadrature::{integrate, Domain, QuadOptions, QuadResult};

fn ln_prior_at(prior: &Prior, theta0: f64) -> Result<f64> {
    match prior {
        Prior::Atoms(d) => d
            .weight_of(&Value::Float(theta0))
            .map(exact::ln)
            .ok_or_else(|| Error::NotAnAtom(theta0.to_string())),
        Prior::Named(p) => {
            let v = p.ln_density(theta0);
            if v == f64::NEG_INFINITY {
                return Err(domain(format!("theta0 = {theta0} outside the {} prior support", p.name())));
            }
            Ok(v)
        }
    }
}

/// `ln p(u_n = u)`, falling back to an inner quadrature over `θ`.
fn ln_marginal(family: &FamilySpec, prior: &Prior, n: u64, u: f64) -> Result<f64> {
    match marginal_suffstat_logpmf(family, prior, n, u) {
        Err(Error::UnsupportedConjugacy { .. }) => {}
        other => return other,
    }
    let Prior::Named(p) = prior else { unreachable!("discrete marginals are always available") };
    let nf = n as f64;
    let guess = match family {
        FamilySpec::Exponential => nf / u.max(1e-300),
        _ => u / nf,
    };
    let f = |t: f64| {
        let ll = atom_log_likelihood(family, t, n, u).unwrap_or(f64::NEG_INFINITY);
        (p.ln_density(t) + ll).exp()
    };
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_evals: 400_000 };
    let domain = match p {
        NamedPrior::Uniform01 | NamedPrior::Beta { .. } => Domain::Finite { a: 0.0, b: 1.0 },
        NamedPrior::Exp { .. } => Domain::UpperInfinite { a: 0.0, scale: guess.max(1e-3) },
        NamedPrior::StdNormal => Domain::Real { center: guess, scale: 1.0 },
    };
    let r = integrate(f, domain, opts)?;
    Ok(r.value.ln())
}

/// `ψ(n)` by summation or adaptive quadrature; returns the value and an
/// absolute error estimate.
pub fn psi_quadrature(family: &FamilySpec, prior: &Prior, theta0: f64, theta1: f64, n: u64, opts: QuadOptions) -> Result<QuadResult> {
    if n == 0 {
        return Err(domain("quadrature route needs n >= 1"));
    }
    prior.validate_for(family)?;
    if !matches!((family, prior), (FamilySpec::Bernoulli, Prior::Atoms(_))) {
        family.check_theta(theta0)?;
    }
    if !(matches!(family, FamilySpec::Bernoulli) && (0.0..=1.0).contains(&theta1)) {
        family.check_theta(theta1)?;
    }
    let ln_pi0 = ln_prior_at(prior, theta0)?;
    let ln_term = |u: f64| -> Result<f64> {
        let l0 = atom_log_likelihood(family, theta0, n, u)?;
        let l1 = atom_log_likelihood(family, theta1, n, u)?;
        if l0 == f64::NEG_INFINITY || l1 == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(ln_pi0 + l0 + l1 - ln_marginal(family, prior, n, u)?)
    };
    let nf = n as f64;
    match family {
        FamilySpec::Bernoulli => {
            let terms = (0..=n).map(|k| ln_term(k as f64)).collect::<Result<Vec<_>>>()?;
            Ok(QuadResult { value: log_sum_exp(&terms).exp(), error: 0.0, evaluations: n as usize + 1 })
        }
        FamilySpec::Poisson => {
            let peak = nf * theta0.max(theta1);
            let mut values = Vec::new();
            let mut u = 0.0;
            loop {
                let t = ln_term(u)?.exp();
                values.push(t);
                let total = neumaier_sum(values.iter().copied());
                if u > peak && t <= 1e-18 * total {
                    return Ok(QuadResult { value: total, error: t, evaluations: values.len() });
                }
                if values.len() > opts.max_evals {
                    return Err(Error::Quadrature { estimate: total, error: t, evaluations: values.len() });
                }
                u += 1.0;
            }
        }
        FamilySpec::Normal { sigma } => {
            // p_θ0·p_θ1 concentrates around n·(θ0+θ1)/2 with spread σ√(n/2)
            let domain = Domain::Real { center: nf * 0.5 * (theta0 + theta1), scale: 2.0 * sigma * nf.sqrt() };
            integrate(|u| ln_term(u).map(f64::exp).unwrap_or(f64::NAN), domain, opts)
        }
        FamilySpec::Exponential => {
            let domain = Domain::UpperInfinite { a: 0.0, scale: 2.0 * nf / (theta0 + theta1) };
            integrate(|u| ln_term(u).map(f64::exp).unwrap_or(f64::NAN), domain, opts)
        }
    }
}

/// `ψ(1..=horizon)` through [`psi_quadrature`], with per-value error estimates.
pub fn psi_quadrature_sequence(
    family: &FamilySpec,
    prior: &Prior,
    theta0: &Value,
    theta1: &Value,
    horizon: u64,
    opts: QuadOptions,
) -> Result<PsiSequence> {
    if let Prior::Atoms(d) = prior {
        if d.index_of(theta0).is_none() {
            return Err(Error::NotAnAtom(theta0.to_string()));
        }
    }
    let (t0, t1) = (theta0.to_f64(), theta1.to_f64());
    let results = (1..=horizon)
        .into_par_iter()
        .map(|n| psi_quadrature(family, prior, t0, t1, n, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut seq = PsiSequence::from_ln(1, Method::Quadrature, results.iter().map(|r| r.value.ln()).collect());
    seq.errors = Some(results.iter().map(|r| r.error).collect());
    Ok(seq)
}
