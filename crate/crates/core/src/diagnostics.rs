//! Shape analysis of a [`PsiSequence`]: modes, log-concavity, eventual
//! decrease, agreement with the √n·wⁿ asymptotics, and the continuous-`n`
//! critical points of the Normal–Normal closed form.
//!
//! Conventions used throughout:
//!
//! * A mode is an index `n` with `ψ(n) > ψ(n−1)` and `ψ(n) ≥ ψ(n+1)`. A flat
//!   run counts once, at its first index, and only if the run is left by a
//!   fall. The first index counts when the sequence starts by falling (or is
//!   flat throughout); the last index never counts.
//! * A log-concavity violation at `n` means `ψ(n)² < ψ(n−1)ψ(n+1)`.
//! * Exact sequences are compared exactly. Float sequences without a
//!   cancellation-free closed form treat relative differences below
//!   [`FLOAT_TIE_TOLERANCE`](crate::psi::FLOAT_TIE_TOLERANCE) as ties.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::Value;
use crate::families::FamilySpec;
use crate::priors::{NamedPrior, Prior};
use crate::psi::PsiSequence;

/// Summary of one sequence. All indices are values of `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub first_n: u64,
    pub horizon: u64,
    pub method: &'static str,
    pub repr: &'static str,
    pub modes: Vec<u64>,
    pub minima: Vec<u64>,
    pub log_concavity_violations: Vec<u64>,
    /// Last `n` of a log-convex prefix. For Normal–Normal this is the
    /// continuous root of `γ`; otherwise the end of a run of violations
    /// that starts at the first interior index.
    pub log_convex_prefix_end: Option<u64>,
    pub eventual_decrease_index: Option<u64>,
    pub asymptotic_ratios: Vec<AsymptoticRatio>,
    pub unimodal_if_log_concave: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticRatio {
    pub n: u64,
    pub ratio: f64,
}

/// Scenario context that enables the model-specific parts of the report.
#[derive(Clone, Copy, Debug)]
pub struct Context<'a> {
    pub family: &'a FamilySpec,
    pub prior: &'a Prior,
    pub theta0: &'a Value,
    pub theta1: &'a Value,
}

/// Local maxima under the mode convention.
pub fn detect_modes(seq: &PsiSequence) -> Vec<u64> {
    extrema(seq, Ordering::Greater)
}

/// Interior local minima, mirrored convention (first index excluded).
pub fn detect_minima(seq: &PsiSequence) -> Vec<u64> {
    extrema(seq, Ordering::Less)
        .into_iter()
        .filter(|&n| n != seq.first_n)
        .collect()
}

fn extrema(seq: &PsiSequence, rise: Ordering) -> Vec<u64> {
    let len = seq.len();
    if len == 0 {
        return Vec::new();
    }
    let steps: Vec<Ordering> = (0..len - 1).map(|i| seq.step_cmp(i)).collect();
    let mut out = Vec::new();
    // the first index behaves as if entered by a rise
    let mut entered = vec![true];
    entered.extend(steps.iter().map(|&s| s == rise));
    let mut i = 0;
    while i < len {
        if !entered[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < len - 1 && steps[j] == Ordering::Equal {
            j += 1;
        }
        let falls_after = j < len - 1 && steps[j] == rise.reverse();
        let flat_everywhere = i == 0 && j == len - 1 && len > 1;
        if falls_after || (flat_everywhere && rise == Ordering::Greater) {
            out.push(seq.n_at(i));
        }
        i = j.max(i + 1);
    }
    out
}

/// All `n` in the interior with `ψ(n)² < ψ(n−1)ψ(n+1)`.
pub fn logconcavity_scan(seq: &PsiSequence) -> Vec<u64> {
    if seq.len() < 3 {
        return Vec::new();
    }
    (1..seq.len() - 1)
        .filter(|&i| seq.curvature_cmp(i) == Ordering::Greater)
        .map(|i| seq.n_at(i))
        .collect()
}

/// Smallest `n` such that `ψ` strictly decreases on `[n, horizon]`.
/// `None` when the last step is not a strict decrease.
pub fn eventual_decrease_index(seq: &PsiSequence) -> Option<u64> {
    let len = seq.len();
    if len < 2 {
        return None;
    }
    let mut i = len - 1;
    while i > 0 && seq.step_cmp(i - 1) == Ordering::Less {
        i -= 1;
    }
    (i < len - 1).then(|| seq.n_at(i))
}

/// `J(θ) = √(I(θ)/(2π))`.
pub fn j_constant(family: &FamilySpec, theta: f64) -> Result<f64> {
    Ok((family.fisher_information(theta)? / (2.0 * PI)).sqrt())
}

/// `ψ(n) ~ C·√n·wⁿ` with `C = (π(θ0)/π(θ2))·√I(θ2)/(2√π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticForm {
    pub theta2: f64,
    pub w: f64,
    pub ln_constant: f64,
    pub ln_w: f64,
}

impl AsymptoticForm {
    pub fn new(family: &FamilySpec, prior: &Prior, theta0: f64, theta1: f64) -> Result<Self> {
        let Prior::Named(named) = prior else {
            return Err(Error::DiscretePrior);
        };
        prior.validate_for(family)?;
        let (theta2, w) = family.theta2_and_w(theta0, theta1)?;
        let ln_w = match family {
            // w underflows slowly enough, but its log is available exactly
            FamilySpec::Normal { sigma } => -(theta0 - theta1).powi(2) / (4.0 * sigma * sigma),
            _ => w.ln(),
        };
        let (p0, p2) = (named.ln_density(theta0), named.ln_density(theta2));
        if !p0.is_finite() || !p2.is_finite() {
            return Err(domain(format!(
                "prior {} needs positive density at theta0 = {theta0} and theta2 = {theta2}",
                named.name()
            )));
        }
        let ln_constant = p0 - p2 + 0.5 * family.fisher_information(theta2)?.ln() - (2.0 * PI.sqrt()).ln();
        Ok(AsymptoticForm { theta2, w, ln_constant, ln_w })
    }

    pub fn ln_value(&self, n: u64) -> f64 {
        let nf = n as f64;
        self.ln_constant + 0.5 * nf.ln() + nf * self.ln_w
    }
}

/// The asymptotic equivalent of `ψ(n)`.
pub fn asymptotic_psi(family: &FamilySpec, prior: &Prior, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
    Ok(AsymptoticForm::new(family, prior, theta0, theta1)?.ln_value(n).exp())
}

/// `ψ(n)/ψ_asym(n)` at roughly logarithmically spaced `n`, plus the horizon.
pub fn asymptotic_ratios(seq: &PsiSequence, form: &AsymptoticForm) -> Vec<AsymptoticRatio> {
    let mut ns: Vec<u64> = Vec::new();
    let mut decade = 1u64;
    while decade <= seq.horizon() {
        for m in [1u64, 2, 5] {
            let n = m * decade;
            if n >= seq.first_n && n <= seq.horizon() {
                ns.push(n);
            }
        }
        decade = decade.saturating_mul(10);
    }
    if ns.last() != Some(&seq.horizon()) && seq.horizon() >= 1 {
        ns.push(seq.horizon());
    }
    ns.into_iter()
        .filter_map(|n| seq.index_of(n).map(|i| (n, i)))
        .filter(|&(n, _)| n >= 1)
        .map(|(n, i)| AsymptoticRatio { n, ratio: (seq.ln_psi[i] - form.ln_value(n)).exp() })
        .collect()
}

/// `γ(n)` whose sign is that of `ξ″(n)` for `ξ = ln ψ_{θ,θ}` in the
/// Normal–Normal model.
pub fn normal_gamma(n: f64, theta: f64, sigma: f64) -> f64 {
    let s = sigma * sigma;
    (s * s - 2.0 * n * n) * (2.0 * n + s) / ((n + s) * (n + s)) - 4.0 * theta * theta * s
}

/// `ξ′(n)` for the Normal–Normal diagonal closed form.
pub fn normal_xi_prime(n: f64, theta: f64, sigma: f64) -> f64 {
    let s = sigma * sigma;
    let d = 4.0 * n + 2.0 * s;
    // 1/(n+s) − 1/(2n+s), written without cancellation
    n / ((n + s) * (2.0 * n + s)) + 4.0 * theta * theta * s / (d * d)
}

const ROOT_LO: f64 = 1e-6;
const ROOT_HI: f64 = 1e9;

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-12 * mid {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Continuous `n₀ > 0` where `γ` changes sign, or `None` when `γ < 0`
/// throughout (log-concave from the start).
pub fn normal_log_convex_end(theta: f64, sigma: f64) -> Option<f64> {
    let g = |n: f64| normal_gamma(n, theta, sigma);
    (g(ROOT_LO) > 0.0).then(|| bisect(g, ROOT_LO, ROOT_HI))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub n: f64,
    pub kind: CriticalKind,
}

/// Roots of `ξ′(n) + ln w = 0` on `[10⁻⁶, 10⁹]`, at most two.
///
/// `ξ′` increases up to the `γ` root and decreases after it, so each side
/// holds at most one root: a minimum on the convex side, a maximum on the
/// concave side.
pub fn normal_critical_points(theta0: f64, theta1: f64, sigma: f64) -> Result<Vec<CriticalPoint>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain(format!("sigma must be > 0, got {sigma}")));
    }
    let theta = 0.5 * (theta0 + theta1);
    let ln_w = -(theta0 - theta1).powi(2) / (4.0 * sigma * sigma);
    let f = |n: f64| normal_xi_prime(n, theta, sigma) + ln_w;
    let mut out = Vec::new();
    let split = normal_log_convex_end(theta, sigma).unwrap_or(ROOT_LO);
    if split > ROOT_LO && f(ROOT_LO) < 0.0 && f(split) > 0.0 {
        out.push(CriticalPoint { n: bisect(f, ROOT_LO, split), kind: CriticalKind::Min });
    }
    if f(split) > 0.0 && f(ROOT_HI) < 0.0 {
        out.push(CriticalPoint { n: bisect(f, split, ROOT_HI), kind: CriticalKind::Max });
    }
    Ok(out)
}

/// Full report. `ctx` enables the asymptotic and Normal-specific fields.
pub fn analyze(seq: &PsiSequence, ctx: Option<Context<'_>>) -> DiagnosticsReport {
    let modes = detect_modes(seq);
    let violations = logconcavity_scan(seq);
    let interior_modes = modes.iter().filter(|&&n| n != seq.first_n).count();
    let unimodal_if_log_concave = !violations.is_empty() || interior_modes <= 1;
    debug_assert!(unimodal_if_log_concave, "log-concave sequence with several interior modes");

    let mut prefix_end = None;
    let mut ratios = Vec::new();
    let mut normal = false;
    if let Some(c) = ctx {
        if let (FamilySpec::Normal { sigma }, Prior::Named(NamedPrior::StdNormal)) = (c.family, c.prior) {
            normal = true;
            let theta = 0.5 * (c.theta0.to_f64() + c.theta1.to_f64());
            prefix_end = normal_log_convex_end(theta, *sigma).map(|n| n.floor() as u64);
        }
        if let Ok(form) = AsymptoticForm::new(c.family, c.prior, c.theta0.to_f64(), c.theta1.to_f64()) {
            ratios = asymptotic_ratios(seq, &form);
        }
    }
    if !normal && violations.first() == Some(&(seq.first_n + 1)) {
        let run = violations.windows(2).take_while(|w| w[1] == w[0] + 1).count();
        prefix_end = Some(violations[run]);
    }

    DiagnosticsReport {
        first_n: seq.first_n,
        horizon: seq.horizon(),
        method: seq.method.name(),
        repr: seq.repr(),
        minima: detect_minima(seq),
        modes,
        log_concavity_violations: violations,
        log_convex_prefix_end: prefix_end,
        eventual_decrease_index: eventual_decrease_index(seq),
        asymptotic_ratios: ratios,
        unimodal_if_log_concave,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::Method;

    fn from_values(v: &[f64]) -> PsiSequence {
        PsiSequence::from_ln(1, Method::LogSpaceSum, v.iter().map(|x| x.ln()).collect())
    }

    #[test]
    fn mode_convention() {
        assert_eq!(detect_modes(&from_values(&[5.0, 4.0, 3.0, 2.0])), vec![1]);
        assert_eq!(detect_modes(&from_values(&[1.0, 2.0, 3.0, 4.0])), Vec::<u64>::new());
        assert_eq!(detect_modes(&from_values(&[1.0, 3.0, 3.0, 3.0, 2.0])), vec![2]);
        assert_eq!(detect_modes(&from_values(&[1.0, 3.0, 3.0, 4.0, 2.0])), vec![4]);
        assert_eq!(detect_modes(&from_values(&[2.0, 2.0, 2.0])), vec![1]);
        assert_eq!(detect_modes(&from_values(&[3.0, 1.0, 2.0, 1.0, 5.0])), vec![1, 3]);
        assert_eq!(detect_minima(&from_values(&[3.0, 1.0, 2.0, 1.0, 5.0])), vec![2, 4]);
    }

    #[test]
    fn geometric_is_log_linear() {
        let v: Vec<f64> = (1..=50).map(|n| 3.0 * 0.9f64.powi(n)).collect();
        let s = from_values(&v);
        assert!(logconcavity_scan(&s).is_empty());
        assert_eq!(eventual_decrease_index(&s), Some(1));
        assert_eq!(detect_modes(&s), vec![1]);
    }

    #[test]
    fn increasing_never_decreases() {
        let s = from_values(&[1.0, 2.0, 3.0]);
        assert_eq!(eventual_decrease_index(&s), None);
    }

    #[test]
    fn critical_points_figure3() {
        let c = normal_critical_points(-1.0 / 3.0, 1.0 / 3.0, 100.0).unwrap();
        assert_eq!(c.len(), 2);
        let disc = (15000.0f64 * 15000.0 - 5e7).sqrt();
        assert_eq!(c[0].kind, CriticalKind::Min);
        assert!((c[0].n - (15000.0 - disc)).abs() < 1e-4);
        assert_eq!(c[1].kind, CriticalKind::Max);
        assert!((c[1].n - (15000.0 + disc)).abs() < 1e-4);
        assert!(normal_critical_points(0.2, 0.2, 100.0).unwrap().is_empty());
    }

    #[test]
    fn gamma_regimes() {
        // σ² = √2: γ(n) < 0 from n = 1 on
        assert!(normal_log_convex_end(0.0, 2f64.sqrt().sqrt()).unwrap() <= 1.0);
        assert!(normal_log_convex_end(0.5, 100.0).is_none());
        let n0 = normal_log_convex_end(0.0, 100.0).unwrap();
        assert!((n0 - 1e4 / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn asymptotic_constants() {
        let u = Prior::Named(NamedPrior::Uniform01);
        let v = asymptotic_psi(&FamilySpec::Bernoulli, &u, 0.5, 0.5, 1).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-15);
        let fam = FamilySpec::normal(2.0).unwrap();
        let v = asymptotic_psi(&fam, &Prior::Named(NamedPrior::StdNormal), 0.3, 0.3, 9).unwrap();
        assert!((v - 3.0 / (4.0 * PI.sqrt())).abs() < 1e-15);
        let d = Prior::Atoms(crate::priors::atoms(&[((1, 2), (1, 1))]));
        assert_eq!(asymptotic_psi(&FamilySpec::Bernoulli, &d, 0.5, 0.5, 1), Err(Error::DiscretePrior));
        assert!((j_constant(&FamilySpec::Bernoulli, 0.5).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-15);
    }
}
