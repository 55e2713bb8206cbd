//! Exact order relations for Bernoulli observations with a discrete prior.
//!
//! Every law here is the distribution of a posterior `q_n^θ0`, which takes at
//! most `n+1` values because it depends on the data only through the number
//! of successes. Laws are therefore built by enumerating `k = 0..=n`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{self, binomial, format_rational, Rational, Value};
use crate::families::{bernoulli_path_prob_exact, FamilySpec};
use crate::priors::{mean_parameter, Atom, DiscretePrior, PosteriorVector, Weights};

/// A distribution on finitely many rational points.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLaw {
    support: Vec<Rational>,
    probs: Vec<Rational>,
}

impl FiniteLaw {
    /// Build from `(value, probability)` pairs; equal values are merged.
    pub fn new(pairs: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut pairs: Vec<(Rational, Rational)> = pairs.into_iter().map(|(t, p)| (exact::reduce(&t), p)).collect();
        if pairs.iter().any(|(_, p)| p.is_negative()) {
            return Err(domain("law probabilities must be >= 0"));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut support: Vec<Rational> = Vec::new();
        let mut probs: Vec<Rational> = Vec::new();
        for (t, p) in pairs {
            if support.last() == Some(&t) {
                let last = probs.last_mut().expect("parallel vectors");
                *last = &*last + p;
            } else {
                support.push(t);
                probs.push(p);
            }
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(domain(format!("law probabilities sum to {}, not 1", format_rational(&total))));
        }
        Ok(FiniteLaw { support, probs })
    }

    pub fn support(&self) -> &[Rational] {
        &self.support
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob_of(&self, t: &Rational) -> Rational {
        match self.support.binary_search(t) {
            Ok(i) => self.probs[i].clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn mean(&self) -> Rational {
        self.support.iter().zip(&self.probs).map(|(t, p)| t * p).sum()
    }
}

/// `hi ≥_lr lo`: `P(hi = t′)P(lo = t) ≥ P(hi = t)P(lo = t′)` for all `t′ > t`
/// on the union of the supports.
pub fn lr_dominates(hi: &FiniteLaw, lo: &FiniteLaw) -> bool {
    let mut points: Vec<Rational> = hi.support.iter().chain(&lo.support).cloned().collect();
    points.sort();
    points.dedup();
    let ph: Vec<Rational> = points.iter().map(|t| hi.prob_of(t)).collect();
    let pl: Vec<Rational> = points.iter().map(|t| lo.prob_of(t)).collect();
    (0..points.len()).all(|i| (i + 1..points.len()).all(|j| &ph[j] * &pl[i] >= &ph[i] * &pl[j]))
}

/// Strict dominance: dominates and the laws differ.
pub fn lr_dominates_strictly(hi: &FiniteLaw, lo: &FiniteLaw) -> bool {
    hi != lo && lr_dominates(hi, lo)
}

fn check_unit(t: &Rational, what: &str) -> Result<()> {
    if t.is_negative() || t > &Rational::one() {
        return Err(domain(format!("{what} = {} outside [0, 1]", format_rational(t))));
    }
    Ok(())
}

/// `V(y) = θ0θ1/y + (1−θ0)(1−θ1)/(1−y)`, exact.
pub fn v_function_exact(y: &Rational, theta0: &Rational, theta1: &Rational) -> Result<Rational> {
    check_unit(theta0, "theta0")?;
    check_unit(theta1, "theta1")?;
    let one = Rational::one();
    if !(y.is_positive() && y < &one) {
        return Err(domain(format!("V needs y in (0, 1), got {}", format_rational(y))));
    }
    Ok(theta0 * theta1 / y + (&one - theta0) * (&one - theta1) / (&one - y))
}

/// `V(y)` in floating point.
pub fn v_function(y: f64, theta0: f64, theta1: f64) -> Result<f64> {
    for (t, what) in [(theta0, "theta0"), (theta1, "theta1")] {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("{what} = {t} outside [0, 1]")));
        }
    }
    if !(y > 0.0 && y < 1.0) {
        return Err(domain(format!("V needs y in (0, 1), got {y}")));
    }
    Ok(theta0 * theta1 / y + (1.0 - theta0) * (1.0 - theta1) / (1.0 - y))
}

fn exact_posterior(post: &PosteriorVector) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let thetas = post
        .thetas
        .iter()
        .map(|t| t.as_exact().cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Unsupported("exact order checks need rational atoms".into()))?;
    let Weights::Exact(w) = &post.weights else {
        return Err(Error::Unsupported("exact order checks need rational weights".into()));
    };
    Ok((thetas, w.clone()))
}

/// `E_θ1[q_{n+1}^θ0 | s_n] = q_n^θ0 · V(θ̄_n)`.
pub fn one_step_expected_posterior(family: &FamilySpec, post: &PosteriorVector, theta0: &Value, theta1: &Value) -> Result<Value> {
    if !matches!(family, FamilySpec::Bernoulli) {
        return Err(Error::Unsupported(format!("one-step criterion is Bernoulli only, got {}", family.name())));
    }
    let q = post.weight_of(theta0).ok_or_else(|| Error::NotAnAtom(theta0.to_string()))?;
    let bar = mean_parameter(post);
    match (&q, &bar, theta0.as_exact(), theta1.as_exact()) {
        (Value::Exact(q), Value::Exact(bar), Some(t0), Some(t1)) => {
            // θ̄ ∈ {0, 1} means the posterior sits on that single atom
            if bar.is_zero() || bar.is_one() {
                check_unit(t1, "theta1")?;
                return Ok(Value::Exact(q.clone()));
            }
            Ok(Value::Exact(q * v_function_exact(bar, t0, t1)?))
        }
        _ => {
            let (q, bar) = (q.to_f64(), bar.to_f64());
            if bar <= 0.0 || bar >= 1.0 {
                return Ok(Value::Float(q));
            }
            Ok(Value::Float(q * v_function(bar, theta0.to_f64(), theta1.to_f64())?))
        }
    }
}

/// The same conditional expectation by direct enumeration of the next outcome.
pub fn one_step_by_enumeration(post: &PosteriorVector, theta0: &Rational, theta1: &Rational) -> Result<Rational> {
    let (thetas, w) = exact_posterior(post)?;
    let i0 = thetas.iter().position(|t| t == theta0).ok_or_else(|| Error::NotAnAtom(format_rational(theta0)))?;
    let one = Rational::one();
    let mut acc = Rational::zero();
    for x in [0u8, 1] {
        let lik = |t: &Rational| if x == 1 { t.clone() } else { &one - t };
        let joint: Vec<Rational> = thetas.iter().zip(&w).map(|(t, q)| q * lik(t)).collect();
        let total: Rational = joint.iter().sum();
        let p1 = lik(theta1);
        if total.is_zero() || p1.is_zero() {
            continue;
        }
        acc += p1 * &joint[i0] / total;
    }
    Ok(acc)
}

/// Position of `E_θ1[q^θ0]` relative to `π(θ0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Below,
    Equal,
    Above,
}

impl From<Ordering> for Direction {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Direction::Below,
            Ordering::Equal => Direction::Equal,
            Ordering::Greater => Direction::Above,
        }
    }
}

/// Result of the single-observation prior criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorCriterion {
    pub expected: String,
    pub prior_mass: String,
    pub theta_bar: String,
    /// Direction of `E_θ1[q^θ0]` relative to `π(θ0)` predicted from `θ̄`.
    pub predicted: Direction,
    /// Direction actually observed, by exact comparison.
    pub actual: Direction,
}

impl PriorCriterion {
    pub fn holds(&self) -> bool {
        self.predicted == self.actual
    }
}

/// `E_θ1[q^θ0] = π(θ0)·V(θ̄)` after one observation, and the direction
/// predicted by where `θ̄` sits: below `π(θ0)` iff `θ̄` lies between `θ0`
/// and `θ1`, with equality iff `θ̄` equals one of them.
pub fn check_prior_criterion(prior: &DiscretePrior, theta0: &Rational, theta1: &Rational) -> Result<PriorCriterion> {
    let expected = expected_posterior(prior, theta0, theta1, 1)?;
    let mass = prior
        .weight_of(&Value::Exact(theta0.clone()))
        .ok_or_else(|| Error::NotAnAtom(format_rational(theta0)))?
        .clone();
    let bar = prior
        .mean()
        .as_exact()
        .cloned()
        .ok_or_else(|| Error::Unsupported("criterion needs rational atoms".into()))?;
    let (lo, hi) = if theta0 <= theta1 { (theta0, theta1) } else { (theta1, theta0) };
    let predicted = if &bar == theta0 || &bar == theta1 {
        Ordering::Equal
    } else if lo < &bar && &bar < hi {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    let actual = exact::cmp_rational(&expected, &mass);
    Ok(PriorCriterion {
        expected: format_rational(&expected),
        prior_mass: format_rational(&mass),
        theta_bar: format_rational(&bar),
        predicted: predicted.into(),
        actual: actual.into(),
    })
}

fn exact_atoms(prior: &DiscretePrior) -> Result<(Vec<Rational>, Vec<Rational>)> {
    prior.validate_for(&FamilySpec::Bernoulli)?;
    let thetas = prior
        .atoms()
        .iter()
        .map(|a| a.theta.as_exact().cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Unsupported("exact order checks need rational atoms".into()))?;
    let weights = prior.atoms().iter().map(|a| a.weight.clone()).collect();
    Ok((thetas, weights))
}

/// Law of `q_n^θ0` when data come from `θ_gen`, or from the prior
/// predictive `P` when `gen` is `None`.
pub fn posterior_law(prior: &DiscretePrior, theta0: &Rational, gen: Option<&Rational>, n: u64) -> Result<FiniteLaw> {
    let (thetas, weights) = exact_atoms(prior)?;
    let i0 = thetas.iter().position(|t| t == theta0).ok_or_else(|| Error::NotAnAtom(format_rational(theta0)))?;
    if let Some(g) = gen {
        check_unit(g, "generating theta")?;
    }
    let mut pairs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let c = Rational::from_integer(binomial(n, k).into());
        let joint: Vec<Rational> = thetas.iter().zip(&weights).map(|(t, w)| w * bernoulli_path_prob_exact(t, n, k)).collect();
        let marginal: Rational = joint.iter().sum();
        let p = match gen {
            Some(g) => &c * bernoulli_path_prob_exact(g, n, k),
            None => &c * &marginal,
        };
        if p.is_zero() {
            continue;
        }
        pairs.push((&joint[i0] / &marginal, p));
    }
    FiniteLaw::new(pairs)
}

/// `E_θ1[q_n^θ0]`, exact.
pub fn expected_posterior(prior: &DiscretePrior, theta0: &Rational, theta1: &Rational, n: u64) -> Result<Rational> {
    Ok(posterior_law(prior, theta0, Some(theta1), n)?.mean())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// `π(θ1)·ψ_{θ0,θ1}(n)` against `π(θ0)·ψ_{θ1,θ0}(n)`.
pub fn symmetry_check(prior: &DiscretePrior, theta0: &Rational, theta1: &Rational, n: u64) -> Result<SymmetryCheck> {
    let mass = |t: &Rational| {
        prior
            .weight_of(&Value::Exact(t.clone()))
            .cloned()
            .ok_or_else(|| Error::NotAnAtom(format_rational(t)))
    };
    let lhs = mass(theta1)? * expected_posterior(prior, theta0, theta1, n)?;
    let rhs = mass(theta0)? * expected_posterior(prior, theta1, theta0, n)?;
    Ok(SymmetryCheck { equal: lhs == rhs, lhs: format_rational(&lhs), rhs: format_rational(&rhs) })
}

/// A prior with three atoms under which `L_γ(q_n^α)` strictly lr-dominates
/// `L(q_n^α)`, the reverse of the two-atom ordering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReversalWitness {
    pub atoms: Vec<String>,
    pub weights: Vec<String>,
    pub alpha: String,
    pub gamma: String,
    pub n: u64,
    pub attempts: u64,
}

fn random_unit(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    exact::rat(rng.gen_range(1..den), den)
}

/// Random rational prior on `atoms` distinct points of `(0, 1)`.
pub fn random_prior(rng: &mut ChaCha8Rng, atoms: usize) -> DiscretePrior {
    let mut thetas: Vec<Rational> = Vec::new();
    while thetas.len() < atoms {
        let t = random_unit(rng, 20);
        if !thetas.contains(&t) {
            thetas.push(t);
        }
    }
    thetas.sort();
    let raw: Vec<i64> = (0..atoms).map(|_| rng.gen_range(1..10)).collect();
    let total: i64 = raw.iter().sum();
    let atoms = thetas
        .into_iter()
        .zip(raw)
        .map(|(t, w)| Atom { theta: Value::Exact(t), weight: exact::rat(w, total) })
        .collect();
    DiscretePrior::new(atoms).expect("weights sum to one by construction")
}

/// Seeded search for a [`ReversalWitness`] over random 3-atom priors and
/// `n ∈ 1..=3`.
pub fn find_reversal_witness(seed: u64, max_attempts: u64) -> Option<ReversalWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let prior = random_prior(&mut rng, 3);
        let (thetas, weights) = exact_atoms(&prior).ok()?;
        let a = rng.gen_range(0..3);
        let g = (a + rng.gen_range(1..3)) % 3;
        let n = rng.gen_range(1..=3);
        let (alpha, gamma) = (&thetas[a], &thetas[g]);
        let under_gamma = posterior_law(&prior, alpha, Some(gamma), n).ok()?;
        let under_p = posterior_law(&prior, alpha, None, n).ok()?;
        if lr_dominates_strictly(&under_gamma, &under_p) {
            return Some(ReversalWitness {
                atoms: thetas.iter().map(format_rational).collect(),
                weights: weights.iter().map(format_rational).collect(),
                alpha: format_rational(alpha),
                gamma: format_rational(gamma),
                n,
                attempts: attempt,
            });
        }
    }
    None
}
