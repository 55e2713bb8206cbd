use num_traits::Zero;
use posterior_dynamics::exact::{cmp_rational, rat, Rational};
use posterior_dynamics::priors::Atom;
use posterior_dynamics::psi::{compute_psi, psi_bernoulli_finite, psi_bruteforce, NumericMode};
use posterior_dynamics::{DiscretePrior, FamilySpec, NamedPrior, Prior, Value};
use proptest::prelude::*;
use std::cmp::Ordering;

fn prior_strategy() -> impl Strategy<Value = DiscretePrior> {
    prop::collection::btree_map(0i64..=20, 1i64..=9, 1..=4).prop_map(|m| {
        let total: i64 = m.values().sum();
        let atoms = m
            .into_iter()
            .map(|(t, w)| Atom { theta: Value::Exact(rat(t, 20)), weight: rat(w, total) })
            .collect();
        DiscretePrior::new(atoms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sufficient_statistic_sum_matches_enumeration(prior in prior_strategy(), pick in 0usize..4, t1 in 0i64..=20, n in 1u32..=8) {
        let t0 = prior.atoms()[pick % prior.len()].theta.clone();
        let t1 = Value::Exact(rat(t1, 20));
        let seq = psi_bernoulli_finite(&prior, &t0, &t1, n as u64, true).unwrap();
        let last = &seq.exact.as_ref().unwrap()[n as usize - 1];
        prop_assert_eq!(cmp_rational(last, &psi_bruteforce(&prior, &t0, &t1, n).unwrap()), Ordering::Equal);
    }

    #[test]
    fn exact_and_float_routes_agree(prior in prior_strategy(), pick in 0usize..4, t1 in 1i64..20) {
        let t0 = prior.atoms()[pick % prior.len()].theta.clone();
        let t1 = Value::Exact(rat(t1, 20));
        let e = psi_bernoulli_finite(&prior, &t0, &t1, 30, true).unwrap();
        let f = psi_bernoulli_finite(&prior, &t0, &t1, 30, false).unwrap();
        for i in 0..30 {
            let (a, b) = (e.psi_f64(i), f.psi_f64(i));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "n {}: {} vs {}", i + 1, a, b);
        }
    }

    #[test]
    fn values_are_probabilities(prior in prior_strategy(), pick in 0usize..4, t1 in 0i64..=20) {
        let t0 = prior.atoms()[pick % prior.len()].theta.clone();
        let seq = psi_bernoulli_finite(&prior, &t0, &Value::Exact(rat(t1, 20)), 12, true).unwrap();
        for v in seq.exact.unwrap() {
            prop_assert!(v >= Rational::zero() && v <= rat(1, 1));
        }
    }
}

#[test]
fn auto_mode_switches_to_floats_for_long_horizons() {
    let prior = Prior::Atoms(posterior_dynamics::priors::atoms(&[((1, 4), (1, 2)), ((3, 4), (1, 2))]));
    let (a, b) = (Value::Exact(rat(1, 4)), Value::Exact(rat(3, 4)));
    assert!(compute_psi(&FamilySpec::Bernoulli, &prior, &a, &b, 50, NumericMode::Auto).unwrap().is_exact());
    assert!(!compute_psi(&FamilySpec::Bernoulli, &prior, &a, &b, 1500, NumericMode::Auto).unwrap().is_exact());
}

#[test]
fn continuous_pairs_without_closed_form_use_quadrature() {
    let prior = Prior::Named(NamedPrior::beta(2.0, 3.0).unwrap());
    let seq = compute_psi(&FamilySpec::Bernoulli, &prior, &Value::Float(0.4), &Value::Float(0.6), 5, NumericMode::Float).unwrap();
    assert_eq!(seq.len(), 5);
    let normal = FamilySpec::normal(1.0).unwrap();
    let q = compute_psi(&normal, &Prior::Named(NamedPrior::beta(2.0, 2.0).unwrap()), &Value::Float(0.5), &Value::Float(0.5), 3, NumericMode::Auto);
    assert!(q.is_err() || q.unwrap().len() == 3);
}

#[test]
fn horizon_zero_is_rejected() {
    let prior = Prior::Named(NamedPrior::Uniform01);
    assert!(compute_psi(&FamilySpec::Bernoulli, &prior, &Value::Float(0.5), &Value::Float(0.5), 0, NumericMode::Auto).is_err());
}
