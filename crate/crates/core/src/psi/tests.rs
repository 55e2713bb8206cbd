use std::f64::consts::PI;

use super::*;
use crate::exact::rat;
use crate::priors::{atoms, DiscretePrior};
use crate::quadrature::QuadOptions;
use crate::specialfn::{bessel_k_half, q_n_of_rho};

fn ex(p: i64, q: i64) -> Value {
    Value::Exact(rat(p, q))
}

fn half_one() -> DiscretePrior {
    atoms(&[((1, 2), (1, 2)), ((1, 1), (1, 2))])
}

fn figure1() -> DiscretePrior {
    atoms(&[((1, 2), (4100, 5001)), ((13, 20), (1, 5001)), ((17, 20), (900, 5001))])
}

#[test]
fn finite_hand_example() {
    let s = psi_bernoulli_finite(&half_one(), &ex(1, 2), &ex(1, 2), 3, true).unwrap();
    assert_eq!(exact::reduce(&s.exact.as_ref().unwrap()[0]), rat(2, 3));
    let f = psi_bernoulli_finite(&half_one(), &ex(1, 2), &ex(1, 2), 3, false).unwrap();
    assert!((f.psi_f64(0) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(psi_bruteforce(&half_one(), &ex(1, 2), &ex(1, 2), 1).unwrap(), rat(2, 3));
}

#[test]
fn point_mass_is_constant_one() {
    let p = DiscretePrior::point_mass(ex(3, 10));
    let s = psi_bernoulli_finite(&p, &ex(3, 10), &ex(7, 10), 20, true).unwrap();
    assert!(s.exact.unwrap().iter().all(|v| exact::reduce(v) == rat(1, 1)));
    assert_eq!(psi_bruteforce(&p, &ex(3, 10), &ex(7, 10), 6).unwrap(), rat(1, 1));
}

#[test]
fn not_an_atom_and_cap() {
    let e = psi_bernoulli_finite(&half_one(), &ex(1, 3), &ex(1, 2), 3, true).unwrap_err();
    assert!(matches!(e, Error::NotAnAtom(_)));
    let e = psi_bruteforce(&half_one(), &ex(1, 2), &ex(1, 2), 15).unwrap_err();
    assert_eq!(e, Error::EnumerationCap { n: 15, cap: 14 });
    assert!(e.to_string().contains("n <= 14"));
}

#[test]
fn finite_exact_matches_bruteforce_on_figure1() {
    let s = psi_bernoulli_finite(&figure1(), &ex(1, 2), &ex(13, 20), 12, true).unwrap();
    let v = s.exact.unwrap();
    for n in 1..=12u32 {
        let b = psi_bruteforce(&figure1(), &ex(1, 2), &ex(13, 20), n).unwrap();
        assert_eq!(exact::reduce(&v[n as usize - 1]), b, "n = {n}");
    }
}

#[test]
fn exact_and_float_agree() {
    let e = psi_bernoulli_finite(&figure1(), &ex(1, 2), &ex(13, 20), 80, true).unwrap();
    let f = psi_bernoulli_finite(&figure1(), &ex(1, 2), &ex(13, 20), 80, false).unwrap();
    for i in 0..80 {
        let (a, b) = (e.psi_f64(i), f.psi_f64(i));
        assert!((a - b).abs() <= 1e-12 * a, "n = {}: {a} vs {b}", i + 1);
    }
}

#[test]
fn symmetry_exact() {
    let p = figure1();
    let a = psi_bernoulli_finite(&p, &ex(1, 2), &ex(17, 20), 30, true).unwrap().exact.unwrap();
    let b = psi_bernoulli_finite(&p, &ex(17, 20), &ex(1, 2), 30, true).unwrap().exact.unwrap();
    for (x, y) in a.iter().zip(&b) {
        let lhs = rat(900, 5001) * x;
        let rhs = rat(4100, 5001) * y;
        assert_eq!(exact::cmp_rational(&lhs, &rhs), std::cmp::Ordering::Equal);
    }
}

#[test]
fn uniform_examples() {
    let s = psi_bernoulli_uniform(&ex(1, 2), &ex(1, 2), 3, true).unwrap();
    let v: Vec<Rational> = s.exact.unwrap().iter().map(exact::reduce).collect();
    assert_eq!(v, vec![rat(1, 1), rat(9, 8), rat(5, 4)]);
    let f = psi_bernoulli_uniform(&Value::Float(0.5), &Value::Float(0.5), 40, true).unwrap();
    for n in 1..=40u64 {
        let exact_val = exact::to_f64(&(Rational::from_integer((n + 1).into())
            * Rational::new(exact::binomial(2 * n, n).into(), num_bigint::BigInt::from(4u32).pow(n as u32))));
        assert!((f.psi_f64(n as usize - 1) - exact_val).abs() < 1e-13 * exact_val);
    }
}

#[test]
fn uniform_float_matches_exact_off_diagonal() {
    let e = psi_bernoulli_uniform(&ex(1, 5), &ex(7, 10), 60, true).unwrap();
    let f = psi_bernoulli_uniform(&ex(1, 5), &ex(7, 10), 60, false).unwrap();
    for i in 0..60 {
        assert!((e.psi_f64(i) - f.psi_f64(i)).abs() <= 1e-12 * e.psi_f64(i));
    }
    // stable steps and curvature agree with plain differences
    let steps = f.ln_steps.as_ref().unwrap();
    let curv = f.ln_curvature.as_ref().unwrap();
    for i in 0..59 {
        assert!((steps[i] - (e.ln_psi[i + 1] - e.ln_psi[i])).abs() < 1e-11);
    }
    for i in 1..59 {
        assert!((curv[i - 1] - (e.ln_psi[i - 1] + e.ln_psi[i + 1] - 2.0 * e.ln_psi[i])).abs() < 1e-11);
    }
}

#[test]
fn uniform_reduction_identity() {
    let (t0, t1) = (0.3, 0.8);
    let (t2, w) = FamilySpec::Bernoulli.theta2_and_w(t0, t1).unwrap();
    let off = psi_bernoulli_uniform(&Value::Float(t0), &Value::Float(t1), 100, false).unwrap();
    let diag = psi_bernoulli_uniform(&Value::Float(t2), &Value::Float(t2), 100, false).unwrap();
    for i in 0..100 {
        let n = (i + 1) as f64;
        let lhs = off.ln_psi[i] - n * w.ln();
        assert!((lhs - diag.ln_psi[i]).abs() < 1e-10 * diag.ln_psi[i].abs().max(1.0));
    }
}

#[test]
fn quadrature_bernoulli_uniform_sum() {
    let r = psi_quadrature(&FamilySpec::Bernoulli, &Prior::Named(NamedPrior::Uniform01), 0.5, 0.5, 2, QuadOptions::default()).unwrap();
    assert!((r.value - 9.0 / 8.0).abs() < 1e-12);
}

#[test]
fn normal_closed_form() {
    let s = psi_normal(0.0, 0.0, 1.0, 5).unwrap();
    assert!((s.psi_f64(0) - 2.0 / (6.0 * PI).sqrt()).abs() < 1e-15);
    assert!((s.psi_f64(0) - 0.460_659).abs() < 1e-6);
    let fam = FamilySpec::normal(1.0).unwrap();
    let prior = Prior::Named(NamedPrior::StdNormal);
    let q = psi_quadrature(&fam, &prior, 0.0, 0.0, 1, QuadOptions::default()).unwrap();
    assert!((q.value - s.psi_f64(0)).abs() < 1e-8);
    let fam = FamilySpec::normal(1.7).unwrap();
    let off = psi_normal(-0.4, 0.9, 1.7, 30).unwrap();
    for n in [1u64, 4, 30] {
        let q = psi_quadrature(&fam, &prior, -0.4, 0.9, n, QuadOptions::default()).unwrap();
        let c = off.psi_f64(n as usize - 1);
        assert!((q.value - c).abs() < 1e-8 * c.max(1.0), "n={n}: {} vs {c}", q.value);
    }
}

#[test]
fn normal_stable_forms_match_differences() {
    let s = psi_normal(-1.0 / 3.0, 1.0 / 3.0, 2.0, 50).unwrap();
    let steps = s.ln_steps.as_ref().unwrap();
    let curv = s.ln_curvature.as_ref().unwrap();
    for i in 0..49 {
        assert!((steps[i] - (s.ln_psi[i + 1] - s.ln_psi[i])).abs() < 1e-12);
    }
    for i in 1..49 {
        assert!((curv[i - 1] - (s.ln_psi[i - 1] + s.ln_psi[i + 1] - 2.0 * s.ln_psi[i])).abs() < 1e-12);
    }
}

#[test]
fn exponential_closed_form() {
    let s = psi_exponential(1.0, 1.0, 1.0, 3).unwrap();
    assert!((s.psi_f64(0) - 1.25 * (-1f64).exp()).abs() < 1e-15);
    let (t2, w) = FamilySpec::Exponential.theta2_and_w(1.0, 4.0).unwrap();
    assert_eq!(t2, 2.5);
    assert!((w - 0.64).abs() < 1e-15);
    let off = psi_exponential(1.0, 4.0, 1.0, 10).unwrap();
    let diag = psi_exponential(2.5, 2.5, 1.0, 10).unwrap();
    for i in 0..10 {
        let n = (i + 1) as f64;
        let expect = diag.ln_psi[i] + (2.5 - 1.0) + n * 0.64f64.ln();
        assert!((off.ln_psi[i] - expect).abs() < 1e-12);
    }
}

#[test]
fn exponential_matches_integral_and_quadrature() {
    let prior = Prior::Named(NamedPrior::Exp { lambda: 1.0 });
    for &theta in &[0.5, 1.0, 2.0] {
        let s = psi_exponential(theta, theta, 1.0, 20).unwrap();
        for n in 1..=20u64 {
            let c = s.psi_f64(n as usize - 1);
            let lit = psi_exponential_integral(theta, n).unwrap().value;
            assert!((lit - c).abs() <= 1e-8 * c, "theta={theta} n={n}: {lit} vs {c}");
            if n % 5 == 1 {
                let q = psi_quadrature(&FamilySpec::Exponential, &prior, theta, theta, n, QuadOptions::default()).unwrap().value;
                assert!((q - c).abs() <= 1e-8 * c);
            }
        }
    }
}

#[test]
fn exponential_prior_rate_scaling() {
    let prior = Prior::Named(NamedPrior::Exp { lambda: 2.0 });
    let s = psi_exponential(0.7, 1.3, 2.0, 8).unwrap();
    for n in [1u64, 3, 8] {
        let q = psi_quadrature(&FamilySpec::Exponential, &prior, 0.7, 1.3, n, QuadOptions::default()).unwrap().value;
        let c = s.psi_f64(n as usize - 1);
        assert!((q - c).abs() <= 1e-8 * c);
    }
}

#[test]
fn q_of_rho_is_the_curvature() {
    let s = psi_exponential(1.0, 1.0, 1.0, 5).unwrap();
    let b = bessel_k_half(1.0, 5).unwrap();
    let direct = (s.ln_psi[0] + s.ln_psi[2] - 2.0 * s.ln_psi[1]).exp();
    let q = q_n_of_rho(2, 1.0, b.rho[2]).unwrap();
    assert!((q - direct).abs() < 1e-10 * direct);
}

#[test]
fn exponential_lemma_identities() {
    for &theta in &[0.4, 1.0, 3.0] {
        let b = bessel_k_half(theta, 12).unwrap();
        for n in 0..=10u64 {
            let inn = exp_moment_integral(n, n, theta).unwrap();
            let lemma = theta.exp() / PI.sqrt() * crate::logspace::ln_factorial(n).exp() / (2.0 * theta).powf(n as f64 + 0.5) * b.k(n as usize);
            assert!((inn - lemma).abs() <= 1e-8 * inn);
            if n >= 1 {
                let lhs = exp_moment_integral(n - 1, n + 1, theta).unwrap();
                let prev = exp_moment_integral(n - 1, n - 1, theta).unwrap();
                let rhs = (n as f64 + theta) / n as f64 * inn + 0.5 * prev;
                assert!((lhs - rhs).abs() <= 1e-8 * lhs);
            }
        }
    }
}

#[test]
fn beta_exact_matches_float() {
    let e = psi_bernoulli_beta(7.0, 1.0, &ex(3, 4), &ex(9, 10), 12, true).unwrap();
    let f = psi_bernoulli_beta(7.0, 1.0, &ex(3, 4), &ex(9, 10), 12, false).unwrap();
    assert!(e.is_exact() && !f.is_exact());
    for i in 0..12 {
        assert!((e.psi_f64(i) - f.psi_f64(i)).abs() <= 1e-12 * e.psi_f64(i));
    }
    // Beta(1,1) is the uniform prior
    let b = psi_bernoulli_beta(1.0, 1.0, &ex(1, 5), &ex(2, 3), 10, true).unwrap();
    let u = psi_bernoulli_uniform(&ex(1, 5), &ex(2, 3), 10, true).unwrap();
    for (x, y) in b.exact.unwrap().iter().zip(u.exact.unwrap().iter()) {
        assert_eq!(exact::cmp_rational(x, y), std::cmp::Ordering::Equal);
    }
}

#[test]
fn poisson_discrete_prior_by_summation() {
    let prior = Prior::Atoms(DiscretePrior::from_rationals(&[(rat(1, 1), rat(1, 2)), (rat(3, 1), rat(1, 2))]).unwrap());
    let fam = FamilySpec::Poisson;
    // diagonal expected posterior rises toward 1 under the true atom
    let s = psi_quadrature_sequence(&fam, &prior, &Value::Float(1.0), &Value::Float(1.0), 10, QuadOptions::default()).unwrap();
    for i in 1..10 {
        assert!(s.psi_f64(i) >= s.psi_f64(i - 1));
    }
    assert!(s.psi_f64(9) < 1.0);
    // n = 1 by hand
    let p = |t: f64, u: f64| (-t + u * t.ln() - crate::logspace::ln_factorial(u as u64)).exp();
    let by_hand: f64 = (0..60).map(|u| {
        let u = u as f64;
        p(1.0, u) * 0.5 * p(1.0, u) / (0.5 * p(1.0, u) + 0.5 * p(3.0, u))
    }).sum();
    assert!((s.psi_f64(0) - by_hand).abs() < 1e-14);
}

#[test]
fn compute_psi_dispatch() {
    let b = FamilySpec::Bernoulli;
    let s = compute_psi(&b, &Prior::Atoms(figure1()), &ex(1, 2), &ex(13, 20), 5, NumericMode::Auto).unwrap();
    assert_eq!(s.method, Method::ExactRational);
    let s = compute_psi(&b, &Prior::Atoms(figure1()), &ex(1, 2), &ex(13, 20), 5, NumericMode::Float).unwrap();
    assert_eq!(s.method, Method::LogSpaceSum);
    let fam = FamilySpec::normal(100.0).unwrap();
    let s = compute_psi(&fam, &Prior::Named(NamedPrior::StdNormal), &Value::Float(0.0), &Value::Float(0.0), 5, NumericMode::Auto).unwrap();
    assert_eq!(s.method, Method::ClosedFormNormal);
    assert!(compute_psi(&fam, &Prior::Named(NamedPrior::StdNormal), &Value::Float(0.0), &Value::Float(0.0), 5, NumericMode::Exact).is_err());
    let s = compute_psi(&FamilySpec::Poisson, &Prior::Named(NamedPrior::Exp { lambda: 1.0 }), &Value::Float(1.0), &Value::Float(1.0), 3, NumericMode::Auto).unwrap();
    assert_eq!(s.method, Method::Quadrature);
    assert_eq!(psi_at_zero(&Prior::Atoms(figure1()), &ex(1, 2)).unwrap(), ex(4100, 5001));
}
