use posterior_dynamics::diagnostics::{
    analyze, asymptotic_psi, detect_minima, detect_modes, eventual_decrease_index, logconcavity_scan, normal_critical_points,
    normal_log_convex_end, CriticalKind, Context,
};
use posterior_dynamics::exact::rat;
use posterior_dynamics::priors::atoms;
use posterior_dynamics::psi::{psi_bernoulli_finite, psi_bernoulli_uniform, psi_normal};
use posterior_dynamics::{FamilySpec, NamedPrior, Prior, Value};

fn figure1() -> posterior_dynamics::psi::PsiSequence {
    let prior = atoms(&[((1, 2), (4100, 5001)), ((13, 20), (1, 5001)), ((17, 20), (900, 5001))]);
    psi_bernoulli_finite(&prior, &Value::Exact(rat(1, 2)), &Value::Exact(rat(13, 20)), 200, true).unwrap()
}

#[test]
fn figure_one_shape() {
    let s = figure1();
    assert_eq!(detect_minima(&s), vec![11]);
    let modes = detect_modes(&s);
    assert_eq!(modes[0], 1);
    assert!((78..=84).contains(&modes[1]));
    assert_eq!(eventual_decrease_index(&s), Some(modes[1]));
}

#[test]
fn diagonal_never_reaches_decrease() {
    let s = psi_bernoulli_uniform(&Value::Float(0.3), &Value::Float(0.3), 300, false).unwrap();
    assert_eq!(eventual_decrease_index(&s), None);
    assert!(logconcavity_scan(&s).is_empty());
    assert_eq!(detect_modes(&s), Vec::<u64>::new());
}

#[test]
fn strictly_decreasing_sequence_has_left_boundary_mode() {
    let s = psi_normal(0.0, 3.0, 1.0, 40).unwrap();
    assert_eq!(detect_modes(&s), vec![1]);
    assert_eq!(eventual_decrease_index(&s), Some(1));
}

#[test]
fn normal_critical_points_of_figure_three() {
    let pts = normal_critical_points(-1.0 / 3.0, 1.0 / 3.0, 100.0).unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0].kind, CriticalKind::Min);
    assert!((pts[0].n - 1771.24).abs() < 0.01);
    assert!((pts[1].n - 28228.76).abs() < 0.01);
    // both roots solve n² − 30000n + 5·10⁷ = 0
    for p in &pts {
        assert!((p.n * p.n - 30000.0 * p.n + 5e7).abs() / 5e7 < 1e-6);
    }
    assert!(normal_critical_points(0.2, 0.2, 100.0).unwrap().is_empty());
}

#[test]
fn gamma_root_for_large_variance() {
    let r = normal_log_convex_end(0.0, 100.0).unwrap();
    assert!((r - 7071.07).abs() < 0.01);
    assert!(normal_log_convex_end(0.5, 100.0).is_none_or(|r| r < 1.0));
}

#[test]
fn asymptotic_constant_uniform() {
    let c = asymptotic_psi(&FamilySpec::Bernoulli, &Prior::Named(NamedPrior::Uniform01), 0.5, 0.5, 1).unwrap();
    assert!((c - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    let normal = FamilySpec::normal(2.0).unwrap();
    let c = asymptotic_psi(&normal, &Prior::Named(NamedPrior::StdNormal), 0.1, 0.1, 100).unwrap();
    assert!((c - 10.0 / (4.0 * std::f64::consts::PI.sqrt())).abs() < 1e-12);
}

#[test]
fn report_for_normal_scenario() {
    let fam = FamilySpec::normal(100.0).unwrap();
    let prior = Prior::Named(NamedPrior::StdNormal);
    let (a, b) = (Value::Float(0.0), Value::Float(0.0));
    let s = psi_normal(0.0, 0.0, 100.0, 9000).unwrap();
    let r = analyze(&s, Some(Context { family: &fam, prior: &prior, theta0: &a, theta1: &b }));
    assert_eq!(r.log_convex_prefix_end, Some(7071));
    assert_eq!(r.log_concavity_violations.last(), Some(&7071));
    assert!(!r.asymptotic_ratios.is_empty());
}
