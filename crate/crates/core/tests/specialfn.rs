use posterior_dynamics::exact::{rat, to_f64};
use posterior_dynamics::specialfn::{bessel_k_half, legendre_p, turan_bound, turan_ratio};
use posterior_dynamics::FamilySpec;
use proptest::prelude::*;

#[test]
fn legendre_small_orders() {
    // P_2(x) = (3x² − 1)/2, P_3(x) = (5x³ − 3x)/2
    for &x in &[1.5f64, 2.0, 10.0] {
        assert!((legendre_p(2, x).unwrap().value() - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-12 * x.powi(2));
        assert!((legendre_p(3, x).unwrap().value() - (5.0 * x.powi(3) - 3.0 * x) / 2.0).abs() < 1e-12 * x.powi(3));
    }
}

#[test]
fn bessel_half_order_closed_forms() {
    // K_{1/2}(θ) = K_{−1/2}(θ) = √(π/(2θ)) e^{−θ}, K_{3/2} = K_{1/2}(1 + 1/θ)
    let theta = 1.7;
    let b = bessel_k_half(theta, 3).unwrap();
    let k_half = (std::f64::consts::PI / (2.0 * theta)).sqrt() * (-theta).exp();
    assert!((b.k(0) - k_half).abs() < 1e-14);
    assert!((b.k(1) - k_half * (1.0 + 1.0 / theta)).abs() < 1e-14);
}

#[test]
fn fisher_information_and_affinity() {
    let (t2, w) = FamilySpec::Bernoulli.theta2_and_w(0.5, 0.5).unwrap();
    assert_eq!((t2, w), (0.5, 1.0));
    assert!((FamilySpec::Bernoulli.fisher_information(0.25).unwrap() - 16.0 / 3.0).abs() < 1e-12);
    let normal = FamilySpec::normal(2.0).unwrap();
    let (t2, w) = normal.theta2_and_w(-1.0, 1.0).unwrap();
    assert!(t2.abs() < 1e-15);
    assert!((w - (-0.25f64).exp()).abs() < 1e-15);
    let numeric = normal.bhattacharyya_numeric(-1.0, 1.0).unwrap();
    assert!((numeric - w).abs() < 1e-9);
}

#[test]
fn turan_bound_values() {
    assert_eq!(turan_bound(2), rat(9, 8));
    assert_eq!(turan_bound(3), rat(16, 15));
}

proptest! {
    #[test]
    fn turan_ratio_between_one_and_bound(n in 2u64..200, x in 1.0001f64..1e4) {
        let r = turan_ratio(n, x).unwrap();
        prop_assert!(r.ratio > 1.0);
        prop_assert!(r.ratio <= to_f64(&turan_bound(n)) * (1.0 + 1e-12));
    }

    #[test]
    fn theta2_lies_between(a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let (t2, w) = FamilySpec::Bernoulli.theta2_and_w(a, b).unwrap();
        prop_assert!(t2 >= a.min(b) - 1e-12 && t2 <= a.max(b) + 1e-12);
        prop_assert!(w > 0.0 && w <= 1.0 + 1e-15);
    }
}
