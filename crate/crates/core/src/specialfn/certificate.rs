//! Certificate that `1 − Q_n(η_n) > 0` for all `n ≥ 2`, `θ ≥ 0`.
//!
//! With `n = m + 2`, `1 − Q_n(η_n) = (A + B√C)/D` for explicit polynomials
//! `A, B, C` in `(m, θ)` and a positive `D`. Positivity follows from `A > 0`
//! and `E = A² − B²C > 0`, which in turn follow from every coefficient of a
//! power of `m` in `A` and `E` being positive on `θ ≥ 0`.
//!
//! This module expands `E` exactly, compares each coefficient with the
//! published reference lists, proves the easy coefficients positive by exact
//! lower-bound comparisons, and locates the minima of the remaining ones
//! numerically.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::bessel::{q_n_of_rho, segura_bounds};
use super::bipoly::{eval_theta, BiPoly};
use crate::error::{Error, Result};

fn a_poly() -> BiPoly {
    BiPoly::from_terms(&[
        (8, 4, 0),
        (72, 3, 0),
        (4, 2, 2),
        (-16, 2, 1),
        (230, 2, 0),
        (8, 1, 3),
        (4, 1, 2),
        (-56, 1, 1),
        (302, 1, 0),
        (8, 0, 4),
        (20, 0, 3),
        (2, 0, 2),
        (-48, 0, 1),
        (132, 0, 0),
    ])
}

fn b_poly() -> BiPoly {
    BiPoly::from_terms(&[
        (4, 3, 0),
        (30, 2, 0),
        (-4, 1, 2),
        (74, 1, 0),
        (-4, 0, 3),
        (-10, 0, 2),
        (60, 0, 0),
    ])
}

fn c_poly() -> BiPoly {
    BiPoly::from_terms(&[(4, 2, 0), (4, 1, 0), (4, 0, 2), (1, 0, 0)])
}

/// Reference θ-coefficients (ascending) of `m^i` in `A`.
const A_REFERENCE: [&[i64]; 5] = [
    &[132, -48, 2, 20, 8],
    &[302, -56, 4, 8],
    &[230, -16, 4],
    &[72],
    &[8],
];

/// Reference θ-coefficients (ascending) of `m^i` in `E`.
const E_REFERENCE: [&[i64]; 8] = [
    &[13824, -12672, -10368, 5568, 4896, 1152, 16],
    &[56448, -43776, -21120, 16096, 9200, 1312],
    &[92928, -60128, -13408, 17664, 6208, 480],
    &[81184, -42336, -416, 9344, 1824, 64],
    &[41024, -16192, 2816, 2432, 208],
    &[12064, -3200, 1088, 256],
    &[1920, -256, 128],
    &[128],
];

/// Quadratic lower bounds `αθ² + βθ + γ` used for the easy coefficients.
const LOWER_BOUNDS: [(&str, [i64; 3]); 5] = [
    ("a2", [16, -16, 4]),
    ("a1", [196, -56, 4]),
    ("e6", [128, -256, 128]),
    ("e5", [3200, -3200, 800]),
    ("e4", [40000, -17000, 2000]),
];

/// Published approximate minima over `θ ≥ 0`: `(name, value, argmin)`.
const PUBLISHED_MINIMA: [(&str, f64, f64); 5] = [
    ("a0", 108.0, 0.73),
    ("e3", 49317.0, 1.09),
    ("e2", 43609.0, 1.04),
    ("e1", 18075.0, 0.97),
    ("e0", 1981.0, 0.90),
];

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub name: String,
    /// Ascending θ-coefficients as expanded here.
    pub computed: Vec<String>,
    pub reference: Vec<i64>,
    pub matches: bool,
    /// How positivity on `θ ≥ 0` was established.
    pub positivity: String,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimumCheck {
    pub name: String,
    pub published_value: f64,
    pub published_argmin: f64,
    pub value: f64,
    pub argmin: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub a: String,
    pub b: String,
    pub c: String,
    pub coefficients: Vec<CoefficientCheck>,
    pub minima: Vec<MinimumCheck>,
    /// `(A + B√C) > 0` and `1 − Q_n(η_n) > 0` agree in sign on a sample grid.
    pub identity_sign_checks: usize,
    pub identity_sign_ok: bool,
    pub passed: bool,
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Exact check that `p(θ) > bound(θ) ≥ 0` for all `θ ≥ 0`: `p − bound` has
/// nonnegative coefficients with a positive constant term, and the quadratic
/// bound has positive leading coefficient and nonpositive discriminant.
fn dominates_quadratic(p: &[BigInt], bound: &[i64; 3]) -> bool {
    let b = big_vec(bound);
    let len = p.len().max(3);
    let diff: Vec<BigInt> = (0..len)
        .map(|j| p.get(j).cloned().unwrap_or_default() - b.get(j).cloned().unwrap_or_default())
        .collect();
    let diff_ok = diff.iter().all(|c| !c.is_negative()) && diff[0].is_positive();
    let disc = &b[1] * &b[1] - BigInt::from(4) * &b[2] * &b[0];
    diff_ok && b[2].is_positive() && !disc.is_positive()
}

/// Minimize a unimodal-near-its-minimum function on `[lo, hi]`: a coarse scan
/// picks the best cell, golden-section search refines within its neighbours.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let cells = 20_000;
    let step = (hi - lo) / cells as f64;
    let best = (0..=cells)
        .map(|i| lo + i as f64 * step)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn certify_appendix_a4() -> Result<CertificationReport> {
    let a = a_poly();
    let b = b_poly();
    let c = c_poly();
    let e = &(&a * &a) - &(&(&b * &b) * &c);

    let mut coefficients = Vec::new();
    let mut refs: Vec<(String, Vec<BigInt>, &[i64])> = Vec::new();
    for (i, r) in A_REFERENCE.iter().enumerate() {
        refs.push((format!("a{i}"), a.coeff_in_m(i as u32), r));
    }
    for (i, r) in E_REFERENCE.iter().enumerate() {
        refs.push((format!("e{i}"), e.coeff_in_m(i as u32), r));
    }
    if e.degree_m() != Some(7) || a.degree_m() != Some(4) {
        return Err(Error::CoefficientMismatch(format!(
            "unexpected degrees in m: A {:?}, E {:?}",
            a.degree_m(),
            e.degree_m()
        )));
    }

    let minima_names: Vec<&str> = PUBLISHED_MINIMA.iter().map(|m| m.0).collect();
    let mut minima = Vec::new();
    for (name, computed, reference) in refs {
        let matches = computed == big_vec(reference);
        if !matches {
            return Err(Error::CoefficientMismatch(format!(
                "{name}: expanded {:?}, reference {:?}",
                computed.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                reference
            )));
        }
        let (positivity, positive) = if computed.len() == 1 {
            ("positive constant".to_string(), computed[0].is_positive())
        } else if let Some((_, bound)) = LOWER_BOUNDS.iter().find(|(n, _)| *n == name) {
            (
                format!("exceeds {}θ² {:+}θ {:+} ≥ 0", bound[2], bound[1], bound[0]),
                dominates_quadratic(&computed, bound),
            )
        } else if minima_names.contains(&name.as_str()) {
            let (&(_, pv, pa), coeffs) = (PUBLISHED_MINIMA.iter().find(|m| m.0 == name).unwrap(), &computed);
            let (argmin, value) = golden_section_min(|t| eval_theta(coeffs, t), 0.0, 100.0);
            let within = (value - pv).abs() <= 1.0 && (argmin - pa).abs() <= 0.05;
            minima.push(MinimumCheck {
                name: name.clone(),
                published_value: pv,
                published_argmin: pa,
                value,
                argmin,
                within_tolerance: within,
            });
            // growth beyond the search window is governed by the positive leading coefficient
            let lead_ok = computed.last().is_some_and(|c| c.is_positive());
            (format!("numeric minimum {value:.3} at θ = {argmin:.4}"), value > 0.0 && lead_ok)
        } else {
            ("unclassified".to_string(), false)
        };
        coefficients.push(CoefficientCheck {
            name,
            computed: computed.iter().map(|c| c.to_string()).collect(),
            reference: reference.to_vec(),
            matches,
            positivity,
            positive,
        });
    }

    // The algebra above is only meaningful if A + B√C really carries the sign
    // of 1 − Q_n(η_n). Sample both.
    let mut checks = 0;
    let mut sign_ok = true;
    for n in [2u64, 3, 4, 7, 15, 60, 200] {
        for &theta in &[1e-3, 0.2, 0.9, 1.0, 2.5, 10.0, 49.0] {
            let m = (n - 2) as f64;
            let (eta, _) = segura_bounds(n, theta)?;
            let one_minus_q = 1.0 - q_n_of_rho(n, theta, eta)?;
            let lhs = a.eval(m, theta) + b.eval(m, theta) * c.eval(m, theta).sqrt();
            checks += 1;
            sign_ok &= one_minus_q > 0.0 && lhs > 0.0;
        }
    }

    let passed = coefficients.iter().all(|c| c.matches && c.positive)
        && minima.iter().all(|m| m.within_tolerance)
        && sign_ok
        && !e.is_zero();
    Ok(CertificationReport {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        coefficients,
        minima,
        identity_sign_checks: checks,
        identity_sign_ok: sign_ok,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_passes() {
        let r = certify_appendix_a4().unwrap();
        assert!(r.passed, "{r:#?}");
        let e7 = r.coefficients.iter().find(|c| c.name == "e7").unwrap();
        assert_eq!(e7.computed, vec!["128"]);
        let a2 = r.coefficients.iter().find(|c| c.name == "a2").unwrap();
        assert_eq!(a2.computed, vec!["230", "-16", "4"]);
        let a0 = r.minima.iter().find(|m| m.name == "a0").unwrap();
        assert!((a0.value - 108.0).abs() < 1.0 && (a0.argmin - 0.73).abs() < 0.05);
        assert_eq!(r.minima.len(), 5);
    }

    #[test]
    fn a_is_positive_where_sampled() {
        let a = a_poly();
        for m in 0..20 {
            for t in 0..200 {
                assert!(a.eval(m as f64, t as f64 * 0.05) > 0.0);
            }
        }
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section_min(|t| (t - 3.3) * (t - 3.3) + 1.0, 0.0, 100.0);
        assert!((x - 3.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }
}
