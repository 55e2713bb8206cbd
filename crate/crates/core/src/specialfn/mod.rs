//! Special functions behind the closed forms: Legendre polynomials and their
//! Turán ratios, half-integer modified Bessel functions of the second kind,
//! and exact bivariate polynomials for the Bessel-ratio certificate.

mod bessel;
mod bipoly;
mod certificate;
mod legendre;

pub use bessel::{bessel_k_half, q_n_of_rho, segura_bounds, BesselHalfSeq};
pub use bipoly::BiPoly;
pub use certificate::{certify_appendix_a4, golden_section_min, CertificationReport, CoefficientCheck, MinimumCheck};
pub use legendre::{
    legendre_leading_coefficient, legendre_p, legendre_p_inside, legendre_ratios, s_n, s_n_exact, turan_bound,
    turan_limit, turan_ratio, LegendreEval, TuranRatio,
};
