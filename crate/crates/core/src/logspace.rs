//! Log-space helpers: log-gamma, log-binomials, log-sum-exp and compensated sums.

/// `ln n!`. Exact products below 171 (where `n!` still fits a double), log-gamma above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 171 {
        let mut acc = 1.0f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        acc.ln()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln C(n, k)`; negative infinity when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `x ln y` with the convention `0 ln 0 = 0`.
pub(crate) fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Stable `ln Σ exp(a_i)`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum = neumaier_sum(terms.iter().map(|t| (t - max).exp()));
    max + sum.ln()
}

/// Neumaier's compensated summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
