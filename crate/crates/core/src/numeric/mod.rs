//! Shared numerical machinery: adaptive quadrature, finite differences,
//! the inverse normal CDF, compensated summation and 1-d optimization.

mod diff;
mod golden;
mod normal;
mod quadrature;
mod sum;

pub use diff::{central_gradient, central_second_derivative_matrix};
pub use golden::golden_section_max;
pub use normal::inverse_normal_cdf;
pub use quadrature::{integrate, integrate_singular_endpoints, QuadTol};
pub use sum::NeumaierSum;

/// ln(n!) computed by direct accumulation; exact to double precision for the
/// sample sizes used here (n up to ~1e4).
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln of the multinomial coefficient n! / (y_1! ... y_w!).
pub fn ln_multinomial(n: u64, counts: &[u64]) -> f64 {
    debug_assert_eq!(counts.iter().sum::<u64>(), n);
    ln_factorial(n) - counts.iter().map(|&y| ln_factorial(y)).sum::<f64>()
}

/// ln of the binomial coefficient C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// log(sum(exp(v))) with max-subtraction.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add((v - m).exp());
    }
    m + acc.total().ln()
}
