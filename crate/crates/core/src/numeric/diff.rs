/// Central-difference gradient with per-coordinate step h_i = step * (1 + |x_i|).
pub fn central_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: f64) -> Vec<f64> {
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = step * (1.0 + x[i].abs());
        probe[i] = x[i] + h;
        let fp = f(&probe);
        probe[i] = x[i] - h;
        let fm = f(&probe);
        probe[i] = x[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    grad
}

/// Central-difference Hessian with per-coordinate steps h_i = step * (1 + |x_i|).
pub fn central_second_derivative_matrix<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &[f64],
    step: f64,
) -> Vec<Vec<f64>> {
    let d = x.len();
    let h: Vec<f64> = x.iter().map(|xi| step * (1.0 + xi.abs())).collect();
    let f0 = f(x);
    let mut hess = vec![vec![0.0; d]; d];
    let mut probe = x.to_vec();
    for i in 0..d {
        probe[i] = x[i] + h[i];
        let fp = f(&probe);
        probe[i] = x[i] - h[i];
        let fm = f(&probe);
        probe[i] = x[i];
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            probe[i] = x[i] + h[i];
            probe[j] = x[j] + h[j];
            let fpp = f(&probe);
            probe[j] = x[j] - h[j];
            let fpm = f(&probe);
            probe[i] = x[i] - h[i];
            let fmm = f(&probe);
            probe[j] = x[j] + h[j];
            let fmp = f(&probe);
            probe[i] = x[i];
            probe[j] = x[j];
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient_and_hessian() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1] - x[1] * x[1];
        let g = central_gradient(f, &[1.0, 2.0], 1e-6);
        assert!((g[0] - 8.0).abs() < 1e-6);
        assert!((g[1] - (-1.0)).abs() < 1e-6);
        let h = central_second_derivative_matrix(f, &[1.0, 2.0], 1e-4);
        assert!((h[0][0] - 2.0).abs() < 1e-5);
        assert!((h[0][1] - 3.0).abs() < 1e-5);
        assert!((h[1][1] + 2.0).abs() < 1e-5);
    }
}
