use crate::error::{Error, Result};

use super::sum::NeumaierSum;

// 15-point Kronrod abscissae on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Embedded 7-point Gauss weights (for the odd-indexed Kronrod nodes).
const WG: [f64; 4] = [
    0.129_484_966_168_869_93,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Absolute/relative tolerance pair for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for QuadTol {
    fn default() -> Self {
        // Crate-wide quadrature target.
        Self { abs: 1e-9, rel: 1e-7 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = NeumaierSum::new();
    let mut gauss = NeumaierSum::new();
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (lo, hi) = (f(center - half * x), f(center + half * x));
        let pair = if x == 0.0 { lo } else { lo + hi };
        kronrod.add(wk * pair);
        if j % 2 == 1 {
            gauss.add(WG[j / 2] * pair);
        }
    }
    let k = kronrod.total() * half;
    let g = gauss.total() * half;
    (k, (k - g).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over the finite interval (a, b).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<f64> {
    assert!(a.is_finite() && b.is_finite() && a < b, "bad interval");
    let (value, error) = gk15(&f, a, b);
    let mut panels = vec![Panel { a, b, value, error }];
    for _ in 0..4000 {
        let total: f64 = panels.iter().map(|p| p.value).collect::<NeumaierSum>().total();
        let err: f64 = panels.iter().map(|p| p.error).collect::<NeumaierSum>().total();
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            return Ok(total);
        }
        // Split the worst panel.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = gk15(&f, lo, hi);
            panels.push(Panel { a: lo, b: hi, value, error });
        }
    }
    let achieved: f64 = panels.iter().map(|p| p.error).collect::<NeumaierSum>().total();
    Err(Error::QuadratureFailure { achieved, requested: tol.abs })
}

/// Integration of `f` over (a, b) when `f` may blow up like an inverse square
/// root at either endpoint. The substitution x = a + (b-a) sin^2(u) maps the
/// interval onto (0, pi/2) and its Jacobian (b-a) sin(2u) vanishes at both
/// ends, cancelling the singularity.
pub fn integrate_singular_endpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: QuadTol,
) -> Result<f64> {
    let width = b - a;
    let g = |u: f64| {
        let s = u.sin();
        let x = a + width * s * s;
        if x <= a || x >= b {
            return 0.0;
        }
        f(x) * width * (2.0 * u).sin()
    };
    integrate(g, 0.0, std::f64::consts::FRAC_PI_2, tol)
}
