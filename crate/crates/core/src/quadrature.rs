//! One-dimensional quadrature rules.

use crate::error::{bail, Result};
use crate::scalar::{fabs, Real};

/// Nodes and weights of the composite trapezoid rule on `[a, b]`.
pub fn trapezoid<T: Real>(n: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    if n < 2 {
        bail!(Domain, "trapezoid rule needs at least 2 nodes, got {n}");
    }
    let h = (b - a) / T::lit((n - 1) as f64);
    let nodes = (0..n).map(|i| a + h * T::lit(i as f64)).collect();
    let weights = (0..n).map(|i| if i == 0 || i == n - 1 { h * T::lit(0.5) } else { h }).collect();
    Ok((nodes, weights))
}

/// Gauss–Legendre nodes and weights on `[a, b]` (Newton iteration on `P_n`).
pub fn gauss_legendre<T: Real>(n: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 {
        bail!(Domain, "Gauss-Legendre rule needs at least one node");
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let half = (b - a) * T::lit(0.5);
    let mid = (b + a) * T::lit(0.5);
    Ok((
        nodes.iter().map(|&x| mid + half * T::lit(x)).collect(),
        weights.iter().map(|&w| fabs(half) * T::lit(w)).collect(),
    ))
}
