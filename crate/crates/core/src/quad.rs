//! Composite Gauss-Legendre quadrature.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Nodes and weights of the `order`-point rule on `[-1, 1]`, nodes ascending.
pub fn reference_rule(order: usize) -> Vec<(f64, f64)> {
    let degree = NonZeroUsize::new(order.max(1)).expect("order >= 1");
    let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(degree)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (x, w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Composite rule on `[a, b]` with `panels` equal panels of `order` points each.
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = reference_rule(order);
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let lo = a + width * k as f64;
        for &(x, w) in &rule {
            nodes.push(lo + 0.5 * width * (x + 1.0));
            weights.push(0.5 * width * w);
        }
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with a composite rule.
pub fn integrate<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: F,
) -> f64 {
    let (nodes, weights) = composite(a, b, panels, order);
    nodes.iter().zip(&weights).map(|(&x, &w)| w * f(x)).sum()
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(samples: &[f64], dt: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => dt * (samples[1..n - 1].iter().sum::<f64>() + 0.5 * (samples[0] + samples[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let rule = reference_rule(8);
        assert_eq!(rule.len(), 8);
        // degree 15 exact
        let i: f64 = rule.iter().map(|&(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-15);
        assert!(rule.windows(2).all(|p| p[0].0 < p[1].0));
    }

    #[test]
    fn composite_integrates_sine() {
        let i = integrate(0.0, std::f64::consts::PI, 16, 8, f64::sin);
        assert!((i - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_linear() {
        let xs: Vec<f64> = (0..11).map(|k| 2.0 * k as f64 * 0.1).collect();
        assert!((trapezoid(&xs, 0.1) - 1.0).abs() < 1e-14);
    }
}
