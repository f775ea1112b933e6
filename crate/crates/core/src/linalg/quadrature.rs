//! Gauss–Legendre rules and product quadrature on the unit sphere.

use std::f64::consts::PI;

/// n-point Gauss–Legendre rule on [-1, 1]; nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre P_n(x) and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Exact for polynomials of degree ≤ 2n - 1. Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, descending in i
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub theta: f64,
    pub phi: f64,
    /// Solid-angle weight; all weights sum to 4π.
    pub weight: f64,
}

/// Gauss–Legendre in cos θ times the uniform trapezoid in φ.
///
/// Integrates band-limited functions of degree < min(2·`theta_nodes`, `phi_nodes`) exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    theta_nodes: usize,
    phi_nodes: usize,
    points: Vec<GridPoint>,
}

impl SphereGrid {
    pub fn new(theta_nodes: usize, phi_nodes: usize) -> Self {
        assert!(phi_nodes >= 1, "need at least one phi node");
        let rule = gauss_legendre(theta_nodes);
        let dphi = 2.0 * PI / phi_nodes as f64;
        let mut points = Vec::with_capacity(theta_nodes * phi_nodes);
        // ascending theta means descending cos(theta)
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights).rev() {
            let theta = x.clamp(-1.0, 1.0).acos();
            for j in 0..phi_nodes {
                points.push(GridPoint { theta, phi: j as f64 * dphi, weight: w * dphi });
            }
        }
        Self { theta_nodes, phi_nodes, points }
    }

    pub fn theta_nodes(&self) -> usize {
        self.theta_nodes
    }

    pub fn phi_nodes(&self) -> usize {
        self.phi_nodes
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_rule() {
        let r = gauss_legendre(1);
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && (r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sixteen_points_integrate_cos20() {
        let r = gauss_legendre(16);
        assert!((r.integrate(|x| x.powi(20)) - 2.0 / 21.0).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_increase() {
        for n in 1..=80 {
            let r = gauss_legendre(n);
            assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12, "n={n}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]), "n={n}");
        }
    }

    #[test]
    fn exact_to_degree_2n_minus_1() {
        for n in 1..=20 {
            let r = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((r.integrate(|x| x.powi(deg as i32)) - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn sphere_grid_area() {
        let g = SphereGrid::new(5, 12);
        assert_eq!(g.len(), 60);
        let area: f64 = g.points().iter().map(|p| p.weight).sum();
        assert!((area - 4.0 * PI).abs() < 1e-12);
    }
}
