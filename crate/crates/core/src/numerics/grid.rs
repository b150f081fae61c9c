use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    UniformTrapezoid,
    GaussLegendre,
}

/// A one-dimensional quadrature rule on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: GridKind,
    pub lo: f64,
    pub hi: f64,
}

impl Grid1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Spacing of a uniform grid. Meaningless for Gauss–Legendre grids.
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.len() - 1) as f64
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        super::kahan_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    pub fn integrate_c<F: Fn(f64) -> num_complex::Complex64>(&self, f: F) -> num_complex::Complex64 {
        super::kahan_sum_c(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w))
    }

    /// Same rule with `n` replaced by `2n - 1` (uniform) or `2n - 1`
    /// (Gauss–Legendre), i.e. roughly half the spacing.
    pub fn refined(&self) -> Grid1D {
        let n = 2 * self.len() - 1;
        make_grid(self.kind, self.lo, self.hi, n).expect("refining a valid grid")
    }
}

pub fn make_grid(kind: GridKind, lo: f64, hi: f64, n: usize) -> Result<Grid1D> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Parameter(format!("grid bounds [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("grid needs at least 2 nodes, got {n}")));
    }
    let (nodes, weights) = match kind {
        GridKind::UniformTrapezoid => {
            let h = (hi - lo) / (n - 1) as f64;
            let nodes: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
            let mut weights = vec![h; n];
            weights[0] = 0.5 * h;
            weights[n - 1] = 0.5 * h;
            (nodes, weights)
        }
        GridKind::GaussLegendre => {
            let (x, w) = gauss_legendre_unit(n);
            let c = 0.5 * (hi + lo);
            let r = 0.5 * (hi - lo);
            (x.iter().map(|t| c + r * t).collect(), w.iter().map(|v| r * v).collect())
        }
    };
    Ok(Grid1D { nodes, weights, kind, lo, hi })
}

/// Gauss–Legendre nodes (increasing) and weights on [-1, 1], by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi's initial guess for the i-th largest root.
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut z = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// Composite Gauss–Legendre rule over consecutive panels given by
/// `breaks` (strictly increasing), `per_panel` nodes in each.
pub fn composite_gauss_legendre(breaks: &[f64], per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre_unit(per_panel);
    let mut nodes = Vec::with_capacity(per_panel * breaks.len());
    let mut weights = Vec::with_capacity(per_panel * breaks.len());
    for pair in breaks.windows(2) {
        let c = 0.5 * (pair[0] + pair[1]);
        let r = 0.5 * (pair[1] - pair[0]);
        for (t, v) in x.iter().zip(&w) {
            nodes.push(c + r * t);
            weights.push(r * v);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trapezoid_three_points() {
        let g = make_grid(GridKind::UniformTrapezoid, -1.0, 1.0, 3).unwrap();
        assert_eq!(g.nodes, vec![-1.0, 0.0, 1.0]);
        assert_eq!(g.weights, vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn two_point_gauss() {
        let g = make_grid(GridKind::GaussLegendre, -1.0, 1.0, 2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(g.nodes[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(g.nodes[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(g.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn quartic_with_eight_nodes() {
        let g = make_grid(GridKind::GaussLegendre, -1.0, 1.0, 8).unwrap();
        assert_abs_diff_eq!(g.integrate(|x| x.powi(4)), 0.4, epsilon = 1e-14);
    }

    #[test]
    fn weights_sum_to_length() {
        for &n in &[3usize, 64, 513, 1201] {
            let g = make_grid(GridKind::GaussLegendre, -12.0, 12.0, n).unwrap();
            let s: f64 = crate::numerics::kahan_sum(g.weights.iter().copied());
            assert!((s - 24.0).abs() / 24.0 < 1e-12, "n={n}: {s}");
            assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(g.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(GridKind::GaussLegendre, 1.0, 1.0, 5).is_err());
        assert!(make_grid(GridKind::UniformTrapezoid, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn composite_rule_integrates_gaussian() {
        let breaks: Vec<f64> = (0..=20).map(|i| -10.0 + i as f64).collect();
        let (x, w) = composite_gauss_legendre(&breaks, 12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        assert_abs_diff_eq!(s, std::f64::consts::PI.sqrt(), epsilon = 1e-14);
    }
}
