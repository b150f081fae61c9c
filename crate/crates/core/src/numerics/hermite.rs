use super::Grid1D;
use crate::{Error, Result};

/// Normalized Hermite functions `h_k`, `k < M`, sampled on a grid.
/// They are the eigenfunctions of `H = -d²/ds² + s²` with eigenvalues `2k+1`.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    pub order: usize,
    pub grid: Grid1D,
    /// `values[k][j] = h_k(s_j)`
    pub values: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

/// Boundary magnitude above which a mode is considered cut off by the grid.
const COVERAGE_TOL: f64 = 1e-9;

/// `h_0(x), ..., h_{m-1}(x)` by the normalized three-term recurrence.
pub fn hermite_values(m: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m);
    if m == 0 {
        return out;
    }
    // pi^{-1/4} e^{-x^2/2}; may underflow far out, which is the right answer
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if m == 1 {
        return out;
    }
    if h0 == 0.0 {
        // Far beyond the turning points the recurrence starting from zero
        // cannot recover; scale the seed so it stays representable.
        return scaled_values(m, x);
    }
    out.push(std::f64::consts::SQRT_2 * x * h0);
    for k in 1..m - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

// Recurrence in log-scaled form for |x| where e^{-x^2/2} underflows.
fn scaled_values(m: usize, x: f64) -> Vec<f64> {
    let log_h0 = -0.25 * std::f64::consts::PI.ln() - 0.5 * x * x;
    let mut out = vec![0.0; m];
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut log_scale = log_h0;
    out[0] = (log_scale).exp() * cur;
    for k in 0..m - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e100 {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
        out[k + 1] = (log_scale.exp()) * cur;
    }
    out
}

/// Samples `M` Hermite functions on `grid`, refusing when mode `M-1` has not
/// decayed at the grid ends.
pub fn hermite_basis(order: usize, grid: &Grid1D) -> Result<HermiteBasis> {
    if order == 0 {
        return Err(Error::Parameter("Hermite order must be positive".into()));
    }
    for &end in &[grid.lo, grid.hi] {
        let edge = hermite_values(order, end);
        let worst = edge.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if worst > COVERAGE_TOL {
            return Err(Error::Coverage(format!(
                "Hermite modes up to {} reach {:.2e} at s = {end}; turning point is {:.2}",
                order - 1,
                worst,
                (2.0 * order as f64 + 1.0).sqrt()
            )));
        }
    }
    let mut values = vec![vec![0.0; grid.len()]; order];
    for (j, &s) in grid.nodes.iter().enumerate() {
        for (k, v) in hermite_values(order, s).into_iter().enumerate() {
            values[k][j] = v;
        }
    }
    let eigenvalues = (0..order).map(|k| 2.0 * k as f64 + 1.0).collect();
    Ok(HermiteBasis { order, grid: grid.clone(), values, eigenvalues })
}

impl HermiteBasis {
    /// Discrete inner product `Σ_j w_j u(s_j) v(s_j)`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        super::kahan_sum(self.grid.weights.iter().zip(u).zip(v).map(|((w, a), b)| w * a * b))
    }

    /// Coefficients `⟨h_k, v⟩` for `k < M`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.values.iter().map(|h| self.inner(h, v)).collect()
    }

    /// `Σ_k c_k h_k` on the grid.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        let mut out = vec![0.0; n];
        for (c, h) in coeffs.iter().zip(&self.values) {
            for (o, v) in out.iter_mut().zip(h) {
                *o += c * v;
            }
        }
        out
    }
}

/// Matrix element `⟨h_j, s h_k⟩` (nonzero only for |j-k| = 1).
pub fn position_element(j: usize, k: usize) -> f64 {
    if j + 1 == k {
        (k as f64 / 2.0).sqrt()
    } else if k + 1 == j {
        (j as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

/// Matrix element `⟨h_j, h_k'⟩` (nonzero only for |j-k| = 1).
pub fn derivative_element(j: usize, k: usize) -> f64 {
    if j + 1 == k {
        (k as f64 / 2.0).sqrt()
    } else if k + 1 == j {
        -(j as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_grid, GridKind};

    fn default_grid() -> Grid1D {
        make_grid(GridKind::GaussLegendre, -12.0, 12.0, 513).unwrap()
    }

    #[test]
    fn ground_state_at_origin() {
        let h = hermite_values(1, 0.0);
        assert!((h[0] - std::f64::consts::PI.powf(-0.25)).abs() < 1e-16);
    }

    #[test]
    fn orthonormal_on_default_grid() {
        let b = hermite_basis(30, &default_grid()).unwrap();
        assert!((b.inner(&b.values[3], &b.values[3]) - 1.0).abs() < 1e-10);
        let mut worst = 0.0f64;
        for j in 0..30 {
            for k in 0..30 {
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((b.inner(&b.values[j], &b.values[k]) - want).abs());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn eigenvalue_of_second_mode() {
        // <h_2, H h_2> with the derivative from the ladder relations,
        // ||h_2'||^2 + ||s h_2||^2, each evaluated by quadrature.
        let g = default_grid();
        let vals: Vec<Vec<f64>> = g.nodes.iter().map(|&s| hermite_values(4, s)).collect();
        let d: Vec<f64> = vals.iter().map(|h| (1.0f64).sqrt() * h[1] - (1.5f64).sqrt() * h[3]).collect();
        let kinetic: f64 = g.weights.iter().zip(&d).map(|(w, v)| w * v * v).sum();
        let potential: f64 = g.weights.iter().zip(&g.nodes).zip(&vals).map(|((w, s), h)| w * (s * h[2]).powi(2)).sum();
        assert!((kinetic + potential - 5.0).abs() < 1e-8);
    }

    #[test]
    fn eigen_equation_by_finite_differences() {
        let k = 7;
        let hstep = 1e-3;
        for &s in &[-2.3, 0.1, 1.7] {
            let v = |x: f64| hermite_values(k + 1, x)[k];
            let second = (v(s + hstep) - 2.0 * v(s) + v(s - hstep)) / (hstep * hstep);
            let lhs = -second + s * s * v(s);
            assert!((lhs - (2 * k + 1) as f64 * v(s)).abs() < 1e-5);
        }
    }

    #[test]
    fn coverage_error_on_short_grid() {
        assert!(matches!(hermite_basis(300, &default_grid()), Err(Error::Coverage(_))));
    }

    #[test]
    fn large_orders_do_not_overflow() {
        let v = hermite_values(2000, 10.0);
        assert!(v.iter().all(|x| x.is_finite()));
        let far = hermite_values(50, 45.0);
        assert!(far.iter().all(|x| x.is_finite() && x.abs() < 1e-100));
    }

    #[test]
    fn gaussian_times_polynomial_is_reproduced() {
        let g = make_grid(GridKind::GaussLegendre, -20.0, 20.0, 401).unwrap();
        let b = hermite_basis(64, &g).unwrap();
        let f: Vec<f64> = g
            .nodes
            .iter()
            .map(|&s| (-0.5 * s * s).exp() * (1.0 - 2.0 * s + 0.3 * s.powi(4) - 0.01 * s.powi(6)))
            .collect();
        let back = b.synthesize(&b.project(&f));
        let err = f.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn ladder_elements_are_consistent() {
        // s = (a + a†)/√2 and d/ds = (a - a†)/√2
        assert!((position_element(0, 1) - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((derivative_element(1, 0) + (0.5f64).sqrt()).abs() < 1e-15);
        assert_eq!(position_element(2, 2), 0.0);
    }
}
