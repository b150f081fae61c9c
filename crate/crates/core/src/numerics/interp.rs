//! Local cubic Hermite interpolation on uniform axes. Node slopes come from
//! fourth-order central differences, which keeps the interpolant O(h⁴).

/// A uniform axis `lo + i h`, `i < n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformAxis {
    pub lo: f64,
    pub h: f64,
    pub n: usize,
}

impl UniformAxis {
    pub fn hi(&self) -> f64 {
        self.lo + self.h * (self.n - 1) as f64
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi()
    }

    /// Index of the cell holding `x` and the local coordinate in [0, 1].
    /// `None` outside the axis.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !self.contains(x) {
            return None;
        }
        let u = (x - self.lo) / self.h;
        let i = (u.floor() as usize).min(self.n - 2);
        Some((i, u - i as f64))
    }
}

/// Weights on the six samples `f_{i-2}, ..., f_{i+3}` reproducing the cubic
/// Hermite interpolant at local coordinate `t` of cell `[i, i+1]`.
pub fn cubic_hermite_weights(t: f64) -> [f64; 6] {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    [
        h10 / 12.0,
        (-8.0 * h10 + h11) / 12.0,
        h00 - 8.0 * h11 / 12.0,
        8.0 * h10 / 12.0 + h01,
        (-h10 + 8.0 * h11) / 12.0,
        -h11 / 12.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interp(ax: &UniformAxis, f: &[f64], x: f64) -> f64 {
        let (i, t) = ax.locate(x).unwrap();
        let w = cubic_hermite_weights(t);
        (0..6)
            .map(|k| {
                let j = i as isize + k as isize - 2;
                if j < 0 || j >= ax.n as isize { 0.0 } else { w[k] * f[j as usize] }
            })
            .sum()
    }

    #[test]
    fn reproduces_nodes() {
        let w = cubic_hermite_weights(0.0);
        assert_eq!(w, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let w = cubic_hermite_weights(1.0);
        assert!((w[3] - 1.0).abs() < 1e-15 && w.iter().sum::<f64>() - 1.0 < 1e-15);
    }

    #[test]
    fn fourth_order_convergence() {
        let f = |x: f64| (-x * x).exp() * (3.0 * x).cos();
        let err = |n: usize| {
            let ax = UniformAxis { lo: -8.0, h: 16.0 / (n - 1) as f64, n };
            let s: Vec<f64> = (0..n).map(|i| f(ax.lo + ax.h * i as f64)).collect();
            (0..200).map(|k| -2.0 + 0.0193 * k as f64).map(|x| (interp(&ax, &s, x) - f(x)).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(161), err(321));
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
    }
}
