use num_complex::Complex64 as C64;
use serde::Serialize;

/// Result of extrapolating a sequence `y(h_j)` to `h = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Extrapolation {
    pub value: C64,
    /// Successive estimates `P_{0..k}(0)` for `k = 0..n-1`, the k-th using
    /// the `k+1` samples farthest from zero.
    pub estimates: Vec<C64>,
    /// `|estimates[k] - estimates[k-1]|`, `k ≥ 1`.
    pub residuals: Vec<f64>,
}

impl Extrapolation {
    /// True when the residuals shrink at least geometrically down to the
    /// rounding floor `floor`: each residual above the floor is at most
    /// `ratio` times the previous one, and the last one is below `first *
    /// ratio^(len/2)` or the floor.
    pub fn converges_geometrically(&self, ratio: f64, floor: f64) -> bool {
        let r = &self.residuals;
        if r.len() < 2 {
            return true;
        }
        let mut ok = true;
        for w in r.windows(2) {
            if w[1] > floor && w[1] > ratio * w[0] {
                ok = false;
            }
        }
        let last = *r.last().unwrap();
        ok && (last <= floor || last <= r[0] * ratio.powi((r.len() / 2) as i32))
    }

    /// Weaker test for series in `√t`-like variables whose even and odd
    /// corrections alternate in size: over the last `tail` residuals, each
    /// one above `floor` is at most `ratio` times the residual two steps
    /// earlier.
    pub fn settles_in_pairs(&self, ratio: f64, floor: f64, tail: usize) -> bool {
        let r = &self.residuals;
        let from = r.len().saturating_sub(tail).max(2);
        (from..r.len()).all(|k| r[k] <= floor || r[k] <= ratio * r[k - 2])
    }
}

/// Polynomial (Neville) extrapolation of `ys` sampled at abscissae `hs` to
/// `h = 0`. Samples are consumed from the coarsest inward, as in a
/// Richardson table: the k-th estimate interpolates the k+1 largest `|h|`.
pub fn neville_to_zero(hs: &[f64], ys: &[C64]) -> Extrapolation {
    assert_eq!(hs.len(), ys.len());
    assert!(!hs.is_empty());
    let mut order: Vec<usize> = (0..hs.len()).collect();
    order.sort_by(|&i, &j| hs[j].abs().partial_cmp(&hs[i].abs()).unwrap());
    let h: Vec<f64> = order.iter().map(|&i| hs[i]).collect();
    let y: Vec<C64> = order.iter().map(|&i| ys[i]).collect();

    let n = h.len();
    // p[i] holds P_{i..i+k}(0) after stage k
    let mut p = y.clone();
    let mut estimates = vec![p[0]];
    for k in 1..n {
        for i in 0..n - k {
            let (hi, hk) = (h[i], h[i + k]);
            p[i] = (p[i + 1] * hi - p[i] * hk) / (hi - hk);
        }
        estimates.push(p[0]);
    }
    let residuals = estimates.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    Extrapolation { value: *estimates.last().unwrap(), estimates, residuals }
}

/// Fixed-order Richardson extrapolation on a sliding window: each estimate
/// removes the first `order` powers of `h` from `order + 1` consecutive
/// samples, moving towards `h = 0`. Residuals compare consecutive windows.
pub fn richardson_sliding(hs: &[f64], ys: &[C64], order: usize) -> Extrapolation {
    assert_eq!(hs.len(), ys.len());
    assert!(hs.len() > order);
    let mut idx: Vec<usize> = (0..hs.len()).collect();
    idx.sort_by(|&i, &j| hs[j].abs().partial_cmp(&hs[i].abs()).unwrap());
    let estimates: Vec<C64> = idx
        .windows(order + 1)
        .map(|w| {
            let h: Vec<f64> = w.iter().map(|&i| hs[i]).collect();
            let y: Vec<C64> = w.iter().map(|&i| ys[i]).collect();
            neville_to_zero(&h, &y).value
        })
        .collect();
    let residuals = estimates.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    Extrapolation { value: *estimates.last().unwrap(), estimates, residuals }
}
