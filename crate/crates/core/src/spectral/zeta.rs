use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::numerics::{neville_to_zero, riemann_zeta, Extrapolation, Kahan};
use crate::{Error, Result};

/// `ζ_D(s) = Σ_n m_n (1 + d_n)^{−s/2}` over the spectrum `d_n = 2n` of `D²`
/// in one representation block (`m_0 = 1`, `m_n = 2`), in closed form
/// `(2 − 2^{1−s/2}) ζ(s/2) − 1`.
pub fn zeta_d(s: f64) -> Result<f64> {
    if !(s > 2.0) {
        return Err(Error::Domain(format!("ζ_D(s) converges only for s > 2, got {s}")));
    }
    Ok((2.0 - 2f64.powf(1.0 - 0.5 * s)) * riemann_zeta(0.5 * s)? - 1.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectralSum {
    pub value: f64,
    /// terms kept, `n = 0..=terms`
    pub terms: usize,
    /// size of the last Euler–Maclaurin correction used for the tail
    pub tail_bound: f64,
}

/// The eigenvalue sum `1 + 2Σ_{n=1}^{N}(2n+1)^{−s/2}` plus an
/// Euler–Maclaurin tail for `n > N`.
pub fn zeta_d_eigensum(s: f64, terms: usize) -> Result<SpectralSum> {
    if !(s > 2.0) {
        return Err(Error::Domain(format!("ζ_D(s) converges only for s > 2, got {s}")));
    }
    if terms == 0 {
        return Err(Error::Parameter("need at least one term".into()));
    }
    let p = 0.5 * s;
    let mut acc = Kahan::new();
    // smallest terms first
    for n in (1..=terms).rev() {
        acc.add(2.0 * (2.0 * n as f64 + 1.0).powf(-p));
    }
    acc.add(1.0);
    // Σ_{n>N} g(n) for g(x) = 2(1+2x)^{−p}
    let y = 2.0 * terms as f64 + 1.0;
    let integral = y.powf(1.0 - p) / (p - 1.0);
    let g = 2.0 * y.powf(-p);
    let g1 = -4.0 * p * y.powf(-p - 1.0);
    let g3 = -16.0 * p * (p + 1.0) * (p + 2.0) * y.powf(-p - 3.0);
    acc.add(integral - 0.5 * g - g1 / 12.0 + g3 / 720.0);
    Ok(SpectralSum { value: acc.value(), terms, tail_bound: (g3 / 720.0).abs() })
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleProbe {
    /// `σ − 2`
    pub h: Vec<f64>,
    /// `(σ − 2) ζ_D(σ)`
    pub samples: Vec<f64>,
    pub extrapolation: Extrapolation,
    pub limit: f64,
}

/// `lim_{σ↓2} (σ − 2) ζ_D(σ)` from `σ = 2 + 2^{−j}`, `j = 1..=jmax`,
/// extrapolated in `σ − 2`. The closed form gives the residue `2`.
pub fn zeta_pole_probe(jmax: usize) -> Result<PoleProbe> {
    let h: Vec<f64> = (1..=jmax as i32).map(|j| 0.5f64.powi(j)).collect();
    let samples = h.iter().map(|&e| Ok(e * zeta_d(2.0 + e)?)).collect::<Result<Vec<f64>>>()?;
    let ys: Vec<C64> = samples.iter().map(|&v| C64::new(v, 0.0)).collect();
    let extrapolation = neville_to_zero(&h, &ys);
    let limit = extrapolation.value.re;
    Ok(PoleProbe { h, samples, extrapolation, limit })
}
