use num_complex::Complex64 as C64;

/// Euler's Gamma function for real arguments.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Lower incomplete gamma `γ(z, x) = ∫_0^x t^{z-1} e^{-t} dt` for `z > 0`
/// and moderate `x`, by its power series.
pub fn lower_gamma(z: f64, x: f64) -> f64 {
    assert!(z > 0.0 && x >= 0.0, "lower_gamma domain: z={z}, x={x}");
    if x == 0.0 {
        return 0.0;
    }
    let mut term = 1.0 / z;
    let mut acc = super::Kahan::new();
    acc.add(term);
    for n in 1..500 {
        term *= x / (z + n as f64);
        acc.add(term);
        if term.abs() < 1e-17 * acc.value().abs() {
            break;
        }
    }
    (z * x.ln() - x).exp() * acc.value()
}

/// Gaussian integrals `∫ y^i exp(-A y² + B y) dy`, `i = 0..=imax`, written
/// as `exp(log_scale) · moments[i]` so the exponential can be combined with
/// other factors before it is taken.
#[derive(Clone, Debug)]
pub struct GaussWeight {
    pub log_scale: C64,
    pub moments: Vec<C64>,
}

/// `A > 0` real, `B` complex. The moments are those of a normal law with
/// complex mean `B/(2A)` and variance `1/(2A)`.
pub fn gauss_moments(imax: usize, a: f64, b: C64) -> GaussWeight {
    debug_assert!(a > 0.0);
    let mu = b / (2.0 * a);
    let var = 0.5 / a;
    let mut moments = Vec::with_capacity(imax + 1);
    moments.push(C64::new(1.0, 0.0));
    if imax >= 1 {
        moments.push(mu);
    }
    for i in 1..imax {
        let next = mu * moments[i] + moments[i - 1] * (var * i as f64);
        moments.push(next);
    }
    let log_scale = b * b / (4.0 * a) + 0.5 * (std::f64::consts::PI / a).ln();
    GaussWeight { log_scale, moments }
}
