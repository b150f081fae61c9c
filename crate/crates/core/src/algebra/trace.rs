use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::elements::{panel_quad, AlgebraElement};
use crate::numerics::Kahan;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The trace evaluated along its three equivalent routes:
/// `f̃(0,0)`, `∫db f̂(0,b)` and `(1/2π)∫dα f̌(α,0)`.
///
/// The last two need the closed form (their integrands are themselves
/// integrals for other bodies) and are `None` otherwise.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TauRoutes {
    pub abeta: C64,
    pub ab: Option<C64>,
    pub alphabeta: Option<C64>,
}

impl TauRoutes {
    pub fn value(&self) -> C64 {
        self.abeta
    }

    pub fn max_deviation(&self) -> f64 {
        let v = [Some(self.abeta), self.ab, self.alphabeta];
        let mut m = 0.0f64;
        for x in v.iter().flatten() {
            for y in v.iter().flatten() {
                m = m.max((x - y).norm());
            }
        }
        m
    }
}

pub fn tau(f: &AlgebraElement) -> Result<TauRoutes> {
    f.require_abeta()?;
    let abeta = f.abeta(0.0, 0.0);
    let Some(sum) = f.atoms() else {
        return Ok(TauRoutes { abeta, ab: None, alphabeta: None });
    };
    if sum.is_zero() {
        return Ok(TauRoutes { abeta, ab: Some(abeta), alphabeta: Some(abeta) });
    }
    let (b0, b1) = sum.b_range();
    let ab = panel_quad(b0, b1, 0.25, |b| sum.eval_ab(0.0, b));
    let (x0, x1) = sum.alpha_range();
    let alphabeta = panel_quad(x0, x1, 0.25, |x| sum.eval_alphabeta(x, 0.0)) / TWO_PI;
    Ok(TauRoutes { abeta, ab: Some(ab), alphabeta: Some(alphabeta) })
}

/// `τ(f)`, failing when the routes disagree by more than `tol`.
pub fn tau_checked(f: &AlgebraElement, tol: f64) -> Result<C64> {
    let r = tau(f)?;
    let dev = r.max_deviation();
    if dev > tol {
        return Err(Error::Accuracy(format!("trace routes disagree by {dev:e} (> {tol:e}): {r:?}")));
    }
    Ok(r.value())
}

/// `‖f‖²_{L²(G)} = ∫ e^a |f̂(a,b)|² da db`, in group variables.
///
/// Needs a closed-form body; see [`l2_norm_g_abeta`] for the form that
/// works on every body.
pub fn l2_norm_g(f: &AlgebraElement) -> Result<f64> {
    let sum = f
        .atoms()
        .ok_or_else(|| Error::Parameter("the group-variable norm needs a closed-form element".into()))?;
    if sum.is_zero() {
        return Ok(0.0);
    }
    let (a0, a1) = sum.a_range();
    let (b0, b1) = sum.b_range();
    let v = panel_quad(a0, a1, 0.5, |a| {
        let inner = panel_quad(b0, b1, 0.5, |b| C64::new(sum.eval_ab(a, b).norm_sqr(), 0.0));
        inner * a.exp()
    });
    Ok(v.re.sqrt())
}

/// `‖f‖² = (1/2π) ∫ e^{−a} |f̃(a,β)|² da dβ`, the same norm in the
/// `(a, β)` chart.
pub fn l2_norm_g_abeta(f: &AlgebraElement) -> Result<f64> {
    f.require_abeta()?;
    let (a0, a1) = f.a_range();
    if !(a1 > a0) {
        return Ok(0.0);
    }
    let mut acc = Kahan::new();
    let v = panel_quad(a0, a1, 0.5, |a| {
        let (lo, hi) = f.beta_window(a);
        let panel = ((hi - lo) / 24.0).max(1e-3);
        let inner = panel_quad(lo, hi, panel, |beta| C64::new(f.abeta(a, beta).norm_sqr(), 0.0));
        inner * (-a).exp()
    });
    acc.add(v.re / TWO_PI);
    Ok(acc.value().sqrt())
}
