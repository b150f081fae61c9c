//! Traces of the representations: `tr±`, `Tr(π_ν(f)θ²)`, the field
//! `tr₀ᵖ` and the `π₀` trace.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{rep_kernel, theta_op, Nu};
use crate::algebra::tau;
use crate::elements::{panel_quad, AlgebraElement, Chart};
use crate::numerics::Grid1D;
use crate::{Error, Result};

/// Upper `u`-cutoffs of the partial integrals used to decide convergence.
pub const TRACE_CUTOFFS: [f64; 3] = [12.0, 24.0, 36.0];

/// Increments between consecutive cutoffs above this (relative to the
/// envelope of `f` at `a = 0`) count as growth.
pub const DIVERGENCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct RepTrace {
    pub nu: Nu,
    /// `∫du f̃(0, νe^{−u})`, withheld when the integral grows with the
    /// cutoff
    pub value: Option<C64>,
    /// `Σ_i K(s_i,s_i)w_i` on the operator grid, same condition
    pub diagonal: Option<C64>,
    pub divergent: bool,
    /// Growth per unit of `u` when divergent; tends to `f̃(0,0) = τ(f)`.
    pub growth_rate: Option<C64>,
    /// `(cutoff, partial integral)`
    pub partials: Vec<(f64, C64)>,
}

impl RepTrace {
    pub fn value(&self) -> Result<C64> {
        self.value.ok_or_else(|| {
            Error::Divergent(format!(
                "tr{} grows like {:e} per unit of u; the operator is not trace-class",
                self.nu,
                self.growth_rate.map_or(0.0, |r| r.norm())
            ))
        })
    }

    /// Gap between the two routes, if both exist.
    pub fn route_gap(&self) -> Option<f64> {
        Some((self.value? - self.diagonal?).norm())
    }
}

// Lower u-limit: below it β = νe^{−u} is outside the β-window of f at a = 0.
fn u_floor(f: &AlgebraElement) -> f64 {
    let (lo, hi) = f.beta_window(0.0);
    let reach = lo.abs().max(hi.abs()).max(1.0);
    -reach.ln() - 1.0
}

/// `tr_ν(f) = ∫du f̃(0, νe^{−u})` for `ν = ±`.
///
/// The integrand tends to `f̃(0,0)` as `u → ∞`, so the integral is finite
/// only when that value vanishes (and the approach is fast enough). The
/// integral is evaluated up to each of [`TRACE_CUTOFFS`]; if it keeps
/// growing the value is withheld and the growth rate reported. The
/// diagonal of the discretized operator on `sgrid` is the second route.
pub fn rep_trace(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<RepTrace> {
    if nu == Nu::Zero {
        return Err(Error::Parameter("rep_trace is for ν = ±; use tr0 or tr0p for π₀".into()));
    }
    f.require_abeta()?;
    let sign = nu.sign();
    let lo = u_floor(f);
    let integrand = |u: f64| f.abeta(0.0, sign * (-u).exp());
    let mut partials = Vec::with_capacity(TRACE_CUTOFFS.len());
    let mut prev_cut = lo;
    let mut acc = C64::new(0.0, 0.0);
    for &cut in &TRACE_CUTOFFS {
        acc += panel_quad(prev_cut, cut, 0.25, integrand);
        partials.push((cut, acc));
        prev_cut = cut;
    }
    let n = partials.len();
    let last_step = partials[n - 1].1 - partials[n - 2].1;
    let width = partials[n - 1].0 - partials[n - 2].0;
    let scale = f.envelope(0.0).max(f64::MIN_POSITIVE);
    let divergent = last_step.norm() > DIVERGENCE_TOL * scale;
    if divergent {
        return Ok(RepTrace { nu, value: None, diagonal: None, divergent, growth_rate: Some(last_step / width), partials });
    }
    let diagonal = rep_kernel(f, nu, sgrid)?.trace()?;
    Ok(RepTrace { nu, value: Some(acc), diagonal: Some(diagonal), divergent, growth_rate: None, partials })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Theta2Trace {
    pub nu: Nu,
    /// `Σ_i K(s_i,s_i) e^{−s_i} w_i`
    pub diagonal: C64,
    /// `∫_0^∞ f̃(0,β)dβ` for `ν = +`, `∫_{−∞}^0 f̃(0,β)dβ` for `ν = −`
    pub integral: C64,
}

/// `Tr(π_ν(f)θ²)` by the diagonal of the kernel `f̃(u−s, νe^{−s})e^{−u}`
/// and by the half-line `β`-integral of `f̃(0,·)`.
pub fn theta2_trace(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<Theta2Trace> {
    if nu == Nu::Zero {
        return Err(Error::Parameter("θ² traces are defined for ν = ±".into()));
    }
    f.require_abeta()?;
    let op = theta_op(sgrid, 2.0).right(&rep_kernel(f, nu, sgrid)?);
    let diagonal = op.trace()?;
    let (lo, hi) = f.beta_window(0.0);
    let (from, to) = match nu {
        Nu::Plus => (lo.max(0.0), hi.max(0.0)),
        _ => (lo.min(0.0), hi.min(0.0)),
    };
    let integral = panel_quad(from, to, 0.125, |b| f.abeta(0.0, b));
    Ok(Theta2Trace { nu, diagonal, integral })
}

/// `tr₀ᵖ(f) = f̌(p, 0)`, the trace of the one-dimensional representation
/// `π₀ᵖ`.
pub fn tr0p(f: &AlgebraElement, p: f64) -> Result<C64> {
    f.eval(Chart::ALPHABETA, p, 0.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TauIntegral {
    /// `τ(f)`
    pub lhs: C64,
    /// `(1/2π)∫dp tr₀ᵖ(f)`
    pub rhs: C64,
}

/// Compares `τ(f)` with the integral of the field of traces `tr₀ᵖ`. With
/// the Fourier normalization used here, `∫dp f̌(p,0) = 2π f̃(0,0)`, hence
/// the `1/2π`.
pub fn tau_as_integral_check(f: &AlgebraElement) -> Result<TauIntegral> {
    let atoms = f
        .atoms()
        .ok_or_else(|| Error::Parameter(format!("`{}` has no closed form in the (α, β) chart", f.label())))?;
    let lhs = tau(f)?.value();
    if atoms.is_zero() {
        return Ok(TauIntegral { lhs, rhs: C64::new(0.0, 0.0) });
    }
    let (lo, hi) = atoms.alpha_range();
    let rhs = panel_quad(lo, hi, 0.125, |p| atoms.eval_alphabeta(p, 0.0)) / (2.0 * std::f64::consts::PI);
    Ok(TauIntegral { lhs, rhs })
}

/// `Tr π₀(f) = ∫ds f̃(0,0)`: zero when `τ(f) = 0` and infinite otherwise.
/// Returned only for `|τ(f)| ≤ tol`, as the diagonal sum on `sgrid`.
pub fn tr0(f: &AlgebraElement, sgrid: &Grid1D, tol: f64) -> Result<C64> {
    let t = f.abeta(0.0, 0.0);
    if t.norm() > tol {
        return Err(Error::Divergent(format!("Tr π₀(f) = ∫ds τ(f) with τ(f) = {t}")));
    }
    rep_kernel(f, Nu::Zero, sgrid)?.trace()
}
