//! Mellin transforms of heat traces: `Tr[π(f)(1+D²)^{−s/2}]`, the
//! residue at `s = 1` that computes the Dixmier trace, and the small-`t`
//! behaviour that drives it.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::heat::{gaussian_double_integral, heat_trace_mehler};
use crate::algebra::tau;
use crate::elements::AlgebraElement;
use crate::numerics::{gauss_legendre_unit, gamma, neville_to_zero, Extrapolation, KahanC};
use crate::reps::Nu;
use crate::{par_map, Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Quadrature in `x = ln t` on `[x_lo, x_hi]`, panels of Gauss–Legendre
/// nodes. Below `e^{x_lo}` the integrand is replaced by its small-`t`
/// model, above `e^{x_hi}` it is negligible.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MellinGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub panel: f64,
    pub nodes_per_panel: usize,
    /// Extra samples at `t_min·4^{−j}`, `j = 1..=fit_depth`, for the model.
    pub fit_depth: usize,
}

impl Default for MellinGrid {
    fn default() -> Self {
        Self { x_lo: -14.0, x_hi: 4.0, panel: 1.0, nodes_per_panel: 16, fit_depth: 5 }
    }
}

impl MellinGrid {
    fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let (u, w) = gauss_legendre_unit(self.nodes_per_panel);
        let panels = ((self.x_hi - self.x_lo) / self.panel).ceil().max(1.0) as usize;
        let width = (self.x_hi - self.x_lo) / panels as f64;
        let mut xs = Vec::with_capacity(panels * u.len());
        let mut ws = Vec::with_capacity(panels * u.len());
        for p in 0..panels {
            let c = self.x_lo + width * (p as f64 + 0.5);
            for (ui, wi) in u.iter().zip(&w) {
                xs.push(c + 0.5 * width * ui);
                ws.push(0.5 * width * wi);
            }
        }
        (xs, ws)
    }

    pub fn t_min(&self) -> f64 {
        self.x_lo.exp()
    }
}

/// Samples of `Φ(t) = t^{1/2} e^{−t} h(t)` for a heat-trace-like `h` with
/// `h(t) ~ t^{−1/2}` at zero, ready for
/// `M(s) = Γ(s/2)^{−1} ∫_0^∞ dt t^{s/2−1} e^{−t} h(t)`.
#[derive(Clone, Debug, Serialize)]
pub struct MellinData {
    pub t: Vec<f64>,
    pub weights_x: Vec<f64>,
    pub phi: Vec<C64>,
    pub t_min: f64,
    /// `Φ(t) ≈ Φ₀ + Φ₁√t + Φ₂t` below `t_min`
    pub phi0: C64,
    pub phi1: C64,
    pub phi2: C64,
    pub fit: Extrapolation,
}

impl MellinData {
    /// `phi(t)` is `Φ(t)` itself. The small-`t` model is fitted by
    /// extrapolation in `√t` and must settle; otherwise the integrand is
    /// not `O(t^{−1/2})` and an accuracy error is returned.
    pub fn build(grid: &MellinGrid, phi: impl Fn(f64) -> Result<C64> + Sync) -> Result<Self> {
        let (xs, weights_x) = grid.nodes();
        let t: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        let t_min = grid.t_min();
        let fit_t: Vec<f64> = (0..=grid.fit_depth.max(2) as i32).map(|j| t_min * 0.25f64.powi(j)).collect();
        let all: Vec<f64> = t.iter().chain(&fit_t).cloned().collect();
        let values = par_map(all.len(), |i| phi(all[i])).into_iter().collect::<Result<Vec<_>>>()?;
        let (phi_v, fit_v) = values.split_at(t.len());
        let hs: Vec<f64> = fit_t.iter().map(|t| t.sqrt()).collect();
        let fit = neville_to_zero(&hs, fit_v);
        let scale = phi_v.iter().chain(fit_v).fold(0.0f64, |m, z| m.max(z.norm()));
        let settled = fit.converges_geometrically(0.5, 1e-12 * scale.max(1e-300))
            || fit.residuals.last().is_some_and(|&r| r <= 1e-9 * scale);
        if !settled {
            return Err(Error::Accuracy(format!(
                "small-t behaviour of the Mellin integrand did not settle: residuals {:?}",
                fit.residuals
            )));
        }
        let phi0 = fit.value;
        // Φ(h²) − Φ₀ = Φ₁h + Φ₂h² through h = √t_min and h/2
        let h = t_min.sqrt();
        let (d1, d2) = (fit_v[0] - phi0, fit_v[1] - phi0);
        let phi2 = (d1 - d2 * 2.0) / (0.5 * h * h);
        let phi1 = (d1 - phi2 * (h * h)) / h;
        Ok(Self { t, weights_x, phi: phi_v.to_vec(), t_min, phi0, phi1, phi2, fit })
    }

    /// `M(s)` for `s > 1`.
    pub fn value(&self, s: f64) -> Result<C64> {
        if !(s > 1.0) {
            return Err(Error::Domain(format!("the Mellin integral needs s > 1, got {s}")));
        }
        let eps = 0.5 * (s - 1.0);
        let mut acc = KahanC::new();
        for ((t, w), p) in self.t.iter().zip(&self.weights_x).zip(&self.phi) {
            acc.add(p * (w * t.powf(eps)));
        }
        acc.add(self.phi0 * (self.t_min.powf(eps) / eps));
        acc.add(self.phi1 * (self.t_min.powf(eps + 0.5) / (eps + 0.5)));
        acc.add(self.phi2 * (self.t_min.powf(eps + 1.0) / (eps + 1.0)));
        Ok(acc.value() / gamma(0.5 * s))
    }

    /// `(s − 1) M(s)`
    pub fn residue_sample(&self, s: f64) -> Result<C64> {
        Ok(self.value(s)? * (s - 1.0))
    }

    /// `max_t min(1, √t)|h(t)|` over the samples and the `t → 0` limit.
    pub fn bound_constant(&self) -> f64 {
        let mut c = self.phi0.norm();
        for (t, p) in self.t.iter().zip(&self.phi) {
            // min(1,√t)|h| = min(1,√t)|Φ| e^t / √t
            let v = p.norm() * t.exp() / t.sqrt().max(1.0);
            c = c.max(v);
        }
        c
    }
}

/// `Tr[π(f)(1+D²)^{−s/2}]` split over the three representations, built
/// from Mehler heat traces `h_ν(t) = 2cosh t · Tr(π_ν(f)e^{−tH})`.
#[derive(Clone, Debug, Serialize)]
pub struct MellinTrace {
    pub per_nu: Vec<(Nu, MellinData)>,
}

impl MellinTrace {
    pub fn new(f: &AlgebraElement, grid: &MellinGrid) -> Result<Self> {
        let mut per_nu = Vec::with_capacity(3);
        for nu in Nu::ALL {
            let data = MellinData::build(grid, |t| {
                // √t e^{−t} 2cosh t = √t (1 + e^{−2t})
                Ok(heat_trace_mehler(f, nu, t)? * (t.sqrt() * (1.0 + (-2.0 * t).exp())))
            })?;
            per_nu.push((nu, data));
        }
        Ok(Self { per_nu })
    }

    pub fn block(&self, nu: Nu) -> &MellinData {
        &self.per_nu.iter().find(|(n, _)| *n == nu).expect("all three blocks are built").1
    }

    pub fn trace_nu(&self, nu: Nu, s: f64) -> Result<C64> {
        self.block(nu).value(s)
    }

    pub fn trace(&self, s: f64) -> Result<C64> {
        let mut acc = KahanC::new();
        for (_, d) in &self.per_nu {
            acc.add(d.value(s)?);
        }
        Ok(acc.value())
    }

    /// Measured `c(f)` with `|Tr(π(f)e^{−tD²})| ≤ c(f) max(1, t^{−1/2})` on
    /// the sampled range.
    pub fn bound_constant(&self) -> f64 {
        // the three blocks share their t-nodes, so sum before the maximum
        let first = &self.per_nu[0].1;
        let mut c = self.per_nu.iter().map(|(_, d)| d.phi0).sum::<C64>().norm();
        for (i, t) in first.t.iter().enumerate() {
            let phi: C64 = self.per_nu.iter().map(|(_, d)| d.phi[i]).sum();
            c = c.max(phi.norm() * t.exp() / t.sqrt().max(1.0));
        }
        c
    }
}

/// `Tr[π(f)(1+D²)^{−s/2}]` for one `s` (builds the heat-trace samples).
pub fn mellin_trace(f: &AlgebraElement, s: f64) -> Result<C64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("the Mellin integral needs s > 1, got {s}")));
    }
    MellinTrace::new(f, &MellinGrid::default())?.trace(s)
}

/// Exponents `s = 1 + 2^{−j}`, `j = 1..=8`.
pub fn dixmier_exponents() -> Vec<f64> {
    (1..=8).map(|j| 1.0 + 0.5f64.powi(j)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NuShare {
    pub nu: Nu,
    pub limit: C64,
    pub reference: C64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MellinEstimate {
    pub s: Vec<f64>,
    /// `g(s) = (s − 1) Tr[π(f)(1+D²)^{−s/2}]`
    pub g: Vec<C64>,
    pub extrapolation: Extrapolation,
    pub limit: C64,
    /// `8τ(f)`
    pub reference: C64,
    pub per_nu: Vec<NuShare>,
    /// Set when the extrapolation residuals do not shrink geometrically.
    pub flagged: bool,
}

fn extrapolate_residue(data: &[&MellinData], s: &[f64]) -> Result<(Vec<C64>, Extrapolation)> {
    let g = s
        .iter()
        .map(|&si| data.iter().map(|d| d.residue_sample(si)).sum::<Result<C64>>())
        .collect::<Result<Vec<_>>>()?;
    let h: Vec<f64> = s.iter().map(|si| si - 1.0).collect();
    let e = neville_to_zero(&h, &g);
    Ok((g, e))
}

/// `lim_{s↓1}(s−1)Tr[π(f)(1+D²)^{−s/2}]` by extrapolation in `s − 1`,
/// with the contribution of each representation.
pub fn dixmier_estimate(f: &AlgebraElement) -> Result<MellinEstimate> {
    dixmier_estimate_with(&MellinTrace::new(f, &MellinGrid::default())?, f)
}

pub fn dixmier_estimate_with(mt: &MellinTrace, f: &AlgebraElement) -> Result<MellinEstimate> {
    let s = dixmier_exponents();
    let t = tau(f)?.value();
    let blocks: Vec<&MellinData> = mt.per_nu.iter().map(|(_, d)| d).collect();
    let (g, extrapolation) = extrapolate_residue(&blocks, &s)?;
    let mut per_nu = Vec::new();
    for (nu, d) in &mt.per_nu {
        let (_, e) = extrapolate_residue(&[d], &s)?;
        let share = if *nu == Nu::Zero { 4.0 } else { 2.0 };
        per_nu.push(NuShare { nu: *nu, limit: e.value, reference: t * share });
    }
    let scale = g.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let flagged = !extrapolation.converges_geometrically(0.5, 1e-10 * scale.max(1e-300));
    Ok(MellinEstimate { limit: extrapolation.value, reference: t * 8.0, s, g, extrapolation, per_nu, flagged })
}

/// `I_ν(t) = √π/√T ∬dx dy f̃(y, νe^{−x}) e^{−Tx²} e^{−(Sx−y)²/(4T)}`.
pub fn i_nu(f: &AlgebraElement, nu: Nu, t: f64) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("t must be positive, got {t}")));
    }
    let atoms = f.atoms().ok_or_else(|| Error::Parameter(format!("`{}` has no closed form", f.label())))?;
    if atoms.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(gaussian_double_integral(atoms, nu, t, 1.0) * (2.0 * PI.sqrt()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallTLimit {
    pub nu: Nu,
    pub t: Vec<f64>,
    /// `√t I_ν(t)`
    pub samples: Vec<C64>,
    pub extrapolation: Extrapolation,
    pub limit: C64,
    /// `π^{3/2}τ(f)` for `ν = ±`, `2π^{3/2}τ(f)` for `ν = 0`
    pub reference: C64,
}

/// `lim_{t↓0} √t I_ν(t)` from `t = 2^{−j}`, `j = 3..=10`, extrapolated in
/// `√t`. Residuals that do not settle give an accuracy error.
pub fn small_t_limit(f: &AlgebraElement, nu: Nu) -> Result<SmallTLimit> {
    let t: Vec<f64> = (3..=10).map(|j| 0.5f64.powi(j)).collect();
    let samples = par_map(t.len(), |i| Ok(i_nu(f, nu, t[i])? * t[i].sqrt())).into_iter().collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = t.iter().map(|t| t.sqrt()).collect();
    let extrapolation = neville_to_zero(&hs, &samples);
    let scale = samples.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f.envelope(0.0));
    if !extrapolation.settles_in_pairs(0.5, 1e-12 * scale.max(1e-300), 4) {
        return Err(Error::Accuracy(format!(
            "√t I(t) extrapolation does not settle: residuals {:?}",
            extrapolation.residuals
        )));
    }
    let share = if nu == Nu::Zero { 2.0 } else { 1.0 };
    let reference = tau(f)?.value() * (share * PI.powf(1.5));
    Ok(SmallTLimit { nu, limit: extrapolation.value, t, samples, extrapolation, reference })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaF0 {
    pub c: f64,
    pub s: Vec<f64>,
    pub g: Vec<C64>,
    pub limit: f64,
    /// `2F(0)/Γ(1/2)`
    pub reference: f64,
}

/// `lim_{s↓1} (s−1)/Γ(s/2) ∫dt t^{s/2−1} t^{−1/2} e^{−t} F(t)` for
/// `F(t) = e^{−ct}`, through the same quadrature and small-`t` model as
/// the heat-trace Mellin transforms.
pub fn lemma_f0_check(c: f64) -> Result<LemmaF0> {
    let data = MellinData::build(&MellinGrid::default(), |t| Ok(C64::new((-(1.0 + c) * t).exp(), 0.0)))?;
    let s = dixmier_exponents();
    let (g, e) = extrapolate_residue(&[&data], &s)?;
    Ok(LemmaF0 { c, s, g, limit: e.value.re, reference: 2.0 / gamma(0.5) })
}

/// `(s − 1) M(s)` for `F(t) = e^{−ct}` in closed form:
/// `(s−1) Γ((s−1)/2) / (Γ(s/2) (1+c)^{(s−1)/2})`.
pub fn lemma_f0_closed(c: f64, s: f64) -> f64 {
    (s - 1.0) * gamma(0.5 * (s - 1.0)) / (gamma(0.5 * s) * (1.0 + c).powf(0.5 * (s - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{derive, l2_norm_g, Derivation};
    use crate::elements::{default_atom, shifted_atom};

    #[test]
    fn lemma_f0_numeric_and_closed() {
        for c in [0.0, 1.0, 2.0] {
            let l = lemma_f0_check(c).unwrap();
            assert!((l.limit - l.reference).abs() < 1e-6, "c={c}: {l:?}");
            for (s, g) in l.s.iter().zip(&l.g) {
                assert!((g.re - lemma_f0_closed(c, *s)).abs() < 1e-8, "s={s}: {} vs {}", g.re, lemma_f0_closed(c, *s));
            }
        }
    }

    #[test]
    fn small_t_limits_follow_tau() {
        let f = AlgebraElement::atom(default_atom());
        for nu in Nu::ALL {
            let l = small_t_limit(&f, nu).unwrap();
            assert!(((l.limit - l.reference) / l.reference).norm() < 0.02, "{nu}: {} vs {}", l.limit, l.reference);
        }
        let g = AlgebraElement::atom(shifted_atom());
        let d1 = derive(Derivation::Delta1, &g).unwrap();
        let bound = 1e-3 * l2_norm_g(&g).unwrap();
        for nu in Nu::ALL {
            assert!(small_t_limit(&d1, nu).unwrap().limit.norm() < bound, "{nu}");
        }
    }

    #[test]
    fn mellin_rejects_s_at_most_one() {
        let f = AlgebraElement::atom(default_atom());
        assert!(matches!(mellin_trace(&f, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_element() {
        let z = AlgebraElement::zero();
        assert_eq!(i_nu(&z, Nu::Plus, 0.1).unwrap(), C64::new(0.0, 0.0));
        let small = MellinGrid { x_lo: -4.0, x_hi: 2.0, ..MellinGrid::default() };
        assert_eq!(MellinTrace::new(&z, &small).unwrap().trace(2.0).unwrap(), C64::new(0.0, 0.0));
    }
}
