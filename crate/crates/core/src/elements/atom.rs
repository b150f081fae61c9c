//! Closed-form elements: Gaussian atoms and the polynomial-times-Gaussian
//! class they generate under derivations, dilations and twists.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::numerics::{gauss_moments, GaussWeight};
use crate::{Error, Result};

/// `f̃(a,β) = A·exp(−(a−a₀)²/(2σ_a²) + ipa)·exp(−(β−β₀)²/(2σ_β²) + iqβ)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussAtom {
    #[serde(rename = "A_re")]
    pub amp_re: f64,
    #[serde(rename = "A_im")]
    pub amp_im: f64,
    pub a0: f64,
    pub sigma_a: f64,
    pub p: f64,
    pub beta0: f64,
    pub sigma_beta: f64,
    pub q: f64,
}

impl GaussAtom {
    pub fn new(amplitude: C64, a0: f64, sigma_a: f64, p: f64, beta0: f64, sigma_beta: f64, q: f64) -> Result<Self> {
        let atom = Self { amp_re: amplitude.re, amp_im: amplitude.im, a0, sigma_a, p, beta0, sigma_beta, q };
        atom.validate()?;
        Ok(atom)
    }

    pub fn amplitude(&self) -> C64 {
        C64::new(self.amp_re, self.amp_im)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.amp_re, self.amp_im, self.a0, self.sigma_a, self.p, self.beta0, self.sigma_beta, self.q];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("atom parameters must be finite".into()));
        }
        if !(self.sigma_a > 0.0 && self.sigma_beta > 0.0) {
            return Err(Error::Parameter(format!(
                "atom widths must be positive, got sigma_a={}, sigma_beta={}",
                self.sigma_a, self.sigma_beta
            )));
        }
        Ok(())
    }
}

/// `exp(−(x−c)²/(2w²) + ikx)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Gauss1 {
    pub c: f64,
    pub w: f64,
    pub k: f64,
}

impl Gauss1 {
    #[inline]
    pub fn log_at(&self, x: f64) -> C64 {
        let d = x - self.c;
        C64::new(-d * d / (2.0 * self.w * self.w), self.k * x)
    }

    /// `∫ x^n exp(..)·e^{iωx} dx`, `n = 0..=nmax`.
    pub fn fourier_moments(&self, nmax: usize, omega: f64) -> GaussWeight {
        let w2 = self.w * self.w;
        let mut g = gauss_moments(nmax, 0.5 / w2, C64::new(self.c / w2, self.k + omega));
        g.log_scale -= self.c * self.c / (2.0 * w2);
        g
    }

    /// Half-width beyond which a degree-`deg` polynomial times this Gaussian
    /// is below ~1e-16 of its peak.
    pub fn reach(&self, deg: u32) -> f64 {
        (9.0 + 0.5 * deg as f64) * self.w
    }
}

/// `Σ_t c_t a^{i_t} β^{j_t} · G_a(a) · G_β(β)`
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGauss {
    pub(crate) terms: Vec<(u32, u32, C64)>,
    pub(crate) ga: Gauss1,
    pub(crate) gb: Gauss1,
}

impl From<&GaussAtom> for PolyGauss {
    fn from(at: &GaussAtom) -> Self {
        PolyGauss {
            terms: vec![(0, 0, at.amplitude())],
            ga: Gauss1 { c: at.a0, w: at.sigma_a, k: at.p },
            gb: Gauss1 { c: at.beta0, w: at.sigma_beta, k: at.q },
        }
    }
}

impl PolyGauss {
    fn max_deg(&self) -> (u32, u32) {
        self.terms.iter().fold((0, 0), |(i, j), t| (i.max(t.0), j.max(t.1)))
    }

    fn with_terms(&self, terms: Vec<(u32, u32, C64)>) -> Self {
        let mut out = PolyGauss { terms, ga: self.ga, gb: self.gb };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.terms.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(u32, u32, C64)> = Vec::with_capacity(self.terms.len());
        for &(i, j, c) in &self.terms {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += c,
                _ => merged.push((i, j, c)),
            }
        }
        merged.retain(|t| t.2 != C64::new(0.0, 0.0));
        self.terms = merged;
    }

    pub fn eval_abeta(&self, a: f64, beta: f64) -> C64 {
        let e = (self.ga.log_at(a) + self.gb.log_at(beta)).exp();
        if e == C64::new(0.0, 0.0) {
            return e;
        }
        let mut poly = C64::new(0.0, 0.0);
        for &(i, j, c) in &self.terms {
            poly += c * a.powi(i as i32) * beta.powi(j as i32);
        }
        poly * e
    }

    /// `f̌(α,β) = ∫da f̃(a,β) e^{iaα}`
    pub fn eval_alphabeta(&self, alpha: f64, beta: f64) -> C64 {
        let (imax, _) = self.max_deg();
        let m = self.ga.fourier_moments(imax as usize, alpha);
        let e = (m.log_scale + self.gb.log_at(beta)).exp();
        let mut acc = C64::new(0.0, 0.0);
        for &(i, j, c) in &self.terms {
            acc += c * m.moments[i as usize] * beta.powi(j as i32);
        }
        acc * e
    }

    /// `f̂(a,b) = (1/2π) e^{−a} ∫dβ f̃(a,β) e^{−ibβ}`
    pub fn eval_ab(&self, a: f64, b: f64) -> C64 {
        let (_, jmax) = self.max_deg();
        let m = self.gb.fourier_moments(jmax as usize, -b);
        let e = (m.log_scale + self.ga.log_at(a) - a).exp() / (2.0 * std::f64::consts::PI);
        let mut acc = C64::new(0.0, 0.0);
        for &(i, j, c) in &self.terms {
            acc += c * m.moments[j as usize] * a.powi(i as i32);
        }
        acc * e
    }

    pub fn scale(&self, s: C64) -> Self {
        self.with_terms(self.terms.iter().map(|&(i, j, c)| (i, j, c * s)).collect())
    }

    pub fn mul_a(&self) -> Self {
        self.with_terms(self.terms.iter().map(|&(i, j, c)| (i + 1, j, c)).collect())
    }

    pub fn mul_beta(&self) -> Self {
        self.with_terms(self.terms.iter().map(|&(i, j, c)| (i, j + 1, c)).collect())
    }

    pub fn d_a(&self) -> Self {
        self.with_terms(differentiate(&self.terms, self.ga, |t| t.0, |t, n| (n, t.1)))
    }

    pub fn d_beta(&self) -> Self {
        self.with_terms(differentiate(&self.terms, self.gb, |t| t.1, |t, n| (t.0, n)))
    }

    /// Multiplication by `e^{za}` for complex `z`: the real part moves the
    /// Gaussian centre, the imaginary part adds to the phase.
    pub fn exp_a(&self, z: C64) -> Self {
        let g = self.ga;
        let r = z.re;
        let factor = (r * g.c + 0.5 * r * r * g.w * g.w).exp();
        let ga = Gauss1 { c: g.c + r * g.w * g.w, w: g.w, k: g.k + z.im };
        let mut out = self.scale(C64::new(factor, 0.0));
        out.ga = ga;
        out
    }

    /// `f̃(a, e^u β)`
    pub fn scale_beta(&self, u: f64) -> Self {
        let s = u.exp();
        let terms = self.terms.iter().map(|&(i, j, c)| (i, j, c * s.powi(j as i32))).collect();
        let mut out = self.with_terms(terms);
        out.gb = Gauss1 { c: self.gb.c / s, w: self.gb.w / s, k: self.gb.k * s };
        out
    }

    pub fn a_range(&self) -> (f64, f64) {
        let r = self.ga.reach(self.max_deg().0);
        (self.ga.c - r, self.ga.c + r)
    }

    pub fn beta_range(&self) -> (f64, f64) {
        let r = self.gb.reach(self.max_deg().1);
        (self.gb.c - r, self.gb.c + r)
    }

    /// Window in `α` outside which `f̌(·, β)` is negligible.
    pub fn alpha_range(&self) -> (f64, f64) {
        let r = (9.0 + 0.5 * self.max_deg().0 as f64) / self.ga.w;
        (-self.ga.k - r, -self.ga.k + r)
    }

    /// Window in `b` outside which `f̂(a, ·)` is negligible.
    pub fn b_range(&self) -> (f64, f64) {
        let r = (9.0 + 0.5 * self.max_deg().1 as f64) / self.gb.w;
        (self.gb.k - r, self.gb.k + r)
    }

    /// Upper bound for `sup_β |f̃(a, β)|`.
    pub fn envelope(&self, a: f64) -> f64 {
        let ga = (-(a - self.ga.c).powi(2) / (2.0 * self.ga.w * self.ga.w)).exp();
        let mut acc = 0.0;
        for &(i, j, c) in &self.terms {
            let bmax = self.gb.c.abs() + self.gb.w * (1.0 + (j as f64).sqrt());
            acc += c.norm() * a.abs().powi(i as i32) * bmax.powi(j as i32);
        }
        acc * ga
    }
}

// d/dx of x^n exp(-(x-c)^2/2w^2 + ikx) = [n x^{n-1} + (c/w^2 + ik) x^n - x^{n+1}/w^2] exp(..)
fn differentiate(
    terms: &[(u32, u32, C64)],
    g: Gauss1,
    deg: impl Fn(&(u32, u32, C64)) -> u32,
    rebuild: impl Fn(&(u32, u32, C64), u32) -> (u32, u32),
) -> Vec<(u32, u32, C64)> {
    let w2 = g.w * g.w;
    let lin = C64::new(g.c / w2, g.k);
    let mut out = Vec::with_capacity(3 * terms.len());
    for t in terms {
        let n = deg(t);
        let c = t.2;
        if n > 0 {
            let (i, j) = rebuild(t, n - 1);
            out.push((i, j, c * n as f64));
        }
        let (i, j) = rebuild(t, n);
        out.push((i, j, c * lin));
        let (i, j) = rebuild(t, n + 1);
        out.push((i, j, -c / w2));
    }
    out
}

/// Finite sum of [`PolyGauss`] parts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AtomSum {
    pub(crate) parts: Vec<PolyGauss>,
}

impl AtomSum {
    pub fn from_atoms(atoms: &[GaussAtom]) -> Self {
        AtomSum { parts: atoms.iter().map(PolyGauss::from).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.terms.is_empty())
    }

    pub fn eval_abeta(&self, a: f64, beta: f64) -> C64 {
        self.parts.iter().map(|p| p.eval_abeta(a, beta)).sum()
    }

    pub fn eval_alphabeta(&self, alpha: f64, beta: f64) -> C64 {
        self.parts.iter().map(|p| p.eval_alphabeta(alpha, beta)).sum()
    }

    pub fn eval_ab(&self, a: f64, b: f64) -> C64 {
        self.parts.iter().map(|p| p.eval_ab(a, b)).sum()
    }

    pub(crate) fn map(&self, f: impl Fn(&PolyGauss) -> PolyGauss) -> Self {
        let parts = self.parts.iter().map(f).filter(|p| !p.terms.is_empty()).collect();
        AtomSum { parts }
    }

    pub(crate) fn concat(&self, other: &AtomSum) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        AtomSum { parts }
    }

    pub fn a_range(&self) -> (f64, f64) {
        span(self.parts.iter().map(|p| p.a_range()))
    }

    pub fn beta_range(&self) -> (f64, f64) {
        span(self.parts.iter().map(|p| p.beta_range()))
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        span(self.parts.iter().map(|p| p.alpha_range()))
    }

    pub fn b_range(&self) -> (f64, f64) {
        span(self.parts.iter().map(|p| p.b_range()))
    }

    pub fn envelope(&self, a: f64) -> f64 {
        self.parts.iter().map(|p| p.envelope(a)).sum()
    }
}

fn span(it: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (l, h)| (lo.min(l), hi.max(h)))
}
