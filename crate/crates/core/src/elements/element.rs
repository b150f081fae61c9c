use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;

use super::{AtomSum, Chart, GaussAtom, GridFn2D};
use crate::numerics::{gauss_legendre_unit, KahanC};
use crate::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// An element of the (surrogate) smooth algebra.
///
/// Closed-form bodies evaluate exactly in every chart. Lazy bodies are
/// expression nodes (products, involutions, derivatives of non-closed-form
/// elements) evaluated on demand in the `(a, β)` chart by quadrature or
/// finite differences; other charts are reached by one more quadrature.
/// Grid bodies are sampled functions tagged with their chart.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    body: Body,
    label: String,
}

#[derive(Clone, Debug)]
pub enum Body {
    Atoms(AtomSum),
    Lazy(Arc<Lazy>),
    Grid(Arc<GridFn2D>),
}

/// Expression nodes, all in the `(a, β)` chart.
#[derive(Debug)]
pub enum Lazy {
    /// `conj f̃(−a, e^{−a}β)`
    Star(AlgebraElement),
    /// `∫da′ f̃(a′,β) g̃(a−a′, e^{−a′}β)`
    Conv(AlgebraElement, AlgebraElement),
    /// `e^{za} f̃`
    ExpA(C64, AlgebraElement),
    /// `a f̃`
    MulA(AlgebraElement),
    /// `β f̃`
    MulBeta(AlgebraElement),
    /// `∂_a f̃` by finite differences
    DiffA(AlgebraElement),
    /// `∂_β f̃` by finite differences
    DiffBeta(AlgebraElement),
    /// `f̃(a, e^u β)`
    ScaleBeta(f64, AlgebraElement),
    /// `Σ c_k f_k`
    Sum(Vec<(C64, AlgebraElement)>),
}

// Finite-difference step for lazy derivatives (fourth-order stencil).
const FD_STEP: f64 = 2e-3;
// Nodes per panel of the composite Gauss–Legendre rules used for lazy
// evaluation.
const PANEL_NODES: usize = 16;
// Relative size below which contributions are dropped when sizing windows.
const NEGLIGIBLE: f64 = 1e-17;

fn unit_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_unit(PANEL_NODES))
}

/// Composite Gauss–Legendre sum of `f` over `[lo, hi]` with panels no wider
/// than `max_panel`.
pub(crate) fn panel_quad(lo: f64, hi: f64, max_panel: f64, f: impl Fn(f64) -> C64) -> C64 {
    if !(hi > lo) {
        return ZERO;
    }
    let n = (((hi - lo) / max_panel).ceil() as usize).clamp(1, 8192);
    let width = (hi - lo) / n as f64;
    let (x, w) = unit_rule();
    let mut acc = KahanC::new();
    for p in 0..n {
        let c = lo + width * (p as f64 + 0.5);
        let r = 0.5 * width;
        for (t, v) in x.iter().zip(w) {
            acc.add(f(c + r * t) * (r * v));
        }
    }
    acc.value()
}

fn scale_interval((lo, hi): (f64, f64), s: f64) -> (f64, f64) {
    let (x, y) = (lo * s, hi * s);
    (x.min(y), x.max(y))
}

impl AlgebraElement {
    pub fn from_atoms(atoms: &[GaussAtom], label: impl Into<String>) -> Self {
        Self { body: Body::Atoms(AtomSum::from_atoms(atoms)), label: label.into() }
    }

    pub fn atom(atom: GaussAtom) -> Self {
        Self::from_atoms(&[atom], "atom")
    }

    pub fn zero() -> Self {
        Self { body: Body::Atoms(AtomSum::default()), label: "0".into() }
    }

    pub fn from_grid(grid: GridFn2D, label: impl Into<String>) -> Self {
        Self { body: Body::Grid(Arc::new(grid)), label: label.into() }
    }

    pub(crate) fn from_sum(sum: AtomSum, label: impl Into<String>) -> Self {
        Self { body: Body::Atoms(sum), label: label.into() }
    }

    pub(crate) fn lazy(node: Lazy, label: impl Into<String>) -> Self {
        Self { body: Body::Lazy(Arc::new(node)), label: label.into() }
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.body, Body::Atoms(_))
    }

    pub fn atoms(&self) -> Option<&AtomSum> {
        match &self.body {
            Body::Atoms(s) => Some(s),
            _ => None,
        }
    }

    /// `Σ c_k f_k`, kept in closed form when every term is.
    pub fn combination(terms: &[(C64, &AlgebraElement)]) -> Result<AlgebraElement> {
        for (_, f) in terms {
            f.require_abeta()?;
        }
        let label = terms.iter().map(|(_, f)| f.label.as_str()).collect::<Vec<_>>().join("+");
        if terms.iter().all(|(_, f)| f.is_closed_form()) {
            let mut sum = AtomSum::default();
            for (c, f) in terms {
                let c = *c;
                sum = sum.concat(&f.atoms().unwrap().map(|p| p.scale(c)));
            }
            return Ok(Self::from_sum(sum, label));
        }
        let parts = terms.iter().map(|(c, f)| (*c, (*f).clone())).collect();
        Ok(Self::lazy(Lazy::Sum(parts), label))
    }

    pub fn scaled(&self, c: C64) -> Result<AlgebraElement> {
        Ok(Self::combination(&[(c, self)])?.with_label(self.label.clone()))
    }

    pub fn minus(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let one = C64::new(1.0, 0.0);
        Ok(Self::combination(&[(one, self), (-one, other)])?.with_label(format!("{}-{}", self.label, other.label)))
    }

    pub fn plus(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let one = C64::new(1.0, 0.0);
        Self::combination(&[(one, self), (one, other)])
    }

    /// Chart of a grid body; `None` for bodies evaluable in every chart.
    pub fn stored_chart(&self) -> Option<Chart> {
        match &self.body {
            Body::Grid(g) => Some(g.chart),
            _ => None,
        }
    }

    pub(crate) fn require_abeta(&self) -> Result<()> {
        match self.stored_chart() {
            Some(c) if c != Chart::ABETA => Err(Error::ChartMismatch { stored: c.to_string(), requested: "ABETA".into() }),
            _ => Ok(()),
        }
    }

    /// Value of the element at `(x, y)` in `chart`.
    pub fn eval(&self, chart: Chart, x: f64, y: f64) -> Result<C64> {
        match &self.body {
            Body::Atoms(s) => Ok(match chart {
                Chart::ABETA => s.eval_abeta(x, y),
                Chart::ALPHABETA => s.eval_alphabeta(x, y),
                Chart::AB => s.eval_ab(x, y),
            }),
            Body::Grid(g) => {
                if g.chart != chart {
                    return Err(Error::ChartMismatch { stored: g.chart.to_string(), requested: chart.to_string() });
                }
                g.interpolate(x, y)
            }
            Body::Lazy(_) => Ok(match chart {
                Chart::ABETA => self.abeta(x, y),
                Chart::ALPHABETA => self.alphabeta_by_quadrature(x, y),
                Chart::AB => self.ab_by_quadrature(x, y),
            }),
        }
    }

    /// `f̃(a, β)`. Callers guarantee the body is evaluable in this chart
    /// (lazy nodes are only built over such bodies).
    pub(crate) fn abeta(&self, a: f64, beta: f64) -> C64 {
        match &self.body {
            Body::Atoms(s) => s.eval_abeta(a, beta),
            Body::Grid(g) => g.interpolate(a, beta).unwrap_or(ZERO),
            Body::Lazy(node) => node.abeta(a, beta),
        }
    }

    fn alphabeta_by_quadrature(&self, alpha: f64, beta: f64) -> C64 {
        let (lo, hi) = self.a_range();
        let panel = (1.5 * std::f64::consts::PI / (alpha.abs() + 1.0)).min(0.5);
        panel_quad(lo, hi, panel, |a| self.abeta(a, beta) * C64::new(0.0, a * alpha).exp())
    }

    fn ab_by_quadrature(&self, a: f64, b: f64) -> C64 {
        let (lo, hi) = self.beta_window(a);
        let panel = ((hi - lo) / 32.0).min(1.5 * std::f64::consts::PI / (b.abs() + 1.0)).max((hi - lo) / 4096.0);
        let v = panel_quad(lo, hi, panel, |beta| self.abeta(a, beta) * C64::new(0.0, -b * beta).exp());
        v * (-a).exp() / (2.0 * std::f64::consts::PI)
    }

    /// Interval of `a` outside which `f̃` is negligible.
    pub fn a_range(&self) -> (f64, f64) {
        match &self.body {
            Body::Atoms(s) => {
                if s.is_zero() {
                    (0.0, 0.0)
                } else {
                    s.a_range()
                }
            }
            Body::Grid(g) => (g.axis1.lo, g.axis1.hi),
            Body::Lazy(node) => node.a_range(),
        }
    }

    /// Interval of `β` outside which `f̃(a, ·)` is negligible.
    pub fn beta_window(&self, a: f64) -> (f64, f64) {
        match &self.body {
            Body::Atoms(s) => {
                if s.is_zero() {
                    (0.0, 0.0)
                } else {
                    s.beta_range()
                }
            }
            Body::Grid(g) => (g.axis2.lo, g.axis2.hi),
            Body::Lazy(node) => node.beta_window(a),
        }
    }

    /// Upper bound (heuristic for lazy bodies) on `sup_β |f̃(a, β)|`, used
    /// only to size quadrature windows.
    pub fn envelope(&self, a: f64) -> f64 {
        match &self.body {
            Body::Atoms(s) => s.envelope(a),
            Body::Grid(g) => g.values.iter().fold(0.0f64, |m, z| m.max(z.norm())),
            Body::Lazy(node) => node.envelope(a),
        }
    }
}

fn conv_window(f: &AlgebraElement, g: &AlgebraElement, a: f64) -> (f64, f64) {
    let (flo, fhi) = f.a_range();
    let (glo, ghi) = g.a_range();
    (flo.max(a - ghi), fhi.min(a - glo))
}

fn scan(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

impl Lazy {
    fn abeta(&self, a: f64, beta: f64) -> C64 {
        match self {
            Lazy::Star(f) => f.abeta(-a, (-a).exp() * beta).conj(),
            Lazy::Conv(f, g) => {
                let (lo, hi) = conv_window(f, g, a);
                panel_quad(lo, hi, 0.5, |ap| {
                    let fv = f.abeta(ap, beta);
                    if fv == ZERO {
                        return ZERO;
                    }
                    fv * g.abeta(a - ap, (-ap).exp() * beta)
                })
            }
            Lazy::ExpA(z, f) => f.abeta(a, beta) * (z * a).exp(),
            Lazy::MulA(f) => f.abeta(a, beta) * a,
            Lazy::MulBeta(f) => f.abeta(a, beta) * beta,
            Lazy::DiffA(f) => fd(|x| f.abeta(x, beta), a),
            Lazy::DiffBeta(f) => fd(|y| f.abeta(a, y), beta),
            Lazy::ScaleBeta(u, f) => f.abeta(a, u.exp() * beta),
            Lazy::Sum(terms) => terms.iter().map(|(c, f)| c * f.abeta(a, beta)).sum(),
        }
    }

    fn a_range(&self) -> (f64, f64) {
        match self {
            Lazy::Star(f) => {
                let (lo, hi) = f.a_range();
                (-hi, -lo)
            }
            Lazy::Conv(f, g) => {
                let (flo, fhi) = f.a_range();
                let (glo, ghi) = g.a_range();
                (flo + glo, fhi + ghi)
            }
            Lazy::ExpA(_, f)
            | Lazy::MulA(f)
            | Lazy::MulBeta(f)
            | Lazy::DiffBeta(f)
            | Lazy::ScaleBeta(_, f) => f.a_range(),
            Lazy::DiffA(f) => {
                let (lo, hi) = f.a_range();
                (lo - 2.0 * FD_STEP, hi + 2.0 * FD_STEP)
            }
            Lazy::Sum(terms) => terms
                .iter()
                .map(|(_, f)| f.a_range())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (x, y)| (l.min(x), h.max(y))),
        }
    }

    fn beta_window(&self, a: f64) -> (f64, f64) {
        match self {
            Lazy::Star(f) => scale_interval(f.beta_window(-a), a.exp()),
            Lazy::Conv(f, g) => {
                let (lo, hi) = conv_window(f, g, a);
                if !(hi > lo) {
                    return (0.0, 0.0);
                }
                let pts: Vec<f64> = scan(lo, hi, 41).collect();
                let weights: Vec<f64> = pts.iter().map(|&ap| f.envelope(ap) * g.envelope(a - ap)).collect();
                let top = weights.iter().cloned().fold(0.0, f64::max);
                let mut out = (f64::INFINITY, f64::NEG_INFINITY);
                for (&ap, &w) in pts.iter().zip(&weights) {
                    if w <= NEGLIGIBLE * top || w == 0.0 {
                        continue;
                    }
                    let (f1, f2) = f.beta_window(ap);
                    let (g1, g2) = scale_interval(g.beta_window(a - ap), ap.exp());
                    let (l, h) = (f1.max(g1), f2.min(g2));
                    if h > l {
                        out = (out.0.min(l), out.1.max(h));
                    }
                }
                if out.0 > out.1 {
                    (0.0, 0.0)
                } else {
                    out
                }
            }
            Lazy::ScaleBeta(u, f) => scale_interval(f.beta_window(a), (-u).exp()),
            Lazy::DiffBeta(f) => {
                let (lo, hi) = f.beta_window(a);
                (lo - 2.0 * FD_STEP, hi + 2.0 * FD_STEP)
            }
            Lazy::ExpA(_, f) | Lazy::MulA(f) | Lazy::MulBeta(f) | Lazy::DiffA(f) => f.beta_window(a),
            Lazy::Sum(terms) => terms
                .iter()
                .map(|(_, f)| f.beta_window(a))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (x, y)| (l.min(x), h.max(y))),
        }
    }

    fn envelope(&self, a: f64) -> f64 {
        match self {
            Lazy::Star(f) => f.envelope(-a),
            Lazy::Conv(f, g) => {
                let (lo, hi) = conv_window(f, g, a);
                if !(hi > lo) {
                    return 0.0;
                }
                let step = (hi - lo) / 40.0;
                scan(lo, hi, 41).map(|ap| f.envelope(ap) * g.envelope(a - ap) * step).sum()
            }
            Lazy::ExpA(z, f) => (z.re * a).exp() * f.envelope(a),
            Lazy::MulA(f) => a.abs() * f.envelope(a),
            Lazy::MulBeta(f) => {
                let (lo, hi) = f.beta_window(a);
                lo.abs().max(hi.abs()) * f.envelope(a)
            }
            // crude, only used for window sizing
            Lazy::DiffA(f) | Lazy::DiffBeta(f) => 10.0 * f.envelope(a),
            Lazy::ScaleBeta(_, f) => f.envelope(a),
            Lazy::Sum(terms) => terms.iter().map(|(c, f)| c.norm() * f.envelope(a)).sum(),
        }
    }
}

fn fd(f: impl Fn(f64) -> C64, x: f64) -> C64 {
    let h = FD_STEP;
    (f(x - 2.0 * h) - f(x - h) * 8.0 + f(x + h) * 8.0 - f(x + 2.0 * h)) / (12.0 * h)
}
