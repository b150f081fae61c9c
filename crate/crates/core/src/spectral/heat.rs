//! The oscillator heat semigroup `e^{−tH}`, `H = −d²/ds² + s²`, and heat
//! traces of `D²` and of `π_ν(f)`.

use std::io::Write;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::elements::{panel_quad, AlgebraElement, AtomSum};
use crate::numerics::{hermite_basis, Grid1D, HermiteBasis, Kahan, KahanC};
use crate::reps::{hermite_grid, rep_kernel, Nu};
use crate::{par_map, Error, Result};

/// Truncation target for eigen-expansions, `e^{−t(2M+1)}`.
pub const EIGEN_TAIL: f64 = 1e-14;
/// Largest Hermite order used by the adaptive rule `M(t) = ⌈20/t⌉`.
pub const MAX_ORDER: usize = 1200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatMethod {
    MehlerIntegral,
    EigenExpansion,
    /// The one-dimensional form available for `ν = 0`.
    NuZeroForm,
}

impl std::fmt::Display for HeatMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HeatMethod::MehlerIntegral => "mehler-integral",
            HeatMethod::EigenExpansion => "eigen-expansion",
            HeatMethod::NuZeroForm => "nu-zero-form",
        })
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("heat time must be positive, got {t}")));
    }
    Ok(())
}

/// Smallest `M` with a dropped tail `e^{−t(2M+1)}/(1 − e^{−2t})` below
/// [`EIGEN_TAIL`].
pub fn eigen_order(t: f64) -> usize {
    let budget = EIGEN_TAIL * -(-2.0 * t).exp_m1();
    let need = (-budget.ln() / t - 1.0) / 2.0;
    need.ceil().max(1.0) as usize
}

/// `M(t) = ⌈20/t⌉` capped at [`MAX_ORDER`].
pub fn adaptive_order(t: f64) -> usize {
    ((20.0 / t).ceil() as usize).clamp(1, MAX_ORDER)
}

/// Mehler kernel `(2π sinh 2t)^{−1/2} exp(−¼[coth t (x−y)² + tanh t (x+y)²])`.
pub fn mehler_kernel(t: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    let s = x + y;
    let e = -0.25 * (d * d / t.tanh() + t.tanh() * s * s);
    e.exp() / (2.0 * std::f64::consts::PI * (2.0 * t).sinh()).sqrt()
}

/// Quadrature-absorbed matrix of `e^{−tH}` on a grid.
#[derive(Clone, Debug)]
pub struct HeatKernel {
    pub t: f64,
    pub grid: Grid1D,
    pub method: HeatMethod,
    /// Hermite order for the eigen-expansion.
    pub order: Option<usize>,
    /// `K(x_i, y_j) w_j`
    pub matrix: Array2<f64>,
}

impl HeatKernel {
    pub fn kernel_at(&self, i: usize, j: usize) -> f64 {
        self.matrix[[i, j]] / self.grid.weights[j]
    }

    pub fn trace(&self) -> f64 {
        let mut acc = Kahan::new();
        for i in 0..self.grid.len() {
            acc.add(self.matrix[[i, i]]);
        }
        acc.value()
    }
}

/// `e^{−tH}` by Mehler's formula or by the eigen-expansion truncated at
/// [`eigen_order`]`(t)`.
pub fn heat_semigroup(t: f64, sgrid: &Grid1D, method: HeatMethod) -> Result<HeatKernel> {
    check_t(t)?;
    match method {
        HeatMethod::MehlerIntegral => {
            let n = sgrid.len();
            let matrix =
                Array2::from_shape_fn((n, n), |(i, j)| mehler_kernel(t, sgrid.nodes[i], sgrid.nodes[j]) * sgrid.weights[j]);
            Ok(HeatKernel { t, grid: sgrid.clone(), method, order: None, matrix })
        }
        HeatMethod::EigenExpansion => heat_semigroup_eigen(t, sgrid, eigen_order(t)),
        HeatMethod::NuZeroForm => Err(Error::Parameter("the ν = 0 form is a trace formula, not a kernel".into())),
    }
}

/// Eigen-expansion `Σ_{k<M} e^{−t(2k+1)} h_k(x) h_k(y)` with a given order.
/// Fails when the dropped tail `e^{−t(2M+1)}/(1 − e^{−2t})` exceeds
/// [`EIGEN_TAIL`] or the grid cannot hold mode `M − 1`.
pub fn heat_semigroup_eigen(t: f64, sgrid: &Grid1D, order: usize) -> Result<HeatKernel> {
    check_t(t)?;
    let bound = (-t * (2.0 * order as f64 + 1.0)).exp() / (-(-2.0 * t).exp_m1());
    if bound > EIGEN_TAIL {
        return Err(Error::Accuracy(format!(
            "eigen-expansion of e^(-tH) at t = {t} with {order} modes leaves a tail up to {bound:e}"
        )));
    }
    let hb = hermite_basis(order, sgrid)?;
    let n = sgrid.len();
    let decay: Vec<f64> = (0..order).map(|k| (-t * (2.0 * k as f64 + 1.0)).exp()).collect();
    let matrix = Array2::from_shape_fn((n, n), |(i, j)| {
        let mut acc = Kahan::new();
        for (k, d) in decay.iter().enumerate() {
            acc.add(d * hb.values[k][i] * hb.values[k][j]);
        }
        acc.value() * sgrid.weights[j]
    });
    Ok(HeatKernel { t, grid: sgrid.clone(), method: HeatMethod::EigenExpansion, order: Some(order), matrix })
}

/// `Tr e^{−tH} = Σ_k e^{−t(2k+1)}` summed to [`eigen_order`]`(t)` terms.
pub fn heat_trace_h(t: f64) -> Result<f64> {
    check_t(t)?;
    let m = eigen_order(t) + 8;
    let mut acc = Kahan::new();
    for k in (0..m).rev() {
        acc.add((-t * (2.0 * k as f64 + 1.0)).exp());
    }
    Ok(acc.value())
}

/// `Tr e^{−tD²} = 6 cosh t · Tr e^{−tH}`: `D² = diag(H+1, H−1) ⊗ 1₃`.
pub fn heat_trace_d(t: f64) -> Result<f64> {
    Ok(6.0 * t.cosh() * heat_trace_h(t)?)
}

/// The same trace summed directly over the spectrum of `D²`: eigenvalues
/// `2n` with multiplicity `1` at `n = 0` and `2` above, in each of the
/// three representation blocks.
pub fn heat_trace_d_spectral(t: f64) -> Result<f64> {
    check_t(t)?;
    // e^{−2tn} < 1e−20 beyond this
    let m = (23.0 / t).ceil() as usize + 1;
    let mut acc = Kahan::new();
    for n in (1..m).rev() {
        acc.add(3.0 * 2.0 * (-2.0 * t * n as f64).exp());
    }
    acc.add(3.0);
    Ok(acc.value())
}

/// `T = ½ tanh 2t` and `S = 2 sinh²t / (cosh²t + sinh²t)`.
pub fn mehler_ts(t: f64) -> (f64, f64) {
    let tt = 0.5 * (2.0 * t).tanh();
    let sh = t.sinh();
    let s = 2.0 * sh * sh / (2.0 * t).cosh();
    (tt, s)
}

fn closed(f: &AlgebraElement) -> Result<&AtomSum> {
    f.atoms().ok_or_else(|| Error::Parameter(format!("`{}` has no closed form; heat traces need atoms", f.label())))
}

/// `J(t) = ∫dx e^{−Tx²} ∫dz e^{−z²} f̃(c·Sx + 2√T z, νe^{−x})`.
///
/// Both Mehler-type integrals reduce to this after shifting the Gaussian
/// in the `a`-variable: `c = −1` gives the heat trace and `c = +1` the
/// function `I_ν(t)`.
pub(crate) fn gaussian_double_integral(atoms: &AtomSum, nu: Nu, t: f64, c: f64) -> C64 {
    let (tt, s) = mehler_ts(t);
    let rt = tt.sqrt();
    let big_x = (42.0 / tt).sqrt();
    let (a0, a1) = atoms.a_range();
    let sign = nu.sign();
    let z_panel = (1.0f64).min(1.0 / (2.0 * rt));
    let inner = |x: f64| {
        let shift = c * s * x;
        let lo = ((a0 - shift) / (2.0 * rt)).max(-6.5);
        let hi = ((a1 - shift) / (2.0 * rt)).min(6.5);
        // ν = 0 must stay at β = 0 even where e^{−x} overflows
        let beta = if sign == 0.0 { 0.0 } else { sign * (-x).exp() };
        panel_quad(lo, hi, z_panel, |z| (-z * z).exp() * atoms.eval_abeta(shift + 2.0 * rt * z, beta))
            * (-tt * x * x).exp()
    };
    let far_panel = (0.5 / rt).min(if s > 0.0 { 0.25 / s } else { f64::INFINITY });
    let near = 14.0f64.min(big_x);
    let mut acc = KahanC::new();
    match nu {
        Nu::Zero => {
            acc.add(panel_quad(-near, near, 0.5, inner));
            if big_x > near {
                acc.add(panel_quad(near, big_x, far_panel, inner));
                acc.add(panel_quad(-big_x, -near, far_panel, inner));
            }
        }
        _ => {
            let (blo, bhi) = atoms.beta_range();
            let reach = blo.abs().max(bhi.abs()).max(1.0);
            let x_lo = -reach.ln() - 1.0;
            acc.add(panel_quad(x_lo.min(near), near, 0.5, inner));
            if big_x > near {
                acc.add(panel_quad(near, big_x, far_panel, inner));
            }
        }
    }
    acc.value()
}

/// `Tr(π_ν(f) e^{−tH})` as the Gaussian double integral
/// `(2π√cosh 2t)^{−1} ∬dv dx f̌(v, νe^{−x}) exp(−½tanh 2t·(x²+v²) + iS(t)xv)`,
/// evaluated after the `v`-integral has been done in closed form.
pub fn heat_trace_mehler(f: &AlgebraElement, nu: Nu, t: f64) -> Result<C64> {
    check_t(t)?;
    heat_trace_mehler_phase(f, nu, t, 1.0)
}

/// [`heat_trace_mehler`] with the phase `exp(i·phase·S(t)xv)`; `phase = 1`
/// is the correct one, `phase = −1` the opposite sign.
pub fn heat_trace_mehler_phase(f: &AlgebraElement, nu: Nu, t: f64, phase: f64) -> Result<C64> {
    check_t(t)?;
    let atoms = closed(f)?;
    if atoms.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    let j = gaussian_double_integral(atoms, nu, t, -phase);
    Ok(j / (std::f64::consts::PI.sqrt() * (2.0 * t).cosh().sqrt()))
}

/// `(2π sinh 2t)^{−1/2} ∫dv f̌(v,0) e^{−tanh t · v²}`.
pub fn heat_trace_nu_zero(f: &AlgebraElement, t: f64) -> Result<C64> {
    check_t(t)?;
    let atoms = closed(f)?;
    if atoms.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    let (lo, hi) = atoms.alpha_range();
    let th = t.tanh();
    let v = panel_quad(lo, hi, 0.25, |v| atoms.eval_alphabeta(v, 0.0) * (-th * v * v).exp());
    Ok(v / (2.0 * std::f64::consts::PI * (2.0 * t).sinh()).sqrt())
}

/// Diagonal matrix elements `⟨h_k, π_ν(f) h_k⟩`, `k < order`, for the
/// eigen-expansion of heat traces and spectral sums.
#[derive(Clone, Debug, Serialize)]
pub struct HermiteDiagonal {
    pub nu: Nu,
    pub diag: Vec<C64>,
}

impl HermiteDiagonal {
    pub fn new(f: &AlgebraElement, nu: Nu, order: usize) -> Result<Self> {
        let grid = hermite_grid(order)?;
        let hb = hermite_basis(order, &grid)?;
        let op = rep_kernel(f, nu, &grid)?;
        Ok(Self { nu, diag: diagonal_elements(&op.matrix, &hb) })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// `Σ_k e^{−t(2k+1)} ⟨h_k, π_ν(f) h_k⟩`; fails when the dropped modes
    /// may still matter, judged from the last kept matrix element.
    pub fn heat_trace(&self, t: f64) -> Result<C64> {
        check_t(t)?;
        let mut acc = KahanC::new();
        for (k, d) in self.diag.iter().enumerate().rev() {
            acc.add(d * (-t * (2.0 * k as f64 + 1.0)).exp());
        }
        let value = acc.value();
        let m = self.order();
        if m < eigen_order(t) {
            let last = self.diag.last().map_or(0.0, |z| z.norm());
            let tail = last * (-t * (2.0 * m as f64 - 1.0)).exp() / (-(-2.0 * t).exp_m1());
            if tail > 1e-12 * value.norm().max(EIGEN_TAIL) {
                return Err(Error::Accuracy(format!("{m} Hermite modes leave a tail up to {tail:e} at t = {t}")));
            }
        }
        Ok(value)
    }

    /// `Tr[π_ν(f) ⊗ 1₂ · (1 + D²)^{−s/2}]` over this block: the two spinor
    /// components see `1 + D²` as `2k+1` and `2k+3`.
    pub fn resolvent_power_trace(&self, s: f64) -> C64 {
        let mut acc = KahanC::new();
        for (k, d) in self.diag.iter().enumerate().rev() {
            let k = k as f64;
            acc.add(d * ((2.0 * k + 1.0).powf(-0.5 * s) + (2.0 * k + 3.0).powf(-0.5 * s)));
        }
        acc.value()
    }
}

fn diagonal_elements(matrix: &Array2<C64>, hb: &HermiteBasis) -> Vec<C64> {
    let n = hb.grid.len();
    let h = Array2::from_shape_fn((n, hb.order), |(j, k)| C64::new(hb.values[k][j], 0.0));
    let mh = matrix.dot(&h);
    par_map(hb.order, |k| {
        let mut acc = KahanC::new();
        for i in 0..n {
            acc.add(mh[[i, k]] * (hb.values[k][i] * hb.grid.weights[i]));
        }
        acc.value()
    })
}

/// `Tr(π_ν(f) e^{−tH})` by the requested method. The eigen-expansion uses
/// [`adaptive_order`]`(t)` modes.
pub fn heat_trace_rep(f: &AlgebraElement, nu: Nu, t: f64, method: HeatMethod) -> Result<C64> {
    check_t(t)?;
    match method {
        HeatMethod::MehlerIntegral => heat_trace_mehler(f, nu, t),
        HeatMethod::EigenExpansion => HermiteDiagonal::new(f, nu, adaptive_order(t))?.heat_trace(t),
        HeatMethod::NuZeroForm => {
            if nu != Nu::Zero {
                return Err(Error::Parameter("the one-dimensional heat-trace form exists only for ν = 0".into()));
            }
            heat_trace_nu_zero(f, t)
        }
    }
}

/// Both methods; an accuracy error carrying both values if their relative
/// gap exceeds `rel_tol`.
pub fn heat_trace_rep_checked(f: &AlgebraElement, nu: Nu, t: f64, rel_tol: f64) -> Result<C64> {
    let m = heat_trace_rep(f, nu, t, HeatMethod::MehlerIntegral)?;
    let e = heat_trace_rep(f, nu, t, HeatMethod::EigenExpansion)?;
    let scale = m.norm().max(e.norm());
    if (m - e).norm() > rel_tol * scale {
        return Err(Error::Accuracy(format!("heat trace methods disagree at t = {t}: mehler {m}, eigen {e}")));
    }
    Ok(m)
}

/// A sampled curve `parameter ↦ value` with its method tag.
#[derive(Clone, Debug, Serialize)]
pub struct HeatTraceCurve {
    pub nu: Option<Nu>,
    pub method: String,
    pub parameter: Vec<f64>,
    pub values: Vec<C64>,
}

impl HeatTraceCurve {
    pub fn sample(f: &AlgebraElement, nu: Nu, ts: &[f64], method: HeatMethod) -> Result<Self> {
        let values = match method {
            HeatMethod::EigenExpansion => {
                let tmin = ts.iter().cloned().fold(f64::INFINITY, f64::min);
                let diag = HermiteDiagonal::new(f, nu, adaptive_order(tmin))?;
                ts.iter().map(|&t| diag.heat_trace(t)).collect::<Result<Vec<_>>>()?
            }
            _ => par_map(ts.len(), |i| heat_trace_rep(f, nu, ts[i], method)).into_iter().collect::<Result<Vec<_>>>()?,
        };
        Ok(Self { nu: Some(nu), method: method.to_string(), parameter: ts.to_vec(), values })
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        write_curve_header(out)?;
        self.write_csv_rows(out)
    }

    pub fn write_csv_rows(&self, out: &mut impl Write) -> Result<()> {
        for (p, v) in self.parameter.iter().zip(&self.values) {
            writeln!(out, "{p:e},{:e},{:e},{}", v.re, v.im, self.method)?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut file)?;
        file.flush()?;
        Ok(())
    }
}

pub fn write_curve_header(out: &mut impl Write) -> Result<()> {
    writeln!(out, "parameter,value_re,value_im,method")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{default_atom, shifted_atom};
    use crate::numerics::{hermite_values, make_grid, GridKind};

    fn grid() -> Grid1D {
        make_grid(GridKind::GaussLegendre, -12.0, 12.0, 257).unwrap()
    }

    #[test]
    fn oscillator_trace() {
        let k = heat_semigroup(1.0, &grid(), HeatMethod::MehlerIntegral).unwrap();
        assert!((k.trace() - 0.5 / 1f64.sinh()).abs() < 1e-10);
        assert!((heat_trace_h(1.0).unwrap() - 0.5 / 1f64.sinh()).abs() < 1e-14);
    }

    #[test]
    fn mehler_equals_eigen_expansion() {
        let g = grid();
        let m = heat_semigroup(0.5, &g, HeatMethod::MehlerIntegral).unwrap();
        let e = heat_semigroup(0.5, &g, HeatMethod::EigenExpansion).unwrap();
        for &(i, j) in &[(128, 128), (120, 140), (100, 130), (90, 95), (150, 149), (128, 60), (70, 200), (133, 131), (110, 110), (140, 100)] {
            assert!((m.kernel_at(i, j) - e.kernel_at(i, j)).abs() < 1e-8);
        }
    }

    #[test]
    fn ground_state_dominates() {
        let t = 10.0;
        for &(x, y) in &[(0.0, 0.0), (0.5, -1.0), (1.2, 0.3)] {
            let h0 = |s: f64| hermite_values(1, s)[0];
            assert!((mehler_kernel(t, x, y) - (-t).exp() * h0(x) * h0(y)).abs() < 1e-8);
        }
    }

    #[test]
    fn nonpositive_time_is_rejected() {
        assert!(matches!(heat_semigroup(0.0, &grid(), HeatMethod::MehlerIntegral), Err(Error::Parameter(_))));
        assert!(matches!(heat_semigroup_eigen(0.01, &grid(), 10), Err(Error::Accuracy(_))));
    }

    #[test]
    fn dirac_heat_trace() {
        for t in [0.1f64, 0.3, 1.0, 2.0] {
            let c = 3.0 / t.tanh();
            assert!((heat_trace_d(t).unwrap() - c).abs() < 1e-12 * c);
            assert!((heat_trace_d_spectral(t).unwrap() - c).abs() < 1e-12 * c);
        }
        assert!((heat_trace_d(40.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rep_heat_traces_agree() {
        let f = AlgebraElement::atom(default_atom());
        let t = 0.7;
        let z = heat_trace_rep(&f, Nu::Zero, t, HeatMethod::NuZeroForm).unwrap();
        let e = heat_trace_rep(&f, Nu::Zero, t, HeatMethod::EigenExpansion).unwrap();
        let m = heat_trace_rep(&f, Nu::Zero, t, HeatMethod::MehlerIntegral).unwrap();
        assert!((z - e).norm() < 1e-5 * z.norm(), "{z} {e}");
        assert!((z - m).norm() < 1e-8 * z.norm(), "{z} {m}");
        let g = AlgebraElement::atom(shifted_atom());
        for nu in [Nu::Minus, Nu::Plus] {
            heat_trace_rep_checked(&g, nu, 0.5, 1e-4).unwrap();
        }
        assert_eq!(heat_trace_rep(&AlgebraElement::zero(), Nu::Plus, 0.5, HeatMethod::MehlerIntegral).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn opposite_phase_sign_disagrees_with_the_operator_trace() {
        // The sign of the Sxv phase matters once f̃ is not even in a.
        let g = AlgebraElement::atom(shifted_atom());
        let t = 0.5;
        let flipped = heat_trace_mehler_phase(&g, Nu::Plus, t, -1.0).unwrap();
        let e = heat_trace_rep(&g, Nu::Plus, t, HeatMethod::EigenExpansion).unwrap();
        let m = heat_trace_rep(&g, Nu::Plus, t, HeatMethod::MehlerIntegral).unwrap();
        assert!((m - e).norm() < 1e-6 * e.norm());
        assert!((flipped - e).norm() > 1e-3 * e.norm(), "{flipped} vs {e}");
    }

    #[test]
    fn curve_csv() {
        let f = AlgebraElement::atom(default_atom());
        let c = HeatTraceCurve::sample(&f, Nu::Zero, &[0.5, 1.0], HeatMethod::NuZeroForm).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "parameter,value_re,value_im,method");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(",nu-zero-form"));
    }
}
