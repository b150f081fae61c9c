use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::elements::{
    conjugate_axis, panel_quad, sample, to_chart, AlgebraElement, AtomSum, Chart, FftAxes, GridFn2D, Lazy,
};
use crate::numerics::Grid1D;
use crate::{par_map, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The exact product `f ∗ g`, evaluated on demand in the `(a, β)` chart by
/// `∫da′ f̃(a′,β) g̃(a−a′, e^{−a′}β)` with closed-form factor values.
pub fn product(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
    f.require_abeta()?;
    g.require_abeta()?;
    let label = format!("({}*{})", f.label(), g.label());
    if is_zero(f) || is_zero(g) {
        return Ok(AlgebraElement::zero().with_label(label));
    }
    Ok(AlgebraElement::lazy(Lazy::Conv(f.clone(), g.clone()), label))
}

/// The involution `f̃*(a,β) = conj f̃(−a, e^{−a}β)`.
pub fn star(f: &AlgebraElement) -> Result<AlgebraElement> {
    f.require_abeta()?;
    if is_zero(f) {
        return Ok(AlgebraElement::zero());
    }
    Ok(AlgebraElement::lazy(Lazy::Star(f.clone()), format!("{}^*", f.label())))
}

/// `f̂*(a,b) = e^{−a} conj f̂(−a, −e^{a}b)`, the involution evaluated
/// directly in group variables.
pub fn star_ab_value(f: &AlgebraElement, a: f64, b: f64) -> Result<C64> {
    Ok(f.eval(Chart::AB, -a, -a.exp() * b)?.conj() * (-a).exp())
}

fn is_zero(f: &AlgebraElement) -> bool {
    f.atoms().is_some_and(AtomSum::is_zero)
}

fn closed(f: &AlgebraElement) -> Result<&AtomSum> {
    f.atoms().ok_or_else(|| Error::Parameter(format!("`{}` has no closed form in group variables", f.label())))
}

/// `(f̂ ∗ ĝ)(a,b) = ∫da′db′ e^{a′} f̂(a′,b′) ĝ(a−a′, e^{a′}(b−b′))` by
/// tensor Gauss–Legendre quadrature on the overlap of the factors'
/// windows. `level` scales the node count (1 = 16 panels in `a′`, 6 in
/// `b′`, 16 nodes each).
pub fn conv_ab_value(f: &AlgebraElement, g: &AlgebraElement, a: f64, b: f64, level: usize) -> Result<C64> {
    let (fs, gs) = (closed(f)?, closed(g)?);
    if fs.is_zero() || gs.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    let (fa0, fa1) = fs.a_range();
    let (ga0, ga1) = gs.a_range();
    let (lo, hi) = (fa0.max(a - ga1), fa1.min(a - ga0));
    let (fb0, fb1) = fs.b_range();
    let (gb0, gb1) = gs.b_range();
    let level = level.max(1) as f64;
    Ok(panel_quad(lo, hi, (hi - lo) / (16.0 * level), |ap| {
        let s = (-ap).exp();
        let (blo, bhi) = (fb0.max(b - s * gb1), fb1.min(b - s * gb0));
        let inner = panel_quad(blo, bhi, (bhi - blo) / (6.0 * level), |bp| {
            fs.eval_ab(ap, bp) * gs.eval_ab(a - ap, (b - bp) / s)
        });
        inner * ap.exp()
    }))
}

/// `(f̌ ∗ ǧ)(α,β) = (1/2π)∫dω dα′ f̌(α+α′,β) ǧ(α, e^{−ω}β) e^{−iωα′}`,
/// the oscillatory double integral in Fourier variables. Slow and only
/// moderately accurate; used as a cross-check at a few points.
pub fn conv_alphabeta_oscillatory(f: &AlgebraElement, g: &AlgebraElement, alpha: f64, beta: f64) -> Result<C64> {
    let (fs, gs) = (closed(f)?, closed(g)?);
    if fs.is_zero() || gs.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    let (w0, w1) = fs.a_range();
    let (x0, x1) = fs.alpha_range();
    let v = panel_quad(w0, w1, 0.25, |w| {
        let inner = panel_quad(x0 - alpha, x1 - alpha, (1.0 / (w.abs() + 1.0)).min(0.5), |ap| {
            fs.eval_alphabeta(alpha + ap, beta) * C64::new(0.0, -w * ap).exp()
        });
        inner * gs.eval_alphabeta(alpha, (-w).exp() * beta)
    });
    Ok(v / TWO_PI)
}

/// Grid-backed product in `chart` on the output axes `(axis1, axis2)`.
///
/// `(a, β)`: samples of the exact product. `(a, b)`: tensor quadrature in
/// group variables (closed-form factors only), with a refinement check at
/// a few probe points. `(α, β)`: the `(a, β)` product on the conjugate
/// `a`-axis, then an FFT along `a`; `axis1` must be centred.
pub fn conv(f: &AlgebraElement, g: &AlgebraElement, chart: Chart, axis1: &Grid1D, axis2: &Grid1D) -> Result<AlgebraElement> {
    let p = product(f, g)?;
    let label = p.label().to_string();
    match chart {
        Chart::ABETA => Ok(AlgebraElement::from_grid(sample(&p, Chart::ABETA, axis1, axis2)?, label)),
        Chart::ALPHABETA => {
            let a_axis = conjugate_axis(axis1)?;
            let on_a = AlgebraElement::from_grid(sample(&p, Chart::ABETA, &a_axis, axis2)?, label);
            let t = to_chart(&on_a, Chart::ALPHABETA, &FftAxes::default())?;
            if t.truncated() {
                return Err(Error::Accuracy(format!(
                    "product does not decay on the a-axis (boundary mass {:e})",
                    t.boundary_mass
                )));
            }
            Ok(t.element)
        }
        Chart::AB => {
            let rows = par_map(axis1.len(), |i| {
                let a = axis1.nodes[i];
                axis2.nodes.iter().map(|&b| conv_ab_value(f, g, a, b, 1)).collect::<Result<Vec<_>>>()
            });
            let mut values = Array2::zeros((axis1.len(), axis2.len()));
            for (i, row) in rows.into_iter().enumerate() {
                for (j, v) in row?.into_iter().enumerate() {
                    values[[i, j]] = v;
                }
            }
            let peak = values.iter().fold(0.0f64, |m, z: &C64| m.max(z.norm()));
            for &(i, j) in &[(axis1.len() / 2, axis2.len() / 2), (axis1.len() / 3, axis2.len() / 2)] {
                let fine = conv_ab_value(f, g, axis1.nodes[i], axis2.nodes[j], 2)?;
                let gap = (fine - values[[i, j]]).norm();
                if gap > 1e-9 * peak.max(1e-300) {
                    return Err(Error::Accuracy(format!(
                        "group-variable product not converged: refinement gap {gap:e} at ({}, {})",
                        axis1.nodes[i], axis2.nodes[j]
                    )));
                }
            }
            Ok(AlgebraElement::from_grid(GridFn2D::new(axis1.clone(), axis2.clone(), values, Chart::AB)?, label))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{centred_axis, default_atom, gauss, shifted_atom};

    fn pair() -> (AlgebraElement, AlgebraElement) {
        (AlgebraElement::atom(default_atom()), AlgebraElement::atom(shifted_atom()))
    }

    #[test]
    fn product_with_zero_is_zero() {
        let (f, _) = pair();
        let p = product(&f, &AlgebraElement::zero()).unwrap();
        assert_eq!(p.eval(Chart::ABETA, 0.1, 3.0).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn star_of_real_even_atom() {
        let f = AlgebraElement::atom(gauss(1.3, 0.0, 0.8, 0.0, 0.0, 0.6, 0.0));
        let s = star(&f).unwrap();
        for &(a, b) in &[(0.3f64, 0.5f64), (-1.0, 1.2), (0.9, -0.4)] {
            let want = 1.3 * (-a * a / (2.0 * 0.64)).exp() * (-(-2.0 * a).exp() * b * b / (2.0 * 0.36)).exp();
            assert!((s.eval(Chart::ABETA, a, b).unwrap() - want).norm() < 1e-14);
        }
    }

    #[test]
    fn star_agrees_with_group_variable_form() {
        let (f, _) = pair();
        let s = star(&f).unwrap();
        for &(a, b) in &[(0.2, 0.1), (-0.4, 1.0), (0.6, -0.7)] {
            let lazy = s.eval(Chart::AB, a, b).unwrap();
            let direct = star_ab_value(&f, a, b).unwrap();
            assert!((lazy - direct).norm() < 1e-9, "{lazy} vs {direct}");
        }
    }

    #[test]
    fn beta_zero_slice_multiplies_pointwise() {
        let (f, g) = pair();
        let p = product(&f, &g).unwrap();
        for alpha in [-1.0, 0.0, 0.4, 1.5] {
            let lhs = p.eval(Chart::ALPHABETA, alpha, 0.0).unwrap();
            let rhs = f.eval(Chart::ALPHABETA, alpha, 0.0).unwrap() * g.eval(Chart::ALPHABETA, alpha, 0.0).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn group_variable_product_matches_abeta_product() {
        let (f, g) = pair();
        let p = product(&f, &g).unwrap();
        for &(a, b) in &[(0.3, 0.0), (-0.5, 0.8), (1.0, -1.5)] {
            let direct = conv_ab_value(&f, &g, a, b, 1).unwrap();
            let lazy = p.eval(Chart::AB, a, b).unwrap();
            assert!((direct - lazy).norm() < 1e-8, "{direct} vs {lazy}");
        }
    }

    #[test]
    fn oscillatory_form_agrees_roughly() {
        let (f, g) = pair();
        let p = product(&f, &g).unwrap();
        let (alpha, beta) = (0.4, 2.5);
        let osc = conv_alphabeta_oscillatory(&f, &g, alpha, beta).unwrap();
        let want = p.eval(Chart::ALPHABETA, alpha, beta).unwrap();
        assert!((osc - want).norm() < 1e-6 * want.norm().max(1.0), "{osc} vs {want}");
    }

    #[test]
    fn alphabeta_grid_product_matches_pointwise() {
        let (f, g) = pair();
        let ax = centred_axis(64, 0.25).unwrap();
        let beta = centred_axis(64, 0.5).unwrap();
        let c = conv(&f, &g, Chart::ALPHABETA, &ax, &beta).unwrap();
        let p = product(&f, &g).unwrap();
        for &(i, j) in &[(32, 38), (30, 36), (36, 40)] {
            let (x, y) = (ax.nodes[i], beta.nodes[j]);
            let want = p.eval(Chart::ALPHABETA, x, y).unwrap();
            let got = c.eval(Chart::ALPHABETA, x, y).unwrap();
            assert!((want - got).norm() < 1e-8, "{want} vs {got}");
        }
    }
}
