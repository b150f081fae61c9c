//! Sampling and FFT-based chart changes for grid-backed elements.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{AlgebraElement, Body, Chart, GridFn2D};
use crate::numerics::{fft_1d, Direction, Grid1D, GridKind};
use crate::{par_map, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Shape of the centred uniform grids used for FFT chart changes:
/// `n` nodes `x_j = (j − n/2)·2L/n`, i.e. `[−L, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FftAxes {
    pub n: usize,
    pub half_width: f64,
}

impl Default for FftAxes {
    fn default() -> Self {
        Self { n: 256, half_width: 10.0 }
    }
}

impl FftAxes {
    pub fn axis(&self) -> Result<Grid1D> {
        centred_axis(self.n, 2.0 * self.half_width / self.n as f64)
    }
}

/// Centred uniform axis with `n` nodes of spacing `h`. Every weight is `h`
/// (the rectangle rule, spectrally accurate for functions decaying inside
/// the window).
pub fn centred_axis(n: usize, h: f64) -> Result<Grid1D> {
    if n < 4 || n % 4 != 0 || !n.is_power_of_two() {
        return Err(Error::Parameter(format!("FFT axis needs a power of two ≥ 4 nodes, got {n}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Parameter(format!("bad axis spacing {h}")));
    }
    let half = (n / 2) as f64;
    let nodes: Vec<f64> = (0..n).map(|j| (j as f64 - half) * h).collect();
    Ok(Grid1D {
        lo: nodes[0],
        hi: nodes[n - 1],
        weights: vec![h; n],
        nodes,
        kind: GridKind::UniformTrapezoid,
    })
}

/// The Fourier-dual of a centred axis: spacing `2π/(nh)`, same node count.
pub fn conjugate_axis(axis: &Grid1D) -> Result<Grid1D> {
    check_centred(axis)?;
    centred_axis(axis.len(), TWO_PI / (axis.len() as f64 * axis.step()))
}

fn check_centred(axis: &Grid1D) -> Result<()> {
    let n = axis.len();
    if axis.kind != GridKind::UniformTrapezoid || n < 4 || !n.is_power_of_two() {
        return Err(Error::Parameter("FFT needs a uniform power-of-two axis".into()));
    }
    let h = axis.step();
    let expect = -((n / 2) as f64) * h;
    if (axis.lo - expect).abs() > 1e-9 * h.max(1.0) {
        return Err(Error::Parameter(format!("axis is not centred: lo={} but expected {expect}", axis.lo)));
    }
    Ok(())
}

/// `F(k_m) = h Σ_j f(x_j) e^{i·sign·k_m x_j}` on the conjugate grid.
///
/// With centred grids and `4 | n`, `k_m x_j = 2π(m−n/2)(j−n/2)/n` and the
/// sum is an FFT of `(−1)^j f_j` followed by a `(−1)^m` modulation.
pub(crate) fn fourier_sum(values: &[C64], h: f64, sign: f64) -> Result<Vec<C64>> {
    let n = values.len();
    let alt = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let input: Vec<C64> = values.iter().enumerate().map(|(j, v)| v * alt(j)).collect();
    let dir = if sign > 0.0 { Direction::Inverse } else { Direction::Forward };
    let out = fft_1d(&input, dir)?;
    let scale = h * (n as f64).sqrt();
    Ok(out.into_iter().enumerate().map(|(m, v)| v * (scale * alt(m))).collect())
}

/// Pointwise evaluation of `f` in `chart` on the tensor grid.
pub fn sample(f: &AlgebraElement, chart: Chart, axis1: &Grid1D, axis2: &Grid1D) -> Result<GridFn2D> {
    if let Some(stored) = f.stored_chart() {
        if stored != chart {
            return Err(Error::ChartMismatch { stored: stored.to_string(), requested: chart.to_string() });
        }
    }
    let rows = par_map(axis1.len(), |i| {
        let x = axis1.nodes[i];
        axis2.nodes.iter().map(|&y| f.eval(chart, x, y)).collect::<Result<Vec<C64>>>()
    });
    let mut values = Array2::zeros((axis1.len(), axis2.len()));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    GridFn2D::new(axis1.clone(), axis2.clone(), values, chart)
}

/// A chart change together with the relative boundary mass of the input,
/// which bounds the truncation committed by the FFT.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub element: AlgebraElement,
    pub boundary_mass: f64,
}

impl Transformed {
    /// Whether the input failed to decay below `1e−10` of its peak at the
    /// grid edges.
    pub fn truncated(&self) -> bool {
        self.boundary_mass > 1e-10
    }
}

/// Grid-backed copy of `f` in `target`.
///
/// Closed-form and lazy bodies are first sampled in their defining chart
/// `(a, β)` on `axes`; grid bodies are transformed from their stored chart
/// on their own axes, which must be centred (see [`centred_axis`]).
pub fn to_chart(f: &AlgebraElement, target: Chart, axes: &FftAxes) -> Result<Transformed> {
    let grid = match f.body() {
        Body::Grid(g) => (**g).clone(),
        _ => {
            let ax = axes.axis()?;
            sample(f, Chart::ABETA, &ax, &ax)?
        }
    };
    let boundary_mass = grid.boundary_mass();
    let out = convert(grid, target)?;
    Ok(Transformed { element: AlgebraElement::from_grid(out, format!("{}[{}]", f.label(), target)), boundary_mass })
}

fn convert(g: GridFn2D, target: Chart) -> Result<GridFn2D> {
    use Chart::*;
    match (g.chart, target) {
        (x, y) if x == y => Ok(g),
        (ABETA, AB) => abeta_to_ab(&g),
        (AB, ABETA) => ab_to_abeta(&g),
        (ABETA, ALPHABETA) => abeta_to_alphabeta(&g),
        (ALPHABETA, ABETA) => alphabeta_to_abeta(&g),
        (AB, ALPHABETA) => abeta_to_alphabeta(&ab_to_abeta(&g)?),
        (ALPHABETA, AB) => abeta_to_ab(&alphabeta_to_abeta(&g)?),
        _ => unreachable!(),
    }
}

// Transform every row (axis2 direction) of the grid.
fn along_axis2(g: &GridFn2D, sign: f64, row_factor: impl Fn(f64) -> C64 + Sync, chart: Chart) -> Result<GridFn2D> {
    check_centred(&g.axis2)?;
    let h = g.axis2.step();
    let (n1, n2) = g.values.dim();
    let rows = par_map(n1, |i| {
        let row: Vec<C64> = (0..n2).map(|j| g.values[[i, j]]).collect();
        fourier_sum(&row, h, sign).map(|v| {
            let c = row_factor(g.axis1.nodes[i]);
            v.into_iter().map(|z| z * c).collect::<Vec<_>>()
        })
    });
    let mut values = Array2::zeros((n1, n2));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    GridFn2D::new(g.axis1.clone(), conjugate_axis(&g.axis2)?, values, chart)
}

fn along_axis1(g: &GridFn2D, sign: f64, scale: f64, chart: Chart) -> Result<GridFn2D> {
    check_centred(&g.axis1)?;
    let h = g.axis1.step();
    let (n1, n2) = g.values.dim();
    let cols = par_map(n2, |j| {
        let col: Vec<C64> = (0..n1).map(|i| g.values[[i, j]]).collect();
        fourier_sum(&col, h, sign)
    });
    let mut values = Array2::zeros((n1, n2));
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col?.into_iter().enumerate() {
            values[[i, j]] = v * scale;
        }
    }
    GridFn2D::new(conjugate_axis(&g.axis1)?, g.axis2.clone(), values, chart)
}

// f̂(a,b) = (1/2π) e^{−a} ∫dβ f̃(a,β) e^{−ibβ}
fn abeta_to_ab(g: &GridFn2D) -> Result<GridFn2D> {
    along_axis2(g, -1.0, |a| C64::new((-a).exp() / TWO_PI, 0.0), Chart::AB)
}

// f̃(a,β) = e^{a} ∫db f̂(a,b) e^{ibβ}
fn ab_to_abeta(g: &GridFn2D) -> Result<GridFn2D> {
    along_axis2(g, 1.0, |a| C64::new(a.exp(), 0.0), Chart::ABETA)
}

// f̌(α,β) = ∫da f̃(a,β) e^{iaα}
fn abeta_to_alphabeta(g: &GridFn2D) -> Result<GridFn2D> {
    along_axis1(g, 1.0, 1.0, Chart::ALPHABETA)
}

// f̃(a,β) = (1/2π) ∫dα f̌(α,β) e^{−iaα}
fn alphabeta_to_abeta(g: &GridFn2D) -> Result<GridFn2D> {
    along_axis1(g, -1.0, 1.0 / TWO_PI, Chart::ABETA)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::GaussAtom;

    fn atom() -> AlgebraElement {
        AlgebraElement::atom(GaussAtom::new(C64::new(1.0, 0.2), 0.3, 1.0, 0.5, 1.0, 0.8, -0.4).unwrap())
    }

    fn close_on_grid(g: &GridFn2D, f: &AlgebraElement, tol: f64) {
        let mut worst = 0.0f64;
        for (i, &x) in g.axis1.nodes.iter().enumerate().step_by(7) {
            for (j, &y) in g.axis2.nodes.iter().enumerate().step_by(5) {
                let want = f.eval(g.chart, x, y).unwrap();
                worst = worst.max((g.values[[i, j]] - want).norm());
            }
        }
        assert!(worst < tol, "worst deviation {worst:e}");
    }

    #[test]
    fn conjugate_of_conjugate_is_identity() {
        let ax = FftAxes::default().axis().unwrap();
        let back = conjugate_axis(&conjugate_axis(&ax).unwrap()).unwrap();
        for (x, y) in ax.nodes.iter().zip(&back.nodes) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_sum_of_gaussian() {
        let ax = centred_axis(128, 0.2).unwrap();
        let v: Vec<C64> = ax.nodes.iter().map(|x| C64::new((-x * x / 2.0).exp(), 0.0)).collect();
        let out = fourier_sum(&v, ax.step(), 1.0).unwrap();
        let k = conjugate_axis(&ax).unwrap();
        for (m, &km) in k.nodes.iter().enumerate() {
            let want = TWO_PI.sqrt() * (-km * km / 2.0).exp();
            assert!((out[m].re - want).abs() < 1e-12 && out[m].im.abs() < 1e-12);
        }
    }

    #[test]
    fn atom_to_every_chart_matches_closed_forms() {
        let f = atom();
        for target in [Chart::AB, Chart::ALPHABETA, Chart::ABETA] {
            let t = to_chart(&f, target, &FftAxes::default()).unwrap();
            assert!(!t.truncated());
            let Body::Grid(g) = t.element.body() else { panic!() };
            close_on_grid(g, &f, 1e-8);
        }
    }

    #[test]
    fn round_trips_through_every_chart() {
        let f = atom();
        let axes = FftAxes::default();
        let base = to_chart(&f, Chart::ABETA, &axes).unwrap().element;
        for via in [Chart::AB, Chart::ALPHABETA] {
            let there = to_chart(&base, via, &axes).unwrap().element;
            let back = to_chart(&there, Chart::ABETA, &axes).unwrap().element;
            let (Body::Grid(g0), Body::Grid(g1)) = (base.body(), back.body()) else { panic!() };
            let dev = g0.values.iter().zip(g1.values.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
            assert!(dev < 1e-12, "{via}: {dev:e}");
        }
    }

    #[test]
    fn zero_stays_zero() {
        let t = to_chart(&AlgebraElement::zero(), Chart::AB, &FftAxes::default()).unwrap();
        let Body::Grid(g) = t.element.body() else { panic!() };
        assert!(g.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn sample_is_linear_and_peaks_at_amplitude() {
        let at = GaussAtom::new(C64::new(2.0, -1.0), 0.0, 1.0, 0.0, 0.0, 0.7, 0.0).unwrap();
        let f = AlgebraElement::atom(at);
        let ax = FftAxes::default().axis().unwrap();
        let s = sample(&f, Chart::ABETA, &ax, &ax).unwrap();
        assert!((s.values[[128, 128]] - C64::new(2.0, -1.0)).norm() < 1e-15);
        let g = atom();
        let both = AlgebraElement::from_sum(f.atoms().unwrap().concat(g.atoms().unwrap()), "f+g");
        let sg = sample(&g, Chart::ABETA, &ax, &ax).unwrap();
        let sb = sample(&both, Chart::ABETA, &ax, &ax).unwrap();
        let dev = (&s.values + &sg.values - &sb.values).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(dev < 1e-14);
    }

    #[test]
    fn interpolation_off_grid_matches_eval() {
        let f = atom();
        let ax = FftAxes::default().axis().unwrap();
        let s = sample(&f, Chart::ABETA, &ax, &ax).unwrap();
        for &(a, b) in &[(0.123, 0.987), (-0.77, 1.61), (1.05, -0.3)] {
            let d = (s.interpolate(a, b).unwrap() - f.eval(Chart::ABETA, a, b).unwrap()).norm();
            assert!(d < 1e-4, "{d:e}");
        }
    }

    #[test]
    fn grid_body_rejects_wrong_chart() {
        let t = to_chart(&atom(), Chart::AB, &FftAxes::default()).unwrap();
        assert!(matches!(t.element.eval(Chart::ABETA, 0.0, 0.0), Err(Error::ChartMismatch { .. })));
    }
}
