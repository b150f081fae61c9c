//! Numerical checks of the representation-theoretic identities.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{rep_kernel, rep_product, Nu, RepOperator};
use crate::algebra::{apply_automorphism, derive, exp_a, Automorphism, Derivation};
use crate::elements::AlgebraElement;
use crate::numerics::{
    derivative_element, gauss_legendre_unit, hermite_basis, make_grid, position_element, Grid1D, GridKind,
    HermiteBasis, KahanC,
};
use crate::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Gauss–Legendre grid wide enough for Hermite modes `0..=m`: half-width
/// `√(2m+3) + 5`, about 20 nodes per unit length.
pub fn hermite_grid(m: usize) -> Result<Grid1D> {
    let half = ((2.0 * m as f64 + 3.0).sqrt() + 5.0).ceil();
    let n = (40.0 * half) as usize + 1;
    make_grid(GridKind::GaussLegendre, -half, half, n)
}

/// Matrix elements `⟨h_j, A h_k⟩`, `j, k ≤ order`, of a discretized operator.
pub fn hermite_matrix(op: &RepOperator, hb: &HermiteBasis) -> Array2<C64> {
    let n = hb.grid.len();
    let m = hb.order;
    // H[j, k] = h_k(s_j) as a complex matrix; left factor carries the weights
    let mut h = Array2::<C64>::zeros((n, m));
    let mut hw = Array2::<C64>::zeros((m, n));
    for k in 0..m {
        for j in 0..n {
            h[[j, k]] = C64::new(hb.values[k][j], 0.0);
            hw[[k, j]] = C64::new(hb.values[k][j] * hb.grid.weights[j], 0.0);
        }
    }
    hw.dot(&op.matrix).dot(&h)
}

/// `∂₁ = s` and `∂₂ = −i d/ds` in the Hermite basis, truncated to
/// `size × size`.
pub fn ladder_matrix(k: usize, size: usize) -> Array2<C64> {
    Array2::from_shape_fn((size, size), |(i, j)| match k {
        1 => C64::new(position_element(i, j), 0.0),
        _ => -I * derivative_element(i, j),
    })
}

fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// HS norm of `P_M([∂_k, π_ν(f)] − π_ν(iδ_k f))P_M` computed in the Hermite
/// basis, where `∂_k` is exactly tridiagonal. Modes up to `M` enter so that
/// the truncated commutator is exact.
pub fn commutator_check(f: &AlgebraElement, nu: Nu, k: usize, m: usize) -> Result<f64> {
    if !(k == 1 || k == 2) {
        return Err(Error::Parameter(format!("derivation index must be 1 or 2, got {k}")));
    }
    let which = if k == 1 { Derivation::Delta1 } else { Derivation::Delta2 };
    let grid = hermite_grid(m)?;
    let hb = hermite_basis(m + 1, &grid)?;
    let kf = hermite_matrix(&rep_kernel(f, nu, &grid)?, &hb);
    let rhs_el = derive(which, f)?.scaled(I)?;
    let kr = hermite_matrix(&rep_kernel(&rhs_el, nu, &grid)?, &hb);
    let d = ladder_matrix(k, m + 1);
    let c = d.dot(&kf) - kf.dot(&d) - kr;
    Ok(frobenius(&c.slice(ndarray::s![..m, ..m]).to_owned()))
}

/// `[∂₁, ∂₂]v − c·v` for `v = Σ_{k<m} c_k h_k` with random-ish smooth
/// coefficients, in the Hermite basis; returns the defect against both
/// `c = +i` and `c = −i`.
pub fn bracket_check(m: usize) -> (f64, f64) {
    let size = m + 2;
    let x = ladder_matrix(1, size);
    let d = ladder_matrix(2, size);
    let comm = x.dot(&d) - d.dot(&x);
    let v = ndarray::Array1::from_shape_fn(size, |k| {
        if k < m {
            C64::new((0.7 * k as f64).cos(), (1.3 * k as f64).sin()) / (1.0 + k as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let w = comm.dot(&v);
    // the top mode of the product leaks past the truncation; compare below it
    let defect = |c: C64| {
        (0..=m).map(|k| (w[k] - c * v[k]).norm_sqr()).sum::<f64>().sqrt()
    };
    (defect(I), defect(-I))
}

/// HS norm of `π_ν(f)π_ν(g) − π_ν(g)π_ν(f)`.
pub fn commutativity_defect(f: &AlgebraElement, g: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<f64> {
    rep_product(f, g, nu, sgrid)?.hs_distance(&rep_product(g, f, nu, sgrid)?)
}

/// [`commutativity_defect`] for `π₀`.
pub fn pi0_is_abelian_check(f: &AlgebraElement, g: &AlgebraElement, sgrid: &Grid1D) -> Result<f64> {
    commutativity_defect(f, g, Nu::Zero, sgrid)
}

/// Diagonal `θ^{power} = e^{−power·s/2}` on a grid.
#[derive(Clone, Debug)]
pub struct ThetaOp {
    pub sgrid: Grid1D,
    pub power: f64,
}

impl ThetaOp {
    pub fn new(sgrid: &Grid1D, power: f64) -> Self {
        Self { sgrid: sgrid.clone(), power }
    }

    pub fn entry(&self, s: f64) -> f64 {
        (-0.5 * self.power * s).exp()
    }

    pub fn left(&self, op: &RepOperator) -> RepOperator {
        op.sandwich(|s| self.entry(s), |_| 1.0)
    }

    pub fn right(&self, op: &RepOperator) -> RepOperator {
        op.sandwich(|_| 1.0, |u| self.entry(u))
    }
}

pub fn theta_op(sgrid: &Grid1D, power: f64) -> ThetaOp {
    ThetaOp::new(sgrid, power)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaDefects {
    /// `‖θπ(f) − π(σ_{−i/2}f)θ‖_HS`
    pub half: f64,
    /// `‖π(f)θ² − θ²π(σ(f))‖_HS`
    pub iterated: f64,
}

pub fn theta_commutation_check(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<ThetaDefects> {
    let th = theta_op(sgrid, 1.0);
    let th2 = theta_op(sgrid, 2.0);
    let pf = rep_kernel(f, nu, sgrid)?;
    let half_twist = apply_automorphism(Automorphism::SigmaComplex(C64::new(0.0, -0.5)), f)?;
    let lhs = th.left(&pf);
    let rhs = th.right(&rep_kernel(&half_twist, nu, sgrid)?);
    let twist = apply_automorphism(Automorphism::Twist, f)?;
    let lhs2 = th2.right(&pf);
    let rhs2 = th2.left(&rep_kernel(&twist, nu, sgrid)?);
    Ok(ThetaDefects { half: lhs.hs_distance(&rhs)?, iterated: lhs2.hs_distance(&rhs2)? })
}

/// Scale of the Plancherel transform. With `θ = e^{−s/2}` and the `(a,β)`
/// normalization of the chart transform, `Σ_±‖θπ_±(Δ^{−1/2}f)‖²_HS =
/// 2π‖f‖²_{L²(G)}`; the Duflo–Moore operator is fixed only up to a positive
/// constant and this one makes the transform isometric.
pub const PLANCHEREL_SCALE: f64 = 0.398_942_280_401_432_7; // (2π)^{-1/2}

/// `𝒫_ν(f) = c·θ π_ν(Δ^{−1/2} f)`, `c` = [`PLANCHEREL_SCALE`].
pub fn plancherel_transform(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<RepOperator> {
    let g = exp_a(f, C64::new(-0.5, 0.0))?;
    let op = rep_kernel(&g, nu, sgrid)?;
    Ok(op.sandwich(|s| PLANCHEREL_SCALE * (-0.5 * s).exp(), |_| 1.0))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlancherelSides {
    /// `‖f‖_{L²(G)}`
    pub lhs: f64,
    /// `(‖𝒫₋(f)‖²_HS + ‖𝒫₊(f)‖²_HS)^{1/2}`
    pub rhs: f64,
    /// `rhs / (c·lhs)`: the ratio without the normalization constant.
    pub raw_ratio: f64,
}

pub fn plancherel_check(f: &AlgebraElement, sgrid: &Grid1D) -> Result<PlancherelSides> {
    let lhs = crate::algebra::l2_norm_g(f)?;
    let mut sq = 0.0;
    for nu in [Nu::Minus, Nu::Plus] {
        sq += plancherel_transform(f, nu, sgrid)?.hs_norm_sq();
    }
    let rhs = sq.sqrt();
    let raw_ratio = if lhs > 0.0 { rhs / (PLANCHEREL_SCALE * lhs) } else { 0.0 };
    Ok(PlancherelSides { lhs, rhs, raw_ratio })
}

/// Symmetric odd uniform grid with rectangle weights, as used for the
/// Fourier conjugation between `π_τ` and `π₀`.
pub fn symmetric_grid(n: usize, half_width: f64) -> Result<Grid1D> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Parameter(format!("symmetric grid needs an odd node count ≥ 3, got {n}")));
    }
    let h = 2.0 * half_width / n as f64;
    let c = (n - 1) as f64 / 2.0;
    let nodes: Vec<f64> = (0..n).map(|j| (j as f64 - c) * h).collect();
    Ok(Grid1D { lo: nodes[0], hi: nodes[n - 1], weights: vec![h; n], nodes, kind: GridKind::UniformTrapezoid })
}

/// `(π_τ(f)ψ)(a) = ∫da′ f̃(a−a′, 0) ψ(a′)`.
pub fn pitau_kernel(f: &AlgebraElement, agrid: &Grid1D) -> Result<RepOperator> {
    f.require_abeta()?;
    Ok(RepOperator::from_kernel(Nu::Zero, agrid, agrid, format!("pi_tau({})", f.label()), |a, ap| {
        f.abeta(a - ap, 0.0)
    }))
}

/// Unitary DFT `F_{mj} = e^{−i p_m x_j}/√n` on a symmetric odd grid.
fn dft_matrix(grid: &Grid1D) -> Array2<C64> {
    let n = grid.len();
    let c = (n - 1) as f64 / 2.0;
    let scale = 1.0 / (n as f64).sqrt();
    Array2::from_shape_fn((n, n), |(m, j)| {
        let phase = -2.0 * std::f64::consts::PI * (m as f64 - c) * (j as f64 - c) / n as f64;
        C64::from_polar(scale, phase)
    })
}

/// HS distance between `π_τ(f)` and `U π₀(f) U*`, where `U` maps
/// `φ(s) = (1/2π)∫φ̂(p)e^{ips}dp` to `ψ(a) = (1/2π)∫φ̂(p)e^{−ipa}dp`. On
/// the discrete side `U` is the square of the unitary DFT.
pub fn pitau_equiv_check(f: &AlgebraElement, grid: &Grid1D) -> Result<f64> {
    let tau_op = pitau_kernel(f, grid)?;
    let pi0 = rep_kernel(f, Nu::Zero, grid)?;
    let dft = dft_matrix(grid);
    let u = dft.dot(&dft);
    let u_adj = u.t().mapv(|z| z.conj());
    // all weights are equal, so conjugating the absorbed matrix is exact
    let conj = RepOperator { matrix: u.dot(&pi0.matrix).dot(&u_adj), ..pi0 };
    tau_op.hs_distance(&conj)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FiberDefects {
    /// HS distance between the fiber kernel read off the regular action and
    /// the kernel of `π_ν(f)`
    pub kernel: f64,
    /// relative ℓ² gap between the regular action restricted to the fiber
    /// `a + s = v` and `π_ν(f)` applied to the restricted test function
    pub fiber: f64,
    /// relative defect of `[π_reg(f), φ(a+s)] = 0` with `φ = cos`
    pub commutant: f64,
}

/// Left-regular representation in the `(a, s)` picture, `β = νe^{−s}`:
/// `(π(f)ψ)(a,s) = ∫da′ f̃(a′, νe^{−s}) ψ(a−a′, s+a′)`.
///
/// The action preserves `v = a + s`, so on `ψ_v(s) = ψ(v−s, s)` it should
/// reduce to `π_ν(f)`. The regular side is integrated directly over `a′`
/// with a smooth test function; the fiber side uses the matrix of
/// `π_ν(f)` on `sgrid`.
pub fn regular_fiber_check(f: &AlgebraElement, nu: Nu, v: f64, sgrid: &Grid1D) -> Result<FiberDefects> {
    f.require_abeta()?;
    let sign = nu.sign();
    let psi = |a: f64, s: f64| C64::from_polar((-(a * a) / 2.0 - (s - 1.0).powi(2) / 3.0).exp(), 0.3 * a);
    let (a0, a1) = f.a_range();
    let (x, w) = gauss_legendre_unit(32);
    let regular = |a: f64, s: f64, mult: &dyn Fn(f64, f64) -> f64| {
        let mut acc = KahanC::new();
        let beta = sign * (-s).exp();
        let panels = 16;
        let width = (a1 - a0) / panels as f64;
        for p in 0..panels {
            let c = a0 + width * (p as f64 + 0.5);
            for (t, wt) in x.iter().zip(&w) {
                let ap = c + 0.5 * width * t;
                let (aa, ss) = (a - ap, s + ap);
                acc.add(f.abeta(ap, beta) * psi(aa, ss) * mult(aa, ss) * (0.5 * width * wt));
            }
        }
        acc.value()
    };

    let op = rep_kernel(f, nu, sgrid)?;
    // regular action at (v−s, s) integrates ψ(v−s−a′, s+a′) = ψ_v(u) with u = s+a′
    let fiber_op = RepOperator::from_kernel(nu, sgrid, sgrid, "fiber", |s, u| {
        let ap = u - s;
        f.abeta(ap, sign * (-s).exp())
    });
    let kernel = fiber_op.hs_distance(&op)?;
    let restricted: Vec<C64> = sgrid.nodes.iter().map(|&u| psi(v - u, u)).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &s) in sgrid.nodes.iter().enumerate() {
        let via_fiber: C64 = op.matrix.row(i).iter().zip(&restricted).map(|(m, p)| m * p).sum();
        let direct = regular(v - s, s, &|_, _| 1.0);
        num += (via_fiber - direct).norm_sqr() * sgrid.weights[i];
        den += direct.norm_sqr() * sgrid.weights[i];
    }
    let fiber = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };

    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..9 {
        for j in 0..9 {
            let (a, s) = (-2.0 + 0.5 * i as f64, -1.5 + 0.5 * j as f64);
            let after = regular(a, s, &|aa, ss| (aa + ss).cos());
            let before = regular(a, s, &|_, _| 1.0) * (a + s).cos();
            num += (after - before).norm_sqr();
            den += before.norm_sqr();
        }
    }
    let commutant = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok(FiberDefects { kernel, fiber, commutant })
}

/// `‖π_ν(f∗g) − π_ν(f)π_ν(g)‖_HS` with `f∗g` given as any body (typically
/// a sampled product).
pub fn homomorphism_defect(fg: &AlgebraElement, f: &AlgebraElement, g: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<f64> {
    rep_kernel(fg, nu, sgrid)?.hs_distance(&rep_product(f, g, nu, sgrid)?)
}

/// `‖π_ν(f*) − π_ν(f)^†‖_HS`
pub fn adjoint_defect(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<f64> {
    let fs = crate::algebra::star(f)?;
    rep_kernel(&fs, nu, sgrid)?.hs_distance(&rep_kernel(f, nu, sgrid)?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{default_atom, shifted_atom};

    fn pair() -> (AlgebraElement, AlgebraElement) {
        (AlgebraElement::atom(default_atom()), AlgebraElement::atom(shifted_atom()))
    }

    #[test]
    fn bracket_is_plus_i() {
        let (plus, minus) = bracket_check(40);
        assert!(plus < 1e-12, "{plus}");
        assert!(minus > 1.0);
    }

    #[test]
    fn commutators_at_moderate_order() {
        let (f, _) = pair();
        for nu in Nu::ALL {
            for k in [1, 2] {
                let d = commutator_check(&f, nu, k, 60).unwrap();
                assert!(d < 1e-8, "nu={nu} k={k}: {d:e}");
            }
        }
    }

    #[test]
    fn theta_relations_are_exact() {
        let (f, _) = pair();
        let g = make_grid(GridKind::GaussLegendre, -12.0, 12.0, 129).unwrap();
        for nu in [Nu::Minus, Nu::Plus] {
            let d = theta_commutation_check(&f, nu, &g).unwrap();
            assert!(d.half < 1e-10 && d.iterated < 1e-10, "{d:?}");
        }
        let pf = rep_kernel(&f, Nu::Plus, &g).unwrap();
        let id = theta_op(&g, 0.0);
        assert_eq!(id.left(&pf).hs_distance(&pf).unwrap(), 0.0);
    }

    #[test]
    fn pitau_is_parity_conjugate_of_pi0() {
        let (f, _) = pair();
        let grid = symmetric_grid(201, 12.0).unwrap();
        assert!(pitau_equiv_check(&f, &grid).unwrap() < 1e-12);
        assert_eq!(pitau_equiv_check(&AlgebraElement::zero(), &grid).unwrap(), 0.0);
    }

    #[test]
    fn regular_fiber_matches_irreducible() {
        let (f, _) = pair();
        let g = make_grid(GridKind::GaussLegendre, -12.0, 12.0, 129).unwrap();
        let d = regular_fiber_check(&f, Nu::Plus, 0.7, &g).unwrap();
        assert!(d.kernel < 1e-12 && d.fiber < 1e-8 && d.commutant < 1e-12, "{d:?}");
    }
}
