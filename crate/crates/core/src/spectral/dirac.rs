//! The Dirac operator `D = γ¹∂₁ + γ²∂₂` on `L²(ℝ)⊗ℂ²` per representation,
//! with `γ¹ = σ_x`, `γ² = σ_y`. In the Hermite basis `D² = diag(H∓1)`.

use ndarray::{s, Array1, Array2};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::{derive, Derivation};
use crate::elements::AlgebraElement;
use crate::numerics::{hermite_basis, Grid1D};
use crate::reps::{hermite_grid, hermite_matrix, ladder_matrix, rep_kernel, Nu};
use crate::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Truncated spectral data of `D²` in one representation block.
#[derive(Clone, Debug)]
pub struct DiracSpec {
    pub order: usize,
    pub sgrid: Grid1D,
    /// `H + 1` on the Hermite modes: `2k + 2`
    pub upper: Vec<f64>,
    /// `H − 1`: `2k`
    pub lower: Vec<f64>,
    /// number of representation blocks `ν ∈ {−, 0, +}`
    pub blocks: usize,
}

impl DiracSpec {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Parameter("Hermite order must be positive".into()));
        }
        Ok(Self {
            order,
            sgrid: hermite_grid(order)?,
            upper: (0..order).map(|k| 2.0 * k as f64 + 2.0).collect(),
            lower: (0..order).map(|k| 2.0 * k as f64).collect(),
            blocks: 3,
        })
    }

    /// Multiplicity of the eigenvalue `2n` in one block (both spinor
    /// components), for eigenvalues fully resolved by the truncation.
    pub fn multiplicity(&self, n: usize) -> usize {
        let d = 2.0 * n as f64;
        self.upper.iter().chain(&self.lower).filter(|&&e| e == d).count()
    }

    /// `Σ e^{−tλ}` over the truncated spectrum of all blocks.
    pub fn heat_trace(&self, t: f64) -> f64 {
        let one: f64 = self.upper.iter().chain(&self.lower).rev().map(|e| (-t * e).exp()).sum();
        one * self.blocks as f64
    }
}

fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `[[0, A − iB], [A + iB, 0]] = σ_x⊗A + σ_y⊗B`
fn spinor(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let m = a.nrows();
    let mut out = Array2::<C64>::zeros((2 * m, 2 * m));
    out.slice_mut(s![..m, m..]).assign(&(a - &b.mapv(|z| z * I)));
    out.slice_mut(s![m.., ..m]).assign(&(a + &b.mapv(|z| z * I)));
    out
}

/// Largest singular value by power iteration on `A†A`.
fn spectral_norm(a: &Array2<C64>) -> f64 {
    let n = a.ncols();
    if n == 0 {
        return 0.0;
    }
    let ah = a.t().mapv(|z| z.conj());
    let mut v = Array1::from_shape_fn(n, |k| C64::new(1.0 + 0.1 * (k as f64).sin(), 0.05 * k as f64 % 1.0));
    let mut sigma = 0.0;
    for _ in 0..500 {
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv == 0.0 {
            return 0.0;
        }
        v.mapv_inplace(|z| z / nv);
        let w = ah.dot(&a.dot(&v));
        let next = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().sqrt();
        v = w;
        if (next - sigma).abs() <= 1e-12 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

#[derive(Clone, Debug, Serialize)]
pub struct DCommutator {
    pub nu: Nu,
    pub order: usize,
    /// `‖σ_x⊗π(iδ₁f) + σ_y⊗π(iδ₂f)‖` at orders `M/2` and `M`
    pub norms: Vec<(usize, f64)>,
    /// at order `M`
    pub norm: f64,
    /// HS distance between the two sides, top-left `M×M` blocks
    pub identity_defect: f64,
    /// HS norm of the `π(iδ₂f)` block
    pub gamma2_block: f64,
}

struct Blocks {
    direct: Array2<C64>,
    formula: Array2<C64>,
    r2: Array2<C64>,
}

fn blocks(f: &AlgebraElement, nu: Nu, m: usize) -> Result<Blocks> {
    let grid = hermite_grid(m)?;
    let hb = hermite_basis(m + 1, &grid)?;
    let k = hermite_matrix(&rep_kernel(f, nu, &grid)?, &hb);
    let side = |which| -> Result<Array2<C64>> {
        let el = derive(which, f)?.scaled(I)?;
        Ok(hermite_matrix(&rep_kernel(&el, nu, &grid)?, &hb))
    };
    let r1 = side(Derivation::Delta1)?;
    let r2 = side(Derivation::Delta2)?;
    let d1 = ladder_matrix(1, m + 1);
    let d2 = ladder_matrix(2, m + 1);
    let c1 = d1.dot(&k) - k.dot(&d1);
    let c2 = d2.dot(&k) - k.dot(&d2);
    // the ladders are exact on modes < m; drop the last row and column
    let top = |x: &Array2<C64>| x.slice(s![..m, ..m]).to_owned();
    Ok(Blocks {
        direct: spinor(&top(&c1), &top(&c2)),
        formula: spinor(&top(&r1), &top(&r2)),
        r2: top(&r2),
    })
}

/// Compares `[D, π_ν(f)⊗1₂]`, assembled from the Hermite matrices of `∂_k`
/// and `π_ν(f)`, with `γ¹π_ν(iδ₁f) + γ²π_ν(iδ₂f)`, and records the operator
/// norm of the latter at orders `M/2` and `M`.
pub fn d_commutator_bounded_check(f: &AlgebraElement, nu: Nu, m: usize) -> Result<DCommutator> {
    if m < 2 {
        return Err(Error::Parameter(format!("Hermite order must be at least 2, got {m}")));
    }
    let coarse = blocks(f, nu, m / 2)?;
    let fine = blocks(f, nu, m)?;
    let norm = spectral_norm(&fine.formula);
    Ok(DCommutator {
        nu,
        order: m,
        norms: vec![(m / 2, spectral_norm(&coarse.formula)), (m, norm)],
        norm,
        identity_defect: frobenius(&(&fine.direct - &fine.formula)),
        gamma2_block: frobenius(&fine.r2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{default_atom, shifted_atom};

    #[test]
    fn spectrum_bookkeeping() {
        let d = DiracSpec::new(40).unwrap();
        assert_eq!(d.multiplicity(0), 1);
        for n in 1..40 {
            assert_eq!(d.multiplicity(n), 2);
        }
        // 3 coth t once the truncation is irrelevant
        let t = 0.5;
        assert!((d.heat_trace(t) - 3.0 / t.tanh()).abs() < 1e-12);
    }

    #[test]
    fn commutator_identity_and_bounded_norm() {
        let f = AlgebraElement::atom(shifted_atom());
        let c = d_commutator_bounded_check(&f, Nu::Plus, 60).unwrap();
        assert!(c.identity_defect < 1e-8, "{c:?}");
        let (n0, n1) = (c.norms[0].1, c.norms[1].1);
        // truncated norms increase towards the norm of the full operator
        assert!(n1 >= n0 && (n1 - n0) / n1 < 0.1, "{c:?}");
    }

    #[test]
    fn nu_zero_has_no_gamma2_block() {
        let f = AlgebraElement::atom(default_atom());
        let c = d_commutator_bounded_check(&f, Nu::Zero, 30).unwrap();
        assert!(c.gamma2_block < 1e-12 && c.identity_defect < 1e-8, "{c:?}");
    }

    #[test]
    fn zero_element() {
        let c = d_commutator_bounded_check(&AlgebraElement::zero(), Nu::Minus, 10).unwrap();
        assert_eq!((c.norm, c.identity_defect), (0.0, 0.0));
    }
}
