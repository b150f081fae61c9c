use std::io::Write;
use std::path::Path;

use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::elements::{AlgebraElement, Body};
use crate::numerics::{make_grid, Grid1D, GridKind, Kahan, KahanC};
use crate::{par_map, Error, Result};

/// Label of an irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Nu {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl Nu {
    pub const ALL: [Nu; 3] = [Nu::Minus, Nu::Zero, Nu::Plus];

    pub fn sign(self) -> f64 {
        match self {
            Nu::Minus => -1.0,
            Nu::Zero => 0.0,
            Nu::Plus => 1.0,
        }
    }
}

impl std::fmt::Display for Nu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Nu::Minus => "-",
            Nu::Zero => "0",
            Nu::Plus => "+",
        })
    }
}

/// Default `s`-grid: 513 Gauss–Legendre nodes on `[−12, 12]`.
pub fn default_sgrid() -> Grid1D {
    make_grid(GridKind::GaussLegendre, -12.0, 12.0, 513).expect("static grid")
}

/// Nyström discretization of an integral operator: `matrix[[i, j]] =
/// K(s_i, u_j)·w_j` with `s` the row grid and `u` the column grid.
#[derive(Clone, Debug)]
pub struct RepOperator {
    pub nu: Nu,
    pub rows: Grid1D,
    pub cols: Grid1D,
    pub matrix: Array2<C64>,
    pub label: String,
}

fn same_grid(x: &Grid1D, y: &Grid1D) -> bool {
    x.nodes.len() == y.nodes.len() && x.nodes.iter().zip(&y.nodes).all(|(a, b)| a == b)
}

impl RepOperator {
    pub fn from_kernel(
        nu: Nu,
        rows: &Grid1D,
        cols: &Grid1D,
        label: impl Into<String>,
        kernel: impl Fn(f64, f64) -> C64 + Sync,
    ) -> Self {
        let data = par_map(rows.len(), |i| {
            let s = rows.nodes[i];
            cols.nodes.iter().zip(&cols.weights).map(|(&u, &w)| kernel(s, u) * w).collect::<Vec<_>>()
        });
        let mut matrix = Array2::zeros((rows.len(), cols.len()));
        for (i, row) in data.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                matrix[[i, j]] = v;
            }
        }
        Self { nu, rows: rows.clone(), cols: cols.clone(), matrix, label: label.into() }
    }

    pub fn is_square(&self) -> bool {
        same_grid(&self.rows, &self.cols)
    }

    /// Kernel value at the node pair `(i, j)`.
    pub fn kernel_at(&self, i: usize, j: usize) -> C64 {
        self.matrix[[i, j]] / self.cols.weights[j]
    }

    /// `Σ_i K(s_i, s_i) w_i`
    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::Parameter("trace of a rectangular operator".into()));
        }
        let mut acc = KahanC::new();
        for i in 0..self.rows.len() {
            acc.add(self.matrix[[i, i]]);
        }
        Ok(acc.value())
    }

    /// `Σ_ij |K(s_i,u_j)|² w_i w_j`
    pub fn hs_norm_sq(&self) -> f64 {
        let mut acc = Kahan::new();
        for (i, row) in self.matrix.outer_iter().enumerate() {
            let wi = self.rows.weights[i];
            for (j, z) in row.iter().enumerate() {
                acc.add(z.norm_sqr() * wi / self.cols.weights[j]);
            }
        }
        acc.value()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().sqrt()
    }

    fn check_same_shape(&self, other: &RepOperator) -> Result<()> {
        if !(same_grid(&self.rows, &other.rows) && same_grid(&self.cols, &other.cols)) {
            return Err(Error::Parameter(format!("operators {} and {} live on different grids", self.label, other.label)));
        }
        Ok(())
    }

    pub fn minus(&self, other: &RepOperator) -> Result<RepOperator> {
        self.check_same_shape(other)?;
        Ok(RepOperator {
            matrix: &self.matrix - &other.matrix,
            label: format!("{}-{}", self.label, other.label),
            ..self.clone()
        })
    }

    pub fn hs_distance(&self, other: &RepOperator) -> Result<f64> {
        Ok(self.minus(other)?.hs_norm())
    }

    /// Operator product; the column grid of `self` must be the row grid of
    /// `other`.
    pub fn compose(&self, other: &RepOperator) -> Result<RepOperator> {
        if !same_grid(&self.cols, &other.rows) {
            return Err(Error::Parameter(format!("cannot compose {} with {}: grids differ", self.label, other.label)));
        }
        Ok(RepOperator {
            nu: self.nu,
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            matrix: self.matrix.dot(&other.matrix),
            label: format!("{}{}", self.label, other.label),
        })
    }

    /// Hilbert-space adjoint: `K*(x, y) = conj K(y, x)`.
    pub fn adjoint(&self) -> RepOperator {
        let (n, m) = self.matrix.dim();
        let mut out = Array2::zeros((m, n));
        for i in 0..m {
            for j in 0..n {
                out[[i, j]] = (self.matrix[[j, i]] / self.cols.weights[i]).conj() * self.rows.weights[j];
            }
        }
        RepOperator {
            nu: self.nu,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            matrix: out,
            label: format!("{}^+", self.label),
        }
    }

    /// `D₁ · self · D₂` for diagonal multipliers given as functions of the
    /// row and column variables.
    pub fn sandwich(&self, left: impl Fn(f64) -> f64, right: impl Fn(f64) -> f64) -> RepOperator {
        let l: Vec<f64> = self.rows.nodes.iter().map(|&s| left(s)).collect();
        let r: Vec<f64> = self.cols.nodes.iter().map(|&u| right(u)).collect();
        let mut m = self.matrix.clone();
        Zip::indexed(&mut m).for_each(|(i, j), z| *z *= l[i] * r[j]);
        RepOperator { matrix: m, ..self.clone() }
    }

    /// Raw little-endian `(re, im)` pairs in row-major order, plus the
    /// JSON header written next to it.
    pub fn export(&self, data_path: impl AsRef<Path>, header_path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::with_capacity(16 * self.matrix.len());
        for z in self.matrix.iter() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        std::fs::File::create(data_path)?.write_all(&buf)?;
        let header = OperatorHeader {
            nu: self.nu.sign() as i8,
            n: self.rows.len(),
            grid_lo: self.rows.lo,
            grid_hi: self.rows.hi,
            kind: self.rows.kind,
        };
        std::fs::write(header_path, serde_json::to_string_pretty(&header)?)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorHeader {
    pub nu: i8,
    pub n: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub kind: GridKind,
}

/// `K(s,u) = f̃(u−s, νe^{−s})` sampled on `rows × cols`.
pub fn rep_kernel_rect(f: &AlgebraElement, nu: Nu, rows: &Grid1D, cols: &Grid1D) -> Result<RepOperator> {
    f.require_abeta()?;
    if let Body::Grid(g) = f.body() {
        // Beyond the β-axis the grid body is read as zero; only allowed when
        // it has actually decayed there.
        let (lo, hi) = (g.axis2.lo, g.axis2.hi);
        let leaves = rows.nodes.iter().any(|&s| {
            let beta = nu.sign() * (-s).exp();
            beta < lo || beta > hi
        });
        let edge = g.boundary_mass();
        if leaves && edge > 1e-8 {
            return Err(Error::Domain(format!(
                "kernel needs β outside [{lo}, {hi}] where the sampled element has not decayed (edge mass {edge:e})"
            )));
        }
    }
    let sign = nu.sign();
    Ok(RepOperator::from_kernel(nu, rows, cols, format!("pi{nu}({})", f.label()), |s, u| {
        f.abeta(u - s, sign * (-s).exp())
    }))
}

pub fn rep_kernel(f: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<RepOperator> {
    rep_kernel_rect(f, nu, sgrid, sgrid)
}

/// Intermediate grid for products `π(f)π(g)` on `sgrid`: the kernel of
/// `π(f)` at row `s` reaches columns `s + a` for `a` in the `a`-range of
/// `f`, which extends beyond `sgrid`. The returned Gauss–Legendre grid
/// covers that hull at the node density of `sgrid`.
pub fn intermediate_grid(sgrid: &Grid1D, f: &AlgebraElement) -> Result<Grid1D> {
    let (a0, a1) = f.a_range();
    let lo = sgrid.lo + a0.min(0.0);
    let hi = sgrid.hi + a1.max(0.0);
    let density = sgrid.len() as f64 / (sgrid.hi - sgrid.lo);
    let n = ((hi - lo) * density).ceil() as usize | 1;
    make_grid(sgrid.kind, lo, hi, n)
}

/// `π_ν(f) π_ν(g)` on `sgrid`, with the intermediate variable integrated
/// over the full reach of `f`'s kernel.
pub fn rep_product(f: &AlgebraElement, g: &AlgebraElement, nu: Nu, sgrid: &Grid1D) -> Result<RepOperator> {
    let mid = intermediate_grid(sgrid, f)?;
    let left = rep_kernel_rect(f, nu, sgrid, &mid)?;
    let right = rep_kernel_rect(g, nu, &mid, sgrid)?;
    left.compose(&right)
}
