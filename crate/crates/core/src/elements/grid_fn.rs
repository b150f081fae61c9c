use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::Chart;
use crate::numerics::{cubic_hermite_weights, Grid1D, GridKind, UniformAxis};
use crate::{Error, Result};

/// Samples of a function of two variables on a tensor grid, tagged with the
/// chart they belong to.
#[derive(Clone, Debug)]
pub struct GridFn2D {
    pub axis1: Grid1D,
    pub axis2: Grid1D,
    /// `values[[i, j]] = f(axis1[i], axis2[j])`
    pub values: Array2<C64>,
    pub chart: Chart,
}

impl GridFn2D {
    pub fn new(axis1: Grid1D, axis2: Grid1D, values: Array2<C64>, chart: Chart) -> Result<Self> {
        if values.dim() != (axis1.len(), axis2.len()) {
            return Err(Error::Parameter(format!(
                "grid values {:?} do not match axes ({}, {})",
                values.dim(),
                axis1.len(),
                axis2.len()
            )));
        }
        Ok(Self { axis1, axis2, values, chart })
    }

    /// Largest modulus on the outer ring of the grid relative to the largest
    /// modulus overall. Small values justify treating the function as zero
    /// off the grid.
    pub fn boundary_mass(&self) -> f64 {
        let (n1, n2) = self.values.dim();
        let peak = self.values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for i in 0..n1 {
            edge = edge.max(self.values[[i, 0]].norm()).max(self.values[[i, n2 - 1]].norm());
        }
        for j in 0..n2 {
            edge = edge.max(self.values[[0, j]].norm()).max(self.values[[n1 - 1, j]].norm());
        }
        edge / peak
    }

    fn uniform(axis: &Grid1D) -> Result<UniformAxis> {
        if axis.kind != GridKind::UniformTrapezoid {
            return Err(Error::Parameter("interpolation needs uniform axes".into()));
        }
        Ok(UniformAxis { lo: axis.lo, h: axis.step(), n: axis.len() })
    }

    /// Tensor cubic Hermite interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<C64> {
        let ax = Self::uniform(&self.axis1)?;
        let ay = Self::uniform(&self.axis2)?;
        Ok(interp2(&self.values, &ax, &ay, x, y))
    }
}

pub(crate) fn interp2(values: &Array2<C64>, ax: &UniformAxis, ay: &UniformAxis, x: f64, y: f64) -> C64 {
    let (Some((i, tx)), Some((j, ty))) = (ax.locate(x), ay.locate(y)) else {
        return C64::new(0.0, 0.0);
    };
    let wx = cubic_hermite_weights(tx);
    let wy = cubic_hermite_weights(ty);
    let mut acc = C64::new(0.0, 0.0);
    for (p, &cx) in wx.iter().enumerate() {
        let ii = i as isize + p as isize - 2;
        if ii < 0 || ii >= ax.n as isize || cx == 0.0 {
            continue;
        }
        let mut row = C64::new(0.0, 0.0);
        for (q, &cy) in wy.iter().enumerate() {
            let jj = j as isize + q as isize - 2;
            if jj < 0 || jj >= ay.n as isize {
                continue;
            }
            row += values[[ii as usize, jj as usize]] * cy;
        }
        acc += row * cx;
    }
    acc
}
