//! Grids, quadrature, FFT, Hermite functions, zeta and friends.

mod extrapolate;
mod fft;
mod grid;
mod hermite;
mod interp;
mod special;
mod sum;
mod zeta;

pub use extrapolate::{neville_to_zero, richardson_sliding, Extrapolation};
pub use fft::{fft_1d, Direction};
pub use grid::{composite_gauss_legendre, gauss_legendre_unit, make_grid, Grid1D, GridKind};
pub use hermite::{derivative_element, hermite_basis, hermite_values, position_element, HermiteBasis};
pub use interp::{cubic_hermite_weights, UniformAxis};
pub use special::{gamma, gauss_moments, lower_gamma, GaussWeight};
pub use sum::{kahan_sum, kahan_sum_c, Kahan, KahanC};
pub use zeta::riemann_zeta;
