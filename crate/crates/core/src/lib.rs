//! Numerical realization of the group C*-algebra of the real affine group,
//! its representations, and the spectral triple built from the harmonic
//! oscillator.
//!
//! Elements of the smooth algebra are modelled by Gaussian atoms with
//! closed forms in all three charts; everything else (products, kernels,
//! heat traces, Mellin transforms) is computed by quadrature on top of
//! those closed forms.

pub mod algebra;
pub mod elements;
mod error;
pub mod numerics;
pub mod report;
pub mod reps;
pub mod spectral;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Run `f` over `0..n`, in parallel when the `parallel` feature is on.
/// Output order is always the index order.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
