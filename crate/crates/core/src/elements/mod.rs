//! Elements of the smooth algebra in the three charts.

mod atom;
mod chart;
mod element;
mod grid_fn;
mod group;
mod io;
mod transform;

pub use atom::{AtomSum, GaussAtom, PolyGauss};
pub use chart::Chart;
pub use element::{AlgebraElement, Body, Lazy};
pub(crate) use element::panel_quad;
pub use grid_fn::GridFn2D;
pub use group::{group_mul, modular, GroupPoint};
pub use io::{default_atom, default_family, gauss, load_atoms, parse_atoms, shifted_atom};
pub use transform::{centred_axis, conjugate_axis, sample, to_chart, FftAxes, Transformed};
