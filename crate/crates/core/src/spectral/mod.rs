//! The spectral triple: `D`, the oscillator heat semigroup, `ζ_D`, heat
//! traces of `π(f)`, and the Mellin transforms behind the Dixmier trace.

mod dirac;
mod heat;
mod mellin;
mod zeta;

pub use dirac::{d_commutator_bounded_check, DCommutator, DiracSpec};
pub use heat::{
    adaptive_order, eigen_order, heat_semigroup, heat_semigroup_eigen, heat_trace_d, heat_trace_d_spectral,
    heat_trace_h, heat_trace_mehler, heat_trace_mehler_phase, heat_trace_nu_zero, heat_trace_rep, heat_trace_rep_checked, mehler_kernel,
    mehler_ts, write_curve_header, HeatKernel, HeatMethod, HeatTraceCurve, HermiteDiagonal, EIGEN_TAIL, MAX_ORDER,
};
pub use mellin::{
    dixmier_estimate, dixmier_estimate_with, dixmier_exponents, i_nu, lemma_f0_check, lemma_f0_closed, mellin_trace,
    small_t_limit, LemmaF0, MellinData, MellinEstimate, MellinGrid, MellinTrace, NuShare, SmallTLimit,
};
pub use zeta::{zeta_d, zeta_d_eigensum, zeta_pole_probe, PoleProbe, SpectralSum};
