//! Discretized representations `π₋`, `π₀`, `π₊`, `π_τ` as integral
//! operators on a quadrature grid, with their traces and the checks of
//! the representation-level identities.

mod checks;
mod operator;
mod traces;

#[cfg(test)]
mod invariants;

pub use checks::{
    adjoint_defect, bracket_check, commutativity_defect, commutator_check, hermite_grid, hermite_matrix,
    homomorphism_defect, ladder_matrix, pi0_is_abelian_check, pitau_equiv_check, pitau_kernel, plancherel_check,
    plancherel_transform, regular_fiber_check, symmetric_grid, theta_commutation_check, theta_op, FiberDefects,
    PlancherelSides, ThetaDefects, ThetaOp, PLANCHEREL_SCALE,
};
pub use operator::{
    default_sgrid, intermediate_grid, rep_kernel, rep_kernel_rect, rep_product, Nu, OperatorHeader, RepOperator,
};
pub use traces::{
    rep_trace, tau_as_integral_check, theta2_trace, tr0, tr0p, RepTrace, TauIntegral, Theta2Trace, DIVERGENCE_TOL,
    TRACE_CUTOFFS,
};
