//! The convolution algebra: products, involution, automorphisms,
//! derivations, multipliers and the trace.

mod maps;
mod product;
mod trace;

#[cfg(test)]
mod invariants;

pub use maps::{
    apply_automorphism, derive, exp_a, mul_a, mul_beta, mult_alpha, mult_beta, multiplier_ab_formula, partial_a,
    partial_beta, Automorphism, Derivation, Multiplier, Side,
};
pub use product::{conv, conv_ab_value, conv_alphabeta_oscillatory, product, star, star_ab_value};
pub use trace::{l2_norm_g, l2_norm_g_abeta, tau, tau_checked, TauRoutes};
