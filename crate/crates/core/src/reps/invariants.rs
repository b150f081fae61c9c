//! Property tests over random atoms.

use proptest::prelude::*;

use super::*;
use crate::elements::{AlgebraElement, GaussAtom};
use crate::numerics::{make_grid, GridKind};
use crate::C64;

fn atom() -> impl Strategy<Value = AlgebraElement> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.6..1.5f64, -1.0..1.0f64, 1.5..3.5f64, 0.5..1.0f64, -0.5..0.5f64)
        .prop_filter("non-zero amplitude", |t| t.0.hypot(t.1) > 0.1)
        .prop_map(|(re, im, a0, sa, p, b0, sb, q)| {
            AlgebraElement::atom(GaussAtom::new(C64::new(re, im), a0, sa, p, b0, sb, q).unwrap())
        })
}

fn nu() -> impl Strategy<Value = Nu> {
    prop_oneof![Just(Nu::Minus), Just(Nu::Zero), Just(Nu::Plus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta2_trace_is_linear(f in atom(), g in atom(), cr in -2.0..2.0f64, sign in prop_oneof![Just(Nu::Minus), Just(Nu::Plus)]) {
        let grid = make_grid(GridKind::GaussLegendre, -12.0, 12.0, 257).unwrap();
        let c = C64::new(cr, 0.5);
        let lin = AlgebraElement::combination(&[(c, &f), (C64::new(1.0, 0.0), &g)]).unwrap();
        let tf = theta2_trace(&f, sign, &grid).unwrap().diagonal;
        let tg = theta2_trace(&g, sign, &grid).unwrap().diagonal;
        let tl = theta2_trace(&lin, sign, &grid).unwrap().diagonal;
        prop_assert!((tl - (c * tf + tg)).norm() < 1e-10 * (1.0 + tl.norm()));
    }

    #[test]
    fn adjoint_is_the_star(f in atom(), nu in nu()) {
        let grid = make_grid(GridKind::GaussLegendre, -12.0, 12.0, 257).unwrap();
        prop_assert!(adjoint_defect(&f, nu, &grid).unwrap() < 1e-6);
    }
}
