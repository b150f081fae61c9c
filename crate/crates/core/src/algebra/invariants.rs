//! Property tests over random atoms.

use proptest::prelude::*;

use super::*;
use crate::elements::{AlgebraElement, Chart, GaussAtom};
use crate::C64;

fn atom() -> impl Strategy<Value = AlgebraElement> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.6..1.5f64, -1.0..1.0f64, 1.5..3.5f64, 0.5..1.0f64, -0.5..0.5f64)
        .prop_filter("non-zero amplitude", |t| t.0.hypot(t.1) > 0.1)
        .prop_map(|(re, im, a0, sa, p, b0, sb, q)| {
            AlgebraElement::atom(GaussAtom::new(C64::new(re, im), a0, sa, p, b0, sb, q).unwrap())
        })
}

const PROBES: [(f64, f64); 5] = [(0.0, 2.5), (0.5, 1.8), (-0.6, 3.0), (0.9, 0.0), (0.2, -0.7)];

fn gap(l: &AlgebraElement, r: &AlgebraElement) -> f64 {
    let (mut g, mut s) = (0.0f64, 0.0f64);
    for &(a, b) in &PROBES {
        let (x, y) = (l.eval(Chart::ABETA, a, b).unwrap(), r.eval(Chart::ABETA, a, b).unwrap());
        g = g.max((x - y).norm());
        s = s.max(x.norm()).max(y.norm());
    }
    g / s.max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_is_an_involution(f in atom()) {
        prop_assert!(gap(&star(&star(&f).unwrap()).unwrap(), &f) < 1e-12);
    }

    #[test]
    fn derivations_are_real(f in atom()) {
        for d in [Derivation::Delta1, Derivation::Delta2] {
            let l = derive(d, &star(&f).unwrap()).unwrap();
            let r = star(&derive(d, &f).unwrap()).unwrap();
            prop_assert!(gap(&l, &r) < 1e-8);
        }
    }

    #[test]
    fn delta2_vanishes_at_beta_zero(f in atom(), a in -2.0..2.0f64) {
        let v = derive(Derivation::Delta2, &f).unwrap().eval(Chart::ABETA, a, 0.0).unwrap();
        prop_assert_eq!(v, C64::new(0.0, 0.0));
    }

    #[test]
    fn tau_routes_agree_and_tau_is_linear(f in atom(), g in atom(), cr in -2.0..2.0f64, ci in -2.0..2.0f64) {
        let c = C64::new(cr, ci);
        prop_assert!(tau(&f).unwrap().max_deviation() < 1e-6 * (1.0 + tau(&f).unwrap().value().norm()));
        let lin = AlgebraElement::combination(&[(c, &f), (C64::new(1.0, 0.0), &g)]).unwrap();
        let want = c * tau(&f).unwrap().value() + tau(&g).unwrap().value();
        prop_assert!((tau(&lin).unwrap().value() - want).norm() < 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn tau_is_tracial_and_positive(f in atom(), g in atom()) {
        let fg = tau(&product(&f, &g).unwrap()).unwrap().value();
        let gf = tau(&product(&g, &f).unwrap()).unwrap().value();
        prop_assert!((fg - gf).norm() < 1e-6 * (1.0 + fg.norm()));
        let pos = tau(&product(&star(&f).unwrap(), &f).unwrap()).unwrap().value();
        prop_assert!(pos.re > -1e-12 && pos.im.abs() < 1e-9 * (1.0 + pos.re));
    }
}
