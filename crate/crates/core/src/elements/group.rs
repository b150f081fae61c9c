use serde::{Deserialize, Serialize};

/// A point `(a, b)` of the affine group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub a: f64,
    pub b: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint { a: 0.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn inverse(self) -> Self {
        Self { a: -self.a, b: -self.a.exp() * self.b }
    }
}

/// `(a, b)·(a', b') = (a + a', b + e^{-a} b')`
pub fn group_mul(g: GroupPoint, h: GroupPoint) -> GroupPoint {
    GroupPoint { a: g.a + h.a, b: g.b + (-g.a).exp() * h.b }
}

/// Modular function `Δ(a, b) = e^a`.
pub fn modular(g: GroupPoint) -> f64 {
    g.a.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_and_sample_product() {
        let g = GroupPoint::new(0.3, -1.2);
        assert_eq!(group_mul(GroupPoint::IDENTITY, g), g);
        let p = group_mul(GroupPoint::new(1.0, 0.0), GroupPoint::new(0.0, 1.0));
        assert_eq!(p.a, 1.0);
        assert!((p.b - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn modular_values() {
        assert_eq!(modular(GroupPoint::new(0.0, 5.0)), 1.0);
        assert!((modular(GroupPoint::new(1.0, 0.0)) - std::f64::consts::E).abs() < 1e-15);
        let g = GroupPoint::new(1.0, 2.0);
        let h = GroupPoint::new(3.0, 4.0);
        let lhs = modular(group_mul(g, h));
        assert!((lhs - modular(g) * modular(h)).abs() < 1e-14 * lhs);
    }

    proptest! {
        #[test]
        fn inverse_cancels(a in -5.0..5.0f64, b in -5.0..5.0f64) {
            let g = GroupPoint::new(a, b);
            let e = group_mul(g, g.inverse());
            prop_assert!(e.a.abs() < 1e-14 && e.b.abs() < 1e-12);
            let e = group_mul(g.inverse(), g);
            prop_assert!(e.a.abs() < 1e-14 && e.b.abs() < 1e-12);
        }

        #[test]
        fn associative(a1 in -3.0..3.0f64, b1 in -3.0..3.0f64, a2 in -3.0..3.0f64,
                       b2 in -3.0..3.0f64, a3 in -3.0..3.0f64, b3 in -3.0..3.0f64) {
            let (g, h, k) = (GroupPoint::new(a1, b1), GroupPoint::new(a2, b2), GroupPoint::new(a3, b3));
            let l = group_mul(group_mul(g, h), k);
            let r = group_mul(g, group_mul(h, k));
            prop_assert!((l.a - r.a).abs() < 1e-14);
            prop_assert!((l.b - r.b).abs() < 1e-14 * (1.0 + l.b.abs()));
        }

        #[test]
        fn modular_is_multiplicative(a1 in -3.0..3.0f64, b1 in -3.0..3.0f64, a2 in -3.0..3.0f64, b2 in -3.0..3.0f64) {
            let (g, h) = (GroupPoint::new(a1, b1), GroupPoint::new(a2, b2));
            let lhs = modular(group_mul(g, h));
            prop_assert!((lhs - modular(g) * modular(h)).abs() < 1e-14 * lhs);
        }
    }
}
