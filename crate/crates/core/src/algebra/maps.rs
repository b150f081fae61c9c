//! Automorphisms, derivations and the multiplier actions of `α` and `β`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::elements::{AlgebraElement, Chart, Lazy, PolyGauss};
use crate::Result;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Automorphism {
    /// `f̃ ↦ e^{ita} f̃`
    SigmaT(f64),
    /// The analytic continuation `f̃ ↦ e^{iza} f̃` for complex `z`.
    SigmaComplex(C64),
    /// `f̃(a,β) ↦ f̃(a, e^u β)`
    EtaU(f64),
    /// The twist `σ: f̃ ↦ e^{−a} f̃` (that is, `σ_{t=i}`).
    Twist,
    TwistInv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    /// `ia f̃`, generator of `σ_t`
    Delta1,
    /// `β∂_β f̃`, generator of `η_u`
    Delta2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

// Apply a closed-form map to atom bodies, otherwise wrap in a lazy node.
fn lift(
    f: &AlgebraElement,
    label: String,
    on_atoms: impl Fn(&PolyGauss) -> PolyGauss,
    node: impl FnOnce(AlgebraElement) -> Lazy,
) -> Result<AlgebraElement> {
    f.require_abeta()?;
    Ok(match f.atoms() {
        Some(sum) => AlgebraElement::from_sum(sum.map(on_atoms), label),
        None => AlgebraElement::lazy(node(f.clone()), label),
    })
}

/// Multiplication by `e^{za}`.
pub fn exp_a(f: &AlgebraElement, z: C64) -> Result<AlgebraElement> {
    lift(f, format!("e^({z}a){}", f.label()), |p| p.exp_a(z), |g| Lazy::ExpA(z, g))
}

pub fn apply_automorphism(which: Automorphism, f: &AlgebraElement) -> Result<AlgebraElement> {
    match which {
        Automorphism::SigmaT(t) => exp_a(f, I * t),
        Automorphism::SigmaComplex(z) => exp_a(f, I * z),
        Automorphism::Twist => exp_a(f, C64::new(-1.0, 0.0)),
        Automorphism::TwistInv => exp_a(f, C64::new(1.0, 0.0)),
        Automorphism::EtaU(u) => {
            lift(f, format!("eta_{u}({})", f.label()), |p| p.scale_beta(u), |g| Lazy::ScaleBeta(u, g))
        }
    }
}

/// `a f̃`
pub fn mul_a(f: &AlgebraElement) -> Result<AlgebraElement> {
    lift(f, format!("a{}", f.label()), PolyGauss::mul_a, Lazy::MulA)
}

/// `β f̃`
pub fn mul_beta(f: &AlgebraElement) -> Result<AlgebraElement> {
    lift(f, format!("b{}", f.label()), PolyGauss::mul_beta, Lazy::MulBeta)
}

/// `∂_a f̃`, exact on atoms, fourth-order finite differences otherwise.
pub fn partial_a(f: &AlgebraElement) -> Result<AlgebraElement> {
    lift(f, format!("d_a{}", f.label()), PolyGauss::d_a, Lazy::DiffA)
}

/// `∂_β f̃`, exact on atoms, fourth-order finite differences otherwise.
pub fn partial_beta(f: &AlgebraElement) -> Result<AlgebraElement> {
    lift(f, format!("d_b{}", f.label()), PolyGauss::d_beta, Lazy::DiffBeta)
}

pub fn derive(which: Derivation, f: &AlgebraElement) -> Result<AlgebraElement> {
    let out = match which {
        Derivation::Delta1 => mul_a(f)?.scaled(I)?,
        Derivation::Delta2 => mul_beta(&partial_beta(f)?)?,
    };
    let name = match which {
        Derivation::Delta1 => "d1",
        Derivation::Delta2 => "d2",
    };
    Ok(out.with_label(format!("{name}({})", f.label())))
}

/// Product with the multiplier `α` on the given side:
/// `α∗f = i∂_a f̃ + iβ∂_β f̃` and `f∗α = i∂_a f̃`.
pub fn mult_alpha(f: &AlgebraElement, side: Side) -> Result<AlgebraElement> {
    let da = partial_a(f)?;
    let out = match side {
        Side::Right => da.scaled(I)?,
        Side::Left => {
            let db = derive(Derivation::Delta2, f)?;
            AlgebraElement::combination(&[(I, &da), (I, &db)])?
        }
    };
    let label = match side {
        Side::Left => format!("alpha*{}", f.label()),
        Side::Right => format!("{}*alpha", f.label()),
    };
    Ok(out.with_label(label))
}

/// Product with the multiplier `β`: `β∗f = βf̃` and `f∗β = β e^{−a} f̃`.
pub fn mult_beta(f: &AlgebraElement, side: Side) -> Result<AlgebraElement> {
    let out = match side {
        Side::Left => mul_beta(f)?,
        Side::Right => mul_beta(&apply_automorphism(Automorphism::Twist, f)?)?,
    };
    let label = match side {
        Side::Left => format!("beta*{}", f.label()),
        Side::Right => format!("{}*beta", f.label()),
    };
    Ok(out.with_label(label))
}

/// The multiplier actions written as differential operators in group
/// variables, evaluated by central differences on the closed form:
/// `α∗f ↦ i∂_a f̂ − i∂_b(b f̂)`, `f∗α ↦ i∂_a f̂`, `β∗f ↦ i∂_b f̂`,
/// `f∗β ↦ i e^{−a} ∂_b f̂`.
///
/// The `α` formulas differ from the `(a,β)`-chart actions by `−i f̂`: they
/// implement `α − i`. See [`mult_alpha`] for the unshifted action.
pub fn multiplier_ab_formula(f: &AlgebraElement, which: Multiplier, side: Side, a: f64, b: f64) -> Result<C64> {
    let h = 1e-3;
    let ev = |x: f64, y: f64| f.eval(Chart::AB, x, y);
    let d = |g: &dyn Fn(f64) -> Result<C64>, x: f64| -> Result<C64> {
        Ok((g(x - 2.0 * h)? - g(x - h)? * 8.0 + g(x + h)? * 8.0 - g(x + 2.0 * h)?) / (12.0 * h))
    };
    let da = d(&|x| ev(x, b), a)?;
    let db = d(&|y| ev(a, y), b)?;
    Ok(match (which, side) {
        (Multiplier::Alpha, Side::Left) => {
            let dbb = d(&|y| Ok(ev(a, y)? * y), b)?;
            I * da - I * dbb
        }
        (Multiplier::Alpha, Side::Right) => I * da,
        (Multiplier::Beta, Side::Left) => I * db,
        (Multiplier::Beta, Side::Right) => I * (-a).exp() * db,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplier {
    Alpha,
    Beta,
}
