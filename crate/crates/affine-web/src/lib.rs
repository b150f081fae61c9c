//! wasm-bindgen entry points for the static page in `www/`. Every function
//! takes plain numbers or a JSON atom list and returns a JSON string, so
//! the page needs no bundler.

use affine_triple::algebra::{l2_norm_g, tau};
use affine_triple::elements::{parse_atoms, AlgebraElement};
use affine_triple::reps::Nu;
use affine_triple::spectral::{adaptive_order, heat_trace_mehler, zeta_d, zeta_d_eigensum, DiracSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn element(atoms_json: &str) -> Result<AlgebraElement, JsValue> {
    let atoms = parse_atoms(atoms_json).map_err(js_err)?;
    let mut it = atoms.into_iter().map(AlgebraElement::atom);
    let first = it.next().ok_or_else(|| js_err("the atom list is empty"))?;
    it.try_fold(first, |acc, a| acc.plus(&a)).map_err(js_err)
}

fn parse_nu(nu: &str) -> Result<Nu, JsValue> {
    match nu {
        "-" | "minus" => Ok(Nu::Minus),
        "0" | "zero" => Ok(Nu::Zero),
        "+" | "plus" => Ok(Nu::Plus),
        _ => Err(js_err(format!("ν must be -, 0 or +, got `{nu}`"))),
    }
}

/// `τ(f)` by its three chart routes, the predicted Dixmier trace `8τ(f)`
/// and `‖f‖` in `L²(G)`.
#[wasm_bindgen]
pub fn trace_of(atoms_json: &str) -> Result<String, JsValue> {
    let f = element(atoms_json)?;
    let t = tau(&f).map_err(js_err)?;
    let pair = |z: affine_triple::C64| json!([z.re, z.im]);
    Ok(json!({
        "tau": pair(t.value()),
        "tau_ab": t.ab.map(pair),
        "tau_alphabeta": t.alphabeta.map(pair),
        "route_spread": t.max_deviation(),
        "dixmier_prediction": pair(t.value() * 8.0),
        "l2_norm": l2_norm_g(&f).map_err(js_err)?,
    })
    .to_string())
}

/// `Tr(π_ν(f) e^{−tH})` at each `t` in `ts`, with `√t` times the value,
/// which tends to `π^{3/2}τ(f)` (twice that for `ν = 0`) as `t → 0`.
#[wasm_bindgen]
pub fn heat_curve(atoms_json: &str, nu: &str, ts: &[f64]) -> Result<String, JsValue> {
    let f = element(atoms_json)?;
    let nu = parse_nu(nu)?;
    let rows = ts
        .iter()
        .map(|&t| {
            let v = heat_trace_mehler(&f, nu, t).map_err(js_err)?;
            Ok(json!({"t": t, "re": v.re, "im": v.im, "scaled_re": v.re * t.sqrt(), "scaled_im": v.im * t.sqrt()}))
        })
        .collect::<Result<Vec<_>, JsValue>>()?;
    let limit = tau(&f).map_err(js_err)?.value() * std::f64::consts::PI.powf(1.5) * if nu == Nu::Zero { 2.0 } else { 1.0 };
    Ok(json!({"rows": rows, "small_t_limit": [limit.re, limit.im]}).to_string())
}

/// `ζ_D(s)` in closed form and as an eigenvalue sum, plus
/// `Tr e^{−tD²}` from the truncated spectrum against `3 coth t`.
#[wasm_bindgen]
pub fn dirac_spectrum(s: f64, t: f64, terms: usize) -> Result<String, JsValue> {
    let closed = zeta_d(s).map_err(js_err)?;
    let sum = zeta_d_eigensum(s, terms.max(1)).map_err(js_err)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(js_err(format!("t must be positive, got {t}")));
    }
    let m = adaptive_order(t);
    let heat = DiracSpec::new(m).map_err(js_err)?.heat_trace(t);
    Ok(json!({
        "zeta_closed": closed,
        "zeta_sum": sum.value,
        "zeta_rel_gap": ((closed - sum.value) / closed).abs(),
        "heat_trace": heat,
        "coth_form": 3.0 / t.tanh(),
        "hermite_order": m,
    })
    .to_string())
}
