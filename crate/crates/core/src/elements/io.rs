use std::path::Path;

use num_complex::Complex64 as C64;

use super::{AlgebraElement, GaussAtom};
use crate::Result;

/// Parse a JSON array of atoms, validating each.
pub fn parse_atoms(text: &str) -> Result<Vec<GaussAtom>> {
    let atoms: Vec<GaussAtom> = serde_json::from_str(text)?;
    for a in &atoms {
        a.validate()?;
    }
    Ok(atoms)
}

pub fn load_atoms(path: impl AsRef<Path>) -> Result<Vec<GaussAtom>> {
    parse_atoms(&std::fs::read_to_string(path)?)
}

/// The first default atom: unit amplitude, centred at `a = 0`, `β = 3`.
pub fn default_atom() -> GaussAtom {
    GaussAtom { amp_re: 1.0, amp_im: 0.0, a0: 0.0, sigma_a: 1.0, p: 0.0, beta0: 3.0, sigma_beta: 0.7, q: 0.0 }
}

/// The default atom shifted to `a₀ = 0.5` with phase `p = 1`.
pub fn shifted_atom() -> GaussAtom {
    GaussAtom { a0: 0.5, p: 1.0, ..default_atom() }
}

/// Default test family: the two atoms above plus `β∂_β` of the first, which
/// has vanishing trace.
pub fn default_family() -> Vec<AlgebraElement> {
    let f = AlgebraElement::atom(default_atom()).with_label("atom");
    let g = AlgebraElement::atom(shifted_atom()).with_label("shifted");
    let null = f.atoms().unwrap().map(|p| p.d_beta().mul_beta());
    vec![f, g, AlgebraElement::from_sum(null, "delta2(atom)")]
}

/// Convenience constructor used in examples and tests.
pub fn gauss(amp: f64, a0: f64, sigma_a: f64, p: f64, beta0: f64, sigma_beta: f64, q: f64) -> GaussAtom {
    GaussAtom::new(C64::new(amp, 0.0), a0, sigma_a, p, beta0, sigma_beta, q).expect("valid atom")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::Chart;

    #[test]
    fn parses_field_names() {
        let text = r#"[{"A_re":1,"A_im":0.5,"a0":0,"sigma_a":1,"p":0,"beta0":3,"sigma_beta":0.7,"q":0}]"#;
        let atoms = parse_atoms(text).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].amplitude(), C64::new(1.0, 0.5));
    }

    #[test]
    fn rejects_bad_width_and_missing_field() {
        let bad = r#"[{"A_re":1,"A_im":0,"a0":0,"sigma_a":0,"p":0,"beta0":3,"sigma_beta":0.7,"q":0}]"#;
        assert!(parse_atoms(bad).is_err());
        let missing = r#"[{"A_re":1,"a0":0,"sigma_a":1,"p":0,"beta0":3,"sigma_beta":0.7,"q":0}]"#;
        assert!(parse_atoms(missing).is_err());
    }

    #[test]
    fn null_member_vanishes_on_beta_zero() {
        let fam = default_family();
        for a in [-1.0, 0.0, 0.7] {
            assert_eq!(fam[2].eval(Chart::ABETA, a, 0.0).unwrap(), C64::new(0.0, 0.0));
        }
    }
}
