//! Verification suites: each runs the identities of one part of the
//! library on an element family and collects the outcomes in a
//! [`VerificationReport`].

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    apply_automorphism, conv, conv_ab_value, derive, l2_norm_g, mult_alpha, mult_beta, multiplier_ab_formula, partial_beta, product,
    star, tau, Automorphism, Derivation, Multiplier, Side,
};
use crate::elements::{default_family, load_atoms, AlgebraElement, Chart, FftAxes};
use crate::numerics::{gamma, make_grid, Grid1D, GridKind};
use crate::report::{Check, Comparison, Provenance, VerificationReport};
use crate::reps::{
    adjoint_defect, bracket_check, commutativity_defect, commutator_check, homomorphism_defect, pitau_equiv_check,
    plancherel_check, regular_fiber_check, rep_trace, symmetric_grid, tau_as_integral_check, theta2_trace,
    theta_commutation_check, Nu, PLANCHEREL_SCALE,
};
use crate::spectral::{
    adaptive_order, d_commutator_bounded_check, dixmier_estimate_with, heat_trace_d, heat_trace_mehler,
    heat_trace_nu_zero, heat_trace_rep, lemma_f0_check, small_t_limit, zeta_d, zeta_d_eigensum, zeta_pole_probe,
    DiracSpec, HeatMethod, HermiteDiagonal, MellinGrid, MellinTrace,
};
use crate::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };
use Provenance::{Derived, Paper, Trivial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Reps,
    Plancherel,
    Spectral,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 4] = [Suite::Algebra, Suite::Reps, Suite::Plancherel, Suite::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Reps => "reps",
            Suite::Plancherel => "plancherel",
            Suite::Spectral => "spectral",
            Suite::All => "all",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "reps" => Ok(Suite::Reps),
            "plancherel" => Ok(Suite::Plancherel),
            "spectral" => Ok(Suite::Spectral),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parameter(format!("unknown suite `{s}` (algebra, reps, plancherel, spectral, all)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub half_width: f64,
}

/// Run configuration. Every field has a default, so `{}` is a valid
/// config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Gauss–Legendre grid in `s` for the representation operators.
    pub sgrid: GridSpec,
    /// Node count of the refined `s`-grid for convergence checks.
    pub refined_n: usize,
    /// Uniform axes for grid products.
    pub fft: FftAxes,
    pub refined_fft_n: usize,
    /// Odd node count of the symmetric grid for the `π_τ` check.
    pub pitau_n: usize,
    /// Hermite order for the commutator checks.
    pub hermite_order: usize,
    /// Hermite order for `[D, π(f)]`.
    pub dirac_order: usize,
    /// Hermite order of the spectral sums at `s = 4`.
    pub spectral_order: usize,
    /// Overrides by check name; the key `*` applies to every check.
    pub tolerances: BTreeMap<String, f64>,
    pub atoms: Option<PathBuf>,
    pub suite: Suite,
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            sgrid: GridSpec { n: 513, half_width: 12.0 },
            refined_n: 1025,
            fft: FftAxes::default(),
            refined_fft_n: 512,
            pitau_n: 201,
            hermite_order: 120,
            dirac_order: 300,
            spectral_order: 600,
            tolerances: BTreeMap::new(),
            atoms: None,
            suite: Suite::All,
            threads: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if self.sgrid.n < 16 || !(self.sgrid.half_width > 0.0 && self.sgrid.half_width.is_finite()) {
            return bad(format!("sgrid needs n ≥ 16 and a positive half-width, got {:?}", self.sgrid));
        }
        if self.refined_n <= self.sgrid.n {
            return bad(format!("refined_n ({}) must exceed sgrid.n ({})", self.refined_n, self.sgrid.n));
        }
        if self.fft.n < 16 || self.fft.n % 2 != 0 || !(self.fft.half_width > 0.0 && self.fft.half_width.is_finite()) {
            return bad(format!("fft axes need an even n ≥ 16 and a positive half-width, got {:?}", self.fft));
        }
        if self.refined_fft_n <= self.fft.n || self.refined_fft_n % 2 != 0 {
            return bad(format!("refined_fft_n ({}) must be even and exceed fft.n ({})", self.refined_fft_n, self.fft.n));
        }
        if self.pitau_n < 3 || self.pitau_n % 2 == 0 {
            return bad(format!("pitau_n must be odd and ≥ 3, got {}", self.pitau_n));
        }
        for (name, m) in [("hermite_order", self.hermite_order), ("dirac_order", self.dirac_order), ("spectral_order", self.spectral_order)] {
            if !(4..=2000).contains(&m) {
                return bad(format!("{name} must lie in 4..=2000, got {m}"));
            }
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v >= 0.0) {
                return bad(format!("tolerance override `{k}` must be finite and non-negative, got {v}"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    pub fn sgrid(&self) -> Result<Grid1D> {
        make_grid(GridKind::GaussLegendre, -self.sgrid.half_width, self.sgrid.half_width, self.sgrid.n)
    }

    pub fn refined_sgrid(&self) -> Result<Grid1D> {
        make_grid(GridKind::GaussLegendre, -self.sgrid.half_width, self.sgrid.half_width, self.refined_n)
    }

    /// The element family: atoms from `atoms` if set, else the default
    /// family (an atom, a shifted copy and a `τ`-null derivative).
    pub fn family(&self) -> Result<Vec<AlgebraElement>> {
        match &self.atoms {
            None => Ok(default_family()),
            Some(path) => {
                let atoms = load_atoms(path)?;
                if atoms.is_empty() {
                    return Err(Error::Parameter(format!("{} holds no atoms", path.display())));
                }
                Ok(atoms
                    .into_iter()
                    .enumerate()
                    .map(|(i, a)| AlgebraElement::atom(a).with_label(format!("atom{i}")))
                    .collect())
            }
        }
    }
}

/// Collects checks with their runtimes and applies tolerance overrides.
struct Runner<'a> {
    config: &'a Config,
    timing: bool,
    report: VerificationReport,
}

impl<'a> Runner<'a> {
    fn new(config: &'a Config, suite: Suite, timing: bool) -> Self {
        Self { config, timing, report: VerificationReport::new(suite.name()) }
    }

    /// Runs `body`, stamps its checks with the elapsed time, and turns an
    /// error into one failing check named `name`.
    fn run(&mut self, name: &str, provenance: Provenance, body: impl FnOnce() -> Result<Vec<Check>>) {
        let start = Instant::now();
        let out = body();
        let ms = if self.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let checks = match out {
            Ok(c) => c,
            Err(e) => vec![Check::new(name, f64::NAN, 0.0, 0.0, Comparison::Below, provenance).with_note(e.to_string())],
        };
        for mut c in checks {
            c.runtime_ms = ms;
            let over = self.config.tolerances.get(&c.name).or_else(|| self.config.tolerances.get("*"));
            if let Some(&t) = over {
                c.retolerate(t);
            }
            self.report.checks.push(c);
        }
    }
}

fn is_null(f: &AlgebraElement) -> Result<bool> {
    let t = tau(f)?.value().norm();
    Ok(t <= 1e-12 * l2_norm_g(f)?.max(f64::MIN_POSITIVE))
}

// Probe points in the (a, β) chart for pointwise identities.
const PROBES: [(f64, f64); 6] = [(0.0, 3.0), (0.4, 2.2), (-0.7, 3.6), (1.1, 0.5), (0.2, -1.0), (-0.3, 0.0)];

/// `max|l − r| / max|r|` over [`PROBES`].
fn sup_gap(l: &AlgebraElement, r: &AlgebraElement) -> Result<f64> {
    let (mut gap, mut scale) = (0.0f64, 0.0f64);
    for &(a, b) in &PROBES {
        let (x, y) = (l.eval(Chart::ABETA, a, b)?, r.eval(Chart::ABETA, a, b)?);
        gap = gap.max((x - y).norm());
        scale = scale.max(y.norm()).max(x.norm());
    }
    Ok(if scale > 0.0 { gap / scale } else { gap })
}

fn trio(family: &[AlgebraElement]) -> (AlgebraElement, AlgebraElement, AlgebraElement) {
    let n = family.len();
    (family[0].clone(), family[1 % n].clone(), family[2 % n].clone())
}

fn algebra_suite(r: &mut Runner, family: &[AlgebraElement]) -> Result<()> {
    let (f, g, h) = trio(family);
    let tol = 1e-6;
    let name = |what: &str, els: &[&AlgebraElement]| {
        let labels: Vec<&str> = els.iter().map(|e| e.label()).collect();
        format!("{what}[{}]", labels.join(","))
    };
    let n = name("associativity", &[&f, &g, &h]);
    r.run(&n, Paper, || {
        let l = product(&product(&f, &g)?, &h)?;
        let rr = product(&f, &product(&g, &h)?)?;
        Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
    });
    let n = name("involution_antihomomorphism", &[&f, &g]);
    r.run(&n, Paper, || {
        let l = star(&product(&f, &g)?)?;
        let rr = product(&star(&g)?, &star(&f)?)?;
        Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
    });
    let n = name("involution_is_involutive", &[&g]);
    r.run(&n, Trivial, || Ok(vec![Check::defect(&n, sup_gap(&star(&star(&g)?)?, &g)?, tol, Trivial)]));
    for (label, aut) in [("sigma_t=0.7", Automorphism::SigmaT(0.7)), ("eta_u=0.4", Automorphism::EtaU(0.4))] {
        let n = name(&format!("automorphism_{label}"), &[&f, &g]);
        r.run(&n, Paper, || {
            let l = apply_automorphism(aut, &product(&f, &g)?)?;
            let rr = product(&apply_automorphism(aut, &f)?, &apply_automorphism(aut, &g)?)?;
            Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
        });
    }
    for (label, which) in [("delta1", Derivation::Delta1), ("delta2", Derivation::Delta2)] {
        let n = name(&format!("leibniz_{label}"), &[&f, &g]);
        r.run(&n, Paper, || {
            let l = derive(which, &product(&f, &g)?)?;
            let rr = product(&derive(which, &f)?, &g)?.plus(&product(&f, &derive(which, &g)?)?)?;
            Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
        });
    }
    let n = name("twisted_leibniz_d_beta", &[&f, &g]);
    r.run(&n, Paper, || {
        let l = partial_beta(&product(&f, &g)?)?;
        let twisted = apply_automorphism(Automorphism::Twist, &f)?;
        let rr = product(&partial_beta(&f)?, &g)?.plus(&product(&twisted, &partial_beta(&g)?)?)?;
        Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
    });
    let n = name("derivations_commute", &[&g]);
    r.run(&n, Paper, || {
        let l = derive(Derivation::Delta1, &derive(Derivation::Delta2, &g)?)?;
        let rr = derive(Derivation::Delta2, &derive(Derivation::Delta1, &g)?)?;
        Ok(vec![Check::defect(&n, sup_gap(&l, &rr)?, tol, Paper)])
    });
    let n = name("alpha_beta_commutator_left", &[&g]);
    r.run(&n, Paper, || {
        let ab = mult_alpha(&mult_beta(&g, Side::Left)?, Side::Left)?;
        let ba = mult_beta(&mult_alpha(&g, Side::Left)?, Side::Left)?;
        let rr = mult_beta(&g, Side::Left)?.scaled(I)?;
        Ok(vec![Check::defect(&n, sup_gap(&ab.minus(&ba)?, &rr)?, tol, Paper)])
    });
    let n = name("alpha_beta_commutator_right", &[&g]);
    r.run(&n, Derived, || {
        // (f∗β)∗α − (f∗α)∗β = f∗[β, α] = −i f∗β
        let ba = mult_alpha(&mult_beta(&g, Side::Right)?, Side::Right)?;
        let ab = mult_beta(&mult_alpha(&g, Side::Right)?, Side::Right)?;
        let rr = mult_beta(&g, Side::Right)?.scaled(-I)?;
        Ok(vec![Check::defect(&n, sup_gap(&ba.minus(&ab)?, &rr)?, tol, Derived)])
    });
    let n = name("multipliers_in_group_variables", &[&g]);
    r.run(&n, Derived, || {
        let mut worst = 0.0f64;
        for &(a, b) in &[(0.3, 0.2), (-0.2, -0.5), (0.1, 1.3)] {
            let fab = g.eval(Chart::AB, a, b)?;
            for side in [Side::Left, Side::Right] {
                let beta = mult_beta(&g, side)?.eval(Chart::AB, a, b)?;
                worst = worst.max((multiplier_ab_formula(&g, Multiplier::Beta, side, a, b)? - beta).norm());
                let alpha = mult_alpha(&g, side)?.eval(Chart::AB, a, b)?;
                worst = worst.max((multiplier_ab_formula(&g, Multiplier::Alpha, side, a, b)? - (alpha - I * fab)).norm());
            }
        }
        Ok(vec![Check::defect(&n, worst, tol, Derived).with_note("the α formulas act as α − i")])
    });
    for el in family {
        let n = name("tau_routes_agree", &[el]);
        r.run(&n, Paper, || Ok(vec![Check::defect(&n, tau(el)?.max_deviation(), tol, Paper)]));
    }
    let n = name("tau_is_tracial", &[&f, &g]);
    r.run(&n, Paper, || {
        let fg = tau(&product(&f, &g)?)?.value();
        let gf = tau(&product(&g, &f)?)?.value();
        Ok(vec![Check::complex(&n, fg, gf, tol, false, Paper)])
    });
    for (label, which) in [("delta1", Derivation::Delta1), ("delta2", Derivation::Delta2)] {
        let n = name(&format!("tau_kills_{label}"), &[&g]);
        r.run(&n, Paper, || Ok(vec![Check::defect(&n, tau(&derive(which, &g)?)?.value().norm(), 1e-8, Paper)]));
    }
    let n = name("group_variable_product", &[&f, &g]);
    r.run(&n, Derived, || {
        // tensor quadrature in (a, b) against the (a, β) product
        let exact = product(&f, &g)?;
        let (mut gap, mut scale) = (0.0f64, 0.0f64);
        for &(a, b) in &[(0.3, 0.0), (-0.5, 0.8), (1.0, -1.5), (0.0, 0.4)] {
            let want = exact.eval(Chart::AB, a, b)?;
            gap = gap.max((conv_ab_value(&f, &g, a, b, 1)? - want).norm());
            scale = scale.max(want.norm());
        }
        Ok(vec![Check::defect(&n, gap / scale.max(f64::MIN_POSITIVE), tol, Derived)])
    });
    let n = name("product_at_beta_zero_is_pointwise", &[&f, &g]);
    r.run(&n, Paper, || {
        let ax = r.config.fft.axis()?;
        let grid = conv(&f, &g, Chart::ALPHABETA, &ax, &ax)?;
        let (mut gap, mut scale) = (0.0f64, 0.0f64);
        for alpha in [-1.5, -0.4, 0.0, 0.3, 1.2] {
            let want = f.eval(Chart::ALPHABETA, alpha, 0.0)? * g.eval(Chart::ALPHABETA, alpha, 0.0)?;
            gap = gap.max((grid.eval(Chart::ALPHABETA, alpha, 0.0)? - want).norm());
            scale = scale.max(want.norm());
        }
        Ok(vec![Check::defect(&n, gap / scale.max(f64::MIN_POSITIVE), tol, Paper).grid("fft_n", r.config.fft.n as f64)])
    });
    Ok(())
}

fn reps_suite(r: &mut Runner, family: &[AlgebraElement]) -> Result<()> {
    let (f, g, _) = trio(family);
    let cfg = r.config.clone();
    let sgrid = cfg.sgrid()?;
    let fine = cfg.refined_sgrid()?;
    let pair = format!("{},{}", f.label(), g.label());
    let n0 = sgrid.len() as f64;

    let n = format!("homomorphism[{pair}]");
    r.run(&n, Paper, || {
        let coarse_ax = cfg.fft.axis()?;
        let fine_ax = FftAxes { n: cfg.refined_fft_n, half_width: cfg.fft.half_width }.axis()?;
        let fg = conv(&f, &g, Chart::ABETA, &coarse_ax, &coarse_ax)?;
        let fg_fine = conv(&f, &g, Chart::ABETA, &fine_ax, &fine_ax)?;
        let mut out = Vec::new();
        for nu in Nu::ALL {
            let d0 = homomorphism_defect(&fg, &f, &g, nu, &sgrid)?;
            let d1 = homomorphism_defect(&fg_fine, &f, &g, nu, &fine)?;
            out.push(Check::defect(format!("homomorphism[{pair},nu={nu}]"), d0, 1e-4, Paper).grid("N", n0).grid("fft_n", cfg.fft.n as f64));
            out.push(
                Check::new(format!("homomorphism_refinement[{pair},nu={nu}]"), d0 / d1, 2.0, 2.0, Comparison::Above, Derived)
                    .with_note(format!("defects {d0:e} -> {d1:e}"))
                    .grid("N", fine.len() as f64)
                    .grid("fft_n", cfg.refined_fft_n as f64),
            );
        }
        Ok(out)
    });
    let n = format!("adjoint[{}]", f.label());
    r.run(&n, Paper, || {
        Nu::ALL
            .iter()
            .map(|&nu| Ok(Check::defect(format!("adjoint[{},nu={nu}]", f.label()), adjoint_defect(&f, nu, &sgrid)?, 1e-6, Paper).grid("N", n0)))
            .collect()
    });
    let n = format!("derivation_commutator[{}]", f.label());
    r.run(&n, Paper, || {
        let mut out = Vec::new();
        for nu in Nu::ALL {
            for k in [1, 2] {
                let d = commutator_check(&f, nu, k, cfg.hermite_order)?;
                out.push(Check::defect(format!("derivation_commutator[{},nu={nu},k={k}]", f.label()), d, 1e-4, Paper).grid("M", cfg.hermite_order as f64));
            }
        }
        Ok(out)
    });
    let n = format!("pi0_commutative[{pair}]");
    r.run(&n, Paper, || {
        let d0 = commutativity_defect(&f, &g, Nu::Zero, &sgrid)?;
        let dp = commutativity_defect(&f, &g, Nu::Plus, &sgrid)?;
        Ok(vec![
            Check::defect(&n, d0, 1e-6, Paper).grid("N", n0),
            Check::new(format!("pi_plus_noncommutative[{pair}]"), dp, 0.0, 1e-2, Comparison::Above, Trivial).grid("N", n0),
        ])
    });
    r.run("ladder_bracket", Paper, || {
        let (plus, minus) = bracket_check(40);
        Ok(vec![
            Check::defect("ladder_bracket_is_+i", plus, 1e-6, Derived).grid("M", 40.0),
            Check::defect("ladder_bracket_is_-i_as_stated", minus, 1e-6, Paper)
                .grid("M", 40.0)
                .with_note("with ∂₁ = s and ∂₂ = −i d/ds the bracket is +i"),
        ])
    });
    let n = format!("theta_commutation[{}]", g.label());
    r.run(&n, Paper, || {
        let mut out = Vec::new();
        for nu in [Nu::Minus, Nu::Plus] {
            let d = theta_commutation_check(&g, nu, &sgrid)?;
            out.push(Check::defect(format!("theta_half_twist[{},nu={nu}]", g.label()), d.half, 1e-8, Paper).grid("N", n0));
            out.push(Check::defect(format!("theta_squared_twist[{},nu={nu}]", g.label()), d.iterated, 1e-8, Paper).grid("N", n0));
        }
        Ok(out)
    });
    let n = format!("pitau_equivalent_to_pi0[{}]", g.label());
    r.run(&n, Paper, || {
        let grid = symmetric_grid(cfg.pitau_n, cfg.sgrid.half_width)?;
        Ok(vec![Check::defect(&n, pitau_equiv_check(&g, &grid)?, 1e-10, Paper).grid("N", cfg.pitau_n as f64)])
    });
    let n = format!("regular_representation[{}]", g.label());
    r.run(&n, Paper, || {
        let grid = make_grid(GridKind::GaussLegendre, -cfg.sgrid.half_width, cfg.sgrid.half_width, 129)?;
        let mut out = Vec::new();
        for nu in [Nu::Minus, Nu::Plus] {
            let d = regular_fiber_check(&g, nu, 0.3, &grid)?;
            let tag = format!("{},nu={nu}", g.label());
            out.push(Check::defect(format!("regular_fiber_kernel[{tag}]"), d.kernel, 1e-10, Paper).grid("N", 129.0));
            out.push(Check::defect(format!("regular_fiber_action[{tag}]"), d.fiber, 1e-6, Paper).grid("N", 129.0));
            out.push(Check::defect(format!("regular_commutant[{tag}]"), d.commutant, 1e-10, Paper).grid("N", 129.0));
        }
        Ok(out)
    });
    for el in family {
        let lbl = el.label().to_string();
        let n = format!("traces[{lbl}]");
        r.run(&n, Paper, || {
            let mut out = Vec::new();
            let t = tau(el)?.value();
            if !is_null(el)? {
                for nu in [Nu::Minus, Nu::Plus] {
                    let tr = rep_trace(el, nu, &sgrid)?;
                    let rate = tr.growth_rate.unwrap_or(C64::new(0.0, 0.0));
                    out.push(Check::complex(format!("trace_diverges_at_rate_tau[{lbl},nu={nu}]"), rate, t, 1e-6, true, Derived));
                }
                let d2 = derive(Derivation::Delta2, el)?;
                let plus = rep_trace(&d2, Nu::Plus, &sgrid)?.value()?;
                let minus = rep_trace(&d2, Nu::Minus, &sgrid)?.value()?;
                out.push(Check::complex(format!("tr_plus_delta2_is_minus_tau[{lbl}]"), plus, -t, 1e-5, true, Paper));
                out.push(
                    Check::complex(format!("tr_minus_delta2_is_plus_tau_as_stated[{lbl}]"), minus, t, 1e-5, true, Paper)
                        .with_note(format!("measured {minus:e}; the half-line integral of β∂_β f̃ gives −τ for both signs")),
                );
                out.push(Check::complex(format!("tr_minus_delta2_is_minus_tau[{lbl}]"), minus, -t, 1e-5, true, Derived));
            }
            for nu in [Nu::Minus, Nu::Plus] {
                let th = theta2_trace(el, nu, &sgrid)?;
                out.push(Check::complex(format!("theta2_trace[{lbl},nu={nu}]"), th.diagonal, th.integral, 1e-6, false, Paper).grid("N", n0));
            }
            let ti = tau_as_integral_check(el)?;
            out.push(Check::complex(format!("tau_from_field_of_traces[{lbl}]"), ti.rhs, ti.lhs, 1e-8, false, Paper));
            Ok(out)
        });
    }
    Ok(())
}

fn plancherel_suite(r: &mut Runner, family: &[AlgebraElement]) -> Result<()> {
    let cfg = r.config.clone();
    let sgrid = cfg.sgrid()?;
    for el in family {
        let n = format!("plancherel[{}]", el.label());
        r.run(&n, Paper, || {
            let p = plancherel_check(el, &sgrid)?;
            Ok(vec![
                Check::new(&n, p.rhs, p.lhs, 5e-3, Comparison::Relative, Paper).grid("N", sgrid.len() as f64),
                Check::new(
                    format!("plancherel_unnormalized_ratio[{}]", el.label()),
                    p.raw_ratio,
                    1.0 / PLANCHEREL_SCALE,
                    5e-3,
                    Comparison::Relative,
                    Derived,
                )
                .with_note("‖θπ(Δ^{−1/2}f)‖₂/‖f‖ = √(2π)")
                .grid("N", sgrid.len() as f64),
            ])
        });
    }
    Ok(())
}

fn spectral_suite(r: &mut Runner, family: &[AlgebraElement]) -> Result<()> {
    let cfg = r.config.clone();
    r.run("zeta_d", Paper, || {
        let mut out = Vec::new();
        for s in [3.0, 4.0, 6.0] {
            let sum = zeta_d_eigensum(s, 1_000_000)?;
            out.push(Check::new(format!("zeta_d_closed_form[s={s}]"), zeta_d(s)?, sum.value, 1e-8, Comparison::Relative, Paper).grid("terms", 1e6));
        }
        out.push(Check::defect("zeta_d_large_s[s=40]", zeta_d(40.0)? - 1.0, 1e-5, Derived));
        let p = zeta_pole_probe(12)?;
        out.push(Check::new("zeta_d_pole_residue", p.limit, 2.0, 1e-3, Comparison::Absolute, Derived).grid("jmax", 12.0));
        Ok(out)
    });
    r.run("heat_trace_d", Paper, || {
        let mut out = Vec::new();
        for t in [0.1f64, 0.5, 1.0, 2.0] {
            let m = adaptive_order(t);
            let spec = DiracSpec::new(m)?;
            let want = 3.0 / t.tanh();
            out.push(Check::new(format!("heat_trace_d[t={t}]"), spec.heat_trace(t), want, 1e-6, Comparison::Relative, Paper).grid("M", m as f64));
            out.push(Check::new(format!("heat_trace_d_blocks[t={t}]"), heat_trace_d(t)?, want, 1e-8, Comparison::Relative, Derived));
        }
        Ok(out)
    });
    let f0 = family[0].clone();
    let n = format!("heat_trace_methods[{}]", f0.label());
    r.run(&n, Derived, || {
        let mut out = Vec::new();
        let eig = heat_trace_rep(&f0, Nu::Zero, 0.7, HeatMethod::EigenExpansion)?;
        out.push(Check::complex(format!("heat_trace_nu0_form[{},t=0.7]", f0.label()), heat_trace_nu_zero(&f0, 0.7)?, eig, 1e-5, true, Derived));
        for nu in Nu::ALL {
            for t in [0.1, 0.5, 1.0, 3.0] {
                let e = heat_trace_rep(&f0, nu, t, HeatMethod::EigenExpansion)?;
                let m = heat_trace_mehler(&f0, nu, t)?;
                out.push(Check::complex(format!("heat_trace_mehler_vs_eigen[{},nu={nu},t={t}]", f0.label()), m, e, 1e-4, true, Derived).grid("M", adaptive_order(t) as f64));
            }
        }
        // the phase exp(−iSxv) as written is checked against the eigen-expansion
        if let Some(g) = family.get(1) {
            let e = heat_trace_rep(g, Nu::Plus, 0.5, HeatMethod::EigenExpansion)?;
            let flipped = crate::spectral::heat_trace_mehler_phase(g, Nu::Plus, 0.5, -1.0)?;
            out.push(
                Check::complex(format!("heat_trace_phase_as_stated[{},nu=+,t=0.5]", g.label()), flipped, e, 1e-4, true, Paper)
                    .with_note("with f̌(α,β) = ∫da f̃(a,β)e^{iaα} the phase is exp(+iSxv); this row uses exp(−iSxv)"),
            );
        }
        Ok(out)
    });
    r.run("lemma_f0", Paper, || {
        [0.0, 1.0, 2.0]
            .iter()
            .map(|&c| {
                let l = lemma_f0_check(c)?;
                Ok(Check::new(format!("lemma_f0[c={c}]"), l.limit, l.reference, 1e-3, Comparison::Absolute, Paper))
            })
            .collect()
    });
    let pole = zeta_pole_probe(12)?.limit;
    for el in family {
        let lbl = el.label().to_string();
        let null = is_null(el)?;
        let norm = l2_norm_g(el)?;
        let n = format!("small_t_limit[{lbl}]");
        r.run(&n, Paper, || {
            let mut out = Vec::new();
            for nu in Nu::ALL {
                let l = small_t_limit(el, nu)?;
                let name = format!("small_t_limit[{lbl},nu={nu}]");
                out.push(if null {
                    Check::complex(name, l.limit, l.reference, 1e-3 * norm, false, Trivial)
                } else {
                    Check::complex(name, l.limit, l.reference, 2e-2, true, Paper)
                });
            }
            Ok(out)
        });
        let n = format!("dixmier[{lbl}]");
        r.run(&n, Paper, || {
            let mt = MellinTrace::new(el, &MellinGrid::default())?;
            let e = dixmier_estimate_with(&mt, el)?;
            let mut out = Vec::new();
            let mut head = if null {
                Check::complex(&n, e.limit, e.reference, 1e-3 * norm, false, Paper)
            } else {
                Check::complex(&n, e.limit, e.reference, 5e-2, true, Paper)
            };
            if e.flagged {
                head = head.with_note("extrapolation residuals did not shrink geometrically");
            }
            out.push(head.grid("s_samples", e.s.len() as f64));
            for share in &e.per_nu {
                let name = format!("dixmier_share[{lbl},nu={}]", share.nu);
                out.push(if null {
                    Check::complex(name, share.limit, share.reference, 1e-3 * norm, false, Derived)
                } else {
                    Check::complex(name, share.limit, share.reference, 5e-2, true, Derived)
                });
            }
            // boundedness of (s−1)Tr on (1, 2] against the measured trace bound
            let c = mt.bound_constant();
            let mut gmax = e.g.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            for s in [2.0, 1.75, 1.5, 1.25] {
                gmax = gmax.max((mt.trace(s)? * (s - 1.0)).norm());
            }
            out.push(
                Check::new(format!("residue_bounded[{lbl}]"), gmax, 0.0, c * gamma(0.5), Comparison::Below, Paper)
                    .with_note(format!("c(f) = {c:e}")),
            );
            out.push(Check::new(format!("metric_dimension_pole[{lbl}]"), pole, 2.0, 1e-3, Comparison::Absolute, Paper));
            // s = 4 against the Hermite eigenbasis
            let mut eig = C64::new(0.0, 0.0);
            for nu in Nu::ALL {
                eig += HermiteDiagonal::new(el, nu, cfg.spectral_order)?.resolvent_power_trace(4.0);
            }
            out.push(Check::complex(format!("mellin_vs_eigenbasis[{lbl},s=4]"), mt.trace(4.0)?, eig, 1e-4, true, Derived).grid("M", cfg.spectral_order as f64));
            Ok(out)
        });
    }
    let n = format!("dirac_commutator[{}]", f0.label());
    r.run(&n, Paper, || {
        let mut out = Vec::new();
        for nu in Nu::ALL {
            let c = d_commutator_bounded_check(&f0, nu, cfg.dirac_order)?;
            let tag = format!("{},nu={nu}", f0.label());
            out.push(Check::defect(format!("dirac_commutator[{tag}]"), c.identity_defect, 1e-4, Derived).grid("M", cfg.dirac_order as f64));
            let (n_half, n_full) = (c.norms[0].1, c.norms[1].1);
            out.push(
                Check::new(format!("dirac_commutator_norm_stable[{tag}]"), n_full, n_half, 0.25, Comparison::Relative, Derived)
                    .with_note(format!("‖[D, π(f)]‖ at M/2, M: {n_half:e}, {n_full:e}"))
                    .grid("M", cfg.dirac_order as f64),
            );
            if nu == Nu::Zero {
                out.push(Check::defect(format!("dirac_gamma2_block_vanishes[{tag}]"), c.gamma2_block, 1e-10, Paper));
            }
        }
        Ok(out)
    });
    Ok(())
}

/// Runs `suite` on the configured family. `timing = false` zeroes every
/// runtime so that reports are reproducible byte for byte.
pub fn run(suite: Suite, config: &Config, timing: bool) -> Result<VerificationReport> {
    config.validate()?;
    let family = config.family()?;
    let mut r = Runner::new(config, suite, timing);
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    for part in parts {
        match part {
            Suite::Algebra => algebra_suite(&mut r, &family)?,
            Suite::Reps => reps_suite(&mut r, &family)?,
            Suite::Plancherel => plancherel_suite(&mut r, &family)?,
            Suite::Spectral => spectral_suite(&mut r, &family)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(r.report)
}
