//! The ten acceptance criteria. Each test prints one `PASS`/`FAIL` line
//! (straight to stderr, so it survives output capture) followed by any
//! failing sub-check, then asserts.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use affine_triple::algebra::{
    apply_automorphism, derive, l2_norm_g, mult_alpha, mult_beta, multiplier_ab_formula, partial_beta, product, star,
    tau, Automorphism, Derivation, Multiplier, Side,
};
use affine_triple::elements::{default_family, AlgebraElement, Chart, FftAxes};
use affine_triple::numerics::{gamma, make_grid, Grid1D, GridKind};
use affine_triple::report::{Check, Comparison, Provenance};
use affine_triple::reps::{
    adjoint_defect, commutativity_defect, commutator_check, homomorphism_defect, plancherel_check, rep_trace,
    tau_as_integral_check, theta2_trace, Nu,
};
use affine_triple::spectral::{
    adaptive_order, dixmier_estimate_with, lemma_f0_check, small_t_limit, zeta_d, zeta_d_eigensum, zeta_pole_probe,
    DiracSpec, MellinGrid, MellinTrace,
};
use affine_triple::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
use Provenance::{Derived, Paper};

fn sgrid(n: usize) -> Grid1D {
    make_grid(GridKind::GaussLegendre, -12.0, 12.0, n).unwrap()
}

fn family() -> &'static [AlgebraElement] {
    static F: OnceLock<Vec<AlgebraElement>> = OnceLock::new();
    F.get_or_init(default_family)
}

/// Mellin data of the family, shared by criteria 7 and 8.
fn mellin() -> &'static [MellinTrace] {
    static M: OnceLock<Vec<MellinTrace>> = OnceLock::new();
    M.get_or_init(|| family().iter().map(|f| MellinTrace::new(f, &MellinGrid::default()).unwrap()).collect())
}

fn is_null(f: &AlgebraElement) -> bool {
    tau(f).unwrap().value().norm() <= 1e-12 * l2_norm_g(f).unwrap()
}

fn verdict(n: u32, title: &str, checks: &[Check], elapsed: Duration, budget: Option<Duration>) {
    let mut failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("    {}: error {:e} vs tolerance {:e}{}", c.name, c.error, c.tolerance, c.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()))
        .collect();
    if let Some(b) = budget {
        if elapsed > b {
            failed.push(format!("    runtime {elapsed:?} exceeds {b:?}"));
        }
    }
    let worst = checks.iter().filter(|c| c.comparison != Comparison::Above).map(|c| c.error / c.tolerance.max(f64::MIN_POSITIVE)).fold(0.0f64, f64::max);
    let line = format!(
        "criterion {n:>2} {} {title}: {} checks, worst error/tolerance {worst:.2e}, {:.1}s\n{}",
        if failed.is_empty() { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed.as_secs_f64(),
        failed.iter().map(|l| format!("{l}\n")).collect::<String>(),
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(failed.is_empty(), "criterion {n} failed:\n{}", failed.join("\n"));
}

#[test]
fn criterion_01_zeta_closed_form_and_pole() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for s in [3.0, 4.0, 6.0] {
        let closed = zeta_d(s).unwrap();
        let sum = zeta_d_eigensum(s, 1_000_000).unwrap();
        checks.push(Check::new(format!("closed_vs_eigensum[s={s}]"), closed, sum.value, 1e-8, Comparison::Relative, Paper));
    }
    let sum_time = start.elapsed();
    let probe = zeta_pole_probe(12).unwrap();
    checks.push(Check::new("pole_residue", probe.limit, 2.0, 1e-3, Comparison::Absolute, Derived));
    let eigensum_budget = Check::new("eigensum_runtime_s", sum_time.as_secs_f64(), 0.0, 1.0, Comparison::Below, Paper);
    checks.push(eigensum_budget);
    verdict(1, "zeta_D closed form and simple pole at 2", &checks, start.elapsed(), None);
}

#[test]
fn criterion_02_heat_trace_of_d() {
    let start = Instant::now();
    let checks: Vec<Check> = [0.1f64, 0.5, 1.0, 2.0]
        .iter()
        .map(|&t| {
            let spec = DiracSpec::new(adaptive_order(t)).unwrap();
            Check::new(format!("heat_trace[t={t}]"), spec.heat_trace(t), 3.0 / t.tanh(), 1e-6, Comparison::Relative, Paper)
        })
        .collect();
    verdict(2, "Tr exp(-tD^2) = 3 coth t", &checks, start.elapsed(), Some(Duration::from_secs(5)));
}

#[test]
fn criterion_03_representation_laws() {
    let start = Instant::now();
    let (f, g) = (&family()[0], &family()[1]);
    let (coarse, fine) = (sgrid(513), sgrid(1025));
    let ax = FftAxes::default().axis().unwrap();
    let ax_fine = FftAxes { n: 512, ..FftAxes::default() }.axis().unwrap();
    let fg = affine_triple::algebra::conv(f, g, Chart::ABETA, &ax, &ax).unwrap();
    let fg_fine = affine_triple::algebra::conv(f, g, Chart::ABETA, &ax_fine, &ax_fine).unwrap();
    let mut checks = Vec::new();
    for nu in Nu::ALL {
        let d0 = homomorphism_defect(&fg, f, g, nu, &coarse).unwrap();
        let d1 = homomorphism_defect(&fg_fine, f, g, nu, &fine).unwrap();
        checks.push(Check::defect(format!("homomorphism[nu={nu},N=513]"), d0, 1e-4, Paper));
        checks.push(Check::new(format!("homomorphism_reduction[nu={nu},N=1025]"), d0 / d1, 2.0, 2.0, Comparison::Above, Paper));
        checks.push(Check::defect(format!("adjoint[nu={nu}]"), adjoint_defect(f, nu, &coarse).unwrap(), 1e-6, Paper));
        for k in [1, 2] {
            checks.push(Check::defect(format!("commutator[nu={nu},k={k}]"), commutator_check(f, nu, k, 120).unwrap(), 1e-4, Paper));
        }
    }
    checks.push(Check::defect("pi0_commutative", commutativity_defect(f, g, Nu::Zero, &coarse).unwrap(), 1e-6, Paper));
    checks.push(Check::new("pi_plus_noncommutative", commutativity_defect(f, g, Nu::Plus, &coarse).unwrap(), 0.0, 1e-2, Comparison::Above, Paper));
    verdict(3, "representation laws", &checks, start.elapsed(), None);
}

#[test]
fn criterion_04_plancherel() {
    let start = Instant::now();
    let grid = sgrid(513);
    let checks: Vec<Check> = family()
        .iter()
        .map(|f| {
            let p = plancherel_check(f, &grid).unwrap();
            Check::new(format!("plancherel[{}]", f.label()), p.rhs, p.lhs, 5e-3, Comparison::Relative, Paper)
        })
        .collect();
    verdict(4, "Plancherel formula", &checks, start.elapsed(), Some(Duration::from_secs(30)));
}

#[test]
fn criterion_05_trace_identities() {
    let start = Instant::now();
    let fam = family();
    let grid = sgrid(513);
    let mut checks = Vec::new();
    for f in fam {
        let l = f.label();
        let t = tau(f).unwrap();
        checks.push(Check::defect(format!("tau_routes[{l}]"), t.max_deviation(), 1e-6, Paper));
        for (k, d) in [(1, Derivation::Delta1), (2, Derivation::Delta2)] {
            checks.push(Check::defect(format!("tau_delta{k}[{l}]"), tau(&derive(d, f).unwrap()).unwrap().value().norm(), 1e-8, Paper));
        }
        for nu in [Nu::Minus, Nu::Plus] {
            let th = theta2_trace(f, nu, &grid).unwrap();
            checks.push(Check::complex(format!("theta2_trace[{l},nu={nu}]"), th.diagonal, th.integral, 1e-6, false, Paper));
        }
        let ti = tau_as_integral_check(f).unwrap();
        checks.push(Check::complex(format!("field_of_traces[{l}]"), ti.rhs, ti.lhs, 1e-8, false, Paper));
        if !is_null(f) {
            let d2 = derive(Derivation::Delta2, f).unwrap();
            let minus = rep_trace(&d2, Nu::Minus, &grid).unwrap().value().unwrap();
            let plus = rep_trace(&d2, Nu::Plus, &grid).unwrap().value().unwrap();
            checks.push(Check::complex(format!("tr_minus_delta2_is_plus_tau[{l}]"), minus, t.value(), 1e-5, true, Paper));
            checks.push(Check::complex(format!("tr_plus_delta2_is_minus_tau[{l}]"), plus, -t.value(), 1e-5, true, Paper));
        }
    }
    let (f, g) = (&fam[0], &fam[1]);
    let fg = tau(&product(f, g).unwrap()).unwrap().value();
    let gf = tau(&product(g, f).unwrap()).unwrap().value();
    checks.push(Check::complex("tau_cyclic", fg, gf, 1e-6, false, Paper));
    verdict(5, "trace identities", &checks, start.elapsed(), None);
}

/// The sign of `tr₋(δ₂f)` actually realised: `−τ(f)`, the same as `tr₊`.
#[test]
fn tr_minus_of_delta2_is_minus_tau() {
    let grid = sgrid(513);
    for f in family().iter().filter(|f| !is_null(f)) {
        let t = tau(f).unwrap().value();
        let d2 = derive(Derivation::Delta2, f).unwrap();
        let minus = rep_trace(&d2, Nu::Minus, &grid).unwrap().value().unwrap();
        assert!((minus + t).norm() < 1e-5 * t.norm(), "{minus} vs {}", -t);
    }
}

#[test]
fn criterion_06_small_t_limits() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for f in family() {
        let null = is_null(f);
        let norm = l2_norm_g(f).unwrap();
        for nu in Nu::ALL {
            let lim = small_t_limit(f, nu).unwrap();
            let name = format!("small_t[{},nu={nu}]", f.label());
            checks.push(if null {
                Check::complex(name, lim.limit, lim.reference, 1e-3 * norm, false, Paper)
            } else {
                Check::complex(name, lim.limit, lim.reference, 2e-2, true, Paper)
            });
            let settles = lim.extrapolation.settles_in_pairs(0.5, 1e-12 * lim.reference.norm().max(norm), 4);
            checks.push(Check::new(format!("residuals_decrease[{},nu={nu}]", f.label()), settles as u8 as f64, 1.0, 1.0, Comparison::Above, Paper));
        }
    }
    verdict(6, "small-t limits of sqrt(t) I_nu(t)", &checks, start.elapsed(), Some(Duration::from_secs(120)));
}

#[test]
fn criterion_07_dixmier_trace() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (f, mt) in family().iter().zip(mellin()) {
        let e = dixmier_estimate_with(mt, f).unwrap();
        let name = format!("dixmier[{}]", f.label());
        checks.push(if is_null(f) {
            Check::complex(name, e.limit, e.reference, 1e-3 * l2_norm_g(f).unwrap(), false, Paper)
        } else {
            Check::complex(name, e.limit, e.reference, 5e-2, true, Paper)
        });
    }
    verdict(7, "Dixmier trace equals 8 tau(f)", &checks, start.elapsed(), Some(Duration::from_secs(300)));
}

#[test]
fn criterion_08_dimension_contrast() {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (f, mt) in family().iter().zip(mellin()) {
        let c = mt.bound_constant();
        let mut gmax = 0.0f64;
        for j in 0..=16 {
            let s = 2.0 - j as f64 / 16.0 * 0.98;
            gmax = gmax.max((mt.trace(s).unwrap() * (s - 1.0)).norm());
        }
        checks.push(Check::new(format!("bounded[{}]", f.label()), gmax, 0.0, c * gamma(0.5), Comparison::Below, Paper));
    }
    let pole = zeta_pole_probe(12).unwrap().limit;
    checks.push(Check::new("zeta_pole_nonzero", pole.abs(), 0.0, 1e-3, Comparison::Above, Paper));
    checks.push(Check::new("zeta_pole_finite", pole.abs(), 0.0, 1e6, Comparison::Below, Paper));
    verdict(8, "spectral dimension 1 against metric dimension 2", &checks, start.elapsed(), None);
}

fn sup_gap(l: &AlgebraElement, r: &AlgebraElement) -> f64 {
    let (mut gap, mut scale) = (0.0f64, 0.0f64);
    for &(a, b) in &[(0.0, 3.0), (0.4, 2.2), (-0.7, 3.6), (1.1, 0.5), (0.2, -1.0), (-0.3, 0.0)] {
        let (x, y) = (l.eval(Chart::ABETA, a, b).unwrap(), r.eval(Chart::ABETA, a, b).unwrap());
        gap = gap.max((x - y).norm());
        scale = scale.max(x.norm()).max(y.norm());
    }
    gap / scale
}

#[test]
fn criterion_09_algebra_suite() {
    let start = Instant::now();
    let fam = family();
    let (f, g, h) = (&fam[0], &fam[1], &fam[2]);
    let p = |x: &AlgebraElement, y: &AlgebraElement| product(x, y).unwrap();
    let mut checks = vec![
        Check::defect("associativity", sup_gap(&p(&p(f, g), h), &p(f, &p(g, h))), 1e-6, Paper),
        Check::defect("involution_antihomomorphism", sup_gap(&star(&p(f, g)).unwrap(), &p(&star(g).unwrap(), &star(f).unwrap())), 1e-6, Paper),
    ];
    for (name, aut) in [("sigma_t", Automorphism::SigmaT(0.7)), ("eta_u", Automorphism::EtaU(0.5))] {
        let a = |x: &AlgebraElement| apply_automorphism(aut, x).unwrap();
        checks.push(Check::defect(name, sup_gap(&a(&p(f, g)), &p(&a(f), &a(g))), 1e-6, Paper));
    }
    let d = |w, x: &AlgebraElement| derive(w, x).unwrap();
    let leibniz = p(&d(Derivation::Delta1, f), g).plus(&p(f, &d(Derivation::Delta1, g))).unwrap();
    checks.push(Check::defect("leibniz_delta1", sup_gap(&d(Derivation::Delta1, &p(f, g)), &leibniz), 1e-6, Paper));
    let db = |x: &AlgebraElement| partial_beta(x).unwrap();
    let twisted = p(&db(f), g).plus(&p(&apply_automorphism(Automorphism::Twist, f).unwrap(), &db(g))).unwrap();
    checks.push(Check::defect("twisted_leibniz", sup_gap(&db(&p(f, g)), &twisted), 1e-6, Paper));
    checks.push(Check::defect(
        "derivations_commute",
        sup_gap(&d(Derivation::Delta1, &d(Derivation::Delta2, g)), &d(Derivation::Delta2, &d(Derivation::Delta1, g))),
        1e-6,
        Paper,
    ));
    let ab = mult_alpha(&mult_beta(g, Side::Left).unwrap(), Side::Left).unwrap();
    let ba = mult_beta(&mult_alpha(g, Side::Left).unwrap(), Side::Left).unwrap();
    let ib = mult_beta(g, Side::Left).unwrap().scaled(I).unwrap();
    checks.push(Check::defect("alpha_beta_is_i_beta", sup_gap(&ab.minus(&ba).unwrap(), &ib), 1e-6, Paper));
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.3, 0.2), (-0.2, -0.5), (0.1, 1.3)] {
        let fab = g.eval(Chart::AB, a, b).unwrap();
        for side in [Side::Left, Side::Right] {
            let beta = mult_beta(g, side).unwrap().eval(Chart::AB, a, b).unwrap();
            worst = worst.max((multiplier_ab_formula(g, Multiplier::Beta, side, a, b).unwrap() - beta).norm());
            let alpha = mult_alpha(g, side).unwrap().eval(Chart::AB, a, b).unwrap();
            worst = worst.max((multiplier_ab_formula(g, Multiplier::Alpha, side, a, b).unwrap() - (alpha - I * fab)).norm());
        }
    }
    checks.push(Check::defect("multipliers_in_group_variables", worst, 1e-6, Derived));
    verdict(9, "algebra identities", &checks, start.elapsed(), None);
}

#[test]
fn criterion_10_lemma_f0() {
    let start = Instant::now();
    let checks: Vec<Check> = [0.0, 1.0, 2.0]
        .iter()
        .map(|&c| {
            let l = lemma_f0_check(c).unwrap();
            Check::new(format!("lemma_f0[c={c}]"), l.limit, 2.0 / gamma(0.5), 1e-3, Comparison::Absolute, Paper)
        })
        .collect();
    verdict(10, "Lemma F(0) limit", &checks, start.elapsed(), None);
}
