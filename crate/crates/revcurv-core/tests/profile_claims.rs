//! Integration suite for profile construction: frozen reference values,
//! the claim-property report, and the finite-difference cross-checks.

use revcurv_core::profile::{
    verify_claim_properties, ClaimTolerances, ConstructionParams, EpsEvaluator, ProfileCurve,
};
use revcurv_core::Error;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Default barbell, built once and shared across tests.
fn barbell() -> &'static ProfileCurve {
    static CACHE: OnceLock<ProfileCurve> = OnceLock::new();
    CACHE.get_or_init(|| ProfileCurve::build(ConstructionParams::default()).unwrap())
}

fn eps() -> &'static EpsEvaluator {
    barbell().eps().unwrap()
}

// 30-digit reference values for delta = 0.1, a = 0 (independent
// high-precision quadrature of the convolution):
//   eps(pi/2)        = 0.766780531053042549020
//   waist level c    = 0.766174508011188540190
//   alpha0           = 1.000790972598954126260
const EPS_AT_WAIST: f64 = 0.766_780_531_053_042_5;

#[test]
fn waist_value_matches_reference() {
    let got = eps().eval(FRAC_PI_2, 0).unwrap();
    assert!(
        (got - EPS_AT_WAIST).abs() < 1e-13,
        "eps(pi/2) = {got:.17}"
    );
}

#[test]
fn waist_value_equals_c_times_alpha0() {
    // With the kernel's cosine-moment normalization, the convolution at the
    // waist collapses exactly: the constant part contributes c * alpha0 and
    // the cosine part integrates to zero by parity.
    let ev = eps();
    let want = ev.base().waist_level() * ev.alpha0();
    let got = ev.eval(FRAC_PI_2, 0).unwrap();
    assert!((got - want).abs() < 5e-15, "{got} vs {want}");
}

#[test]
fn waist_derivative_ladder() {
    let ev = eps();
    assert!((ev.eval(FRAC_PI_2, 1).unwrap() - 1.0).abs() < 1e-12);
    assert!(ev.eval(FRAC_PI_2, 2).unwrap().abs() < 1e-12);
    assert!((ev.eval(FRAC_PI_2, 3).unwrap() + 1.0).abs() < 1e-9);
    assert!(ev.eval(FRAC_PI_2, 4).unwrap().abs() < 1e-6);
}

#[test]
fn vanishes_exactly_left_of_support() {
    let ev = eps();
    for k in 0..=4 {
        assert_eq!(ev.eval(0.0, k).unwrap(), 0.0, "k = {k}");
    }
    for t in [-FRAC_PI_2, -1.0, -0.01] {
        assert_eq!(ev.eval(t, 0).unwrap(), 0.0, "t = {t}");
    }
}

#[test]
fn eval_rejects_bad_requests() {
    let ev = eps();
    assert!(matches!(
        ev.eval(0.3, 5),
        Err(Error::UnsupportedOrder { requested: 5, .. })
    ));
    assert!(matches!(ev.eval(2.0, 0), Err(Error::OutOfDomain { .. })));
    assert!(matches!(ev.eval(-2.0, 0), Err(Error::OutOfDomain { .. })));
}

#[test]
fn too_coarse_quadrature_is_refused() {
    let params = ConstructionParams {
        quad_order: 4,
        ..ConstructionParams::default()
    };
    assert!(matches!(
        EpsEvaluator::new(&params),
        Err(Error::QuadratureTooCoarse { .. })
    ));
}

#[test]
fn params_validation_windows() {
    let ok = ConstructionParams::default();
    assert!(ok.validate().is_ok());
    // The admissible half-width window is open at pi/4; 0.5 sits inside it.
    let wide = ConstructionParams {
        delta: 0.5,
        ..ConstructionParams::default()
    };
    assert!(wide.validate().is_ok());
    for (delta, a) in [(0.8, 0.0), (PI / 4.0, 0.0), (-0.1, 0.0), (0.1, 1.45), (0.1, -0.2)] {
        let bad = ConstructionParams {
            delta,
            a,
            ..ConstructionParams::default()
        };
        assert!(
            matches!(bad.validate(), Err(Error::InvalidParameter { .. })),
            "delta = {delta}, a = {a} should fail"
        );
    }
    let coarse_grid = ConstructionParams {
        grid_n: 8,
        ..ConstructionParams::default()
    };
    assert!(coarse_grid.validate().is_err());
}

#[test]
fn profile_basics() {
    let p = barbell();
    let (lo, hi) = p.domain();
    assert_eq!(lo, -FRAC_PI_2);
    assert_eq!(hi, 3.0 * FRAC_PI_2);
    assert!(!p.is_round());
    assert!(!p.is_experimental());
    assert_eq!(p.grid().len(), 4096);
    // Waist radius is the perturbation value there (the cosine term is a
    // rounding-level shim) and is strictly positive: the neck has girth.
    assert!((p.waist_radius() - EPS_AT_WAIST).abs() < 1e-13);
    assert!(p.waist_radius() > 0.7);
    // Poles close exactly.
    assert_eq!(p.f_samples()[0], 0.0);
    assert_eq!(*p.f_samples().last().unwrap(), 0.0);
    // f' at the waist vanishes (the reflection is stationary).
    assert!(p.fp_at(FRAC_PI_2).unwrap().abs() < 1e-12);
}

#[test]
fn grid_mirror_symmetry_is_exact() {
    let p = barbell();
    let n = p.grid().len();
    let ts = p.grid();
    let f = p.f_samples();
    let fp = p.fp_samples();
    let fpp = p.fpp_samples();
    // Grid points pair up around the stored mirror sum (3pi/2 + (-pi/2),
    // one rounding away from pi), and the value columns mirror bitwise.
    let mirror_sum = ts[0] + ts[n - 1];
    assert!((mirror_sum - PI).abs() < 5e-16);
    for i in 0..n / 2 {
        let j = n - 1 - i;
        assert!((ts[i] + ts[j] - mirror_sum).abs() < 5e-16, "t pair {i}");
        assert_eq!(f[i], f[j]);
        assert_eq!(fp[i], -fp[j]);
        assert_eq!(fpp[i], fpp[j]);
    }
}

#[test]
fn samples_satisfy_unit_speed() {
    let p = barbell();
    for (&t, &s) in p.grid().iter().zip(p.fp_samples()) {
        assert!(s.abs() <= 1.0, "slope {s} at t = {t}");
        let gp = (1.0 - s * s).max(0.0).sqrt();
        assert!((s * s + gp * gp - 1.0).abs() < 1e-10);
    }
}

#[test]
fn axis_coordinate_is_monotone_and_symmetric() {
    let p = barbell();
    let g = p.g_samples();
    assert_eq!(g[0], 0.0);
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    // Mirror symmetry of f makes g antisymmetric about the waist:
    // g(pi - t) = g_total - g(t).
    let n = g.len();
    let total = g[n - 1];
    for i in (0..n).step_by(97) {
        let gap = g[n - 1 - i] - (total - g[i]);
        assert!(gap.abs() < 1e-9, "index {i}: gap {gap}");
    }
}

#[test]
fn round_baseline_is_the_unit_sphere_profile() {
    let p = ProfileCurve::round(2048).unwrap();
    assert!(p.is_round());
    let (lo, hi) = p.domain();
    assert_eq!(lo, -FRAC_PI_2);
    assert_eq!(hi, FRAC_PI_2);
    for (&t, &fv) in p.grid().iter().zip(p.f_samples()) {
        assert!((fv - t.cos()).abs() < 1e-15, "t = {t}");
    }
    // g follows the "sin + 1" convention: zero at the south pole, 2 north.
    for (&t, &gv) in p.grid().iter().zip(p.g_samples()) {
        assert!((gv - (t.sin() + 1.0)).abs() < 1e-12, "t = {t}");
    }
    assert_eq!(p.waist_radius(), 1.0);
}

#[test]
fn claim_suite_passes_on_the_default_build() {
    let report = verify_claim_properties(barbell(), ClaimTolerances::default());
    assert!(report.overall(), "{}", report.render());
    let ids: Vec<&str> = report.records.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(
        ids,
        [
            "claim.range",
            "claim.slope_band",
            "claim.slope_sharp",
            "claim.convexity",
            "claim.vanishing",
            "claim.waist_matching"
        ]
    );
    // No degenerate/experimental qualifiers on the real build.
    assert!(report.records.iter().all(|r| r.note.is_none()));
}

#[test]
fn claim_suite_is_degenerate_on_round() {
    let report = verify_claim_properties(
        &ProfileCurve::round(1024).unwrap(),
        ClaimTolerances::default(),
    );
    assert!(report.overall());
    assert!(report
        .records
        .iter()
        .all(|r| r.note.as_deref().is_some_and(|n| n.contains("degenerate") || n.contains("vacuous"))));
}

#[test]
fn amplitude_fixture_breaks_waist_matching() {
    let p = ProfileCurve::build_scaled(ConstructionParams::default(), 1.5).unwrap();
    let report = verify_claim_properties(&p, ClaimTolerances::default());
    assert!(!report.overall());
    let matching = report
        .records
        .iter()
        .find(|r| r.id == "claim.waist_matching")
        .unwrap();
    assert!(!matching.passed);
    // eps'(pi/2) lands at 1.5, so the measured deviation is 0.5.
    assert!((matching.value - 0.5).abs() < 1e-9);
}

#[test]
fn experimental_rescaling_degrades_matching_and_says_so() {
    let p = ProfileCurve::build(ConstructionParams {
        a: 0.3,
        ..ConstructionParams::default()
    })
    .unwrap();
    assert!(p.is_experimental());
    // The support start moves with a...
    assert_eq!(p.eps().unwrap().eval(0.3, 0).unwrap(), 0.0);
    assert_eq!(p.eps().unwrap().eval(0.1, 2).unwrap(), 0.0);
    assert!(p.eps().unwrap().eval(0.9, 0).unwrap() > 0.0);
    // ...and the chain-rule factor s = pi/2 / (pi/2 - a) multiplies the
    // k-th waist derivative by s^k, so matching fails by construction. The
    // worst rung is k = 3, where the target is -1 and the value is -s^3.
    let report = verify_claim_properties(&p, ClaimTolerances::default());
    let matching = report
        .records
        .iter()
        .find(|r| r.id == "claim.waist_matching")
        .unwrap();
    assert!(!matching.passed);
    let scale = FRAC_PI_2 / (FRAC_PI_2 - 0.3);
    assert!((matching.value - (scale.powi(3) - 1.0)).abs() < 1e-6);
    assert!(report
        .records
        .iter()
        .any(|r| r.note.as_deref().is_some_and(|n| n.contains("experimental"))));
}

#[test]
fn chained_finite_differences_validate_each_order() {
    // FD of eps^(k-1) against eps^(k) at 100 deterministic interior points.
    // h = 1e-6 keeps the order-4 truncation (h^2 eps^(5), with eps^(5) in
    // the 1e5 range) below the gate.
    let ev = eps();
    let h = 1e-6;
    for k in 1..=4usize {
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let t = 0.05 + (FRAC_PI_2 - 0.1) * (i as f64 + 0.5) / 100.0;
            let fd = (ev.eval(t + h, k - 1).unwrap() - ev.eval(t - h, k - 1).unwrap()) / (2.0 * h);
            worst = worst.max((fd - ev.eval(t, k).unwrap()).abs());
        }
        assert!(worst < 1e-5, "order {k}: worst {worst:e}");
    }
}

#[test]
fn direct_low_order_differences_agree_too() {
    let ev = eps();
    for i in 0..100 {
        let t = 0.05 + (FRAC_PI_2 - 0.1) * (i as f64 + 0.5) / 100.0;
        let h = 1e-5;
        let fd1 = (ev.eval(t + h, 0).unwrap() - ev.eval(t - h, 0).unwrap()) / (2.0 * h);
        assert!((fd1 - ev.eval(t, 1).unwrap()).abs() < 1e-5);
        let h = 1e-4;
        let fd2 = (ev.eval(t + h, 0).unwrap() - 2.0 * ev.eval(t, 0).unwrap()
            + ev.eval(t - h, 0).unwrap())
            / (h * h);
        assert!((fd2 - ev.eval(t, 2).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn one_sided_junction_probes_at_the_waist() {
    // Odd derivatives of f vanish at pi/2. Two-sided differences across the
    // waist are zero by construction (the mirror is exact), so the honest
    // probe comes from the left side only, where values are computed rather
    // than reflected. A one-sided third difference is only first-order
    // accurate and the fifth derivative is large here, so order three is
    // left to the derivative ladder (eps''' + 1 above) instead.
    let p = barbell();
    let f = |t: f64| p.f_at(t).unwrap();
    let h = 1e-3;
    let fd1 = (3.0 * f(FRAC_PI_2) - 4.0 * f(FRAC_PI_2 - h) + f(FRAC_PI_2 - 2.0 * h)) / (2.0 * h);
    assert!(fd1.abs() < 1e-5, "one-sided f' estimate {fd1}");
    // The mirror identity behind the vanishing two-sided differences. It
    // holds to the rounding of the reduction itself (one addition), not
    // bitwise: the reflected argument lands an ulp off the nominal one.
    for s in [1e-4, 1e-2, 0.25] {
        let gap = f(FRAC_PI_2 + s) - f(FRAC_PI_2 - s);
        assert!(gap.abs() < 1e-15, "s = {s}: gap {gap:e}");
    }
}

#[test]
fn off_grid_evaluation_respects_the_mirror() {
    let p = barbell();
    for t in [0.6, 1.2, FRAC_PI_2, 2.0, 3.0] {
        let m = PI - t;
        assert!((p.f_at(t).unwrap() - p.f_at(m).unwrap()).abs() < 1e-14);
        assert!((p.fp_at(t).unwrap() + p.fp_at(m).unwrap()).abs() < 1e-14);
        assert!((p.fpp_at(t).unwrap() - p.fpp_at(m).unwrap()).abs() < 1e-14);
        // f'''' reaches a few hundred, so the rounding in the reduction
        // itself shows up at the 1e-12 level for the third derivative.
        assert!((p.fppp_at(t).unwrap() + p.fppp_at(m).unwrap()).abs() < 1e-11);
    }
}

#[test]
fn table_renders_all_rows_with_full_precision() {
    let p = ProfileCurve::round(64).unwrap();
    let table = p.table();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t f fp fpp g"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    let first: Vec<f64> = rows[0]
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(first[0], -FRAC_PI_2);
    assert_eq!(first[1], 0.0);
    // 17 significant digits survive the round trip.
    let last: Vec<f64> = rows[63]
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(last[4], *p.g_samples().last().unwrap());
}

#[test]
fn slope_error_names_the_violating_location() {
    // Amplitude 3 pushes f' = -sin t + 3 eps' past 1 somewhere before the
    // waist; the build must refuse and say where.
    match ProfileCurve::build_scaled(ConstructionParams::default(), 3.0) {
        Err(Error::SlopeExceedsOne { t, slope }) => {
            assert!(t > 0.0 && t < FRAC_PI_2 + 0.1, "t = {t}");
            assert!(slope.abs() > 1.0);
        }
        other => panic!("expected slope error, got {other:?}"),
    }
}

