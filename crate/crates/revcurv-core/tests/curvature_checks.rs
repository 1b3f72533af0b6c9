//! Integration suite for the curvature module: frozen spot values for the
//! default barbell, the closed-surface identities, degenerate fixtures,
//! and the finite-difference cross-check of the curvature formula.

use revcurv_core::curvature::{
    curvature_extrema, minimal_sphere_bound, surface_area, total_curvature,
    verify_curvature_properties, CurvatureField,
};
use revcurv_core::profile::{ConstructionParams, ProfileCurve};
use revcurv_core::surface::RevolutionSurface;
use revcurv_core::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

fn barbell() -> &'static ProfileCurve {
    static CACHE: OnceLock<ProfileCurve> = OnceLock::new();
    CACHE.get_or_init(|| ProfileCurve::build(ConstructionParams::default()).unwrap())
}

fn round() -> &'static ProfileCurve {
    static CACHE: OnceLock<ProfileCurve> = OnceLock::new();
    CACHE.get_or_init(|| ProfileCurve::round(2048).unwrap())
}

// 25-digit reference values for delta = 0.1, a = 0 (independent
// high-precision evaluation of the same formulas):
//   area            = 29.46269420733277
//   refined minimum = -0.5528400592598225 at t = 1.0158248611
const AREA: f64 = 29.462_694_207_332_77;
const K_MIN: f64 = -0.552_840_059_259_822_5;
const T_AT_K_MIN: f64 = 1.015_824_861_1;

/// Flat cylinder fixture: radius 2 on [0, 3], never touches the axis.
struct Cylinder;

impl RevolutionSurface for Cylinder {
    fn domain(&self) -> (f64, f64) {
        (0.0, 3.0)
    }
    fn radius(&self, _t: f64) -> Result<f64> {
        Ok(2.0)
    }
    fn radius_deriv(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
    fn radius_deriv2(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// One spherical cap: touches the axis at -pi/2 only, open at the equator.
/// Shifted-sine form so the pole radius is exactly 0.0.
struct HalfCap;

impl RevolutionSurface for HalfCap {
    fn domain(&self) -> (f64, f64) {
        (-FRAC_PI_2, 0.0)
    }
    fn radius(&self, t: f64) -> Result<f64> {
        Ok((t + FRAC_PI_2).sin())
    }
    fn radius_deriv(&self, t: f64) -> Result<f64> {
        Ok((t + FRAC_PI_2).cos())
    }
    fn radius_deriv2(&self, t: f64) -> Result<f64> {
        Ok(-(t + FRAC_PI_2).sin())
    }
}

#[test]
fn spot_values_match_references() {
    let p = barbell();
    assert_eq!(p.curvature(-FRAC_PI_4).unwrap(), 1.0);
    assert!(p.curvature(FRAC_PI_2).unwrap().abs() < 1e-12);
    let k13 = p.curvature(1.3).unwrap();
    assert!((k13 - (-0.337_395_406_426_982_24)).abs() < 1e-12, "{k13:.17}");
    let k05 = p.curvature(0.5).unwrap();
    assert!((k05 - 0.014_422_345_162_756_83).abs() < 1e-12, "{k05:.17}");
    // Mirror evenness up to the rounding of the reduction.
    let km = p.curvature(PI - 1.3).unwrap();
    assert!((km - k13).abs() < 1e-13);
}

#[test]
fn round_baseline_is_unit_curvature() {
    let r = round();
    for t in [-1.5, -0.3, 0.0, 0.9, 1.5] {
        assert_eq!(r.curvature(t).unwrap(), 1.0, "t = {t}");
    }
}

#[test]
fn poles_error_but_the_band_next_to_them_takes_the_limit() {
    let p = barbell();
    let (lo, hi) = p.domain();
    assert!(matches!(
        p.curvature(lo),
        Err(Error::PoleEvaluation { .. })
    ));
    assert!(matches!(
        p.curvature(hi),
        Err(Error::PoleEvaluation { .. })
    ));
    assert_eq!(p.curvature(lo + 1e-9).unwrap(), 1.0);
    assert_eq!(p.curvature(hi - 1e-9).unwrap(), 1.0);
}

#[test]
fn field_respects_the_cap_and_dips_negative() {
    let field = CurvatureField::sample(barbell());
    let max = field.samples().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = field.samples().iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max <= 1.0 + 1e-9, "max {max:.17}");
    assert!(min < -1e-3, "min {min:.17}");
    assert!(min > K_MIN - 1e-6);
}

#[test]
fn field_pole_samples_take_the_limit() {
    let field = CurvatureField::sample(barbell());
    assert_eq!(field.samples()[0], 1.0);
    assert_eq!(*field.samples().last().unwrap(), 1.0);
}

#[test]
fn exact_unity_flags_are_bitwise_true() {
    let field = CurvatureField::sample(barbell());
    // With a = 0 the flags mark t <= 0 and its mirror: half of all samples.
    let flagged = field.exact_unity().iter().filter(|&&b| b).count();
    assert_eq!(flagged, field.samples().len() / 2);
    for (i, &is_unity) in field.exact_unity().iter().enumerate() {
        if is_unity {
            assert_eq!(field.samples()[i], 1.0, "t = {}", field.grid()[i]);
        }
    }
    // The perturbation genuinely shows in the unflagged half.
    assert!(field
        .exact_unity()
        .iter()
        .zip(field.samples())
        .any(|(&flag, &k)| !flag && k < 1.0));
    // Round baseline: everything is the unit sphere.
    let rf = CurvatureField::sample(round());
    assert!(rf.exact_unity().iter().all(|&b| b));
    assert!(rf.samples().iter().all(|&k| k == 1.0));
}

#[test]
fn formula_matches_finite_differences_of_f() {
    let p = barbell();
    let h = 1e-4;
    for i in 0..40 {
        let t = -1.4 + (PI + 2.8) * (i as f64 + 0.5) / 40.0;
        let fd2 = (p.f_at(t + h).unwrap() - 2.0 * p.f_at(t).unwrap() + p.f_at(t - h).unwrap())
            / (h * h);
        let k = p.curvature(t).unwrap();
        let direct = -fd2 / p.f_at(t).unwrap();
        assert!((k - direct).abs() < 2e-5, "t = {t}: {k} vs {direct}");
    }
}

#[test]
fn extrema_hit_the_pinned_minimum() {
    let ext = curvature_extrema(barbell(), 2048).unwrap();
    assert_eq!(ext.k_max, 1.0);
    // The maximum is attained on the unperturbed region (here: the scan
    // finds it next to the south pole, where ties resolve first).
    let u = if ext.t_at_max > FRAC_PI_2 {
        PI - ext.t_at_max
    } else {
        ext.t_at_max
    };
    assert!(u <= 0.0, "t_at_max = {}", ext.t_at_max);
    assert!((ext.k_min - K_MIN).abs() < 1e-12, "k_min {:.17}", ext.k_min);
    // Parameter localization is sqrt(eps)-limited near a smooth minimum.
    assert!(
        (ext.t_at_min - T_AT_K_MIN).abs() < 1e-7,
        "t_at_min {:.17}",
        ext.t_at_min
    );
}

#[test]
fn extrema_are_flat_on_the_round_baseline() {
    let ext = curvature_extrema(round(), 1024).unwrap();
    assert_eq!(ext.k_max, 1.0);
    assert_eq!(ext.k_min, 1.0);
}

#[test]
fn areas_match_references() {
    let a = surface_area(barbell()).unwrap();
    assert!((a - AREA).abs() < 1e-10, "area {a:.17}");
    assert!(a > 4.0 * PI);
    let r = surface_area(round()).unwrap();
    assert!((r - 4.0 * PI).abs() < 1e-11, "round area {r:.17}");
    assert!((surface_area(&Cylinder).unwrap() - 12.0 * PI).abs() < 1e-12);
}

#[test]
fn total_curvature_is_four_pi_both_ways() {
    for p in [barbell(), round()] {
        let tc = total_curvature(p).unwrap();
        assert!((tc.quadrature - 4.0 * PI).abs() < 1e-12);
        assert!((tc.telescoped - 4.0 * PI).abs() < 1e-12);
        assert!(tc.disagreement() < 1e-12);
    }
}

#[test]
fn open_fixtures_telescope_too() {
    let tc = total_curvature(&Cylinder).unwrap();
    assert_eq!(tc.quadrature, 0.0);
    assert_eq!(tc.telescoped, 0.0);
    // One cap: 2 pi (f'(start) - f'(end)) = 2 pi (1 - 0).
    let half = total_curvature(&HalfCap).unwrap();
    assert!((half.telescoped - 2.0 * PI).abs() < 1e-12);
    assert!(half.disagreement() < 1e-10);
}

#[test]
fn sphere_bound_margins() {
    let b = minimal_sphere_bound(barbell()).unwrap();
    assert!(b.holds);
    assert_eq!(b.k_max, 1.0);
    assert!((b.margin - (AREA - 4.0 * PI)).abs() < 1e-9);
    let r = minimal_sphere_bound(round()).unwrap();
    assert!(r.holds);
    assert!(r.margin.abs() < 1e-9, "round margin {:e}", r.margin);
    assert!(matches!(
        minimal_sphere_bound(&Cylinder),
        Err(Error::InvalidParameter { .. })
    ));
    assert!(!Cylinder.closes());
    assert!(!HalfCap.closes());
    assert!(barbell().closes());
}

#[test]
fn curvature_suite_passes_in_order() {
    let report = verify_curvature_properties(barbell());
    assert!(report.overall(), "{}", report.render());
    let ids: Vec<&str> = report.records.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(
        ids,
        [
            "curvature.bound",
            "curvature.exact_unity",
            "curvature.negative_min",
            "gauss_bonnet.total",
            "minimal_sphere.bound"
        ]
    );
    let neg = &report.records[2];
    assert!((neg.value - K_MIN).abs() < 1e-12);
    assert!(verify_curvature_properties(round()).overall());
}

#[test]
fn table_rows_parse_back() {
    let field = CurvatureField::sample(round());
    let table = field.table();
    let row: Vec<f64> = table
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(row[0], -FRAC_PI_2);
    assert_eq!(row[1], 1.0);
}
