//! Gauss curvature of the profiles and the integral identities over it.
//!
//! For an arclength profile the curvature is `K = -f''/f`, which on the
//! perturbed profile becomes `(cos - eps'')/(cos + eps)`. The checks here
//! are the curvature side of the construction's purpose: `K <= 1`
//! everywhere, `K = 1` exactly where the perturbation is absent, `K < 0`
//! somewhere in the neck, and the closed-surface identities (total
//! curvature `4 pi`, the max-curvature/area inequality) that anchor the
//! sampled field to something the quadrature cannot fake.

use crate::profile::ProfileCurve;
use crate::quad::GaussLegendre;
use crate::report::{CheckRecord, VerificationReport};
use crate::surface::RevolutionSurface;
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use libm::fabs;

/// Node count for the per-panel rule in parameter integrals; doubled for
/// the convergence check. On the grid-sized panels both are far past the
/// rounding floor for these integrands.
const AREA_ORDER: usize = 6;

/// Tolerances fixed by the verification contract.
const CURVATURE_CAP_SLACK: f64 = 1e-9;
const NEGATIVE_MIN_GATE: f64 = -1e-3;
const TOTAL_CURVATURE_TOL: f64 = 1e-6;
const AREA_REL_TOL: f64 = 1e-8;

/// Gauss curvature sampled on a profile's own grid.
///
/// The two pole samples are assigned the limit value 1 (the perturbation
/// vanishes identically near the poles, so the metric is round there and
/// the 0/0 of the raw quotient has a known value). `exact_unity` flags the
/// samples where `eps` and all its derivatives are identically zero; on
/// those the stored value is exactly 1.0, not approximately.
pub struct CurvatureField<'a> {
    profile: &'a ProfileCurve,
    k: Vec<f64>,
    exact_unity: Vec<bool>,
}

impl<'a> CurvatureField<'a> {
    pub fn sample(profile: &'a ProfileCurve) -> Self {
        let ts = profile.grid();
        let f = profile.f_samples();
        let fpp = profile.fpp_samples();
        let (lo, hi) = profile.domain();
        let support = profile.eps().map(|ev| ev.support_start());
        let mut k = Vec::with_capacity(ts.len());
        let mut exact_unity = Vec::with_capacity(ts.len());
        for i in 0..ts.len() {
            let t = ts[i];
            let u = if !profile.is_round() && t > FRAC_PI_2 {
                lo + (hi - t)
            } else {
                t
            };
            exact_unity.push(match support {
                None => true,
                Some(a) => u <= a,
            });
            if t - lo < 1e-6 || hi - t < 1e-6 {
                k.push(1.0);
            } else {
                k.push(-fpp[i] / f[i]);
            }
        }
        CurvatureField {
            profile,
            k,
            exact_unity,
        }
    }

    pub fn profile(&self) -> &ProfileCurve {
        self.profile
    }

    pub fn grid(&self) -> &[f64] {
        self.profile.grid()
    }

    pub fn samples(&self) -> &[f64] {
        &self.k
    }

    pub fn exact_unity(&self) -> &[bool] {
        &self.exact_unity
    }

    /// Text table `t K`, one row per grid point, matching the profile
    /// table's numeric format.
    pub fn table(&self) -> String {
        let ts = self.profile.grid();
        let mut out = String::with_capacity(ts.len() * 50 + 8);
        out.push_str("t K\n");
        for i in 0..ts.len() {
            let _ = core::fmt::Write::write_fmt(
                &mut out,
                format_args!("{:.16e} {:.16e}\n", ts[i], self.k[i]),
            );
        }
        out
    }
}

/// Refined curvature extrema over the open domain.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureExtrema {
    pub k_max: f64,
    pub t_at_max: f64,
    pub k_min: f64,
    pub t_at_min: f64,
}

/// Scan the open domain on `grid_n` cells, then refine each extremum by
/// golden-section search between its neighboring scan points.
///
/// The scan grid is the op's own (it need not match the profile grid);
/// anything below 512 cells under-resolves the neck band and is refused.
pub fn curvature_extrema<S: RevolutionSurface + ?Sized>(
    surface: &S,
    grid_n: usize,
) -> Result<CurvatureExtrema> {
    if grid_n < 512 {
        return Err(Error::InvalidParameter {
            what: "grid_n (extremum scan needs at least 512 cells)",
            value: grid_n as f64,
        });
    }
    let (lo, hi) = surface.domain();
    let h = (hi - lo) / grid_n as f64;
    let mut min = (f64::INFINITY, lo);
    let mut max = (f64::NEG_INFINITY, lo);
    for i in 1..grid_n {
        let t = lo + i as f64 * h;
        let k = surface.curvature(t)?;
        if k < min.0 {
            min = (k, t);
        }
        if k > max.0 {
            max = (k, t);
        }
    }
    // Golden section only ever evaluates interior points, so a bracket
    // whose end touches a pole is safe.
    let (t_at_min, k_min) = golden_min(|t| surface.curvature(t), min.1 - h, min.1 + h)?;
    let (t_at_max, neg) = golden_min(|t| surface.curvature(t).map(|k| -k), max.1 - h, max.1 + h)?;
    Ok(CurvatureExtrema {
        k_max: (-neg).max(max.0),
        t_at_max,
        k_min: k_min.min(min.0),
        t_at_min,
    })
}

fn golden_min<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const TOL: f64 = 1e-10;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Composite quadrature over the surface's panels with error propagation
/// out of the integrand.
fn checked_panels<F: FnMut(f64) -> Result<f64>>(
    rule: &GaussLegendre,
    breaks: &[f64],
    mut f: F,
) -> Result<f64> {
    let mut first_err = None;
    let v = rule.integrate_panels(breaks, |t| match f(t) {
        Ok(x) => x,
        Err(e) => {
            first_err.get_or_insert(e);
            0.0
        }
    });
    match first_err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Area `2 pi * integral of f`, validated by doubling the rule order.
pub fn surface_area<S: RevolutionSurface + ?Sized>(surface: &S) -> Result<f64> {
    let breaks = surface.panel_breaks();
    let coarse = checked_panels(&GaussLegendre::new(AREA_ORDER), &breaks, |t| surface.radius(t))?;
    let fine = checked_panels(&GaussLegendre::new(2 * AREA_ORDER), &breaks, |t| {
        surface.radius(t)
    })?;
    let rel = fabs(fine - coarse) / fabs(fine).max(f64::MIN_POSITIVE);
    if rel > AREA_REL_TOL {
        return Err(Error::QuadratureTooCoarse { residual: rel });
    }
    Ok(2.0 * PI * fine)
}

/// Total curvature `2 pi * integral of K f`, computed two independent ways.
#[derive(Debug, Clone, Copy)]
pub struct TotalCurvature {
    /// The quadrature of `K(t) f(t)` over the panels.
    pub quadrature: f64,
    /// `K f = -f''` telescopes, so the same integral is
    /// `2 pi (f'(lo) - f'(hi))` with no quadrature at all.
    pub telescoped: f64,
}

impl TotalCurvature {
    pub fn disagreement(&self) -> f64 {
        fabs(self.quadrature - self.telescoped)
    }
}

/// Both forms of the total curvature; an error if they drift apart.
///
/// On a profile closing at both poles this is Gauss-Bonnet for the sphere
/// and both numbers are `4 pi`; the identity itself holds for any profile
/// (the half-cap fixture gets `2 pi (1 - f'(end))`), which is why closure
/// is not a precondition here.
pub fn total_curvature<S: RevolutionSurface + ?Sized>(surface: &S) -> Result<TotalCurvature> {
    let (lo, hi) = surface.domain();
    let breaks = surface.panel_breaks();
    let q = checked_panels(&GaussLegendre::new(2 * AREA_ORDER), &breaks, |t| {
        Ok(surface.curvature(t)? * surface.radius(t)?)
    })?;
    let out = TotalCurvature {
        quadrature: 2.0 * PI * q,
        telescoped: 2.0 * PI * (surface.radius_deriv(lo)? - surface.radius_deriv(hi)?),
    };
    if out.disagreement() > TOTAL_CURVATURE_TOL {
        return Err(Error::QuadratureTooCoarse {
            residual: out.disagreement(),
        });
    }
    Ok(out)
}

/// The closed-surface inequality `K_max * Area >= 4 pi` and its margin.
#[derive(Debug, Clone, Copy)]
pub struct SphereBound {
    pub holds: bool,
    /// `K_max * Area - 4 pi`; nonnegative when the bound holds.
    pub margin: f64,
    pub k_max: f64,
    pub area: f64,
}

/// Check `K_max * Area >= 4 pi` on a profile that closes at both poles.
///
/// A maximum-principle consequence for spheres; meaningless for an open
/// profile, so a non-closing surface is a parameter error.
pub fn minimal_sphere_bound<S: RevolutionSurface + ?Sized>(surface: &S) -> Result<SphereBound> {
    if !surface.closes() {
        let (_, hi) = surface.domain();
        return Err(Error::InvalidParameter {
            what: "profile (the area bound needs a surface closing at both poles)",
            value: surface.radius(hi).unwrap_or(f64::NAN),
        });
    }
    let area = surface_area(surface)?;
    let k_max = curvature_extrema(surface, 1024)?.k_max;
    let margin = k_max * area - 4.0 * PI;
    Ok(SphereBound {
        holds: margin >= -1e-9,
        margin,
        k_max,
        area,
    })
}

/// Run the curvature suite against a built profile: the pointwise bounds,
/// the refined minimum, and the two closed-surface identities.
pub fn verify_curvature_properties(profile: &ProfileCurve) -> VerificationReport {
    let mut report = VerificationReport::new("curvature");
    let note = if profile.is_round() {
        Some("degenerate: round baseline, K identically 1")
    } else {
        None
    };
    let field = CurvatureField::sample(profile);

    {
        let mut worst = (f64::NEG_INFINITY, 0.0);
        for (&t, &k) in field.grid().iter().zip(field.samples()) {
            if k > worst.0 {
                worst = (k, t);
            }
        }
        report.push(
            CheckRecord::new(
                "curvature.bound",
                "K(t) <= 1 + 1e-9 at every grid sample",
                worst.0 <= 1.0 + CURVATURE_CAP_SLACK,
                1.0 + CURVATURE_CAP_SLACK - worst.0,
            )
            .with_value(worst.0)
            .with_witness(format!("t = {:.17}", worst.1))
            .with_note_opt(note),
        );
    }

    {
        let mut flagged = 0usize;
        let mut exact = true;
        let mut witness = None;
        for (i, &is_unity) in field.exact_unity().iter().enumerate() {
            if !is_unity {
                continue;
            }
            flagged += 1;
            if field.samples()[i] != 1.0 && witness.is_none() {
                exact = false;
                witness = Some(field.grid()[i]);
            }
        }
        let passed = exact && flagged > 0;
        let mut record = CheckRecord::new(
            "curvature.exact_unity",
            "K = 1 exactly (bitwise) wherever the perturbation vanishes",
            passed,
            if passed { 0.0 } else { -1.0 },
        )
        .with_value(flagged as f64)
        .with_note_opt(note);
        if let Some(t) = witness {
            record = record.with_witness(format!("t = {t:.17}"));
        }
        report.push(record);
    }

    if profile.is_round() {
        report.push(
            CheckRecord::new(
                "curvature.negative_min",
                "refined K_min < -1e-3 inside the perturbed band",
                true,
                0.0,
            )
            .with_note("vacuous: no perturbation, K_min = 1"),
        );
    } else {
        match curvature_extrema(profile, 2048) {
            Ok(ext) => {
                let a = profile.params().a;
                let in_band = ext.t_at_min > a && ext.t_at_min < PI - a;
                report.push(
                    CheckRecord::new(
                        "curvature.negative_min",
                        "refined K_min < -1e-3 inside the perturbed band",
                        ext.k_min < NEGATIVE_MIN_GATE && in_band,
                        NEGATIVE_MIN_GATE - ext.k_min,
                    )
                    .with_value(ext.k_min)
                    .with_threshold(NEGATIVE_MIN_GATE)
                    .with_witness(format!("t = {:.17}", ext.t_at_min)),
                );
            }
            Err(e) => {
                report.push(
                    CheckRecord::new(
                        "curvature.negative_min",
                        "refined K_min < -1e-3 inside the perturbed band",
                        false,
                        f64::NEG_INFINITY,
                    )
                    .with_witness(format!("extremum search failed: {e}")),
                );
            }
        }
    }

    match total_curvature(profile) {
        Ok(tc) => {
            let dev = fabs(tc.quadrature - 4.0 * PI);
            report.push(
                CheckRecord::new(
                    "gauss_bonnet.total",
                    "2 pi * integral of K f equals 4 pi, quadrature vs telescoped",
                    dev <= TOTAL_CURVATURE_TOL && tc.disagreement() <= TOTAL_CURVATURE_TOL,
                    TOTAL_CURVATURE_TOL - dev.max(tc.disagreement()),
                )
                .with_value(tc.quadrature)
                .with_threshold(4.0 * PI)
                .with_witness(format!("telescoped = {:.17}", tc.telescoped)),
            );
        }
        Err(e) => {
            report.push(
                CheckRecord::new(
                    "gauss_bonnet.total",
                    "2 pi * integral of K f equals 4 pi, quadrature vs telescoped",
                    false,
                    f64::NEG_INFINITY,
                )
                .with_witness(format!("total curvature failed: {e}")),
            );
        }
    }

    match minimal_sphere_bound(profile) {
        Ok(bound) => {
            report.push(
                CheckRecord::new(
                    "minimal_sphere.bound",
                    "K_max * Area >= 4 pi on the closed surface",
                    bound.holds,
                    bound.margin,
                )
                .with_value(bound.k_max * bound.area)
                .with_threshold(4.0 * PI)
                .with_witness(format!(
                    "K_max = {:.17}, area = {:.17}",
                    bound.k_max, bound.area
                ))
                .with_note_opt(if profile.is_round() {
                    Some("equality case: unit sphere")
                } else {
                    None
                }),
            );
        }
        Err(e) => {
            report.push(
                CheckRecord::new(
                    "minimal_sphere.bound",
                    "K_max * Area >= 4 pi on the closed surface",
                    false,
                    f64::NEG_INFINITY,
                )
                .with_witness(format!("bound check failed: {e}")),
            );
        }
    }

    report
}
