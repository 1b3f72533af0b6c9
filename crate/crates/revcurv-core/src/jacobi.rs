//! Jacobi fields and conjugate points along computed geodesics.
//!
//! The scalar Jacobi equation on a surface is
//!
//! ```text
//! y'' + K(gamma(s)) y = 0,        y(0) = 0,  y'(0) = 1,
//! ```
//!
//! and the first positive zero of `y` is the first conjugate time. The
//! curvature is always evaluated through the surface's own formula at the
//! current parameter, never interpolated from stored samples; to make that
//! possible the geodesic is re-integrated jointly with `(y, y')` rather
//! than replayed from its trajectory. Meridians keep their exact chart:
//! there `t(s)` is the reflection walk in closed form and only the two
//! Jacobi components need a solver.
//!
//! Zeros are located in two passes: a sign change between accepted samples
//! pins a bracket, a fixed-step sweep at a 64th of the bracket narrows it,
//! and a cubic Hermite interpolant (value and slope at both ends) is
//! bisected inside the narrow bracket.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geodesic::{
    geodesic_parallels, integrate_adaptive, integrate_fixed, meridian_position, GeodesicState,
    Trajectory,
};
use crate::profile::ProfileCurve;
use crate::report::{CheckRecord, VerificationReport};
use crate::rng::SeededRng;
use crate::surface::RevolutionSurface;
use crate::{Error, Result};

/// A Jacobi field along one geodesic: samples of `(s, y, y')` and the
/// first conjugate time, when one was found within the trajectory's length.
#[derive(Debug, Clone)]
pub struct JacobiSolution {
    samples: Vec<(f64, f64, f64)>,
    first_zero: Option<f64>,
    trajectory_length: f64,
}

impl JacobiSolution {
    /// Accepted samples `(s, y, y')`, starting at `(0, 0, 1)`.
    pub fn samples(&self) -> &[(f64, f64, f64)] {
        &self.samples
    }

    /// First positive zero of `y`, if one occurred within the trajectory.
    pub fn first_zero(&self) -> Option<f64> {
        self.first_zero
    }

    /// When no zero was found, the arclength beyond which the question is
    /// open: the field may still vanish past the integrated range.
    pub fn inconclusive_beyond(&self) -> Option<f64> {
        if self.first_zero.is_none() {
            Some(self.trajectory_length)
        } else {
            None
        }
    }

    /// Text table of the samples, one row per accepted step.
    ///
    /// Column order `s y yp`, 17 significant digits, header included.
    pub fn table(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 70 + 10);
        out.push_str("s y yp\n");
        for &(s, y, yp) in &self.samples {
            let _ = core::fmt::Write::write_fmt(
                &mut out,
                format_args!("{:.16e} {:.16e} {:.16e}\n", s, y, yp),
            );
        }
        out
    }
}

/// Integrate the Jacobi field along `trajectory` and find its first zero.
///
/// The trajectory provides the initial state, the arclength, and the step
/// tolerance; the geodesic itself is re-integrated jointly with the field.
/// No zero within the length is not an error: the result then carries the
/// inconclusive length instead.
pub fn first_conjugate_time<S: RevolutionSurface>(
    surface: &S,
    trajectory: &Trajectory,
) -> Result<JacobiSolution> {
    let length = trajectory.length();
    let tol = trajectory.step_tol();
    let start = trajectory.initial();

    if trajectory.is_meridian() {
        let (lo, hi) = surface.domain();
        let dir0 = start.dt_ds;
        let t0 = start.t;
        // The walk touches the poles, where the curvature quotient is
        // undefined; evaluating a hair inside instead stays within the
        // limit band of the closed profiles.
        let mut rhs = |s: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
            let t = meridian_position(lo, hi, t0, dir0, s).clamp(lo + 1e-12, hi - 1e-12);
            let k = surface.curvature(t)?;
            Ok([y[1], -k * y[0]])
        };
        let mut ss = Vec::new();
        let mut states = Vec::new();
        integrate_adaptive(&mut rhs, [0.0, 1.0], length, tol, surface.max_step_hint(), |s, y| {
            ss.push(s);
            states.push(*y);
        })?;
        let first_zero = locate_zero(&mut rhs, &ss, &states, 0)?;
        let samples = ss
            .iter()
            .zip(&states)
            .map(|(&s, y)| (s, y[0], y[1]))
            .collect();
        return Ok(JacobiSolution {
            samples,
            first_zero,
            trajectory_length: length,
        });
    }

    let mut rhs = |_s: f64, y: &[f64; 6]| -> Result<[f64; 6]> {
        let f = surface.radius(y[0])?;
        if f <= 0.0 {
            return Err(Error::PoleEvaluation { t: y[0] });
        }
        let fp = surface.radius_deriv(y[0])?;
        let k = surface.curvature(y[0])?;
        Ok([
            y[2],
            y[3],
            f * fp * y[3] * y[3],
            -2.0 * (fp / f) * y[2] * y[3],
            y[5],
            -k * y[4],
        ])
    };
    let y0 = [start.t, start.theta, start.dt_ds, start.dtheta_ds, 0.0, 1.0];
    let mut ss = Vec::new();
    let mut states = Vec::new();
    let run = integrate_adaptive(&mut rhs, y0, length, tol, surface.max_step_hint(), |s, y| {
        ss.push(s);
        states.push(*y);
    });
    if let Err(e) = run {
        return Err(match e {
            Error::StepUnderflow { step, .. } => Error::StepUnderflow {
                t: states.last().map_or(start.t, |y| y[0]),
                step,
            },
            other => other,
        });
    }
    let first_zero = locate_zero(&mut rhs, &ss, &states, 4)?;
    let samples = ss
        .iter()
        .zip(&states)
        .map(|(&s, y)| (s, y[4], y[5]))
        .collect();
    Ok(JacobiSolution {
        samples,
        first_zero,
        trajectory_length: length,
    })
}

/// First positive zero of component `yi` across the accepted samples.
///
/// `yi + 1` must hold its derivative, as it does in both state layouts
/// here. The coarse bracket between samples is narrowed by re-integrating
/// it in 64 fixed steps from the stored full state, then a cubic Hermite
/// interpolant is bisected.
fn locate_zero<const N: usize>(
    rhs: &mut impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    ss: &[f64],
    states: &[[f64; N]],
    yi: usize,
) -> Result<Option<f64>> {
    for i in 1..states.len() {
        if states[i][yi] == 0.0 {
            return Ok(Some(ss[i]));
        }
        if states[i - 1][yi] * states[i][yi] < 0.0 {
            let s_a = ss[i - 1];
            let width = ss[i] - s_a;
            let mut fine: Vec<(f64, f64, f64)> = Vec::with_capacity(65);
            integrate_fixed(
                &mut *rhs,
                states[i - 1],
                width,
                width / 64.0,
                |ds, y: &[f64; N]| fine.push((s_a + ds, y[yi], y[yi + 1])),
            )?;
            for w in 1..fine.len() {
                if fine[w].1 == 0.0 {
                    return Ok(Some(fine[w].0));
                }
                if fine[w - 1].1 * fine[w].1 < 0.0 {
                    return Ok(Some(hermite_zero(fine[w - 1], fine[w])));
                }
            }
            // The fine sweep reproduced the endpoints; falling back to the
            // coarse bracket can only happen if the zero sits at its edge.
            return Ok(Some(hermite_zero(
                (s_a, states[i - 1][yi], states[i - 1][yi + 1]),
                (ss[i], states[i][yi], states[i][yi + 1]),
            )));
        }
    }
    Ok(None)
}

/// Zero of the cubic matching value and slope at both bracket ends, by
/// bisection in the unit parameter.
fn hermite_zero(a: (f64, f64, f64), b: (f64, f64, f64)) -> f64 {
    let (s0, y0, m0) = a;
    let (s1, y1, m1) = b;
    let h = s1 - s0;
    let eval = |u: f64| -> f64 {
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * h * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * h * m1
    };
    let mut a = 0.0;
    let mut b = 1.0;
    let positive_at_a = y0 > 0.0;
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let v = eval(m);
        if v == 0.0 {
            return s0 + m * h;
        }
        if (v > 0.0) == positive_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    s0 + 0.5 * (a + b) * h
}

/// Run the conjugate-point suite, integrating at `step_tol`.
///
/// The first part always pins the solver against the round sphere, where
/// every geodesic has its first conjugate point at exactly pi: twenty
/// seeded random starts must land within 1e-6. The second part follows the
/// profile's waist circle, where the curvature vanishes and the field must
/// stay zero-free over two full turns of slack; on the round baseline that
/// part is vacuous and says so.
pub fn verify_conjugate_properties(profile: &ProfileCurve, step_tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("conjugate");

    report.push(round_sphere_record(step_tol));

    let record = if profile.is_round() {
        CheckRecord::new(
            "conjugate.waist_flat",
            "the flat waist circle carries no conjugate point over length 4 pi",
            true,
            0.0,
        )
        .with_note("vacuous: round baseline, no waist circle exists")
    } else {
        match waist_conjugate(profile, step_tol) {
            Ok((zero, length)) => {
                let passed = zero.is_none();
                CheckRecord::new(
                    "conjugate.waist_flat",
                    "the flat waist circle carries no conjugate point over length 4 pi",
                    passed,
                    if passed { 0.0 } else { f64::NEG_INFINITY },
                )
                .with_value(length)
                .with_witness(match zero {
                    None => alloc::format!("inconclusive beyond {length:.6}, as expected"),
                    Some(z) => alloc::format!("unexpected zero at s = {z:.17}"),
                })
            }
            Err(e) => CheckRecord::new(
                "conjugate.waist_flat",
                "the flat waist circle carries no conjugate point over length 4 pi",
                false,
                f64::NEG_INFINITY,
            )
            .with_witness(alloc::format!("integration failed: {e}")),
        }
    };
    report.push(record);

    report
}

fn round_sphere_record(step_tol: f64) -> CheckRecord {
    let round = match ProfileCurve::round(512) {
        Ok(p) => p,
        Err(e) => {
            return CheckRecord::new(
                "conjugate.round_sphere",
                "twenty random round-sphere geodesics reach their conjugate point at pi",
                false,
                f64::NEG_INFINITY,
            )
            .with_witness(alloc::format!("round construction failed: {e}"));
        }
    };
    let mut rng = SeededRng::new(0);
    let mut worst = 0.0_f64;
    let mut failure: Option<Error> = None;
    for _ in 0..20 {
        let t = rng.range(-0.6, 0.6);
        let theta = rng.range(0.0, 2.0 * PI);
        let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        let psi = sign * rng.range(0.3, PI - 0.3);
        let run = GeodesicState::from_angle(&round, t, theta, psi)
            .and_then(|start| crate::geodesic::geodesic_flow(&round, start, 3.5, step_tol))
            .and_then(|traj| first_conjugate_time(&round, &traj));
        match run {
            Ok(sol) => match sol.first_zero() {
                Some(z) => worst = worst.max((z - PI).abs()),
                None => worst = f64::INFINITY,
            },
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    match failure {
        None => CheckRecord::new(
            "conjugate.round_sphere",
            "twenty random round-sphere geodesics reach their conjugate point at pi",
            worst <= 1e-6,
            1e-6 - worst,
        )
        .with_value(worst)
        .with_threshold(1e-6)
        .with_witness(alloc::format!("worst |s* - pi| = {worst:.3e}")),
        Some(e) => CheckRecord::new(
            "conjugate.round_sphere",
            "twenty random round-sphere geodesics reach their conjugate point at pi",
            false,
            f64::NEG_INFINITY,
        )
        .with_witness(alloc::format!("integration failed: {e}")),
    }
}

/// Jacobi run along the profile's waist circle over length 4 pi. Returns
/// the first zero (expected absent) and the integrated length.
fn waist_conjugate(profile: &ProfileCurve, step_tol: f64) -> Result<(Option<f64>, f64)> {
    let parallels = geodesic_parallels(profile)?;
    let waist = parallels
        .circles
        .iter()
        .min_by(|a, b| a.length.total_cmp(&b.length))
        .ok_or(Error::InvalidParameter {
            what: "profile (no parallel to follow)",
            value: f64::NAN,
        })?;
    let start = GeodesicState::from_angle(profile, waist.t, 0.0, PI / 2.0)?;
    let length = 4.0 * PI;
    let traj = crate::geodesic::geodesic_flow(profile, start, length, step_tol)?;
    let sol = first_conjugate_time(profile, &traj)?;
    Ok((sol.first_zero(), traj.length()))
}
