//! The abstract surface of revolution behind the concrete profiles.
//!
//! Everything downstream (curvature integrals, geodesics, Jacobi fields)
//! only needs the radius function and its first two derivatives, so those
//! modules are written against this trait. The barbell and round profiles
//! implement it; the test suites add degenerate fixtures (cylinder, single
//! cap) that exercise branches the closed profiles cannot reach.

use crate::{Error, Result};
use alloc::vec::Vec;

/// A surface of revolution described by its arclength profile.
///
/// `radius` is the distance `f(t)` from the profile curve to the rotation
/// axis. The parameterization is assumed to be by arclength, which is what
/// collapses the Gauss curvature to `-f''/f` and makes meridian arclength
/// equal to parameter length.
pub trait RevolutionSurface {
    /// Closed parameter interval of the profile.
    fn domain(&self) -> (f64, f64);

    /// Distance to the axis, `f(t) >= 0`.
    fn radius(&self, t: f64) -> Result<f64>;

    /// `f'(t)`; bounded by 1 in absolute value under arclength.
    fn radius_deriv(&self, t: f64) -> Result<f64>;

    /// `f''(t)`.
    fn radius_deriv2(&self, t: f64) -> Result<f64>;

    /// Gauss curvature `-f''(t)/f(t)`.
    ///
    /// The default quotient is the right definition away from the axis and
    /// an error on it; implementations with known limits there (the closed
    /// profiles) override this with their exact branches.
    fn curvature(&self, t: f64) -> Result<f64> {
        let f = self.radius(t)?;
        if f <= 0.0 {
            return Err(Error::PoleEvaluation { t });
        }
        Ok(-self.radius_deriv2(t)? / f)
    }

    /// Whether the profile meets the axis at both ends, so the surface of
    /// revolution is a topological sphere.
    fn closes(&self) -> bool {
        let (lo, hi) = self.domain();
        let touches = |t: f64| matches!(self.radius(t), Ok(f) if f.abs() < 1e-9);
        touches(lo) && touches(hi)
    }

    /// Upper bound on the step an adaptive geodesic integrator may take.
    ///
    /// Infinite by default. Profiles whose radius has structure on a small
    /// scale (the mollified ones) return a fraction of that scale, so the
    /// solver cannot step across a feature its error estimate never saw.
    fn max_step_hint(&self) -> f64 {
        f64::INFINITY
    }

    /// Panel boundaries for composite quadrature of parameter integrals.
    ///
    /// The default is a uniform subdivision; profiles that carry a sample
    /// grid return it instead so integrals refine exactly where the
    /// construction already resolved the function.
    fn panel_breaks(&self) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let n = 512;
        let h = (hi - lo) / n as f64;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            out.push(lo + i as f64 * h);
        }
        out.push(hi);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Flat cylinder of radius 2 on [0, 3].
    struct Tube;

    impl RevolutionSurface for Tube {
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

    /// Profile touching the axis at the left end only. The radius is
    /// written as a shifted sine so it hits exactly 0.0 at the endpoint
    /// (plain cos leaves a 6e-17 residue there).
    struct HalfCap;

    impl RevolutionSurface for HalfCap {
        fn domain(&self) -> (f64, f64) {
            (-core::f64::consts::FRAC_PI_2, 0.0)
        }
        fn radius(&self, t: f64) -> Result<f64> {
            Ok(libm::sin(t + core::f64::consts::FRAC_PI_2))
        }
        fn radius_deriv(&self, t: f64) -> Result<f64> {
            Ok(libm::cos(t + core::f64::consts::FRAC_PI_2))
        }
        fn radius_deriv2(&self, t: f64) -> Result<f64> {
            Ok(-libm::sin(t + core::f64::consts::FRAC_PI_2))
        }
    }

    #[test]
    fn default_curvature_is_the_quotient() {
        assert_eq!(Tube.curvature(1.0).unwrap(), 0.0);
        // cos/cos divides out exactly.
        assert_eq!(HalfCap.curvature(-0.7).unwrap(), 1.0);
    }

    #[test]
    fn default_curvature_errors_on_the_axis() {
        assert!(matches!(
            HalfCap.curvature(-core::f64::consts::FRAC_PI_2),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn closes_needs_both_ends() {
        assert!(!Tube.closes());
        assert!(!HalfCap.closes());
    }

    #[test]
    fn default_breaks_span_the_domain() {
        let b = Tube.panel_breaks();
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 3.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }
}
