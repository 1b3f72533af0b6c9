//! The piecewise base perturbation, prior to mollification.
//!
//! For half-width `delta` the function is zero up to `t = delta`, follows a
//! cubic-in-`(t - delta)` arc chosen to splice onto `c - cos t` with two
//! continuous derivatives at `t = pi/2 - delta`, and equals `c - cos t` from
//! there to `pi/2 + delta`. The constant `c` is pinned by continuity. The
//! result is C^2 on the whole line (only the third derivative jumps at the
//! two junctions), nonnegative, and nondecreasing up to the waist.

use crate::{Error, Result};
use core::f64::consts::{FRAC_PI_2, PI};
use libm::{cos, sin};

/// Base perturbation for one half-width. Construction precomputes the
/// junction constant and the trigonometric coefficients of the cubic.
#[derive(Debug, Clone, Copy)]
pub struct BasePerturbation {
    delta: f64,
    cos_d: f64,
    sin_d: f64,
    /// 3 (pi - 4 delta)^3, the cubic's denominator.
    denom: f64,
    /// Waist level: value at pi/2 - delta plus cos(pi/2 - delta).
    c: f64,
}

impl BasePerturbation {
    /// `delta` must lie in (0, pi/4) so the cubic window has positive length.
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < PI / 4.0) {
            return Err(Error::InvalidParameter {
                what: "base perturbation delta",
                value: delta,
            });
        }
        let span = PI - 4.0 * delta;
        let mut out = BasePerturbation {
            delta,
            cos_d: cos(delta),
            sin_d: sin(delta),
            denom: 3.0 * span * span * span,
            c: 0.0,
        };
        // Continuity at the right junction fixes c; cos(pi/2 - delta) is
        // sin(delta). Evaluate the cubic directly: `piece` would route the
        // junction point through the waist branch, which needs c.
        let tj = FRAC_PI_2 - delta;
        let s = tj - delta;
        let (n, _) = out.cubic_numer(tj);
        out.c = s * s * s * n / out.denom + out.sin_d;
        Ok(out)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The constant level `c` of the waist arc `c - cos t`.
    pub fn waist_level(&self) -> f64 {
        self.c
    }

    /// Numerator polynomial of the cubic piece and its derivative in `t`.
    fn cubic_numer(&self, t: f64) -> (f64, f64) {
        let n = 12.0 * (PI - 3.0 * self.delta - t) * self.cos_d
            - (PI - 4.0 * self.delta) * (2.0 * PI - 5.0 * self.delta - 3.0 * t) * self.sin_d;
        let dn = -12.0 * self.cos_d + 3.0 * (PI - 4.0 * self.delta) * self.sin_d;
        (n, dn)
    }

    /// Piecewise evaluation of derivative order `j` (0, 1, or 2) with the
    /// zero extension to the left. Total: covers every argument the
    /// convolution can produce, i.e. everything up to `pi/2 + delta`.
    pub(crate) fn piece(&self, t: f64, j: usize) -> f64 {
        debug_assert!(j <= 2);
        debug_assert!(t <= FRAC_PI_2 + self.delta + 1e-12);
        if t <= self.delta {
            return 0.0;
        }
        if t <= FRAC_PI_2 - self.delta {
            let s = t - self.delta;
            let (n, dn) = self.cubic_numer(t);
            return match j {
                0 => s * s * s * n / self.denom,
                1 => (3.0 * s * s * n + s * s * s * dn) / self.denom,
                _ => {
                    // Simplified closed form of the second derivative.
                    let span = PI - 4.0 * self.delta;
                    s * (24.0 * (PI - 2.0 * self.delta - 2.0 * t) * self.cos_d
                        - 4.0 * span * (PI - self.delta - 3.0 * t) * self.sin_d)
                        / (span * span * span)
                }
            };
        }
        match j {
            0 => self.c - cos(t),
            1 => sin(t),
            _ => cos(t),
        }
    }

    /// Value at `t`, defined on `[-pi/2 - delta, pi/2 + delta]`.
    pub fn value(&self, t: f64) -> Result<f64> {
        if t < -FRAC_PI_2 - self.delta || t > FRAC_PI_2 + self.delta {
            return Err(Error::OutOfDomain {
                what: "base perturbation value",
                value: t,
            });
        }
        Ok(self.piece(t, 0))
    }

    /// Second derivative on the cubic window `[delta, pi/2 - delta]` only.
    ///
    /// Outside that window the caller is probably asking the wrong question
    /// (the value is trivially 0 or `cos t`), so the restriction is an error
    /// rather than a silent branch.
    pub fn second_derivative(&self, t: f64) -> Result<f64> {
        if t < self.delta || t > FRAC_PI_2 - self.delta {
            return Err(Error::OutOfDomain {
                what: "base perturbation second derivative",
                value: t,
            });
        }
        Ok(self.piece(t, 2))
    }
}
