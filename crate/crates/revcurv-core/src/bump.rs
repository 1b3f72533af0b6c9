//! The compactly supported mollifier and its derivatives through order four.
//!
//! Base shape: `psi(u) = exp(-1/(1 - u^2))` on (-1, 1), identically zero
//! outside. Derivatives stay in the family
//! `psi^(k)(u) = N_k(u) / (1 - u^2)^(2k) * psi(u)` for polynomials `N_k`
//! obtained from the recurrence
//! `N_{k+1} = (N_k' (1-u^2) + 4k u N_k)(1-u^2) - 2 u N_k`.
//! The tables below are that recurrence unrolled; they are what makes
//! derivative evaluation exact rather than finite-differenced.

use crate::quad::{trapezoid, GaussLegendre};
use crate::{Error, Result};
use libm::{cos, exp};

/// Highest derivative order the closed-form tables cover.
pub const MAX_ORDER: usize = 4;

// N_k coefficients in ascending powers of u.
const N1: [f64; 2] = [0.0, -2.0];
const N2: [f64; 5] = [-2.0, 0.0, 0.0, 0.0, 6.0];
const N3: [f64; 8] = [0.0, -12.0, 0.0, 40.0, 0.0, -12.0, 0.0, -24.0];
const N4: [f64; 11] = [
    -12.0, 0.0, 24.0, 0.0, 232.0, 0.0, -528.0, 0.0, 180.0, 0.0, 120.0,
];

fn horner(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// `psi^(k)(u)` on the reference interval.
fn psi_deriv(u: f64, k: usize) -> f64 {
    debug_assert!(k <= MAX_ORDER);
    let w = 1.0 - u * u;
    if w <= 0.0 {
        return 0.0;
    }
    let base = exp(-1.0 / w);
    // Once the exponential underflows the whole product is zero; bail before
    // the 1/w^(2k) factor can overflow and manufacture a NaN.
    if base == 0.0 {
        return 0.0;
    }
    if k == 0 {
        return base;
    }
    let numer = match k {
        1 => horner(&N1, u),
        2 => horner(&N2, u),
        3 => horner(&N3, u),
        _ => horner(&N4, u),
    };
    let mut wpow = 1.0;
    for _ in 0..2 * k {
        wpow *= w;
    }
    numer / wpow * base
}

/// A normalized mollifier on `[-delta, delta]`.
///
/// Two scalings are applied to the base shape: a mass factor making the
/// kernel integrate to exactly 1, and the correction `alpha0` chosen so that
/// convolving `cos` with the result reproduces `cos` at the origin,
/// i.e. `integral of cos(y) * kernel(y) dy = 1`. The second factor is what
/// lets a mollified profile keep its curvature bound tight.
#[derive(Debug, Clone)]
pub struct SmoothingKernel {
    delta: f64,
    /// Mass normalization: `1 / integral of psi(x/delta) dx`.
    inv_mass: f64,
    alpha0: f64,
    rule: GaussLegendre,
}

/// Residuals from re-deriving the normalization constants, see
/// [`SmoothingKernel::normalization`].
#[derive(Debug, Clone, Copy)]
pub struct NormalizationCheck {
    /// Unit mass re-integrated at doubled order, minus 1.
    pub mass_defect: f64,
    /// Gauss result minus trapezoid result for the mass integral.
    pub rule_disagreement: f64,
    /// The cosine-moment correction factor.
    pub alpha0: f64,
    /// `integral of cos(pi/2 - y) * kernel(y) dy`, zero by parity.
    pub odd_moment: f64,
}

impl SmoothingKernel {
    /// Build the kernel for half-width `delta` using Gauss panels of the
    /// given order for the normalization integrals.
    pub fn new(delta: f64, quad_order: usize) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter {
                what: "kernel half-width delta",
                value: delta,
            });
        }
        let rule = GaussLegendre::new(quad_order.max(2));
        // Split at the midpoint: one panel leaves ~1e-12 of residual at order
        // 64, two bring it to the rounding floor.
        let mass = rule.integrate_panels(&[-delta, 0.0, delta], |x| psi_deriv(x / delta, 0));
        let inv_mass = 1.0 / mass;
        let cos_moment = rule.integrate_panels(&[-delta, 0.0, delta], |y| {
            cos(y) * inv_mass * psi_deriv(y / delta, 0)
        });
        let alpha0 = 1.0 / cos_moment;
        Ok(SmoothingKernel {
            delta,
            inv_mass,
            alpha0,
            rule,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The cosine-moment correction factor applied on top of unit mass.
    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub(crate) fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    /// `k`-th derivative of the fully normalized kernel at `x`.
    ///
    /// Supported orders are 0 through [`MAX_ORDER`]; anything higher is an
    /// error because no coefficient table exists for it.
    pub fn value(&self, x: f64, k: usize) -> Result<f64> {
        if k > MAX_ORDER {
            return Err(Error::UnsupportedOrder {
                requested: k,
                max: MAX_ORDER,
            });
        }
        Ok(self.value_unchecked(x, k))
    }

    /// Same as [`value`](Self::value) for pre-validated `k`; the convolution
    /// loops call this.
    pub(crate) fn value_unchecked(&self, x: f64, k: usize) -> f64 {
        debug_assert!(k <= MAX_ORDER);
        let mut scale = self.alpha0 * self.inv_mass;
        for _ in 0..k {
            scale /= self.delta;
        }
        scale * psi_deriv(x / self.delta, k)
    }

    /// Recompute both normalization integrals with independent rules and
    /// report the residuals.
    pub fn normalization(&self) -> NormalizationCheck {
        let fine = GaussLegendre::new(2 * self.rule.order());
        let d = self.delta;
        let mass_defect =
            fine.integrate_panels(&[-d, 0.0, d], |x| self.inv_mass * psi_deriv(x / d, 0)) - 1.0;
        let gauss = self
            .rule
            .integrate_panels(&[-d, 0.0, d], |x| self.inv_mass * psi_deriv(x / d, 0));
        let trap = trapezoid(-d, d, 513, |x| self.inv_mass * psi_deriv(x / d, 0));
        let odd_moment = self
            .rule
            .integrate_panels(&[-d, 0.0, d], |y| {
                cos(core::f64::consts::FRAC_PI_2 - y) * self.value_unchecked(y, 0)
            });
        NormalizationCheck {
            mass_defect,
            rule_disagreement: gauss - trap,
            alpha0: self.alpha0,
            odd_moment,
        }
    }
}
