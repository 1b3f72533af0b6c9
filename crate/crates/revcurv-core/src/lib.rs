//! Numerics for rotationally symmetric metrics on the two-sphere.
//!
//! The crate builds surfaces of revolution from an arclength profile,
//! evaluates their Gauss curvature, integrates geodesics and Jacobi fields,
//! and runs convexity experiments on the round sphere. Everything is pure
//! computation over `f64`; IO and plotting live in the companion CLI crate.
//!
//! The centerpiece is a one-parameter family of profiles `f = cos t + eps(t)`
//! where `eps` is a mollified piecewise-cubic bulge. The family keeps Gauss
//! curvature at most 1 while growing a neck of positive girth at the equator,
//! and the modules here exist to check that claim and its consequences
//! numerically.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bump;
pub mod curvature;
pub mod eps0;
pub mod geodesic;
pub mod jacobi;
pub mod profile;
pub mod quad;
pub mod report;
pub mod rng;
pub mod run;
pub mod sphere;
pub mod surface;

use core::fmt;

/// Everything that can go wrong while building or querying a model.
///
/// Numerical tolerance failures are deliberately *not* errors: checks that a
/// quantity stays within a bound are recorded as pass/fail entries in a
/// [`report::VerificationReport`]. An `Error` means the request itself was
/// malformed (bad parameter, out-of-range argument) or the computation could
/// not be carried out at all.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Derivative order beyond what the closed-form kernel tables cover.
    UnsupportedOrder { requested: usize, max: usize },
    /// Argument outside the domain of the function named in `what`.
    OutOfDomain { what: &'static str, value: f64 },
    /// A construction parameter failed validation.
    InvalidParameter { what: &'static str, value: f64 },
    /// The profile slope left [-1, 1], so no arclength parametrization exists.
    SlopeExceedsOne { t: f64, slope: f64 },
    /// Curvature requested at a pole, where the quotient is singular.
    PoleEvaluation { t: f64 },
    /// The adaptive integrator could not meet its tolerance above the
    /// minimum step size.
    StepUnderflow { t: f64, step: f64 },
    /// Doubling the quadrature order moved a convolution value by more than
    /// the allowed residual; the requested order is too coarse for delta.
    QuadratureTooCoarse { residual: f64 },
    /// A region specification string failed to parse.
    RegionParse { offset: usize, reason: &'static str },
    /// A region produced no usable sample points.
    EmptyRegion,
    /// The endpoints are antipodal, so the minimizing geodesic between them
    /// is not unique and a single interpolant cannot be returned.
    NonUniqueGeodesic { distance: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedOrder { requested, max } => {
                write!(f, "derivative order {requested} not supported (max {max})")
            }
            Error::OutOfDomain { what, value } => {
                write!(f, "{what}: argument {value} outside domain")
            }
            Error::InvalidParameter { what, value } => {
                write!(f, "invalid parameter {what} = {value}")
            }
            Error::SlopeExceedsOne { t, slope } => {
                write!(f, "profile slope {slope} exceeds 1 in magnitude at t = {t}")
            }
            Error::PoleEvaluation { t } => {
                write!(f, "curvature undefined at pole t = {t}")
            }
            Error::StepUnderflow { t, step } => {
                write!(f, "step size underflow ({step}) at t = {t}")
            }
            Error::QuadratureTooCoarse { residual } => {
                write!(f, "quadrature order too coarse (doubling residual {residual:e})")
            }
            Error::RegionParse { offset, reason } => {
                write!(f, "region spec parse error at byte {offset}: {reason}")
            }
            Error::EmptyRegion => f.write_str("region contains no sample points"),
            Error::NonUniqueGeodesic { distance } => {
                write!(
                    f,
                    "endpoints at distance {distance} are antipodal; minimizing geodesic not unique"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

/// Shorthand used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
