//! Gauges (convex distance functions) on R^3 and Birkhoff orthogonality.
//!
//! A gauge `F` is positive away from the origin, positively homogeneous and
//! subadditive. Every gauge used here is assumed to have a smooth, strictly
//! convex unit sphere `S = {F = 1}`, so each oriented plane has exactly one
//! Birkhoff-orthogonal unit vector: the support point of the unit ball in the
//! direction of the plane normal.

mod analytic;
mod birkhoff;
mod level;
mod verify;

pub use analytic::{randers_birkhoff, EllipsoidGauge, EuclideanGauge, RandersGauge};
pub use birkhoff::{birkhoff_orthogonal, support_point_golden, BirkhoffSolver};
pub use level::{ImplicitGauge, LevelFunction, StarLevel, TranslatedGauge};
pub use verify::{verify_gauge, verify_gauge_seeded, GaugeReport};

use alloc::boxed::Box;
use alloc::sync::Arc;

use crate::error::Result;
use crate::numerics::{Mat3, Vec3};

/// Relative step used when a Hessian is taken by differencing the gradient.
pub const HESSIAN_FD_STEP: f64 = 1e-4;
/// Relative step used when a gradient is taken by differencing the value.
pub const GRADIENT_FD_STEP: f64 = 1e-6;

/// A convex distance function with a smooth, strictly convex unit sphere.
///
/// Only [`Gauge::eval`] is required; the gradient and Hessian fall back to
/// central differences. Gauges are immutable values and must be shareable
/// across threads.
pub trait Gauge: Send + Sync {
    /// `F(x)`; zero exactly at the origin.
    fn eval(&self, x: Vec3) -> Result<f64>;

    /// `grad F(x)` for `x != 0`. Homogeneous of degree 0.
    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        let h = GRADIENT_FD_STEP * x.norm();
        let mut g = [0.0; 3];
        for (i, gi) in g.iter_mut().enumerate() {
            let mut e = [0.0; 3];
            e[i] = h;
            let e = Vec3::from_array(e);
            *gi = (self.eval(x + e)? - self.eval(x - e)?) / (2.0 * h);
        }
        Ok(Vec3::from_array(g))
    }

    /// Hessian of `F` at `x != 0`. Homogeneous of degree -1, with `x` in its kernel.
    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        fd_hessian(self, x)
    }
}

/// Hessian by central differences of the gradient with step
/// [`HESSIAN_FD_STEP`] relative to `|x|`.
pub fn fd_hessian<G: Gauge + ?Sized>(gauge: &G, x: Vec3) -> Result<Mat3> {
    let h = HESSIAN_FD_STEP * x.norm();
    let mut cols = [Vec3::ZERO; 3];
    for (i, col) in cols.iter_mut().enumerate() {
        let mut e = [0.0; 3];
        e[i] = h;
        let e = Vec3::from_array(e);
        *col = (gauge.gradient(x + e)? - gauge.gradient(x - e)?) / (2.0 * h);
    }
    Ok(Mat3::from_columns(cols[0], cols[1], cols[2]).symmetrize())
}

impl<G: Gauge + ?Sized> Gauge for &G {
    fn eval(&self, x: Vec3) -> Result<f64> {
        (**self).eval(x)
    }
    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        (**self).hessian(x)
    }
}

impl<G: Gauge + ?Sized> Gauge for Box<G> {
    fn eval(&self, x: Vec3) -> Result<f64> {
        (**self).eval(x)
    }
    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        (**self).hessian(x)
    }
}

impl<G: Gauge + ?Sized> Gauge for Arc<G> {
    fn eval(&self, x: Vec3) -> Result<f64> {
        (**self).eval(x)
    }
    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        (**self).hessian(x)
    }
}
