//! Gauges defined through a level function, evaluated by a radial root solve.
//!
//! If `psi` is a level function with `psi(0) < 1` whose level-1 set is the
//! boundary of a convex body around the origin, the gauge of that body is
//! `F(x) = 1/r` where `r > 0` solves `psi(r x) = 1`. Derivatives follow from
//! implicit differentiation of `psi(x / F(x)) = 1`.

use super::{Gauge, GRADIENT_FD_STEP};
use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, Mat3, Vec3};
#[allow(unused_imports)]
use num_traits::Float;

/// A smooth scalar function whose level-1 set bounds a convex body
/// containing the origin.
pub trait LevelFunction: Send + Sync {
    fn value(&self, x: Vec3) -> f64;

    fn gradient(&self, x: Vec3) -> Vec3 {
        let h = GRADIENT_FD_STEP * x.norm().max(1e-3);
        let d = |e: Vec3| (self.value(x + e) - self.value(x - e)) / (2.0 * h);
        Vec3::new(d(Vec3::X * h), d(Vec3::Y * h), d(Vec3::Z * h))
    }
}

/// Adapts a closure into a [`LevelFunction`] with a finite-difference gradient.
#[derive(Debug, Clone, Copy)]
pub struct LevelFn<F>(pub F);

impl<F: Fn(Vec3) -> f64 + Send + Sync> LevelFunction for LevelFn<F> {
    fn value(&self, x: Vec3) -> f64 {
        (self.0)(x)
    }
}

/// Solve `psi(r x) = 1` for `r > 0` and return `F(x) = 1/r`.
///
/// The solve runs to rounding level; `r_guess` seeds the upper bracket.
fn radial_gauge<P>(psi: P, x: Vec3, r_guess: f64) -> Result<f64>
where
    P: Fn(Vec3) -> Result<f64>,
{
    if x == Vec3::ZERO {
        return Ok(0.0);
    }
    if !x.is_finite() {
        return Err(Error::RootBracketFailure);
    }
    let f = |r: f64| psi(x * r).map(|v| v - 1.0).unwrap_or(f64::NAN);
    if !(f(0.0) < 0.0) {
        return Err(Error::RootBracketFailure);
    }
    let mut hi = if r_guess.is_finite() && r_guess > 0.0 {
        r_guess
    } else {
        1.0 / x.norm()
    };
    let mut expansions = 0;
    loop {
        let v = f(hi);
        if v > 0.0 {
            break;
        }
        if v.is_nan() || expansions >= 200 {
            return Err(Error::RootBracketFailure);
        }
        hi *= 2.0;
        expansions += 1;
    }
    let r = find_root_bracketed(f, 0.0, hi, 0.0).map_err(|_| Error::RootBracketFailure)?;
    if r > 0.0 {
        Ok(1.0 / r)
    } else {
        Err(Error::RootBracketFailure)
    }
}

/// Gradient of a level-set gauge at `x`, given `g = grad psi(y)` at `y = x / F(x)`.
fn level_gradient(g: Vec3, y: Vec3) -> Vec3 {
    g / g.dot(y)
}

/// Hessian of a level-set gauge from the level function's gradient `g` and
/// Hessian `h` at `y = x / mu`, `mu = F(x)`.
fn level_hessian(g: Vec3, h: &Mat3, y: Vec3, mu: f64) -> Mat3 {
    let d = g.dot(y);
    let grad_f = g / d;
    // dy/dx = (I - y grad_f^T) / mu
    let jac = (Mat3::identity() - y.outer(grad_f)).scale(1.0 / mu);
    let w = h.mul_vec(y) + g;
    let first = h.matmul(&jac).scale(1.0 / d);
    let second = g.outer(jac.transpose().mul_vec(w)).scale(1.0 / (d * d));
    (first - second).symmetrize()
}

/// Gauge of the body `{psi <= 1}` for a user-supplied level function.
///
/// The Hessian is taken by central differences of the gradient.
#[derive(Debug, Clone)]
pub struct ImplicitGauge<L> {
    level: L,
}

impl<L: LevelFunction> ImplicitGauge<L> {
    pub fn new(level: L) -> Result<Self> {
        if !(level.value(Vec3::ZERO) < 1.0) {
            return Err(Error::InvalidParameter(
                "level function must be below 1 at the origin",
            ));
        }
        Ok(ImplicitGauge { level })
    }

    pub fn level(&self) -> &L {
        &self.level
    }
}

impl<F: Fn(Vec3) -> f64 + Send + Sync> ImplicitGauge<LevelFn<F>> {
    pub fn from_fn(f: F) -> Result<Self> {
        ImplicitGauge::new(LevelFn(f))
    }
}

impl<L: LevelFunction> Gauge for ImplicitGauge<L> {
    fn eval(&self, x: Vec3) -> Result<f64> {
        radial_gauge(|y| Ok(self.level.value(y)), x, 1.0 / x.norm())
    }

    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        let mu = self.eval(x)?;
        let y = x / mu;
        Ok(level_gradient(self.level.gradient(y), y))
    }
}

/// Gauge whose unit sphere is the base unit sphere translated by `a0`.
///
/// Requires `base(-a0) < 1` so the origin stays inside the translated body.
#[derive(Debug, Clone)]
pub struct TranslatedGauge<G> {
    base: G,
    a0: Vec3,
}

impl<G: Gauge> TranslatedGauge<G> {
    pub fn new(base: G, a0: Vec3) -> Result<Self> {
        if !a0.is_finite() {
            return Err(Error::InvalidParameter("a0 must be finite"));
        }
        let value = base.eval(-a0)?;
        if !(value < 1.0) {
            return Err(Error::OriginNotInterior { value });
        }
        Ok(TranslatedGauge { base, a0 })
    }

    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn a0(&self) -> Vec3 {
        self.a0
    }

    fn shifted(&self, x: Vec3) -> Result<(f64, Vec3, Vec3)> {
        let mu = self.eval(x)?;
        let y = x / mu;
        Ok((mu, y, y - self.a0))
    }
}

impl<G: Gauge> Gauge for TranslatedGauge<G> {
    fn eval(&self, x: Vec3) -> Result<f64> {
        if x == Vec3::ZERO {
            return Ok(0.0);
        }
        let guess = 1.0 / self.base.eval(x)?;
        radial_gauge(|y| self.base.eval(y - self.a0), x, guess)
    }

    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        let (_, y, z) = self.shifted(x)?;
        Ok(level_gradient(self.base.gradient(z)?, y))
    }

    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        let (mu, y, z) = self.shifted(x)?;
        let g = self.base.gradient(z)?;
        let h = self.base.hessian(z)?;
        Ok(level_hessian(g, &h, y, mu))
    }
}

/// Four-lobed star-shaped level function
/// `psi(x) = |x|^2 (1 + a * 4 x1 x2 (x1^2 - x2^2) / |x|^4)^2`.
///
/// The resulting "gauge" is positive and homogeneous but its unit ball is
/// dented, so it is not subadditive for moderate `amplitude`. Used as a
/// negative control for [`super::verify_gauge`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarLevel {
    pub amplitude: f64,
}

impl LevelFunction for StarLevel {
    fn value(&self, x: Vec3) -> f64 {
        let r2 = x.norm_squared();
        if r2 == 0.0 {
            return 0.0;
        }
        let lobes = 4.0 * x.x * x.y * (x.x * x.x - x.y * x.y) / (r2 * r2);
        r2 * (1.0 + self.amplitude * lobes).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{fd_hessian, EllipsoidGauge, EuclideanGauge, RandersGauge};
    use approx::assert_abs_diff_eq;

    fn sample_points() -> impl Iterator<Item = Vec3> {
        (0..40).map(|i| {
            let i = i as f64;
            Vec3::new(
                (1.3 * i).sin() * 2.0,
                (0.7 * i + 0.4).cos(),
                (0.31 * i).sin() - 0.2,
            )
        })
    }

    #[test]
    fn implicit_euclidean_gradient() {
        let g = ImplicitGauge::from_fn(|x: Vec3| x.norm_squared()).unwrap();
        let grad = g.gradient(Vec3::new(0.0, 3.0, 4.0)).unwrap();
        assert!((grad - Vec3::new(0.0, 0.6, 0.8)).max_abs() < 1e-9);
        assert_abs_diff_eq!(
            g.eval(Vec3::new(0.0, 3.0, 4.0)).unwrap(),
            5.0,
            epsilon = 1e-14
        );
        assert_eq!(g.eval(Vec3::ZERO).unwrap(), 0.0);
    }

    #[test]
    fn implicit_randers_matches_closed_form() {
        let randers = RandersGauge::new(0.5).unwrap();
        let implicit = ImplicitGauge::from_fn(move |x| randers.level(x)).unwrap();
        for x in sample_points() {
            assert_abs_diff_eq!(
                implicit.eval(x).unwrap(),
                randers.eval(x).unwrap(),
                epsilon = 1e-13
            );
            let dg = implicit.gradient(x).unwrap() - randers.gradient(x).unwrap();
            assert!(dg.max_abs() < 1e-8);
        }
    }

    #[test]
    fn translation_of_randers_is_ellipsoid() {
        let b = 0.5;
        let a0 = Vec3::new(0.0, 0.0, b / (1.0 - b * b));
        let translated = TranslatedGauge::new(RandersGauge::new(b).unwrap(), a0).unwrap();
        let ellipsoid = EllipsoidGauge::new(b).unwrap();
        for x in sample_points() {
            let (t, e) = (translated.eval(x).unwrap(), ellipsoid.eval(x).unwrap());
            assert!((t - e).abs() <= 1e-14 * e.max(1.0), "{t} vs {e}");
            assert!(
                (translated.gradient(x).unwrap() - ellipsoid.gradient(x).unwrap()).max_abs()
                    < 1e-13
            );
            let dh = translated.hessian(x).unwrap() - ellipsoid.hessian(x).unwrap();
            assert!(dh.max_abs() < 1e-12 * (1.0 + ellipsoid.hessian(x).unwrap().max_abs()));
        }
    }

    #[test]
    fn translated_hessian_matches_differences() {
        let g = TranslatedGauge::new(EllipsoidGauge::new(0.3).unwrap(), Vec3::new(0.2, -0.1, 0.3))
            .unwrap();
        for x in sample_points().take(10) {
            let fd = fd_hessian(&g, x).unwrap();
            let h = g.hessian(x).unwrap();
            assert!((fd - h).max_abs() < 1e-7 * (1.0 + h.max_abs()));
        }
    }

    #[test]
    fn zero_translation_is_identity() {
        let base = RandersGauge::new(0.8).unwrap();
        let g = TranslatedGauge::new(base, Vec3::ZERO).unwrap();
        for x in sample_points() {
            assert_abs_diff_eq!(g.eval(x).unwrap(), base.eval(x).unwrap(), epsilon = 1e-14);
        }
    }

    #[test]
    fn translated_sphere_is_shifted_base_sphere() {
        let base = EuclideanGauge;
        let a0 = Vec3::new(0.3, 0.1, -0.4);
        let g = TranslatedGauge::new(base, a0).unwrap();
        for x in sample_points() {
            let z = x.normalize();
            assert_abs_diff_eq!(g.eval(z + a0).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn origin_must_stay_interior() {
        let base = RandersGauge::new(0.5).unwrap();
        // F(0, 0, 0.7) = 1.05 but F(0, 0, -0.7) = 0.35
        let err = TranslatedGauge::new(base, Vec3::new(0.0, 0.0, -0.7)).unwrap_err();
        assert!(matches!(err, Error::OriginNotInterior { .. }));
        assert!(TranslatedGauge::new(base, Vec3::new(0.0, 0.0, 0.7)).is_ok());
        assert!(ImplicitGauge::from_fn(|x: Vec3| x.norm_squared() + 1.0).is_err());
    }

    #[test]
    fn star_level_is_homogeneous() {
        let g = ImplicitGauge::new(StarLevel { amplitude: 0.5 }).unwrap();
        let x = Vec3::new(0.6, 0.2, -0.3);
        assert_abs_diff_eq!(
            g.eval(x * 3.0).unwrap(),
            3.0 * g.eval(x).unwrap(),
            epsilon = 1e-13
        );
    }
}
