use super::Gauge;
use crate::error::{Error, Result};
use crate::numerics::{Mat3, Vec3};
#[allow(unused_imports)]
use num_traits::Float;

fn check_b(b: f64) -> Result<f64> {
    if b.is_finite() && b > 0.0 && b < 1.0 {
        Ok(b)
    } else {
        Err(Error::InvalidParameter("b must satisfy 0 < b < 1"))
    }
}

/// The Euclidean norm.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EuclideanGauge;

impl Gauge for EuclideanGauge {
    fn eval(&self, x: Vec3) -> Result<f64> {
        Ok(x.norm())
    }

    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        Ok(x / x.norm())
    }

    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        Ok(unit_projector_hessian(x))
    }
}

/// `(I - x x^T / |x|^2) / |x|`
fn unit_projector_hessian(x: Vec3) -> Mat3 {
    let r = x.norm();
    let u = x / r;
    (Mat3::identity() - u.outer(u)).scale(1.0 / r)
}

/// Randers norm `F(x) = |x| + b x3` with `0 < b < 1`.
///
/// Its unit sphere is the rotational ellipsoid
/// `(1-b^2)(x1^2+x2^2) + ((1-b^2) x3 + b)^2 = 1`, which is not centred at the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandersGauge {
    b: f64,
}

impl RandersGauge {
    pub fn new(b: f64) -> Result<Self> {
        check_b(b).map(|b| RandersGauge { b })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The ellipsoid level function whose level-1 set is the unit sphere.
    pub fn level(&self, x: Vec3) -> f64 {
        let c = 1.0 - self.b * self.b;
        c * (x.x * x.x + x.y * x.y) + (c * x.z + self.b).powi(2)
    }

    /// Birkhoff-orthogonal unit vector to a plane with normal `y`, in closed form.
    pub fn birkhoff(&self, y: Vec3) -> Result<Vec3> {
        randers_birkhoff(self.b, y)
    }
}

impl Gauge for RandersGauge {
    fn eval(&self, x: Vec3) -> Result<f64> {
        Ok(x.norm() + self.b * x.z)
    }

    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        Ok(x / x.norm() + Vec3::Z * self.b)
    }

    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        Ok(unit_projector_hessian(x))
    }
}

/// Closed-form Birkhoff-orthogonal vector for the Randers norm with
/// parameter `b`, for the oriented plane with normal `y = X x Y`.
///
/// With `D = (1-b^2)(y1^2+y2^2) + y3^2` the result is
/// `(y1/sqrt D, y2/sqrt D, (y3/sqrt D - b)/(1-b^2))`.
pub fn randers_birkhoff(b: f64, y: Vec3) -> Result<Vec3> {
    if !(b.is_finite() && (0.0..1.0).contains(&b)) {
        return Err(Error::InvalidParameter("b must satisfy 0 < b < 1"));
    }
    let c = 1.0 - b * b;
    let d = c * (y.x * y.x + y.y * y.y) + y.z * y.z;
    let root = d.sqrt();
    if !(root > 0.0) || !root.is_finite() || !(root * root > 0.0) {
        return Err(Error::DegenerateDirection);
    }
    Ok(Vec3::new(y.x / root, y.y / root, (y.z / root - b) / c))
}

/// The centred ellipsoidal norm
/// `F(x) = sqrt((1-b^2)(x1^2+x2^2) + (1-b^2)^2 x3^2)`.
///
/// Its unit sphere is the Randers unit sphere translated by
/// `(0, 0, b/(1-b^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidGauge {
    b: f64,
    diag: [f64; 3],
}

impl EllipsoidGauge {
    pub fn new(b: f64) -> Result<Self> {
        let b = check_b(b)?;
        let c = 1.0 - b * b;
        Ok(EllipsoidGauge {
            b,
            diag: [c, c, c * c],
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    fn metric(&self, x: Vec3) -> Vec3 {
        Vec3::new(self.diag[0] * x.x, self.diag[1] * x.y, self.diag[2] * x.z)
    }
}

impl Gauge for EllipsoidGauge {
    fn eval(&self, x: Vec3) -> Result<f64> {
        Ok(x.dot(self.metric(x)).sqrt())
    }

    fn gradient(&self, x: Vec3) -> Result<Vec3> {
        let mx = self.metric(x);
        Ok(mx / x.dot(mx).sqrt())
    }

    fn hessian(&self, x: Vec3) -> Result<Mat3> {
        let mx = self.metric(x);
        let f = x.dot(mx).sqrt();
        let m = Mat3::diagonal(self.diag[0], self.diag[1], self.diag[2]);
        Ok(m.scale(1.0 / f) - mx.outer(mx).scale(1.0 / (f * f * f)))
    }
}
