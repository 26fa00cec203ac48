//! Regular curves, their derivative jets, and reparameterization by gauge
//! arc length.

mod analytic;
mod sampled;

pub use analytic::{
    CircularHelix, Ellipse4, FourierCurve, FourierTerm, Helix1, LinearImage, RectifyingSpiral,
    Scaled, SpeedProfile,
};
pub use sampled::{jet_from_samples, SampledCurve, DEFAULT_FIT_ORDER, FIT_WINDOW};

use alloc::boxed::Box;
use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::gauge::{birkhoff_orthogonal, Gauge};
use crate::numerics::{ToleranceConfig, Vec3};

/// Sine of the angle between `d1` and `d2` below which the osculating plane
/// is considered undefined.
pub const CURVATURE_FLOOR: f64 = 1e-8;

/// Position and parameter derivatives of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub t: f64,
    pub gamma: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
    pub d4: Option<Vec3>,
}

impl CurveJet {
    /// Error unless `d1 != 0` and `{d1, d2}` are independent.
    pub fn check_regular(&self) -> Result<()> {
        let n = self.d1.cross(self.d2).norm();
        let scale = self.d1.norm() * self.d2.norm();
        if !(self.d1.norm() > 0.0) || !(n > CURVATURE_FLOOR * scale) {
            return Err(Error::DegenerateCurvature { t: self.t });
        }
        Ok(())
    }
}

/// An oriented smooth curve given through its jets.
pub trait Curve: Send + Sync {
    fn jet(&self, t: f64) -> Result<CurveJet>;

    /// Jet at `t` for a computation centred at `anchor`.
    ///
    /// Piecewise representations use this to evaluate every stencil point of
    /// one finite difference on the same local piece.
    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        let _ = anchor;
        self.jet(t)
    }
}

impl<C: Curve + ?Sized> Curve for &C {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        (**self).jet(t)
    }
    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        (**self).jet_anchored(t, anchor)
    }
}

impl<C: Curve + ?Sized> Curve for Box<C> {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        (**self).jet(t)
    }
    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        (**self).jet_anchored(t, anchor)
    }
}

impl<C: Curve + ?Sized> Curve for Arc<C> {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        (**self).jet(t)
    }
    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        (**self).jet_anchored(t, anchor)
    }
}

/// Arc-length derivatives of a curve at one point, together with the
/// Birkhoff normal `v` of the osculating plane and its arc-length derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcJet {
    /// Curve parameter.
    pub t: f64,
    /// `ds/dt = F(gamma')`.
    pub s_speed: f64,
    pub e1: Vec3,
    pub de1_ds: Vec3,
    pub d2e1_ds2: Vec3,
    pub v: Vec3,
    pub dv_ds: Vec3,
}

/// `ds/dt = F(gamma'(t))`.
pub fn speed<G: Gauge + ?Sized>(gauge: &G, jet: &CurveJet) -> Result<f64> {
    if !(jet.d1.norm() > 0.0) {
        return Err(Error::DegenerateCurvature { t: jet.t });
    }
    gauge.eval(jet.d1)
}

/// Birkhoff normal of the osculating plane `span{d1, d2}` at a jet.
fn osculating_normal<G: Gauge + ?Sized>(gauge: &G, jet: &CurveJet) -> Result<Vec3> {
    jet.check_regular()?;
    birkhoff_orthogonal(gauge, jet.d1, jet.d2)
}

/// Arc-length frame data at parameter `t`.
pub fn arc_reparameterize<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<ArcJet>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    arc_reparameterize_anchored(gauge, curve, t, t, cfg)
}

/// [`arc_reparameterize`] with jets taken relative to `anchor`.
pub fn arc_reparameterize_anchored<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    anchor: f64,
    cfg: &ToleranceConfig,
) -> Result<ArcJet>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let jet = curve.jet_anchored(t, anchor)?;
    jet.check_regular()?;
    let CurveJet { d1, d2, d3, .. } = jet;

    let phi = gauge.eval(d1)?;
    let grad = gauge.gradient(d1)?;
    let hess = gauge.hessian(d1)?;
    let dphi = grad.dot(d2);
    let ddphi = grad.dot(d3) + hess.bilinear(d2, d2);

    let e1 = d1 / phi;
    let e1_t = d2 / phi - d1 * (dphi / (phi * phi));
    let e1_tt = d3 / phi
        - d2 * (2.0 * dphi / (phi * phi))
        - d1 * (ddphi / (phi * phi) - 2.0 * dphi * dphi / (phi * phi * phi));
    let de1_ds = e1_t / phi;
    let d2e1_ds2 = (e1_tt - e1_t * (dphi / phi)) / (phi * phi);

    let v = birkhoff_orthogonal(gauge, d1, d2)?;
    let h = cfg.fd_step(t);
    let v_plus = osculating_normal(gauge, &curve.jet_anchored(t + h, anchor)?)?;
    let v_minus = osculating_normal(gauge, &curve.jet_anchored(t - h, anchor)?)?;
    let dv_ds = (v_plus - v_minus) / (2.0 * h * phi);

    Ok(ArcJet {
        t,
        s_speed: phi,
        e1,
        de1_ds,
        d2e1_ds2,
        v,
        dv_ds,
    })
}
