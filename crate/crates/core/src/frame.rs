//! Decompositions in the moving basis `{e1, e1', v}` and the Frenet-type
//! frame `{e1, e2, e3}` built from them.
//!
//! Along an arc-length parameterized curve
//! `e1'' = p1 e1 + p2 e1' + p3 v` and `v' = q1 e1 + q2 e1'`. With
//! `k = c1 exp(int p2 ds)`, `f = -int q1 ds + c2`, `e2 = e1'/k` and
//! `e3 = v + f e1` the frame satisfies
//!
//! ```text
//! e1' = k e2,   e2' = -k* e1 + w e3,   e3' = -w* e2
//! ```
//!
//! with `k* = (f p3 - p1)/k`, `w = p3/k` and `w* = -k (f + q2)`.

use alloc::vec::Vec;

use crate::curve::{arc_reparameterize_anchored, ArcJet, Curve};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::invariants::Invariants;
use crate::numerics::{
    det3, grid_derivative, integrate_trapezoid, solve3x3, ToleranceConfig, Vec3,
};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative parameter step of the outer stencil used to difference `q2`.
pub const Q2_STEP_SCALE: f64 = 2e-3;

/// Coefficients of `e1''` in `{e1, e1', v}` and of `v'` in `{e1, e1'}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameCoefficients {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub q1: f64,
    pub q2: f64,
}

/// `(p1, p2, p3)` with `e1'' = p1 e1 + p2 e1' + p3 v`.
pub fn decompose_p(arc: &ArcJet, cfg: &ToleranceConfig) -> Result<(f64, f64, f64)> {
    let [p1, p2, p3] = solve3x3([arc.e1, arc.de1_ds, arc.v], arc.d2e1_ds2)?;
    let rebuilt = arc.e1 * p1 + arc.de1_ds * p2 + arc.v * p3;
    let residual = (rebuilt - arc.d2e1_ds2).max_abs();
    if residual > cfg.residual_tol * arc.d2e1_ds2.max_abs().max(1.0) {
        return Err(Error::ResidualTooLarge { residual });
    }
    Ok((p1, p2, p3))
}

/// `(q1, q2)` from the orthogonal projection of `dv/ds` onto `span{e1, e1'}`.
///
/// Fails with [`Error::ResidualTooLarge`] when the out-of-plane part exceeds
/// `residual_tol`.
pub fn decompose_q(arc: &ArcJet, cfg: &ToleranceConfig) -> Result<(f64, f64)> {
    let (a, b, dv) = (arc.e1, arc.de1_ds, arc.dv_ds);
    let (g11, g12, g22) = (a.dot(a), a.dot(b), b.dot(b));
    let (r1, r2) = (a.dot(dv), b.dot(dv));
    let det = g11 * g22 - g12 * g12;
    if !(det > crate::numerics::DEGENERACY_FLOOR * g11 * g22) {
        return Err(Error::SingularSystem { det });
    }
    let q1 = (r1 * g22 - r2 * g12) / det;
    let q2 = (r2 * g11 - r1 * g12) / det;
    let residual = (dv - a * q1 - b * q2).max_abs();
    if residual > cfg.residual_tol * dv.max_abs().max(1.0) {
        return Err(Error::ResidualTooLarge { residual });
    }
    Ok((q1, q2))
}

/// Arc jet and both decompositions at `t`, with jets anchored at `anchor`.
pub fn coefficients_at_anchored<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    anchor: f64,
    cfg: &ToleranceConfig,
) -> Result<(ArcJet, FrameCoefficients)>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let arc = arc_reparameterize_anchored(gauge, curve, t, anchor, cfg)?;
    let (p1, p2, p3) = decompose_p(&arc, cfg)?;
    let (q1, q2) = decompose_q(&arc, cfg)?;
    Ok((arc, FrameCoefficients { p1, p2, p3, q1, q2 }))
}

/// Arc jet and both decompositions at `t`.
pub fn coefficients_at<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<(ArcJet, FrameCoefficients)>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    coefficients_at_anchored(gauge, curve, t, t, cfg)
}

/// `dq2/ds` at `t` from five-point central differences of `q2` in the curve
/// parameter with steps `h` and `h/2`, Richardson-extrapolated, divided by
/// `ds/dt`.
///
/// `q2` carries the rounding noise of a differenced support point, so short
/// stencils amplify it; the sixth-order combination allows a long step.
pub fn dq2_ds<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    s_speed: f64,
    cfg: &ToleranceConfig,
) -> Result<f64>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let h = Q2_STEP_SCALE * t.abs().max(1.0);
    let q2 = |k: f64| coefficients_at_anchored(gauge, curve, t + k * h, t, cfg).map(|(_, c)| c.q2);
    let (m2, m1, m05) = (q2(-2.0)?, q2(-1.0)?, q2(-0.5)?);
    let (p05, p1, p2) = (q2(0.5)?, q2(1.0)?, q2(2.0)?);
    let coarse = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let fine = (m1 - 8.0 * m05 + 8.0 * p05 - p1) / (6.0 * h);
    Ok((16.0 * fine - coarse) / 15.0 / s_speed)
}

/// Remaining freedom `k -> a k`, `f -> f + b` of the frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameFreedom {
    pub a: f64,
    pub b: f64,
}

impl FrameFreedom {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter("frame freedom needs a > 0"));
        }
        Ok(FrameFreedom { a, b })
    }

    /// The single change equivalent to `self` followed by `then`.
    pub fn then(self, then: FrameFreedom) -> FrameFreedom {
        FrameFreedom {
            a: self.a * then.a,
            b: self.b + then.b,
        }
    }
}

/// The Frenet-type frame and its coefficients at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub t: f64,
    /// Arc length from the first grid point.
    pub s: f64,
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
    pub k: f64,
    pub kstar: f64,
    pub w: f64,
    pub wstar: f64,
    /// `dk/ds`
    pub dk_ds: f64,
    /// `dw*/ds`
    pub dwstar_ds: f64,
    pub c1: f64,
    pub c2: f64,
    pub f: f64,
    pub coeffs: FrameCoefficients,
}

impl FrenetFrame {
    /// `(k w, k'/k, k k* + w w*, (w*/k)')` evaluated pointwise.
    pub fn invariants(&self) -> Invariants {
        Invariants {
            i1: self.k * self.w,
            i2: self.dk_ds / self.k,
            i3: self.k * self.kstar + self.w * self.wstar,
            i4: (self.dwstar_ds * self.k - self.wstar * self.dk_ds) / (self.k * self.k),
        }
    }

    /// The Birkhoff normal `v = e3 - f e1`.
    pub fn v(&self) -> Vec3 {
        self.e3 - self.e1 * self.f
    }
}

/// The frame obtained by `k -> a k`, `f -> f + b`.
pub fn frame_change(frame: &FrenetFrame, freedom: FrameFreedom) -> FrenetFrame {
    let FrameFreedom { a, b } = freedom;
    FrenetFrame {
        e2: frame.e2 / a,
        e3: frame.e3 + frame.e1 * b,
        k: a * frame.k,
        kstar: (frame.kstar + b * frame.w) / a,
        w: frame.w / a,
        wstar: a * (frame.wstar - b * frame.k),
        dk_ds: a * frame.dk_ds,
        dwstar_ds: a * (frame.dwstar_ds - b * frame.dk_ds),
        c1: a * frame.c1,
        c2: frame.c2 + b,
        f: frame.f + b,
        ..*frame
    }
}

/// Frenet-type frames on a grid of curve parameters.
///
/// Arc length, `int p2 ds` and `int q1 ds` are cumulative trapezoid sums
/// starting at the first grid point, where `k = c1` and `f = c2`.
pub fn build_frame<G, C>(
    gauge: &G,
    curve: &C,
    grid: &[f64],
    c1: f64,
    c2: f64,
    cfg: &ToleranceConfig,
) -> Result<Vec<FrenetFrame>>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    if !(c1 > 0.0 && c1.is_finite() && c2.is_finite()) {
        return Err(Error::InvalidParameter("frame constants need c1 > 0"));
    }
    if grid.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: grid.len(),
        });
    }
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let (arc, coeffs) = coefficients_at(gauge, curve, t, cfg)?;
        let dq2 = dq2_ds(gauge, curve, t, arc.s_speed, cfg)?;
        points.push((arc, coeffs, dq2));
    }
    let speed: Vec<_> = points.iter().map(|(a, ..)| (a.t, a.s_speed)).collect();
    let s = integrate_trapezoid(&speed)?;
    let p2: Vec<_> = points
        .iter()
        .map(|(a, c, _)| (a.t, c.p2 * a.s_speed))
        .collect();
    let q1: Vec<_> = points
        .iter()
        .map(|(a, c, _)| (a.t, c.q1 * a.s_speed))
        .collect();
    let int_p2 = integrate_trapezoid(&p2)?;
    let int_q1 = integrate_trapezoid(&q1)?;

    Ok(points
        .iter()
        .enumerate()
        .map(|(i, (arc, c, dq2))| {
            let k = c1 * int_p2[i].1.exp();
            let f = c2 - int_q1[i].1;
            let wstar = -k * (f + c.q2);
            FrenetFrame {
                t: arc.t,
                s: s[i].1,
                e1: arc.e1,
                e2: arc.de1_ds / k,
                e3: arc.v + arc.e1 * f,
                k,
                kstar: (f * c.p3 - c.p1) / k,
                w: c.p3 / k,
                wstar,
                dk_ds: k * c.p2,
                // (w*)' = -k'(f + q2) - k(f' + q2') with f' = -q1
                dwstar_ds: -k * c.p2 * (f + c.q2) - k * (dq2 - c.q1),
                c1,
                c2,
                f,
                coeffs: *c,
            }
        })
        .collect())
}

/// Max-norm residuals of `e1' - k e2`, `e2' + k* e1 - w e3` and
/// `e3' + w* e2` with derivatives taken along the grid in `s`.
pub fn frenet_residuals(frames: &[FrenetFrame]) -> Result<Vec<[f64; 3]>> {
    let derivative = |pick: &dyn Fn(&FrenetFrame) -> Vec3| -> Result<Vec<Vec3>> {
        let mut cols = [Vec::new(), Vec::new(), Vec::new()];
        for (axis, col) in cols.iter_mut().enumerate() {
            let samples: Vec<_> = frames.iter().map(|fr| (fr.s, pick(fr)[axis])).collect();
            *col = grid_derivative(&samples)?;
        }
        Ok((0..frames.len())
            .map(|i| Vec3::new(cols[0][i], cols[1][i], cols[2][i]))
            .collect())
    };
    let de1 = derivative(&|fr| fr.e1)?;
    let de2 = derivative(&|fr| fr.e2)?;
    let de3 = derivative(&|fr| fr.e3)?;
    Ok(frames
        .iter()
        .enumerate()
        .map(|(i, fr)| {
            [
                (de1[i] - fr.e2 * fr.k).max_abs(),
                (de2[i] + fr.e1 * fr.kstar - fr.e3 * fr.w).max_abs(),
                (de3[i] + fr.e2 * fr.wstar).max_abs(),
            ]
        })
        .collect())
}

/// `det(e1, e2, e3)` along the frames.
pub fn frame_orientation(frames: &[FrenetFrame]) -> Vec<f64> {
    frames.iter().map(|fr| det3(fr.e1, fr.e2, fr.e3)).collect()
}
