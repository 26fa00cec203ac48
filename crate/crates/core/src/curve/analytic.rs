//! Curves with closed-form jets.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, SQRT_2};

use super::{Curve, CurveJet};
use crate::error::{Error, Result};
use crate::numerics::{Mat3, Vec3};
#[allow(unused_imports)]
use num_traits::Float;

/// `(c, s)` for `cos(w t)`, `sin(w t)` and the four derivatives of
/// `C cos(w t) + S sin(w t)`.
fn trig_jet(cos_coef: Vec3, sin_coef: Vec3, w: f64, t: f64) -> [Vec3; 5] {
    let (s, c) = (w * t).sin_cos();
    let base = cos_coef * c + sin_coef * s;
    let quarter = sin_coef * c - cos_coef * s;
    [
        base,
        quarter * w,
        -base * (w * w),
        -quarter * (w * w * w),
        base * (w * w * w * w),
    ]
}

/// The helix `(cos t, sin t, t) / (sqrt 2 + b)`, unit speed for the Randers
/// norm with the same `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Helix1 {
    pub b: f64,
}

impl Helix1 {
    pub fn new(b: f64) -> Self {
        Helix1 { b }
    }
}

impl Curve for Helix1 {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        let k = 1.0 / (SQRT_2 + self.b);
        let [p, d1, d2, d3, d4] = trig_jet(Vec3::X * k, Vec3::Y * k, 1.0, t);
        Ok(CurveJet {
            t,
            gamma: p + Vec3::Z * (k * t),
            d1: d1 + Vec3::Z * k,
            d2,
            d3,
            d4: Some(d4),
        })
    }
}

/// `(R cos t, R sin t, c t)`; a planar circle when `c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularHelix {
    pub radius: f64,
    pub pitch: f64,
}

impl CircularHelix {
    pub fn new(radius: f64, pitch: f64) -> Self {
        CircularHelix { radius, pitch }
    }

    /// Euclidean curvature and torsion `(R, c) / (R^2 + c^2)`.
    pub fn curvature_torsion(&self) -> (f64, f64) {
        let d = self.radius * self.radius + self.pitch * self.pitch;
        (self.radius / d, self.pitch / d)
    }
}

impl Curve for CircularHelix {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        let r = self.radius;
        let [p, d1, d2, d3, d4] = trig_jet(Vec3::X * r, Vec3::Y * r, 1.0, t);
        Ok(CurveJet {
            t,
            gamma: p + Vec3::Z * (self.pitch * t),
            d1: d1 + Vec3::Z * self.pitch,
            d2,
            d3,
            d4: Some(d4),
        })
    }
}

/// The ellipse `(0, sqrt(1-b^2) cos t, sin t) / (1-b^2)`, unit speed for the
/// centred ellipsoidal norm with the same `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse4 {
    pub b: f64,
}

impl Ellipse4 {
    pub fn new(b: f64) -> Self {
        Ellipse4 { b }
    }
}

impl Curve for Ellipse4 {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        let c = 1.0 - self.b * self.b;
        let [p, d1, d2, d3, d4] = trig_jet(Vec3::Y * (c.sqrt() / c), Vec3::Z / c, 1.0, t);
        Ok(CurveJet {
            t,
            gamma: p,
            d1,
            d2,
            d3,
            d4: Some(d4),
        })
    }
}

/// One harmonic `cos_coef cos(freq t) + sin_coef sin(freq t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTerm {
    pub freq: f64,
    pub cos_coef: Vec3,
    pub sin_coef: Vec3,
}

/// `origin + drift t + sum of harmonics`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCurve {
    pub origin: Vec3,
    pub drift: Vec3,
    pub terms: Vec<FourierTerm>,
}

impl FourierCurve {
    pub fn new(origin: Vec3, drift: Vec3, terms: Vec<FourierTerm>) -> Self {
        FourierCurve {
            origin,
            drift,
            terms,
        }
    }

    /// [`Helix1`] with `eps sin(2t) / (sqrt 2 + b)` added to the third coordinate.
    pub fn perturbed_helix(b: f64, eps: f64) -> Self {
        let k = 1.0 / (SQRT_2 + b);
        FourierCurve::new(
            Vec3::ZERO,
            Vec3::Z * k,
            alloc::vec![
                FourierTerm {
                    freq: 1.0,
                    cos_coef: Vec3::X * k,
                    sin_coef: Vec3::Y * k,
                },
                FourierTerm {
                    freq: 2.0,
                    cos_coef: Vec3::ZERO,
                    sin_coef: Vec3::Z * (eps * k),
                },
            ],
        )
    }
}

impl Curve for FourierCurve {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        let mut acc = [
            self.origin + self.drift * t,
            self.drift,
            Vec3::ZERO,
            Vec3::ZERO,
            Vec3::ZERO,
        ];
        for term in &self.terms {
            let j = trig_jet(term.cos_coef, term.sin_coef, term.freq, t);
            for (a, d) in acc.iter_mut().zip(j) {
                *a += d;
            }
        }
        Ok(CurveJet {
            t,
            gamma: acc[0],
            d1: acc[1],
            d2: acc[2],
            d3: acc[3],
            d4: Some(acc[4]),
        })
    }
}

/// Euclidean rectifying curve `a sec(t) y(t)` for `|t| < pi/2`, where
/// `y(t) = (r cos(t/r), r sin(t/r), sqrt(1 - r^2))` is a unit-speed small
/// circle on the unit sphere.
///
/// Every rectifying plane passes through the origin; its invariant `I4` has
/// magnitude `1/a` under the Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectifyingSpiral {
    pub a: f64,
    pub r: f64,
}

impl RectifyingSpiral {
    pub fn new(a: f64, r: f64) -> Result<Self> {
        if !(a > 0.0) || !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(
                "rectifying spiral needs a > 0 and 0 < r < 1",
            ));
        }
        Ok(RectifyingSpiral { a, r })
    }
}

impl Curve for RectifyingSpiral {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        if !(t.abs() < FRAC_PI_2) {
            return Err(Error::OutOfRange { t });
        }
        let (a, r) = (self.a, self.r);
        let sec = 1.0 / t.cos();
        let tan = t.tan();
        let (s3, s5) = (sec.powi(3), sec.powi(5));
        let rho = [
            a * sec,
            a * sec * tan,
            a * (sec * tan * tan + s3),
            a * (sec * tan.powi(3) + 5.0 * s3 * tan),
            a * (sec * tan.powi(4) + 18.0 * s3 * tan * tan + 5.0 * s5),
        ];
        let [circle, c1, c2, c3, c4] = trig_jet(Vec3::X * r, Vec3::Y * r, 1.0 / r, t);
        let y = [circle + Vec3::Z * (1.0 - r * r).sqrt(), c1, c2, c3, c4];
        // Leibniz rule for rho * y
        let binom = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 6.0, 4.0, 1.0],
        ];
        let d =
            |n: usize| (0..=n).fold(Vec3::ZERO, |acc, k| acc + y[n - k] * (binom[n][k] * rho[k]));
        Ok(CurveJet {
            t,
            gamma: d(0),
            d1: d(1),
            d2: d(2),
            d3: d(3),
            d4: Some(d(4)),
        })
    }
}

/// Image of a curve under a fixed linear map.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage<C> {
    pub map: Mat3,
    pub curve: C,
}

impl<C: Curve> Curve for LinearImage<C> {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        self.jet_anchored(t, t)
    }

    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        let j = self.curve.jet_anchored(t, anchor)?;
        let m = |v: Vec3| self.map.mul_vec(v);
        Ok(CurveJet {
            t,
            gamma: m(j.gamma),
            d1: m(j.d1),
            d2: m(j.d2),
            d3: m(j.d3),
            d4: j.d4.map(m),
        })
    }
}

/// Positive speed profiles `f(t)` for [`Scaled`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeedProfile {
    /// `f = c`
    Constant(f64),
    /// `f = c + sin t`, `c > 1`
    SinePlus(f64),
    /// `f = 1 / (c + sin t)`, `c > 1`
    InverseSinePlus(f64),
}

impl SpeedProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SpeedProfile::Constant(c) => c > 0.0 && c.is_finite(),
            SpeedProfile::SinePlus(c) | SpeedProfile::InverseSinePlus(c) => {
                c > 1.0 && c.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("speed profile must stay positive"))
        }
    }

    /// `[f, f', f'', f''']` at `t`.
    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        let (s, c) = t.sin_cos();
        match *self {
            SpeedProfile::Constant(k) => [k, 0.0, 0.0, 0.0],
            SpeedProfile::SinePlus(k) => [k + s, c, -s, -c],
            SpeedProfile::InverseSinePlus(k) => {
                let u = k + s;
                let (u2, u3, u4) = (u * u, u * u * u, u * u * u * u);
                [
                    1.0 / u,
                    -c / u2,
                    s / u2 + 2.0 * c * c / u3,
                    c / u2 - 6.0 * s * c / u3 - 6.0 * c * c * c / u4,
                ]
            }
        }
    }
}

/// The curve with `gamma' = f(t) a'(t)` for a base curve `a` and speed
/// profile `f`, anchored so that `gamma(0) = a(0)`.
///
/// It shares tangent directions and osculating planes with `a`; only the
/// speed along them changes.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaled<C> {
    pub base: C,
    pub profile: SpeedProfile,
}

/// Nodes and weights of 5-point Gauss-Legendre quadrature on [-1, 1].
const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

impl<C: Curve> Scaled<C> {
    pub fn new(base: C, profile: SpeedProfile) -> Self {
        Scaled { base, profile }
    }

    fn velocity(&self, t: f64, anchor: f64) -> Result<Vec3> {
        Ok(self.base.jet_anchored(t, anchor)?.d1 * self.profile.derivatives(t)[0])
    }

    /// `a(0) + int_0^t f a' dt` by composite Gauss-Legendre quadrature.
    fn position(&self, t: f64, anchor: f64) -> Result<Vec3> {
        let start = self.base.jet_anchored(0.0, anchor)?.gamma;
        let panels = ((t.abs() / 0.25).ceil() as usize).max(1);
        let h = t / panels as f64;
        let mut acc = Vec3::ZERO;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in GAUSS5 {
                acc += self.velocity(mid + 0.5 * h * x, anchor)? * (0.5 * h * w);
            }
        }
        Ok(start + acc)
    }
}

impl<C: Curve> Curve for Scaled<C> {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        self.jet_anchored(t, t)
    }

    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        self.profile.validate()?;
        let a = self.base.jet_anchored(t, anchor)?;
        let [f, f1, f2, f3] = self.profile.derivatives(t);
        Ok(CurveJet {
            t,
            gamma: self.position(t, anchor)?,
            d1: a.d1 * f,
            d2: a.d1 * f1 + a.d2 * f,
            d3: a.d1 * f2 + a.d2 * (2.0 * f1) + a.d3 * f,
            d4: a
                .d4
                .map(|d4| a.d1 * f3 + a.d2 * (3.0 * f2) + a.d3 * (3.0 * f1) + d4 * f),
        })
    }
}
