//! The invariants `I1..I4` and the helix / rectifying-curve classifier.

use alloc::vec::Vec;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::frame::{coefficients_at, dq2_ds, FrameCoefficients};
use crate::gauge::Gauge;
use crate::numerics::{grid_derivative, integrate_trapezoid, ToleranceConfig};
#[allow(unused_imports)]
use num_traits::Float;

/// Default classification tolerance for curves with closed-form jets.
pub const CLASS_TOL_ANALYTIC: f64 = 1e-6;
/// Default classification tolerance for sampled curves.
pub const CLASS_TOL_SAMPLED: f64 = 1e-3;
/// Minimum number of samples accepted by [`classify`].
pub const MIN_CLASSIFY_SAMPLES: usize = 5;

/// `I1 = k w`, `I2 = k'/k`, `I3 = k k* + w w*`, `I4 = (w*/k)'`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Invariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl Invariants {
    /// `(p3, p2, -p1 - p3 q2, q1 - q2')`.
    pub fn from_coefficients(c: &FrameCoefficients, dq2_ds: f64) -> Self {
        Invariants {
            i1: c.p3,
            i2: c.p2,
            i3: -c.p1 - c.p3 * c.q2,
            i4: c.q1 - dq2_ds,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.i1, self.i2, self.i3, self.i4]
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &Invariants) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Invariants at one grid point together with its arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSample {
    pub t: f64,
    pub s: f64,
    pub inv: Invariants,
}

/// Invariants of `curve` at parameter `t`.
pub fn invariants_at<G, C>(
    gauge: &G,
    curve: &C,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<Invariants>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let (arc, c) = coefficients_at(gauge, curve, t, cfg)?;
    let dq2 = dq2_ds(gauge, curve, t, arc.s_speed, cfg)?;
    Ok(Invariants::from_coefficients(&c, dq2))
}

/// Invariants on a parameter grid, with arc length measured from the first
/// grid point by the trapezoid rule.
pub fn invariants_along<G, C>(
    gauge: &G,
    curve: &C,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<Vec<InvariantSample>>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let mut speeds = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        let (arc, c) = coefficients_at(gauge, curve, t, cfg)?;
        let dq2 = dq2_ds(gauge, curve, t, arc.s_speed, cfg)?;
        speeds.push((t, arc.s_speed));
        values.push(Invariants::from_coefficients(&c, dq2));
    }
    let s = if grid.len() >= 2 {
        integrate_trapezoid(&speeds)?
            .into_iter()
            .map(|(_, s)| s)
            .collect()
    } else {
        alloc::vec![0.0; grid.len()]
    };
    Ok(grid
        .iter()
        .zip(s)
        .zip(values)
        .map(|((&t, s), inv)| InvariantSample { t, s, inv })
        .collect())
}

/// Invariants of a Euclidean curve from its curvature and torsion:
/// `(kappa tau, kappa'/kappa, kappa^2 + tau^2, (tau/kappa)')`.
pub fn euclidean_oracle(
    kappa: f64,
    tau: f64,
    dkappa_ds: f64,
    d_tau_over_kappa_ds: f64,
) -> Invariants {
    Invariants {
        i1: kappa * tau,
        i2: dkappa_ds / kappa,
        i3: kappa * kappa + tau * tau,
        i4: d_tau_over_kappa_ds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// `I4` vanishes: every rectifying plane contains a line of a fixed direction.
    CylindricalHelix,
    /// `I4` is a non-zero constant: every rectifying plane passes through a fixed point.
    Rectifying,
    Generic,
}

impl core::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            CurveKind::CylindricalHelix => "CylindricalHelix",
            CurveKind::Rectifying => "Rectifying",
            CurveKind::Generic => "Generic",
        })
    }
}

/// Classification verdict with the `I4` statistics behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveClass {
    pub kind: CurveKind,
    /// Median of `I4` over the samples.
    pub i4_median: f64,
    /// `max |I4 - median|`
    pub max_deviation: f64,
    /// `max |I4|`
    pub max_abs_i4: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Classify a curve from `(s, invariants)` samples.
pub fn classify(samples: &[(f64, Invariants)], class_tol: f64) -> Result<CurveClass> {
    if samples.len() < MIN_CLASSIFY_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_CLASSIFY_SAMPLES,
            got: samples.len(),
        });
    }
    if !(class_tol > 0.0) {
        return Err(Error::InvalidParameter("class_tol must be positive"));
    }
    let mut i4: Vec<f64> = samples.iter().map(|(_, inv)| inv.i4).collect();
    if i4.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite I4 sample"));
    }
    let max_abs_i4 = i4.iter().fold(0.0, |m, x| m.max(x.abs()));
    let i4_median = median(&mut i4);
    let max_deviation = i4.iter().fold(0.0, |m, x| m.max((x - i4_median).abs()));
    let kind = if max_abs_i4 <= class_tol {
        CurveKind::CylindricalHelix
    } else if max_deviation <= class_tol && i4_median.abs() > class_tol {
        CurveKind::Rectifying
    } else {
        CurveKind::Generic
    };
    Ok(CurveClass {
        kind,
        i4_median,
        max_deviation,
        max_abs_i4,
    })
}

/// `(s, w'/w, (k*/w)')` from `w'/w = (log|I1|)' - I2` and
/// `(k*/w)' = (I3/I1)' - I4`, differentiated along the grid.
///
/// Where `|I1| < class_tol` the result is an error when `w_nonzero` is set and
/// NaN otherwise.
pub fn derived_invariants(
    samples: &[(f64, Invariants)],
    w_nonzero: bool,
    class_tol: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    if w_nonzero {
        if let Some((_, inv)) = samples.iter().find(|(_, inv)| !(inv.i1.abs() >= class_tol)) {
            return Err(Error::ZeroDenominator { value: inv.i1 });
        }
    }
    let log_i1: Vec<_> = samples
        .iter()
        .map(|(s, inv)| (*s, inv.i1.abs().ln()))
        .collect();
    let ratio: Vec<_> = samples
        .iter()
        .map(|(s, inv)| (*s, inv.i3 / inv.i1))
        .collect();
    let d_log = grid_derivative(&log_i1)?;
    let d_ratio = grid_derivative(&ratio)?;
    Ok(samples
        .iter()
        .enumerate()
        .map(|(i, (s, inv))| {
            if inv.i1.abs() < class_tol {
                (*s, f64::NAN, f64::NAN)
            } else {
                (*s, d_log[i] - inv.i2, d_ratio[i] - inv.i4)
            }
        })
        .collect())
}
