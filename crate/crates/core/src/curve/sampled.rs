//! Curves given by samples, differentiated through local polynomial fits.

use alloc::vec::Vec;

use super::{Curve, CurveJet};
use crate::error::{Error, Result};
use crate::numerics::Vec3;
#[allow(unused_imports)]
use num_traits::Float;

/// Default polynomial degree of the local fits.
pub const DEFAULT_FIT_ORDER: usize = 6;
/// Number of consecutive samples in each least-squares window.
pub const FIT_WINDOW: usize = 9;
/// Minimum number of rows in a [`SampledCurve`].
const MIN_ROWS: usize = 7;
/// Samples required on each side of an evaluation point.
const MIN_SIDE: usize = 3;

/// A curve known only at sample points `(t_i, gamma_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    rows: Vec<(f64, Vec3)>,
    order: usize,
}

impl SampledCurve {
    pub fn new(rows: Vec<(f64, Vec3)>) -> Result<Self> {
        Self::with_order(rows, DEFAULT_FIT_ORDER)
    }

    pub fn with_order(rows: Vec<(f64, Vec3)>, order: usize) -> Result<Self> {
        if rows.len() < MIN_ROWS {
            return Err(Error::InsufficientPoints {
                needed: MIN_ROWS,
                got: rows.len(),
            });
        }
        if !(1..FIT_WINDOW).contains(&order) {
            return Err(Error::InvalidParameter("fit order must be between 1 and 8"));
        }
        for (i, w) in rows.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::NonMonotoneGrid { index: i + 1 });
            }
        }
        if rows.iter().any(|(t, p)| !t.is_finite() || !p.is_finite()) {
            return Err(Error::InvalidParameter("samples must be finite"));
        }
        Ok(SampledCurve { rows, order })
    }

    pub fn rows(&self) -> &[(f64, Vec3)] {
        &self.rows
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Parameter range on which jets are available.
    pub fn valid_range(&self) -> (f64, f64) {
        let n = self.rows.len();
        (self.rows[MIN_SIDE].0, self.rows[n - 1 - MIN_SIDE].0)
    }

    /// First index of the window centred nearest to `anchor`.
    fn window_start(&self, anchor: f64) -> Result<usize> {
        let (lo, hi) = self.valid_range();
        if !(anchor >= lo && anchor <= hi) {
            return Err(Error::OutOfRange { t: anchor });
        }
        let n = self.rows.len();
        let width = FIT_WINDOW.min(n);
        let nearest = self
            .rows
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 .0 - anchor).abs().total_cmp(&(b.1 .0 - anchor).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(nearest.saturating_sub(width / 2).min(n - width))
    }
}

/// Least-squares coefficients of `sum c_k u^k` by Householder QR.
#[allow(clippy::needless_range_loop)]
fn poly_fit(us: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    let m = us.len();
    let n = degree + 1;
    let mut a: Vec<Vec<f64>> = us
        .iter()
        .map(|&u| (0..n).map(|k| u.powi(k as i32)).collect())
        .collect();
    let mut b = ys.to_vec();
    for j in 0..n {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for k in j..n {
            let dot: f64 = (j..m).map(|i| v[i - j] * a[i][k]).sum();
            for i in j..m {
                a[i][k] -= 2.0 * dot / vv * v[i - j];
            }
        }
        let dot: f64 = (j..m).map(|i| v[i - j] * b[i]).sum();
        for i in j..m {
            b[i] -= 2.0 * dot / vv * v[i - j];
        }
    }
    let mut c = alloc::vec![0.0; n];
    for j in (0..n).rev() {
        let tail: f64 = (j + 1..n).map(|k| a[j][k] * c[k]).sum();
        c[j] = (b[j] - tail) / a[j][j];
    }
    c.iter().all(|x| x.is_finite()).then_some(c)
}

/// `d^order/du^order` of the polynomial with coefficients `c` at `u`.
fn poly_derivative(c: &[f64], u: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for k in (order..c.len()).rev() {
        let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
        acc = acc * u + c[k] * falling;
    }
    acc
}

/// Jet at `t` from the fit window centred nearest to `anchor`.
fn jet_in_window(samples: &SampledCurve, t: f64, anchor: f64) -> Result<CurveJet> {
    let start = samples.window_start(anchor)?;
    let width = FIT_WINDOW.min(samples.rows.len());
    let window = &samples.rows[start..start + width];
    let centre = 0.5 * (window[0].0 + window[width - 1].0);
    let half = 0.5 * (window[width - 1].0 - window[0].0);
    let us: Vec<f64> = window.iter().map(|(ti, _)| (ti - centre) / half).collect();
    let degree = samples.order.min(width - 1);
    let mut coeffs = [Vec::new(), Vec::new(), Vec::new()];
    for (axis, c) in coeffs.iter_mut().enumerate() {
        let ys: Vec<f64> = window.iter().map(|(_, p)| p[axis]).collect();
        *c = poly_fit(&us, &ys, degree).ok_or(Error::InsufficientPoints {
            needed: degree + 1,
            got: width,
        })?;
    }
    let u = (t - centre) / half;
    let d = |order: usize| {
        let scale = half.powi(-(order as i32));
        Vec3::new(
            poly_derivative(&coeffs[0], u, order),
            poly_derivative(&coeffs[1], u, order),
            poly_derivative(&coeffs[2], u, order),
        ) * scale
    };
    Ok(CurveJet {
        t,
        gamma: d(0),
        d1: d(1),
        d2: d(2),
        d3: d(3),
        d4: (degree >= 4).then(|| d(4)),
    })
}

/// Jet of a sampled curve at `t` from the local least-squares polynomial.
pub fn jet_from_samples(samples: &SampledCurve, t: f64) -> Result<CurveJet> {
    jet_in_window(samples, t, t)
}

impl Curve for SampledCurve {
    fn jet(&self, t: f64) -> Result<CurveJet> {
        jet_from_samples(self, t)
    }

    fn jet_anchored(&self, t: f64, anchor: f64) -> Result<CurveJet> {
        jet_in_window(self, t, anchor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Helix1;

    fn sample<C: Curve>(c: &C, t0: f64, step: f64, n: usize) -> SampledCurve {
        let rows = (0..n)
            .map(|i| {
                let t = t0 + step * i as f64;
                (t, c.jet(t).unwrap().gamma)
            })
            .collect();
        SampledCurve::new(rows).unwrap()
    }

    #[test]
    fn reproduces_cubic() {
        let rows = (0..12)
            .map(|i| {
                let t = 0.1 * i as f64 - 0.4;
                (t, Vec3::new(t, t * t, t * t * t - 2.0 * t))
            })
            .collect();
        let c = SampledCurve::new(rows).unwrap();
        let j = jet_from_samples(&c, 0.25).unwrap();
        assert!((j.d1 - Vec3::new(1.0, 0.5, 3.0 * 0.0625 - 2.0)).max_abs() < 1e-10);
        assert!((j.d2 - Vec3::new(0.0, 2.0, 1.5)).max_abs() < 1e-9);
        assert!((j.d3 - Vec3::new(0.0, 0.0, 6.0)).max_abs() < 1e-7);
    }

    #[test]
    fn helix_samples_give_accurate_tangent() {
        let h = Helix1::new(0.5);
        let c = sample(&h, 0.0, 1e-2, 400);
        for i in 1..30 {
            let t = 0.12 * i as f64;
            let j = c.jet(t).unwrap();
            assert!((j.d1 - h.jet(t).unwrap().d1).max_abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn precondition_errors() {
        let rows: Vec<_> = (0..5).map(|i| (i as f64, Vec3::X * i as f64)).collect();
        assert_eq!(
            SampledCurve::new(rows),
            Err(Error::InsufficientPoints { needed: 7, got: 5 })
        );
        let rows: Vec<_> = (0..8).map(|i| (i as f64, Vec3::X * i as f64)).collect();
        let c = SampledCurve::new(rows).unwrap();
        assert_eq!(c.jet(1.5), Err(Error::OutOfRange { t: 1.5 }));
        assert!(c.jet(3.5).is_ok());
        let rows: Vec<_> = (0..8).map(|i| (-(i as f64), Vec3::X)).collect();
        assert_eq!(
            SampledCurve::new(rows),
            Err(Error::NonMonotoneGrid { index: 1 })
        );
    }

    #[test]
    fn anchored_jets_share_a_window() {
        let h = Helix1::new(0.2);
        let c = sample(&h, 0.0, 0.05, 60);
        // between two sample points the nearest window switches; anchoring pins it
        let mid = 0.05 * 20.5;
        let a = c.jet_anchored(mid + 1e-3, mid - 1e-3).unwrap();
        let b = c.jet_anchored(mid - 1e-3, mid - 1e-3).unwrap();
        let fd = (a.gamma - b.gamma) / 2e-3;
        let j = c.jet_anchored(mid, mid - 1e-3).unwrap();
        assert!((fd - j.d1).max_abs() < 1e-6);
    }
}
