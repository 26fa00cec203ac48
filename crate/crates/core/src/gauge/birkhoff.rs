//! Birkhoff orthogonality as a support-point problem.
//!
//! For an oriented plane `H = span{X, Y}` with normal `n = X x Y`, the vector
//! `v` with `v -|_B H` is the point of the unit sphere where `grad F` is a
//! positive multiple of `n`. It is found by Newton's method on the Lagrange
//! system `grad F(v) = lambda n, F(v) = 1`, with a derivative-free fallback.

use super::Gauge;
use crate::error::{Error, Result};
use crate::numerics::{golden_section_max, solve_augmented, Vec3};

/// Sine of the angle between `grad F(v)` and `n` accepted after the fallback.
const FALLBACK_ACCEPT: f64 = 1e-6;

/// Newton solver for the support point of a gauge's unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirkhoffSolver {
    pub max_newton_iter: usize,
    /// Target sine of the angle between `grad F(v)` and `n`.
    pub tol: f64,
}

impl Default for BirkhoffSolver {
    fn default() -> Self {
        BirkhoffSolver {
            max_newton_iter: 50,
            tol: 1e-14,
        }
    }
}

/// Sine of the angle between `grad` and the unit vector `n_hat`.
fn misalignment(grad: Vec3, n_hat: Vec3) -> f64 {
    grad.cross(n_hat).norm() / grad.norm()
}

impl BirkhoffSolver {
    /// Support point `v` of the unit ball in direction `n`: `F(v) = 1` and
    /// `grad F(v) = lambda n` with `lambda > 0`.
    pub fn support_point<G: Gauge + ?Sized>(&self, gauge: &G, n: Vec3) -> Result<Vec3> {
        let n_norm = n.norm();
        if !(n_norm > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateDirection);
        }
        let n_hat = n / n_norm;
        let start = n_hat / gauge.eval(n_hat)?;
        match self.newton(gauge, n_hat, start) {
            Ok(v) => Ok(v),
            Err(_) => {
                let rough = support_point_golden(gauge, n_hat)?;
                // Polish the derivative-free estimate; keep it if Newton still fails.
                let v = self.newton(gauge, n_hat, rough).unwrap_or(rough);
                let residual = misalignment(gauge.gradient(v)?, n_hat);
                if residual <= FALLBACK_ACCEPT && v.dot(n_hat) > 0.0 {
                    Ok(v)
                } else {
                    Err(Error::SolverDivergence { residual })
                }
            }
        }
    }

    fn newton<G: Gauge + ?Sized>(&self, gauge: &G, n_hat: Vec3, start: Vec3) -> Result<Vec3> {
        let mut v = start;
        let mut grad = gauge.gradient(v)?;
        let mut residual = misalignment(grad, n_hat);
        for _ in 0..self.max_newton_iter {
            if residual <= self.tol {
                break;
            }
            let lambda = grad.dot(n_hat);
            let hess = gauge.hessian(v)?;
            // [H  -n] [dv     ]   [lambda n - grad F]
            // [g^T 0] [dlambda] = [1 - F(v)         ]
            let r = n_hat * lambda - grad;
            let f_res = 1.0 - gauge.eval(v)?;
            let mut a = [[0.0; 5]; 4];
            for i in 0..3 {
                a[i][..3].copy_from_slice(&hess.0[i]);
                a[i][3] = -n_hat[i];
                a[i][4] = r[i];
            }
            a[3][..3].copy_from_slice(&grad.to_array());
            a[3][4] = f_res;
            let step = solve_augmented::<4, 5>(a).ok_or(Error::SolverDivergence { residual })?;
            let dv = Vec3::new(step[0], step[1], step[2]);

            // Backtrack until the misalignment decreases.
            let mut scale = 1.0;
            let mut accepted = None;
            for _ in 0..30 {
                let trial = v + dv * scale;
                let f = gauge.eval(trial);
                if let Ok(f) = f {
                    if f > 0.0 && trial.dot(n_hat) > 0.0 {
                        let trial = trial / f;
                        let g = gauge.gradient(trial)?;
                        let res = misalignment(g, n_hat);
                        if res < residual || res <= self.tol {
                            accepted = Some((trial, g, res));
                            break;
                        }
                    }
                }
                scale *= 0.5;
            }
            match accepted {
                Some((trial, g, res)) => {
                    let moved = (trial - v).norm();
                    v = trial;
                    grad = g;
                    residual = res;
                    if moved <= 4.0 * f64::EPSILON * v.norm() {
                        break;
                    }
                }
                None => break,
            }
        }
        // Rounding keeps the last digits of the alignment out of reach for
        // eccentric bodies; anything far above it is a genuine failure.
        if residual <= self.tol.max(1e-11) && grad.dot(n_hat) > 0.0 && v.dot(n_hat) > 0.0 {
            Ok(v)
        } else {
            Err(Error::SolverDivergence { residual })
        }
    }
}

/// Derivative-free support point: minimise `F` over the affine plane
/// `<n_hat, d> = 1` by alternating golden-section line searches, then map the
/// minimiser radially onto the unit sphere.
///
/// `F` is convex on that plane, so every line search is unimodal. The result
/// is accurate to roughly the square root of machine precision.
pub fn support_point_golden<G: Gauge + ?Sized>(gauge: &G, n_hat: Vec3) -> Result<Vec3> {
    let seed = if n_hat.x.abs() < 0.9 {
        Vec3::X
    } else {
        Vec3::Y
    };
    let u1 = n_hat.cross(seed).normalize();
    let u2 = n_hat.cross(u1);
    let point = |a: f64, b: f64| n_hat + u1 * a + u2 * b;
    // Failed evaluations score -inf so the line search never selects them.
    let objective = |a: f64, b: f64| {
        gauge
            .eval(point(a, b))
            .map(|f| -f)
            .unwrap_or(f64::NEG_INFINITY)
    };

    let (mut a, mut b) = (0.0, 0.0);
    let mut width = 8.0;
    for _ in 0..400 {
        let a_new = golden_section_max(
            |s| objective(s, b),
            a - width,
            a + width,
            1e-12 * width.max(1.0),
        );
        let b_new = golden_section_max(
            |s| objective(a_new, s),
            b - width,
            b + width,
            1e-12 * width.max(1.0),
        );
        let moved = (a_new - a).abs().max((b_new - b).abs());
        a = a_new;
        b = b_new;
        if moved < 1e-13 {
            break;
        }
        width = (4.0 * moved).clamp(1e-9, 8.0);
    }
    let d = point(a, b);
    let f = gauge.eval(d)?;
    if !(f > 0.0) {
        return Err(Error::SolverDivergence {
            residual: f64::INFINITY,
        });
    }
    Ok(d / f)
}

/// The unique `v` on the unit sphere that is Birkhoff orthogonal to the
/// oriented plane with basis `{x, y}`, so that `{v, x, y}` is positively
/// oriented.
pub fn birkhoff_orthogonal<G: Gauge + ?Sized>(gauge: &G, x: Vec3, y: Vec3) -> Result<Vec3> {
    let n = x.cross(y);
    if n.norm() <= 1e-14 * x.norm() * y.norm() {
        return Err(Error::DegenerateDirection);
    }
    BirkhoffSolver::default().support_point(gauge, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{
        randers_birkhoff, EllipsoidGauge, EuclideanGauge, ImplicitGauge, RandersGauge,
        TranslatedGauge,
    };
    use crate::numerics::det3;
    use core::f64::consts::SQRT_2;

    #[test]
    fn euclidean_xy_plane() {
        let v = birkhoff_orthogonal(&EuclideanGauge, Vec3::X, Vec3::Y).unwrap();
        assert!((v - Vec3::Z).max_abs() < 1e-15);
        let v = birkhoff_orthogonal(&EuclideanGauge, Vec3::Y, Vec3::X).unwrap();
        assert!((v + Vec3::Z).max_abs() < 1e-15);
    }

    #[test]
    fn helix_osculating_plane_under_randers() {
        let b = 0.5;
        let g = RandersGauge::new(b).unwrap();
        let w = (2.0 - b * b).sqrt();
        for i in 0..12 {
            let t = 0.5 * i as f64;
            let d1 = Vec3::new(-t.sin(), t.cos(), 1.0) / (SQRT_2 + b);
            let d2 = Vec3::new(-t.cos(), -t.sin(), 0.0) / (SQRT_2 + b);
            let v = birkhoff_orthogonal(&g, d1, d2).unwrap();
            let want = Vec3::new(t.sin() / w, -t.cos() / w, (1.0 / w - b) / (1.0 - b * b));
            assert!((v - want).max_abs() < 1e-13, "t={t}: {v:?} vs {want:?}");
        }
    }

    #[test]
    fn newton_agrees_with_closed_form_and_orientation() {
        let g = RandersGauge::new(0.9).unwrap();
        let x = Vec3::new(0.3, 1.0, -0.2);
        let y = Vec3::new(-1.0, 0.1, 0.8);
        let v = birkhoff_orthogonal(&g, x, y).unwrap();
        let closed = randers_birkhoff(0.9, x.cross(y)).unwrap();
        assert!((v - closed).max_abs() < 1e-12);
        assert!(det3(v, x, y) > 0.0);
    }

    #[test]
    fn golden_fallback_is_close_to_newton() {
        let gauges: [&dyn Gauge; 3] = [
            &RandersGauge::new(0.7).unwrap(),
            &EllipsoidGauge::new(0.6).unwrap(),
            &EuclideanGauge,
        ];
        let n = Vec3::new(0.2, -0.5, 0.9).normalize();
        for g in gauges {
            let golden = support_point_golden(g, n).unwrap();
            let newton = BirkhoffSolver::default().support_point(g, n).unwrap();
            assert!(
                (golden - newton).max_abs() < 1e-6,
                "{golden:?} vs {newton:?}"
            );
        }
    }

    #[test]
    fn zero_iterations_forces_fallback() {
        let g = RandersGauge::new(0.5).unwrap();
        let solver = BirkhoffSolver {
            max_newton_iter: 0,
            ..BirkhoffSolver::default()
        };
        let n = Vec3::new(1.0, 1.0, 1.0);
        let v = solver.support_point(&g, n).unwrap();
        let closed = randers_birkhoff(0.5, n).unwrap();
        assert!((v - closed).max_abs() < 1e-6);
    }

    #[test]
    fn works_for_level_set_gauges() {
        let base = RandersGauge::new(0.4).unwrap();
        let shifted = TranslatedGauge::new(base, Vec3::new(0.1, 0.2, -0.1)).unwrap();
        let implicit = ImplicitGauge::from_fn(move |x| base.level(x)).unwrap();
        let (x, y) = (Vec3::new(1.0, 0.2, 0.0), Vec3::new(0.0, 1.0, 0.5));
        let v1 = birkhoff_orthogonal(&shifted, x, y).unwrap();
        // the translated body has the same normals, shifted by a0
        let v0 = birkhoff_orthogonal(&base, x, y).unwrap();
        assert!((v1 - (v0 + shifted.a0())).max_abs() < 1e-12);
        let v2 = birkhoff_orthogonal(&implicit, x, y).unwrap();
        assert!((v2 - v0).max_abs() < 1e-8);
    }

    #[test]
    fn dependent_vectors_are_rejected() {
        let x = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(
            birkhoff_orthogonal(&EuclideanGauge, x, x * 2.0),
            Err(Error::DegenerateDirection)
        );
    }
}
