//! Small numerical kernels shared by the geometry modules.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

// unused when std float methods are in scope (tests, num-traits/std)
use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// `|det| < DEGENERACY_FLOOR * |c0| |c1| |c2|` marks a 3x3 system as singular.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// A point or direction in R^3.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn normalize(self) -> Vec3 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn outer(self, o: Vec3) -> Mat3 {
        let a = self.to_array();
        let b = o.to_array();
        Mat3(core::array::from_fn(|i| {
            core::array::from_fn(|j| a[i] * b[j])
        }))
    }
}

/// `det(a, b, c) = a . (b x c)`, the standard volume form.
pub fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.dot(b.cross(c))
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Row-major 3x3 matrix, used for gauge Hessians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn identity() -> Self {
        Mat3::diagonal(1.0, 1.0, 1.0)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.0[i])
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3(core::array::from_fn(|i| {
            core::array::from_fn(|j| self.0[j][i])
        }))
    }

    pub fn matmul(&self, o: &Mat3) -> Mat3 {
        Mat3(core::array::from_fn(|i| {
            core::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum())
        }))
    }

    /// `u^T M w`
    pub fn bilinear(&self, u: Vec3, w: Vec3) -> f64 {
        u.dot(self.mul_vec(w))
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn symmetrize(&self) -> Mat3 {
        let t = self.transpose();
        Mat3(core::array::from_fn(|i| {
            core::array::from_fn(|j| 0.5 * (self.0[i][j] + t.0[i][j]))
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        Mat3(core::array::from_fn(|i| {
            core::array::from_fn(|j| self.0[i][j] + o.0[i][j])
        }))
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

/// Numerical tolerances used across the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Residual bound `|f(mu)|` accepted by scalar root finds.
    pub root_tol: f64,
    /// Relative step for first-derivative central differences.
    pub fd_step_scale: f64,
    /// Bound for decomposition and linear-solve residuals.
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            root_tol: 1e-13,
            fd_step_scale: 1e-5,
            residual_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.root_tol) && ok(self.fd_step_scale) && ok(self.residual_tol) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "tolerances must be finite and positive",
            ))
        }
    }

    /// Finite-difference step at parameter `t`.
    pub fn fd_step(&self, t: f64) -> f64 {
        self.fd_step_scale * t.abs().max(1.0)
    }
}

/// Solve `c0 a + c1 b + c2 c = rhs` for `(a, b, c)`.
///
/// Uses Gaussian elimination with partial pivoting after a scale-free
/// determinant check against [`DEGENERACY_FLOOR`].
pub fn solve3x3(columns: [Vec3; 3], rhs: Vec3) -> Result<[f64; 3]> {
    let [c0, c1, c2] = columns;
    let det = det3(c0, c1, c2);
    let scale = c0.norm() * c1.norm() * c2.norm();
    if !det.is_finite() || det.abs() <= DEGENERACY_FLOOR * scale || scale == 0.0 {
        return Err(Error::SingularSystem { det });
    }
    let m = Mat3::from_columns(c0, c1, c2);
    let a = core::array::from_fn(|i| {
        let mut row = [0.0; 4];
        row[..3].copy_from_slice(&m.0[i]);
        row[3] = rhs[i];
        row
    });
    solve_augmented::<3, 4>(a).ok_or(Error::SingularSystem { det })
}

/// Gaussian elimination with partial pivoting on an `N x (N+1)` augmented
/// matrix. `M` must equal `N + 1`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_augmented<const N: usize, const M: usize>(
    mut a: [[f64; M]; N],
) -> Option<[f64; N]> {
    debug_assert_eq!(M, N + 1);
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            for k in col..M {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][N] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Second-order central difference `(f(t+h) - f(t-h)) / 2h`.
pub fn central_diff<F: FnMut(f64) -> f64>(mut f: F, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Cumulative trapezoid integral of `(s, value)` samples.
///
/// The first output entry is `(s0, 0)`.
pub fn integrate_trapezoid(samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: samples.len(),
        });
    }
    let mut out = Vec::with_capacity(samples.len());
    out.push((samples[0].0, 0.0));
    let mut acc = 0.0;
    for (i, w) in samples.windows(2).enumerate() {
        let (s0, y0) = w[0];
        let (s1, y1) = w[1];
        if !(s1 > s0) {
            return Err(Error::NonMonotoneGrid { index: i + 1 });
        }
        acc += 0.5 * (s1 - s0) * (y0 + y1);
        out.push((s1, acc));
    }
    Ok(out)
}

/// Derivative of grid samples `(x, y)` by second-order three-point formulas,
/// one-sided at the ends. The grid may be non-uniform.
pub fn grid_derivative(samples: &[(f64, f64)]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InsufficientPoints { needed: 3, got: n });
    }
    for (i, w) in samples.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::NonMonotoneGrid { index: i + 1 });
        }
    }
    // derivative at x of the parabola through three points
    let three = |p: [(f64, f64); 3], x: f64| {
        let [(x0, y0), (x1, y1), (x2, y2)] = p;
        y0 * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + y1 * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + y2 * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))
    };
    Ok((0..n)
        .map(|i| {
            let j = i.clamp(1, n - 2);
            three([samples[j - 1], samples[j], samples[j + 1]], samples[i].0)
        })
        .collect())
}

/// Root of `f` on `[lo, hi]` by Brent's method: bisection refined by secant
/// and inverse quadratic steps.
///
/// Stops once `|f(mu)| <= tol` or the bracket has collapsed to rounding level.
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    const MAX_ITER: usize = 200;
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoSignChange { lo, hi });
    }
    if fa.abs() <= tol {
        return Ok(a);
    }
    if fb.abs() <= tol {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs();
        let half = 0.5 * (c - b);
        if fb.abs() <= tol || half.abs() <= xtol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol {
            d
        } else {
            xtol.copysign(half)
        };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::MaxIterations { residual: fb });
        }
    }
    Err(Error::MaxIterations { residual: fb.abs() })
}

/// Maximise a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
