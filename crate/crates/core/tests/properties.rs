use std::f64::consts::TAU;

use gauge_curves::curve::{
    Curve, FourierCurve, FourierTerm, Helix1, LinearImage, RectifyingSpiral, Scaled, SpeedProfile,
};
use gauge_curves::frame::{build_frame, frame_change, FrameFreedom};
use gauge_curves::gauge::{
    birkhoff_orthogonal, EllipsoidGauge, Gauge, RandersGauge, TranslatedGauge,
};
use gauge_curves::invariants::invariants_at;
use gauge_curves::numerics::{det3, solve3x3, Mat3};
use gauge_curves::translation::verify_translation;
use gauge_curves::{ToleranceConfig, Vec3};
use proptest::prelude::*;

fn vec3(scale: f64) -> impl Strategy<Value = Vec3> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn nonzero_vec3() -> impl Strategy<Value = Vec3> {
    vec3(1.0).prop_filter("away from the origin", |v| v.norm() > 1e-3)
}

fn b_param() -> impl Strategy<Value = f64> {
    0.0..0.95f64
}

fn check_axioms<G: Gauge>(g: &G, x: Vec3, y: Vec3, lambda: f64) -> Result<(), TestCaseError> {
    let fx = g.eval(x).unwrap();
    let fy = g.eval(y).unwrap();
    prop_assert!(fx > 0.0);
    prop_assert!(
        (g.eval(x * lambda).unwrap() - lambda * fx).abs() <= 1e-11 * (lambda * fx).max(1.0)
    );
    prop_assert!(g.eval(x + y).unwrap() <= fx + fy + 1e-11 * (fx + fy).max(1.0));
    prop_assert!((g.gradient(x).unwrap().dot(x) - fx).abs() <= 1e-11 * fx.max(1.0));
    Ok(())
}

/// Helix-like curve with small random harmonics.
fn fourier_curve() -> impl Strategy<Value = FourierCurve> {
    (
        0.5..2.0f64,
        vec3(1.0),
        vec3(0.2),
        vec3(0.08),
        vec3(0.08),
        vec3(0.03),
        vec3(0.03),
    )
        .prop_map(|(r, origin, drift, c2, s2, c3, s3)| {
            FourierCurve::new(
                origin,
                Vec3::Z * 0.5 + drift,
                vec![
                    FourierTerm {
                        freq: 1.0,
                        cos_coef: Vec3::X * r,
                        sin_coef: Vec3::Y * r,
                    },
                    FourierTerm {
                        freq: 2.0,
                        cos_coef: c2 * r,
                        sin_coef: s2 * r,
                    },
                    FourierTerm {
                        freq: 3.0,
                        cos_coef: c3 * r,
                        sin_coef: s3 * r,
                    },
                ],
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn randers_and_ellipsoid_are_gauges(b in b_param(), x in nonzero_vec3(), y in nonzero_vec3(), lambda in 0.1..10.0f64) {
        check_axioms(&RandersGauge::new(b).unwrap(), x, y, lambda)?;
        check_axioms(&EllipsoidGauge::new(b).unwrap(), x, y, lambda)?;
    }

    #[test]
    fn translated_gauge_has_the_shifted_sphere(b in b_param(), dir in nonzero_vec3(), rho in 0.0..0.8f64, x in nonzero_vec3()) {
        let base = RandersGauge::new(b).unwrap();
        let a0 = dir * (rho / base.eval(-dir).unwrap());
        let g = TranslatedGauge::new(base, a0).unwrap();
        let fx = g.eval(x).unwrap();
        prop_assert!(fx > 0.0);
        // x / F_bar(x) lies on the translated sphere a0 + S
        prop_assert!((base.eval(x / fx - a0).unwrap() - 1.0).abs() < 1e-10);
        prop_assert!((g.eval(x * 3.0).unwrap() - 3.0 * fx).abs() < 1e-10 * fx.max(1.0));
    }

    #[test]
    fn birkhoff_normal_is_a_positive_support_point(b in b_param(), x in nonzero_vec3(), y in nonzero_vec3(), l in 0.1..10.0f64, m in 0.1..10.0f64) {
        let n = x.cross(y);
        prop_assume!(n.norm() > 1e-3);
        let g = RandersGauge::new(b).unwrap();
        let v = birkhoff_orthogonal(&g, x, y).unwrap();
        prop_assert!((g.eval(v).unwrap() - 1.0).abs() < 1e-12);
        let grad = g.gradient(v).unwrap();
        prop_assert!(grad.cross(n).norm() <= 1e-10 * grad.norm() * n.norm());
        prop_assert!(det3(v, x, y) > 0.0);
        // only the oriented plane matters
        let w = birkhoff_orthogonal(&g, x * l, y * m + x).unwrap();
        prop_assert!((v - w).max_abs() < 1e-10);
    }

    #[test]
    fn frame_changes_keep_invariants_and_compose(a1 in 0.1..10.0f64, b1 in -5.0..5.0f64, a2 in 0.1..10.0f64, b2 in -5.0..5.0f64, t in 0.0..3.0f64) {
        let g = RandersGauge::new(0.5).unwrap();
        let curve = FourierCurve::perturbed_helix(0.5, 0.2);
        let frames = build_frame(&g, &curve, &[t, t + 0.05, t + 0.1], 1.0, 0.0, &ToleranceConfig::default()).unwrap();
        let f1 = FrameFreedom::new(a1, b1).unwrap();
        let f2 = FrameFreedom::new(a2, b2).unwrap();
        for fr in &frames {
            let once = frame_change(fr, f1);
            prop_assert!(once.invariants().max_diff(&fr.invariants()) < 1e-9);
            let twice = frame_change(&once, f2);
            let direct = frame_change(fr, f1.then(f2));
            prop_assert!((twice.k - direct.k).abs() < 1e-12 * direct.k.abs().max(1.0));
            prop_assert!((twice.e3 - direct.e3).max_abs() < 1e-12 * direct.e3.max_abs().max(1.0));
            prop_assert!((twice.wstar - direct.wstar).abs() < 1e-10 * direct.wstar.abs().max(1.0));
        }
    }

    #[test]
    fn constant_rescaling_scales_invariants(b in 0.05..0.9f64, c in 0.2..5.0f64, t in 0.0..TAU) {
        let g = RandersGauge::new(b).unwrap();
        let base = Helix1::new(b);
        let scaled = Scaled::new(base, SpeedProfile::Constant(c));
        let cfg = ToleranceConfig::default();
        let a = invariants_at(&g, &base, t, &cfg).unwrap();
        let s = invariants_at(&g, &scaled, t, &cfg).unwrap();
        prop_assert!((s.i1 - a.i1 / (c * c)).abs() < 1e-8);
        prop_assert!((s.i2 - a.i2 / c).abs() < 1e-8);
        prop_assert!((s.i3 - a.i3 / (c * c)).abs() < 1e-8);
        prop_assert!((s.i4 - a.i4 / c).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn translation_keeps_i4(curve in fourier_curve(), b in 0.05..0.8f64, dir in nonzero_vec3(), rho in 0.0..0.8f64) {
        let g = RandersGauge::new(b).unwrap();
        let a0 = dir * (rho / g.eval(-dir).unwrap());
        let grid: Vec<f64> = (0..8).map(|i| 0.8 * i as f64).collect();
        let report = verify_translation(&g, a0, &curve, &grid, &ToleranceConfig::default()).unwrap();
        prop_assert!(report.i4_invariant(), "{:?}", report.change);
        prop_assert!(report.path_discrepancy[3] <= 1e-6, "{:?}", report.path_discrepancy);
    }

    #[test]
    fn jets_are_consistent_with_positions(curve in fourier_curve(), t in 0.0..TAU) {
        let h = 1e-4;
        let j = curve.jet(t).unwrap();
        let fd = (curve.jet(t + h).unwrap().gamma - curve.jet(t - h).unwrap().gamma) / (2.0 * h);
        prop_assert!((fd - j.d1).max_abs() < 1e-6);
    }
}

/// Largest distance from the least-squares common point of the rectifying
/// planes `gamma + span{e1, e3}`.
fn rectifying_spread<G: Gauge, C: Curve>(g: &G, curve: &C, grid: &[f64]) -> f64 {
    let frames = build_frame(g, curve, grid, 1.0, 0.0, &ToleranceConfig::default()).unwrap();
    let planes: Vec<(Vec3, f64)> = frames
        .iter()
        .map(|fr| {
            let n = fr.e1.cross(fr.e3).normalize();
            (n, n.dot(curve.jet(fr.t).unwrap().gamma))
        })
        .collect();
    // normal equations sum n n^T p = sum n d
    let mut cols = [Vec3::ZERO; 3];
    let mut rhs = Vec3::ZERO;
    for (n, d) in &planes {
        for (axis, col) in cols.iter_mut().enumerate() {
            *col += *n * n[axis];
        }
        rhs += *n * *d;
    }
    let p = solve3x3(cols, rhs).unwrap();
    let p = Vec3::new(p[0], p[1], p[2]);
    planes
        .iter()
        .map(|(n, d)| (n.dot(p) - d).abs())
        .fold(0.0, f64::max)
}

#[test]
fn rectifying_planes_share_a_point() {
    let b: f64 = 0.5;
    let g = RandersGauge::new(b).unwrap();
    let c = 1.0 - b * b;
    let map = Mat3::diagonal(1.0 / c.sqrt(), 1.0 / c.sqrt(), 1.0 / c);
    let spiral = LinearImage {
        map,
        curve: RectifyingSpiral::new(1.0, 0.5).unwrap(),
    };
    let grid: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
    let perturbed = FourierCurve::perturbed_helix(b, 0.2);
    let spread = rectifying_spread(&g, &spiral, &grid);
    assert!(spread < 1e-8, "{spread}");
    assert!(rectifying_spread(&g, &perturbed, &grid) > 1e-2);
}
