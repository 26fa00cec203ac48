//! Sampled checks of the gauge axioms.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use super::Gauge;
use crate::numerics::Vec3;

const DEFAULT_SEED: u64 = 0x5eed_9a06e;

/// Worst axiom violations found by [`verify_gauge`].
///
/// Violations are scale-free: each is divided by `max(1, magnitude)` of the
/// quantity it compares against.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaugeReport {
    pub samples: usize,
    /// `F(0) != 0` or `F(x) <= 0` for `x != 0`.
    pub positivity: f64,
    /// `|F(lambda x) - lambda F(x)|`
    pub homogeneity: f64,
    /// `max(0, F(x + y) - F(x) - F(y))`
    pub subadditivity: f64,
    /// `|<grad F(x), x> - F(x)|`
    pub euler: f64,
    /// Evaluations that returned an error.
    pub failures: usize,
}

impl GaugeReport {
    pub fn max_violation(&self) -> f64 {
        self.positivity
            .max(self.homogeneity)
            .max(self.subadditivity)
            .max(self.euler)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures == 0 && self.max_violation() <= tol
    }
}

/// [`verify_gauge_seeded`] with a fixed seed.
pub fn verify_gauge<G: Gauge + ?Sized>(gauge: &G, sample_count: usize) -> GaugeReport {
    verify_gauge_seeded(gauge, sample_count, DEFAULT_SEED)
}

/// Sample random `x`, `y` in `[-1, 1]^3` and `lambda` in `[0.1, 10]` and record
/// the largest violation of each gauge axiom and of the Euler identity.
pub fn verify_gauge_seeded<G: Gauge + ?Sized>(
    gauge: &G,
    sample_count: usize,
    seed: u64,
) -> GaugeReport {
    let mut rng = SmallRng::seed_from_u64(seed);
    let mut report = GaugeReport {
        samples: sample_count.max(1),
        ..GaugeReport::default()
    };
    match gauge.eval(Vec3::ZERO) {
        Ok(f0) => report.positivity = f0.abs(),
        Err(_) => report.failures += 1,
    }
    let point = |rng: &mut SmallRng| {
        Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    };
    for _ in 0..report.samples {
        let x = point(&mut rng);
        let y = point(&mut rng);
        let lambda = rng.gen_range(0.1..10.0);
        let sample = (|| -> crate::Result<()> {
            let fx = gauge.eval(x)?;
            let fy = gauge.eval(y)?;
            if !(fx > 0.0) {
                report.positivity = report.positivity.max(if fx.is_nan() {
                    f64::INFINITY
                } else {
                    -fx + f64::MIN_POSITIVE
                });
            }
            let flx = gauge.eval(x * lambda)?;
            let hom = (flx - lambda * fx).abs() / (lambda * fx).max(1.0);
            report.homogeneity = report.homogeneity.max(hom);
            let fxy = gauge.eval(x + y)?;
            let sub = (fxy - fx - fy).max(0.0) / (fx + fy).max(1.0);
            report.subadditivity = report.subadditivity.max(sub);
            let euler = (gauge.gradient(x)?.dot(x) - fx).abs() / fx.max(1.0);
            report.euler = report.euler.max(euler);
            Ok(())
        })();
        if sample.is_err() {
            report.failures += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{
        EllipsoidGauge, EuclideanGauge, ImplicitGauge, RandersGauge, StarLevel, TranslatedGauge,
    };
    use crate::numerics::ToleranceConfig;

    #[test]
    fn closed_form_gauges_pass() {
        let gauges: [&dyn Gauge; 3] = [
            &RandersGauge::new(0.5).unwrap(),
            &EllipsoidGauge::new(0.5).unwrap(),
            &EuclideanGauge,
        ];
        for g in gauges {
            let r = verify_gauge(g, 1000);
            assert!(r.passes(1e-9), "{r:?}");
        }
    }

    #[test]
    fn translated_randers_passes() {
        let b = 0.5;
        let g = TranslatedGauge::new(
            RandersGauge::new(b).unwrap(),
            Vec3::new(0.0, 0.0, b / (1.0 - b * b)),
        )
        .unwrap();
        let r = verify_gauge(&g, 1000);
        assert!(r.passes(ToleranceConfig::default().root_tol), "{r:?}");
    }

    #[test]
    fn dented_level_set_fails_subadditivity() {
        let g = ImplicitGauge::new(StarLevel { amplitude: 0.5 }).unwrap();
        let r = verify_gauge(&g, 1000);
        assert!(r.subadditivity > 0.0, "{r:?}");
        assert!(!r.passes(1e-9));
        assert!(r.homogeneity < 1e-12);
    }
}
