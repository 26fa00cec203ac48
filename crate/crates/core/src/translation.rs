//! Parallel translation of the unit sphere and its effect on the invariants.
//!
//! Replacing the unit sphere `S` by `S + a0` gives a new gauge `F_bar`. Along
//! a curve the two arc lengths are related by `f = ds/ds_bar = 1/F_bar(e1)`,
//! the barred basis is `e1_bar = f e1`, `de1_bar/ds_bar = f (f' e1 + f e1')`
//! and `v_bar = v + a0`, and the coefficients transform by closed formulas.
//! Only `I4` survives the translation.

use alloc::vec::Vec;

use crate::curve::Curve;
use crate::error::Result;
use crate::frame::{coefficients_at, dq2_ds, FrameCoefficients};
use crate::gauge::{Gauge, TranslatedGauge};
use crate::invariants::{invariants_at, Invariants};
use crate::numerics::{solve3x3, ToleranceConfig, Vec3};

/// Relative parameter step for differencing `f`.
pub const F_STEP_SCALE: f64 = 1e-4;
/// Default bound on `|I4_bar - I4|` and on the discrepancy between the two
/// evaluation paths.
pub const INVARIANCE_TOL: f64 = 1e-6;

/// The gauge with unit sphere `S + a0`.
///
/// Fails with `OriginNotInterior` unless `base(-a0) < 1`.
pub fn make_translated<G: Gauge>(base: G, a0: Vec3) -> Result<TranslatedGauge<G>> {
    TranslatedGauge::new(base, a0)
}

/// `f = ds/ds_bar` and its derivatives with respect to the base arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationContext {
    pub a0: Vec3,
    pub f: f64,
    pub df_ds: f64,
    pub d2f_ds2: f64,
}

impl TranslationContext {
    /// The context at parameter `t` of `curve`.
    pub fn at<G, C>(base: &G, translated: &TranslatedGauge<G>, curve: &C, t: f64) -> Result<Self>
    where
        G: Gauge,
        C: Curve + ?Sized,
    {
        // f(t) = F(gamma') / F_bar(gamma')
        let ratio = |tt: f64| -> Result<(f64, f64, Vec3, Vec3)> {
            let jet = curve.jet_anchored(tt, t)?;
            let phi = base.eval(jet.d1)?;
            Ok((phi / translated.eval(jet.d1)?, phi, jet.d1, jet.d2))
        };
        let h = F_STEP_SCALE * t.abs().max(1.0);
        let (f, phi, d1, d2) = ratio(t)?;
        let (fp, ..) = ratio(t + h)?;
        let (fm, ..) = ratio(t - h)?;
        let f_t = (fp - fm) / (2.0 * h);
        let f_tt = (fp - 2.0 * f + fm) / (h * h);
        let phi_t = base.gradient(d1)?.dot(d2);
        Ok(TranslationContext {
            a0: translated.a0(),
            f,
            df_ds: f_t / phi,
            d2f_ds2: (f_tt - f_t * phi_t / phi) / (phi * phi),
        })
    }
}

/// Coordinates of `a0` in the barred basis `{e1_bar, de1_bar/ds_bar, v_bar}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A0Components {
    pub a01: f64,
    pub a02: f64,
    pub a03: f64,
}

pub fn decompose_a0(
    a0: Vec3,
    barred_e1: Vec3,
    barred_de1: Vec3,
    barred_v: Vec3,
) -> Result<A0Components> {
    let [a01, a02, a03] = solve3x3([barred_e1, barred_de1, barred_v], a0)?;
    Ok(A0Components { a01, a02, a03 })
}

/// Barred coefficients from the base ones.
pub fn translate_coefficients(
    c: &FrameCoefficients,
    ctx: &TranslationContext,
    a0c: &A0Components,
) -> FrameCoefficients {
    let (f, f1, f2) = (ctx.f, ctx.df_ds, ctx.d2f_ds2);
    let f3 = f * f * f;
    FrameCoefficients {
        p1: f * f2 - 2.0 * f1 * f1 + c.p1 * f * f - c.p2 * f * f1 - c.p3 * f3 * a0c.a01,
        p2: 3.0 * f1 + c.p2 * f - c.p3 * f3 * a0c.a02,
        p3: c.p3 * f3 * (1.0 - a0c.a03),
        q1: c.q1 - c.q2 * f1 / f,
        q2: c.q2 / f,
    }
}

/// Invariants under the translated gauge at `t`, computed from base-gauge
/// data through the translation formulas.
pub fn translated_invariants_at<G, C>(
    base: &G,
    translated: &TranslatedGauge<G>,
    curve: &C,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<Invariants>
where
    G: Gauge,
    C: Curve + ?Sized,
{
    let (arc, c) = coefficients_at(base, curve, t, cfg)?;
    let dq2 = dq2_ds(base, curve, t, arc.s_speed, cfg)?;
    let ctx = TranslationContext::at(base, translated, curve, t)?;
    let (f, f1) = (ctx.f, ctx.df_ds);
    let e1 = arc.e1 * f;
    let de1 = (arc.e1 * f1 + arc.de1_ds * f) * f;
    let v = arc.v + ctx.a0;
    let a0c = decompose_a0(ctx.a0, e1, de1, v)?;
    let bar = translate_coefficients(&c, &ctx, &a0c);
    // d(q2/f)/ds_bar = f d(q2/f)/ds
    let dq2_bar = f * (dq2 / f - c.q2 * f1 / (f * f));
    Ok(Invariants::from_coefficients(&bar, dq2_bar))
}

/// Invariants at one grid point under the base gauge and under the
/// translated gauge by both paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationRow {
    pub t: f64,
    pub base: Invariants,
    /// Recomputed from scratch under the translated gauge.
    pub direct: Invariants,
    /// Obtained from base data through the translation formulas.
    pub formula: Invariants,
}

/// Outcome of [`verify_translation`].
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationReport {
    pub a0: Vec3,
    pub rows: Vec<TranslationRow>,
    /// `max |I_bar - I|` per invariant.
    pub change: [f64; 4],
    /// `max |direct - formula|` per invariant.
    pub path_discrepancy: [f64; 4],
    pub tol: f64,
}

impl TranslationReport {
    /// `I4` is unchanged by the translation within `tol`.
    pub fn i4_invariant(&self) -> bool {
        self.change[3] <= self.tol
    }

    /// Invariant `index` (0-based) moved by more than `tol`.
    pub fn changed(&self, index: usize) -> bool {
        self.change[index] > self.tol
    }

    /// The two translated-gauge paths agree within `tol`.
    pub fn paths_agree(&self) -> bool {
        self.path_discrepancy.iter().all(|d| *d <= self.tol)
    }
}

/// Compare the invariants of `curve` under `base` and under the gauge with
/// unit sphere translated by `a0`.
pub fn verify_translation<G, C>(
    base: &G,
    a0: Vec3,
    curve: &C,
    grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<TranslationReport>
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    let translated = make_translated(base, a0)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut change = [0.0f64; 4];
    let mut path_discrepancy = [0.0f64; 4];
    for &t in grid {
        let row = TranslationRow {
            t,
            base: invariants_at(base, curve, t, cfg)?,
            direct: invariants_at(&translated, curve, t, cfg)?,
            formula: translated_invariants_at(&base, &translated, curve, t, cfg)?,
        };
        let (b, d, f) = (
            row.base.to_array(),
            row.direct.to_array(),
            row.formula.to_array(),
        );
        for i in 0..4 {
            change[i] = change[i].max((d[i] - b[i]).abs());
            path_discrepancy[i] = path_discrepancy[i].max((d[i] - f[i]).abs());
        }
        rows.push(row);
    }
    Ok(TranslationReport {
        a0,
        rows,
        change,
        path_discrepancy,
        tol: INVARIANCE_TOL,
    })
}
