//! Subcommand implementations.

use gauge_curves::frame::{build_frame, frame_orientation, frenet_residuals, FrenetFrame};
use gauge_curves::gauge::{verify_gauge, verify_gauge_seeded, Gauge, GaugeReport};
use gauge_curves::invariants::{
    classify, invariants_along, invariants_at, CurveClass, InvariantSample,
};
use gauge_curves::translation::{verify_translation, TranslationReport};
use gauge_curves::{Curve, ToleranceConfig};
use serde_json::{json, Map, Value};

use crate::config::{Command, GaugeConfig, RunConfig};
use crate::output::{Cell, Table};
use crate::{exit, CliError};

/// Rendered output of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// CSV or JSON document for stdout.
    pub text: String,
    pub code: i32,
    /// Diagnostic line for stderr.
    pub note: String,
    pub table: Table,
}

impl Report {
    fn new(table: Table, text: String) -> Self {
        Report {
            text,
            code: exit::SUCCESS,
            note: String::new(),
            table,
        }
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Invariants(a) => cmd_invariants(&RunConfig::from_args(a)?),
        Command::Classify(a) => cmd_classify(&RunConfig::from_args(a)?),
        Command::Frame(a) => cmd_frame(&RunConfig::from_args(a)?),
        Command::TranslateCheck(a) => cmd_translate_check(&RunConfig::from_args(a)?),
        Command::VerifyGauge(a) => cmd_verify_gauge(&GaugeConfig::from_args(a)?),
    }
}

/// Re-run a failed grid computation point by point to report where it broke.
fn locate<G, C>(
    gauge: &G,
    curve: &C,
    grid: &[f64],
    cfg: &ToleranceConfig,
    error: gauge_curves::Error,
) -> CliError
where
    G: Gauge + ?Sized,
    C: Curve + ?Sized,
{
    for &t in grid {
        if let Err(e) = invariants_at(gauge, curve, t, cfg) {
            return CliError::at(t)(e);
        }
    }
    CliError::from(error)
}

fn sample_invariants(cfg: &RunConfig) -> Result<Vec<InvariantSample>, CliError> {
    let gauge = cfg.gauge.build()?;
    let curve = cfg.curve.build()?;
    let grid = cfg.grid();
    invariants_along(&*gauge, &*curve, &grid, &cfg.tol.engine)
        .map_err(|e| locate(&*gauge, &*curve, &grid, &cfg.tol.engine, e))
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<Report, CliError> {
    let samples = sample_invariants(cfg)?;
    let mut table = Table::new(&["t", "s", "I1", "I2", "I3", "I4"]);
    for smp in &samples {
        let i = smp.inv;
        table.push(vec![
            smp.t.into(),
            smp.s.into(),
            i.i1.into(),
            i.i2.into(),
            i.i3.into(),
            i.i4.into(),
        ]);
    }
    let text = table.render(cfg.format, &cfg.echo(), Map::new());
    Ok(Report::new(table, text))
}

/// The classification verdict for a run, without rendering.
pub fn classify_run(cfg: &RunConfig) -> Result<CurveClass, CliError> {
    let samples = sample_invariants(cfg)?;
    let pairs: Vec<_> = samples.iter().map(|s| (s.s, s.inv)).collect();
    Ok(classify(&pairs, cfg.tol.class_tol)?)
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let class = classify_run(cfg)?;
    let mut table = Table::new(&[
        "verdict",
        "i4_median",
        "max_deviation",
        "max_abs_i4",
        "class_tol",
    ]);
    table.push(vec![
        Cell::Text(class.kind.to_string()),
        class.i4_median.into(),
        class.max_deviation.into(),
        class.max_abs_i4.into(),
        cfg.tol.class_tol.into(),
    ]);
    let mut extra = Map::new();
    extra.insert("verdict".into(), json!(class.kind.to_string()));
    let text = table.render(cfg.format, &cfg.echo(), extra);
    let mut report = Report::new(table, text);
    report.note = format!("{}\n", class.kind);
    Ok(report)
}

/// Frames on the configured grid.
pub fn frames_for(cfg: &RunConfig) -> Result<Vec<FrenetFrame>, CliError> {
    let gauge = cfg.gauge.build()?;
    let curve = cfg.curve.build()?;
    let grid = cfg.grid();
    build_frame(&*gauge, &*curve, &grid, cfg.c1, cfg.c2, &cfg.tol.engine)
        .map_err(|e| locate(&*gauge, &*curve, &grid, &cfg.tol.engine, e))
}

pub fn cmd_frame(cfg: &RunConfig) -> Result<Report, CliError> {
    let frames = frames_for(cfg)?;
    let residuals = frenet_residuals(&frames)?;
    let orientation = frame_orientation(&frames);
    let mut table = Table::new(&[
        "t", "s", "e1x", "e1y", "e1z", "e2x", "e2y", "e2z", "e3x", "e3y", "e3z", "k", "kstar", "w",
        "wstar", "r1", "r2", "r3", "det",
    ]);
    for ((fr, r), det) in frames.iter().zip(&residuals).zip(&orientation) {
        let mut row: Vec<Cell> = vec![fr.t.into(), fr.s.into()];
        for e in [fr.e1, fr.e2, fr.e3] {
            row.extend(e.to_array().map(Cell::from));
        }
        row.extend([fr.k, fr.kstar, fr.w, fr.wstar].map(Cell::from));
        row.extend(r.map(Cell::from));
        row.push((*det).into());
        table.push(row);
    }
    let text = table.render(cfg.format, &cfg.echo(), Map::new());
    let mut report = Report::new(table, text);
    if orientation
        .windows(2)
        .any(|w| w[0].signum() != w[1].signum())
    {
        report.note = "warning: frame orientation changes sign along the grid\n".into();
    }
    Ok(report)
}

/// The translation comparison for a run, without rendering.
pub fn translation_run(cfg: &RunConfig) -> Result<TranslationReport, CliError> {
    let a0 = cfg
        .a0
        .ok_or_else(|| CliError::Config("translate-check needs --a0 x,y,z".into()))?;
    let gauge = cfg.gauge.build()?;
    let curve = cfg.curve.build()?;
    let grid = cfg.grid();
    let mut report =
        verify_translation(&*gauge, a0, &*curve, &grid, &cfg.tol.engine).map_err(|e| match e {
            gauge_curves::Error::OriginNotInterior { .. } => CliError::from(e),
            e => locate(&*gauge, &*curve, &grid, &cfg.tol.engine, e),
        })?;
    report.tol = cfg.tol.invariance_tol;
    Ok(report)
}

pub fn cmd_translate_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let tr = translation_run(cfg)?;
    let mut table = Table::new(&["invariant", "max_change", "path_discrepancy", "status"]);
    for i in 0..4 {
        let status = match (i, tr.changed(i)) {
            (3, false) => "PASS",
            (3, true) => "FAIL",
            (_, true) => "CHANGED",
            (_, false) => "UNCHANGED",
        };
        table.push(vec![
            Cell::Text(format!("I{}", i + 1)),
            tr.change[i].into(),
            tr.path_discrepancy[i].into(),
            status.into(),
        ]);
    }
    let mut extra = Map::new();
    extra.insert("i4_invariant".into(), json!(tr.i4_invariant()));
    extra.insert("paths_agree".into(), json!(tr.paths_agree()));
    let text = table.render(cfg.format, &cfg.echo(), extra);
    let mut report = Report::new(table, text);
    if !tr.i4_invariant() {
        report.code = exit::NUMERICAL;
        report.note = format!(
            "I4 changed by {:e} (tolerance {:e})\n",
            tr.change[3], tr.tol
        );
    } else if !tr.paths_agree() {
        report.note = "warning: translation formulas and direct recomputation disagree\n".into();
    }
    Ok(report)
}

/// Axiom check for a gauge configuration, without rendering.
pub fn gauge_run(cfg: &GaugeConfig) -> Result<GaugeReport, CliError> {
    let gauge = cfg.gauge.build()?;
    Ok(match cfg.seed {
        Some(seed) => verify_gauge_seeded(&*gauge, cfg.samples, seed),
        None => verify_gauge(&*gauge, cfg.samples),
    })
}

pub fn cmd_verify_gauge(cfg: &GaugeConfig) -> Result<Report, CliError> {
    let r = gauge_run(cfg)?;
    let tol = cfg.tol.verify_tol;
    let mut table = Table::new(&["check", "max_violation", "status"]);
    for (name, v) in [
        ("positivity", r.positivity),
        ("homogeneity", r.homogeneity),
        ("subadditivity", r.subadditivity),
        ("euler", r.euler),
    ] {
        table.push(vec![
            name.into(),
            v.into(),
            if v <= tol { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    table.push(vec![
        "evaluation_failures".into(),
        (r.failures as f64).into(),
        if r.failures == 0 { "PASS" } else { "FAIL" }.into(),
    ]);
    let mut extra = Map::new();
    extra.insert("passes".into(), Value::Bool(r.passes(tol)));
    let text = table.render(cfg.format, &cfg.echo(), extra);
    let mut report = Report::new(table, text);
    if !r.passes(tol) {
        report.code = exit::NUMERICAL;
        report.note = format!(
            "gauge axioms violated (max {:e}, tolerance {tol:e})\n",
            r.max_violation()
        );
    }
    Ok(report)
}
