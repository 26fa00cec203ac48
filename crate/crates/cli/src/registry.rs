//! Gauge and curve specifications: JSON files and the inline `kind:param` grammar.

use std::path::Path;

use gauge_curves::curve::{
    CircularHelix, Curve, Ellipse4, FourierCurve, Helix1, LinearImage, RectifyingSpiral,
    SampledCurve, Scaled, SpeedProfile,
};
use gauge_curves::gauge::{
    EllipsoidGauge, EuclideanGauge, Gauge, ImplicitGauge, RandersGauge, StarLevel, TranslatedGauge,
};
use gauge_curves::numerics::{Mat3, Vec3};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A gauge description as read from JSON or the inline grammar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GaugeSpec {
    Euclidean,
    Randers {
        b: f64,
    },
    Ellipsoid {
        b: f64,
    },
    Translated {
        base: Box<GaugeSpec>,
        a0: [f64; 3],
    },
    /// Star-shaped, non-convex level set; fails the subadditivity check.
    Dented {
        amplitude: f64,
    },
}

pub type DynGauge = Box<dyn Gauge>;
pub type DynCurve = Box<dyn Curve>;

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Config(format!("invalid {what}: {s:?}")))
}

/// Parse `x,y,z`.
pub fn parse_vec3(s: &str) -> Result<Vec3, CliError> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!("expected x,y,z but got {s:?}")));
    }
    Ok(Vec3::new(
        number(parts[0], "vector component")?,
        number(parts[1], "vector component")?,
        number(parts[2], "vector component")?,
    ))
}

fn arity(parts: &[&str], n: usize, usage: &str) -> Result<(), CliError> {
    if parts.len() == n {
        Ok(())
    } else {
        Err(CliError::Config(format!("expected {usage}")))
    }
}

impl GaugeSpec {
    /// Read a JSON file when `text` names one, else parse the inline grammar:
    /// `euclidean`, `randers:b`, `ellipsoid:b`, `dented:amplitude`,
    /// `translated:x,y,z:<base>`.
    pub fn from_arg(text: &str) -> Result<Self, CliError> {
        if text.ends_with(".json") || Path::new(text).is_file() {
            let raw = std::fs::read_to_string(text)
                .map_err(|e| CliError::Config(format!("cannot read gauge file {text}: {e}")))?;
            return serde_json::from_str(&raw)
                .map_err(|e| CliError::Config(format!("malformed gauge file {text}: {e}")));
        }
        Self::parse_inline(text)
    }

    pub fn parse_inline(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        match parts[0] {
            "euclidean" => arity(&parts, 1, "euclidean").map(|_| GaugeSpec::Euclidean),
            "randers" => {
                arity(&parts, 2, "randers:b")?;
                Ok(GaugeSpec::Randers {
                    b: number(parts[1], "b")?,
                })
            }
            "ellipsoid" => {
                arity(&parts, 2, "ellipsoid:b")?;
                Ok(GaugeSpec::Ellipsoid {
                    b: number(parts[1], "b")?,
                })
            }
            "dented" => {
                arity(&parts, 2, "dented:amplitude")?;
                Ok(GaugeSpec::Dented {
                    amplitude: number(parts[1], "amplitude")?,
                })
            }
            "translated" if parts.len() >= 3 => {
                let a0 = parse_vec3(parts[1])?.to_array();
                let base = Self::parse_inline(&parts[2..].join(":"))?;
                Ok(GaugeSpec::Translated {
                    base: Box::new(base),
                    a0,
                })
            }
            "translated" => Err(CliError::Config(
                "expected translated:x,y,z:<base gauge>".into(),
            )),
            other => Err(CliError::Config(format!("unknown gauge kind {other:?}"))),
        }
    }

    pub fn build(&self) -> Result<DynGauge, CliError> {
        Ok(match self {
            GaugeSpec::Euclidean => Box::new(EuclideanGauge),
            GaugeSpec::Randers { b } => Box::new(RandersGauge::new(*b)?),
            GaugeSpec::Ellipsoid { b } => Box::new(EllipsoidGauge::new(*b)?),
            GaugeSpec::Dented { amplitude } => Box::new(ImplicitGauge::new(StarLevel {
                amplitude: *amplitude,
            })?),
            GaugeSpec::Translated { base, a0 } => {
                Box::new(TranslatedGauge::new(base.build()?, Vec3::from_array(*a0))?)
            }
        })
    }
}

/// Curve description. Parameters are carried inline, e.g. `helix1:0.5`.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Helix1 {
        b: f64,
    },
    Ellipse4 {
        b: f64,
    },
    CircularHelix {
        radius: f64,
        pitch: f64,
    },
    PerturbedHelix {
        b: f64,
        eps: f64,
    },
    Rectifying {
        a: f64,
        r: f64,
    },
    /// The Euclidean rectifying spiral pulled back by the linear map taking
    /// the Randers unit sphere to a translated round sphere.
    RandersRectifying {
        b: f64,
        a: f64,
        r: f64,
    },
    Scaled {
        profile: SpeedProfile,
        base: Box<CurveSpec>,
    },
    Csv {
        path: String,
    },
}

impl CurveSpec {
    /// Grammar:
    /// `helix1:b`, `ellipse4:b`, `circular_helix:R:c`, `perturbed_helix:b:eps`,
    /// `rectifying:a:r`, `randers_rectifying:b:a:r`,
    /// `scaled:<const|sin|inv-sin>:<c>:<base curve>`, `csv:<path>` or a `.csv` path.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.ends_with(".csv") && !text.starts_with("csv:") {
            return Ok(CurveSpec::Csv {
                path: text.to_string(),
            });
        }
        let parts: Vec<&str> = text.split(':').collect();
        let num = |i: usize, what: &str| number(parts[i], what);
        match parts[0] {
            "helix1" => {
                arity(&parts, 2, "helix1:b")?;
                Ok(CurveSpec::Helix1 { b: num(1, "b")? })
            }
            "ellipse4" => {
                arity(&parts, 2, "ellipse4:b")?;
                Ok(CurveSpec::Ellipse4 { b: num(1, "b")? })
            }
            "circular_helix" => {
                arity(&parts, 3, "circular_helix:R:c")?;
                Ok(CurveSpec::CircularHelix {
                    radius: num(1, "radius")?,
                    pitch: num(2, "pitch")?,
                })
            }
            "perturbed_helix" => {
                arity(&parts, 3, "perturbed_helix:b:eps")?;
                Ok(CurveSpec::PerturbedHelix {
                    b: num(1, "b")?,
                    eps: num(2, "eps")?,
                })
            }
            "rectifying" => {
                arity(&parts, 3, "rectifying:a:r")?;
                Ok(CurveSpec::Rectifying {
                    a: num(1, "a")?,
                    r: num(2, "r")?,
                })
            }
            "randers_rectifying" => {
                arity(&parts, 4, "randers_rectifying:b:a:r")?;
                Ok(CurveSpec::RandersRectifying {
                    b: num(1, "b")?,
                    a: num(2, "a")?,
                    r: num(3, "r")?,
                })
            }
            "scaled" if parts.len() >= 4 => {
                let c = num(2, "profile constant")?;
                let profile = match parts[1] {
                    "const" => SpeedProfile::Constant(c),
                    "sin" => SpeedProfile::SinePlus(c),
                    "inv-sin" => SpeedProfile::InverseSinePlus(c),
                    other => {
                        return Err(CliError::Config(format!("unknown speed profile {other:?}")))
                    }
                };
                let base = Self::parse(&parts[3..].join(":"))?;
                Ok(CurveSpec::Scaled {
                    profile,
                    base: Box::new(base),
                })
            }
            "scaled" => Err(CliError::Config(
                "expected scaled:<profile>:<c>:<base curve>".into(),
            )),
            "csv" if parts.len() >= 2 => Ok(CurveSpec::Csv {
                path: parts[1..].join(":"),
            }),
            other => Err(CliError::Config(format!("unknown curve key {other:?}"))),
        }
    }

    /// True when the curve is known only through samples.
    pub fn is_sampled(&self) -> bool {
        match self {
            CurveSpec::Csv { .. } => true,
            CurveSpec::Scaled { base, .. } => base.is_sampled(),
            _ => false,
        }
    }

    pub fn build(&self) -> Result<DynCurve, CliError> {
        Ok(match self {
            CurveSpec::Helix1 { b } => Box::new(Helix1::new(*b)),
            CurveSpec::Ellipse4 { b } => {
                if !(*b > 0.0 && *b < 1.0) {
                    return Err(CliError::Config("ellipse4 needs 0 < b < 1".into()));
                }
                Box::new(Ellipse4::new(*b))
            }
            CurveSpec::CircularHelix { radius, pitch } => {
                if radius.is_nan() || *radius <= 0.0 {
                    return Err(CliError::Config("circular_helix needs R > 0".into()));
                }
                Box::new(CircularHelix::new(*radius, *pitch))
            }
            CurveSpec::PerturbedHelix { b, eps } => {
                Box::new(FourierCurve::perturbed_helix(*b, *eps))
            }
            CurveSpec::Rectifying { a, r } => Box::new(RectifyingSpiral::new(*a, *r)?),
            CurveSpec::RandersRectifying { b, a, r } => {
                if !(*b > 0.0 && *b < 1.0) {
                    return Err(CliError::Config(
                        "randers_rectifying needs 0 < b < 1".into(),
                    ));
                }
                let c = 1.0 - b * b;
                let map = Mat3::diagonal(1.0 / c.sqrt(), 1.0 / c.sqrt(), 1.0 / c);
                Box::new(LinearImage {
                    map,
                    curve: RectifyingSpiral::new(*a, *r)?,
                })
            }
            CurveSpec::Scaled { profile, base } => {
                profile.validate()?;
                Box::new(Scaled::new(base.build()?, *profile))
            }
            CurveSpec::Csv { path } => Box::new(read_csv_curve(Path::new(path))?),
        })
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    t: f64,
    x: f64,
    y: f64,
    z: f64,
}

/// Read samples with header `t,x,y,z`.
pub fn read_csv_curve(path: &Path) -> Result<SampledCurve, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Config(format!("cannot read header of {}: {e}", path.display())))?;
    if headers.iter().collect::<Vec<_>>() != ["t", "x", "y", "z"] {
        return Err(CliError::Config(format!(
            "{} must have header t,x,y,z",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.deserialize::<Row>().enumerate() {
        let r = record
            .map_err(|e| CliError::Config(format!("{} row {}: {e}", path.display(), i + 1)))?;
        rows.push((r.t, Vec3::new(r.x, r.y, r.z)));
    }
    Ok(SampledCurve::new(rows)?)
}
