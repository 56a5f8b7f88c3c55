//! JSON configuration files.
//!
//! ```json
//! {"field": "rational", "d": 1,
//!  "points": [["0", "1/2"], ["1", "0"]],
//!  "curves": [{"0,1": "1", "1,0": "-1"}]}
//! ```
//!
//! Field tags are `rational`, `fp:<prime>` and `gaussian_rational`. Scalars
//! are exact strings (`"p/q"`, or `"p/q+r/s i"` over ℚ(i)); plain JSON
//! integers are accepted as well. Curve keys are exponent pairs `"i,j"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{BivariatePolynomial, Field};
use crate::error::{LabError, Result};
use crate::incidence::{PlaneCurve, PlanePoint, PointConfiguration};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(v) => v.to_string(),
            Number::Text(s) => s.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    field: Field,
    d: u32,
    points: Vec<[Number; 2]>,
    curves: Vec<BTreeMap<String, Number>>,
}

/// Parses a configuration and validates it (distinct points, degrees,
/// pairwise component-disjoint curves).
///
/// Syntax errors carry their line and column.
pub fn parse_config(text: &str) -> Result<PointConfiguration> {
    let raw: ConfigFile = serde_json::from_str(text).map_err(|e| LabError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = raw.field;
    let points = raw
        .points
        .iter()
        .map(|[x, y]| {
            PlanePoint::new(
                field.parse_scalar(&x.text())?,
                field.parse_scalar(&y.text())?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let curves = raw
        .curves
        .iter()
        .map(|m| {
            let texts: Vec<(String, String)> =
                m.iter().map(|(k, v)| (k.clone(), v.text())).collect();
            let poly = BivariatePolynomial::from_text_map(
                field,
                texts.iter().map(|(k, v)| (k.as_str(), v.as_str())),
            )?;
            PlaneCurve::new(poly)
        })
        .collect::<Result<Vec<_>>>()?;
    PointConfiguration::validated(field, raw.d, points, curves)
}

pub fn read_config(path: &Path) -> Result<PointConfiguration> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Serializes with exact string scalars; [`parse_config`] inverts it.
pub fn config_to_json(cfg: &PointConfiguration) -> String {
    let raw = ConfigFile {
        field: cfg.field(),
        d: cfg.degree(),
        points: cfg
            .points()
            .iter()
            .map(|p| [Number::Text(p.x.to_string()), Number::Text(p.y.to_string())])
            .collect(),
        curves: cfg
            .curves()
            .iter()
            .map(|c| {
                c.poly()
                    .to_text_map()
                    .into_iter()
                    .map(|(k, v)| (k, Number::Text(v)))
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("configuration serializes")
}

pub fn write_config(cfg: &PointConfiguration, path: &Path) -> Result<()> {
    std::fs::write(path, config_to_json(cfg) + "\n")?;
    Ok(())
}
