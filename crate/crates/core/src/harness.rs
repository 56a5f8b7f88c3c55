//! Experiment sweeps, exponent fits and report emission.
//!
//! A sweep spec is a JSON document
//!
//! ```json
//! {"entries": [{"id": "grid-2", "kind": "grid_lines", "k": 2},
//!              {"kind": "random", "field": "fp:101", "d": 2,
//!               "points": 50, "curves": 20, "seed": 1}],
//!  "constants": {"main": "1/2"},
//!  "max_levels": 6}
//! ```
//!
//! Each entry is a [`GeneratorSpec`] plus an optional `id` (default: the
//! entry's zero-padded index). Entries are parsed one by one so that a bad
//! entry only fails its own row. `constants` (default 1) and `max_levels`
//! (cap on partition levels, default 6) are optional.

use std::io::Write;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, Field};
use crate::error::{LabError, Result};
use crate::generators::GeneratorSpec;
use crate::incidence::{evaluate_bounds, BoundConstants, BoundKind, IncidenceReport, MicroUnits};
use crate::partition::{
    build_partition, choose_partition_degree, incidence_count_partitioned, PartitionDegree,
};

/// One sweep entry's outcome. Field order is the CSV column order:
///
/// `config_id, field, d, A, n_points, n_curves, incidences, rhs_initial,
/// rhs_trivial, rhs_main, rhs_family, c_min_initial, c_min_trivial,
/// c_min_main, c_min_family, deg_Q, max_cell, sum_Li, ms_elapsed, status`.
///
/// Missing values are empty cells (JSON `null`): the family columns without
/// a family, the partition columns outside ℚ or outside the partitioning
/// regime, the timing column unless requested, and everything after
/// `config_id` on a failed row. `status` is `ok`, `error: …`, or
/// `consistency: …` when two counters disagreed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResultRow {
    pub config_id: String,
    pub field: Option<Field>,
    pub d: Option<u32>,
    #[serde(rename = "A")]
    pub a: Option<u32>,
    pub n_points: Option<u64>,
    pub n_curves: Option<u64>,
    pub incidences: Option<u64>,
    pub rhs_initial: Option<f64>,
    pub rhs_trivial: Option<f64>,
    pub rhs_main: Option<f64>,
    pub rhs_family: Option<f64>,
    pub c_min_initial: Option<MicroUnits>,
    pub c_min_trivial: Option<MicroUnits>,
    pub c_min_main: Option<MicroUnits>,
    pub c_min_family: Option<MicroUnits>,
    #[serde(rename = "deg_Q")]
    pub deg_q: Option<u64>,
    pub max_cell: Option<u64>,
    #[serde(rename = "sum_Li")]
    pub sum_li: Option<u64>,
    pub ms_elapsed: Option<u64>,
    pub status: String,
}

pub const CSV_COLUMNS: [&str; 20] = [
    "config_id",
    "field",
    "d",
    "A",
    "n_points",
    "n_curves",
    "incidences",
    "rhs_initial",
    "rhs_trivial",
    "rhs_main",
    "rhs_family",
    "c_min_initial",
    "c_min_trivial",
    "c_min_main",
    "c_min_family",
    "deg_Q",
    "max_cell",
    "sum_Li",
    "ms_elapsed",
    "status",
];

impl SweepResultRow {
    fn failed(config_id: String, status: String) -> Self {
        SweepResultRow {
            config_id,
            field: None,
            d: None,
            a: None,
            n_points: None,
            n_curves: None,
            incidences: None,
            rhs_initial: None,
            rhs_trivial: None,
            rhs_main: None,
            rhs_family: None,
            c_min_initial: None,
            c_min_trivial: None,
            c_min_main: None,
            c_min_family: None,
            deg_q: None,
            max_cell: None,
            sum_li: None,
            ms_elapsed: None,
            status,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn is_consistency_failure(&self) -> bool {
        self.status.starts_with("consistency")
    }

    /// A numeric column by its CSV name, if present.
    pub fn column(&self, name: &str) -> Result<Option<f64>> {
        if !CSV_COLUMNS.contains(&name) {
            return Err(LabError::invalid(format!("unknown column `{name}`")));
        }
        let value = serde_json::to_value(self).expect("rows serialize");
        Ok(match &value[name] {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::String(s) => s.parse::<f64>().ok(),
            _ => None,
        })
    }
}

/// A parsed sweep spec; entries that failed to parse are kept as errors.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub entries: Vec<(String, std::result::Result<GeneratorSpec, String>)>,
    pub constants: BoundConstants,
    pub max_levels: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    #[serde(default)]
    entries: Vec<serde_json::Value>,
    #[serde(default)]
    constants: std::collections::BTreeMap<String, String>,
    #[serde(default)]
    max_levels: Option<u32>,
}

const DEFAULT_MAX_LEVELS: u32 = 6;

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: SweepFile = serde_json::from_str(text).map_err(|e| LabError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut constants = BoundConstants::default();
        for (name, value) in &raw.constants {
            let c = parse_rational(value)?;
            match BoundKind::parse(name)? {
                BoundKind::Initial => constants.initial = c,
                BoundKind::Trivial => constants.trivial = c,
                BoundKind::Main => constants.main = c,
                BoundKind::Family => constants.family = c,
            }
        }
        let entries = raw
            .entries
            .into_iter()
            .enumerate()
            .map(|(i, mut v)| {
                let id = match v.as_object_mut().and_then(|o| o.remove("id")) {
                    Some(serde_json::Value::String(s)) => s,
                    Some(other) => other.to_string(),
                    None => format!("{i:04}"),
                };
                let spec = serde_json::from_value::<GeneratorSpec>(v).map_err(|e| e.to_string());
                (id, spec)
            })
            .collect();
        Ok(SweepSpec {
            entries,
            constants,
            max_levels: raw.max_levels.unwrap_or(DEFAULT_MAX_LEVELS),
        })
    }

    pub fn from_specs(specs: impl IntoIterator<Item = (String, GeneratorSpec)>) -> Self {
        SweepSpec {
            entries: specs.into_iter().map(|(id, s)| (id, Ok(s))).collect(),
            constants: BoundConstants::default(),
            max_levels: DEFAULT_MAX_LEVELS,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Fill `ms_elapsed`. Off by default so that reports are reproducible
    /// byte for byte.
    pub timing: bool,
}

/// Runs every entry (concurrently) and returns rows in entry order.
pub fn run_sweep(spec: &SweepSpec, opts: SweepOptions) -> Vec<SweepResultRow> {
    spec.entries
        .par_iter()
        .map(|(id, entry)| {
            let start = Instant::now();
            let row = match entry {
                Err(msg) => Err(LabError::invalid(msg.clone())),
                Ok(g) => sweep_row(id, g, &spec.constants, spec.max_levels),
            };
            match row {
                Ok(mut row) => {
                    if opts.timing {
                        row.ms_elapsed = Some(start.elapsed().as_millis() as u64);
                    }
                    row
                }
                Err(LabError::Consistency(msg)) => {
                    SweepResultRow::failed(id.clone(), format!("consistency: {msg}"))
                }
                Err(e) => SweepResultRow::failed(id.clone(), format!("error: {e}")),
            }
        })
        .collect()
}

fn sweep_row(
    id: &str,
    spec: &GeneratorSpec,
    constants: &BoundConstants,
    max_levels: u32,
) -> Result<SweepResultRow> {
    let generated = spec.generate()?;
    let cfg = &generated.config;
    let report = evaluate_bounds(cfg, constants, generated.family.as_ref())?;
    let mut row = SweepResultRow::failed(id.to_string(), "ok".into());
    row.field = Some(cfg.field());
    row.d = Some(cfg.degree());
    row.a = Some(cfg.dof() as u32);
    row.n_points = Some(cfg.points().len() as u64);
    row.n_curves = Some(cfg.curves().len() as u64);
    row.incidences = Some(report.incidence_count);
    let rhs = |k| report.verdict(k).map(|v| v.rhs);
    let c_min = |k| report.verdict(k).map(|v| v.c_min);
    row.rhs_initial = rhs(BoundKind::Initial);
    row.rhs_trivial = rhs(BoundKind::Trivial);
    row.rhs_main = rhs(BoundKind::Main);
    row.rhs_family = rhs(BoundKind::Family);
    row.c_min_initial = c_min(BoundKind::Initial);
    row.c_min_trivial = c_min(BoundKind::Trivial);
    row.c_min_main = c_min(BoundKind::Main);
    row.c_min_family = c_min(BoundKind::Family);
    if cfg.field() == Field::Rational && !cfg.points().is_empty() && !cfg.curves().is_empty() {
        let degree = choose_partition_degree(
            cfg.points().len() as u64,
            cfg.curves().len() as u64,
            cfg.dof() as u32,
        )?;
        if let PartitionDegree::Partition { levels, .. } = degree {
            let part = build_partition(cfg.points(), levels.min(max_levels))?;
            let counted = incidence_count_partitioned(cfg, &part)?;
            check_counts(&report, &counted.report)?;
            row.deg_q = Some(part.degree());
            row.max_cell = Some(part.max_occupancy() as u64);
            row.sum_li = Some(counted.ledger.sum_li);
        }
    }
    Ok(row)
}

fn check_counts(brute: &IncidenceReport, partitioned: &IncidenceReport) -> Result<()> {
    if brute.incidence_count != partitioned.incidence_count {
        return Err(LabError::Consistency(format!(
            "brute force counts {}, partition counts {}",
            brute.incidence_count, partitioned.incidence_count
        )));
    }
    Ok(())
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_power_law(data: &[(f64, f64)]) -> Result<ExponentFit> {
    if data.len() < 2 {
        return Err(LabError::invalid("an exponent fit needs at least two rows"));
    }
    if data.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(LabError::invalid("exponent fits need positive values"));
    }
    let pts: Vec<(f64, f64)> = data.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::invalid("all x values are equal"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
    })
}

/// Fits `y ∝ x^slope` over the rows where both columns are present.
pub fn fit_exponent(rows: &[SweepResultRow], x: &str, y: &str) -> Result<ExponentFit> {
    let mut data = Vec::new();
    for row in rows {
        if let (Some(a), Some(b)) = (row.column(x)?, row.column(y)?) {
            data.push((a, b));
        }
    }
    fit_power_law(&data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(LabError::invalid(format!(
                "unknown report format `{other}`"
            ))),
        }
    }

    /// `json` for `*.json`, CSV otherwise.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

pub fn emit_report(
    rows: &[SweepResultRow],
    format: ReportFormat,
    mut out: impl Write,
) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            // The header is written by hand so that an empty report still
            // has one.
            writeln!(out, "{}", CSV_COLUMNS.join(","))?;
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            for row in rows {
                w.serialize(row).map_err(csv_error)?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| LabError::Io(e.into()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn report_to_string(rows: &[SweepResultRow], format: ReportFormat) -> String {
    let mut buf = Vec::new();
    emit_report(rows, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("reports are UTF-8")
}

fn csv_error(e: csv::Error) -> LabError {
    let pos = e.position().cloned();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => LabError::Io(io),
        other => LabError::Parse {
            line: pos.map_or(0, |p| p.line() as usize),
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

pub fn read_report(text: &str, format: ReportFormat) -> Result<Vec<SweepResultRow>> {
    match format {
        ReportFormat::Json => serde_json::from_str(text).map_err(|e| LabError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }),
        ReportFormat::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .map(|r| r.map_err(csv_error))
            .collect(),
    }
}

/// The constants a sweep applies, for display.
pub fn describe_constants(c: &BoundConstants) -> String {
    BoundKind::ALL
        .iter()
        .map(|&k| format!("{}={}", k.name(), c.get(k)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Parses `"1/2"`-style constants.
pub fn parse_constant(s: &str) -> Result<BigRational> {
    let c = parse_rational(s)?;
    if c < BigRational::from_integer(0.into()) {
        return Err(LabError::invalid("constants must be nonnegative"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_sweep(ks: &[u32]) -> SweepSpec {
        SweepSpec::from_specs(
            ks.iter()
                .map(|&k| (format!("grid-{k}"), GeneratorSpec::GridLines { k })),
        )
    }

    #[test]
    fn grid_sweep_counts() {
        let rows = run_sweep(&grid_sweep(&[2, 3, 4]), SweepOptions::default());
        let counts: Vec<_> = rows.iter().map(|r| r.incidences.unwrap()).collect();
        assert_eq!(counts, vec![16, 81, 256]);
        assert!(rows.iter().all(|r| r.is_ok() && r.deg_q.is_some()));
    }

    #[test]
    fn empty_sweep() {
        let spec = SweepSpec::parse(r#"{"entries": []}"#).unwrap();
        let rows = run_sweep(&spec, SweepOptions::default());
        assert!(rows.is_empty());
        assert_eq!(
            report_to_string(&rows, ReportFormat::Csv),
            CSV_COLUMNS.join(",") + "\n"
        );
    }

    #[test]
    fn bad_entry_fails_alone() {
        let spec = SweepSpec::parse(
            r#"{"entries": [{"kind": "grid_lines", "k": 2},
                            {"kind": "grid_lines", "k": "two"},
                            {"id": "fam", "kind": "family", "field": "rational", "family": "ellipses",
                             "points": 3, "curves": 1, "seed": 0},
                            {"kind": "grid_lines", "k": 3}]}"#,
        )
        .unwrap();
        let rows = run_sweep(&spec, SweepOptions::default());
        let ok: Vec<bool> = rows.iter().map(SweepResultRow::is_ok).collect();
        assert_eq!(ok, vec![true, false, false, true]);
        assert_eq!(rows[2].config_id, "fam");
        assert_eq!(rows[3].config_id, "0003");
    }

    #[test]
    fn unparseable_spec_reports_position() {
        match SweepSpec::parse("{\"entries\": [\n  {\"kind\": }]}") {
            Err(LabError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn constants_are_read() {
        let spec = SweepSpec::parse(r#"{"constants": {"main": "1/2"}, "entries": []}"#).unwrap();
        assert_eq!(spec.constants.main, BigRational::new(1.into(), 2.into()));
        assert!(SweepSpec::parse(r#"{"constants": {"mian": "1"}}"#).is_err());
    }

    #[test]
    fn exact_power_laws() {
        let sq: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&n| (n, n * n)).collect();
        let fit = fit_power_law(&sq).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9 && fit.residual < 1e-9);
        let flat = fit_power_law(&[(1.0, 5.0), (10.0, 5.0), (100.0, 5.0)]).unwrap();
        assert!(flat.slope.abs() < 1e-12);
        assert!(fit_power_law(&[(1.0, 0.0), (2.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn fit_on_rows() {
        let rows = run_sweep(&grid_sweep(&[2, 3, 4, 5]), SweepOptions::default());
        // I = k⁴ and |L| = k³, so I ∝ |L|^{4/3}.
        let fit = fit_exponent(&rows, "n_curves", "incidences").unwrap();
        assert!((fit.slope - 4.0 / 3.0).abs() < 1e-9);
        assert!(fit_exponent(&rows, "nope", "incidences").is_err());
    }

    #[test]
    fn reports_round_trip() {
        let mut spec = grid_sweep(&[2]);
        spec.entries.push((
            "circles".into(),
            Ok(GeneratorSpec::Family {
                field: Field::Rational,
                family: "circles".into(),
                d: None,
                points: 12,
                curves: 3,
                seed: 4,
            }),
        ));
        spec.entries
            .push(("broken".into(), Err("bad entry".into())));
        let rows = run_sweep(&spec, SweepOptions { timing: true });
        for format in [ReportFormat::Json, ReportFormat::Csv] {
            let text = report_to_string(&rows, format);
            assert_eq!(read_report(&text, format).unwrap(), rows);
        }
        assert!(rows[1].c_min_family.is_some());
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = grid_sweep(&[2, 3]);
        let a = report_to_string(
            &run_sweep(&spec, SweepOptions::default()),
            ReportFormat::Csv,
        );
        let b = report_to_string(
            &run_sweep(&spec, SweepOptions::default()),
            ReportFormat::Csv,
        );
        assert_eq!(a, b);
    }
}
