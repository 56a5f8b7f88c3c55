//! `incidence-lab`: generate configurations, count incidences, build
//! partitions, check bounds and run sweeps.
//!
//! Exit codes: 0 success, 1 a bound failed, 2 usage or parse error, 3
//! internal failure (two counters disagree, or a construction failed).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incidence_lab::algebra::Field;
use incidence_lab::config::{config_to_json, read_config};
use incidence_lab::generators::GeneratorSpec;
use incidence_lab::harness::{
    describe_constants, emit_report, fit_exponent, parse_constant, read_report, run_sweep,
    ReportFormat, SweepOptions, SweepSpec,
};
use incidence_lab::incidence::{evaluate_bounds, BoundConstants, BoundKind, PointConfiguration};
use incidence_lab::partition::{
    build_partition, choose_partition_degree, dyadic_ledger, incidence_count_partitioned,
    PartitionDegree,
};
use incidence_lab::veronese::CurveFamily;
use incidence_lab::{LabError, Result};

#[derive(Parser)]
#[command(
    name = "incidence-lab",
    version,
    about = "Exact point–curve incidence experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file (default: stdout).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Count incidences.
    Count {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        /// Partition levels (default: chosen from |P|, |L| and A).
        #[arg(long)]
        levels: Option<u32>,
        /// Also run the iterated partition ledger.
        #[arg(long)]
        dyadic: bool,
    },
    /// Build a partition of the configuration's points.
    Partition {
        config: PathBuf,
        #[arg(long)]
        levels: u32,
        /// Print the factors as exact coefficient maps.
        #[arg(long)]
        dump_poly: bool,
    },
    /// Evaluate incidence bounds.
    Verify {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "initial,trivial,main")]
        bounds: Vec<String>,
        /// Multiplier applied to every right-hand side, e.g. `1` or `3/2`.
        #[arg(long, default_value = "1")]
        constant: String,
        /// Curve family for the family bound.
        #[arg(long)]
        family: Option<String>,
    },
    /// Run a sweep spec and write a report.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Report file; `.json` selects JSON, anything else CSV (default: CSV on stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        /// Record wall time per row (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Fit a power law between two report columns.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        curves: usize,
        #[arg(long, default_value_t = 20)]
        range: i64,
    },
    GridLines {
        #[arg(long)]
        k: u32,
    },
    OnCurves {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        curves: usize,
        #[arg(long)]
        points_per_curve: usize,
    },
    Family {
        #[arg(long, value_parser = parse_field, default_value = "rational")]
        field: Field,
        #[arg(long)]
        family: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        curves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    /// `rational`, `fp:<prime>` or `gaussian_rational`.
    #[arg(long, value_parser = parse_field, default_value = "rational")]
    field: Field,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Partition,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    Field::parse_tag(s).map_err(|e| e.to_string())
}

impl GenKind {
    fn spec(self) -> GeneratorSpec {
        match self {
            GenKind::Random {
                common,
                points,
                curves,
                range,
            } => GeneratorSpec::Random {
                field: common.field,
                d: common.d,
                points,
                curves,
                seed: common.seed,
                range,
            },
            GenKind::GridLines { k } => GeneratorSpec::GridLines { k },
            GenKind::OnCurves {
                common,
                curves,
                points_per_curve,
            } => GeneratorSpec::OnCurves {
                field: common.field,
                d: common.d,
                curves,
                points_per_curve,
                seed: common.seed,
            },
            GenKind::Family {
                field,
                family,
                d,
                points,
                curves,
                seed,
            } => GeneratorSpec::Family {
                field,
                family,
                d,
                points,
                curves,
                seed,
            },
        }
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    BoundFailed,
    Inconsistent,
}

fn exit_code(e: &LabError) -> u8 {
    match e {
        LabError::Consistency(_) | LabError::ConstructionFailure(_) => 3,
        _ => 2,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("INCIDENCE_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        LabError::InvalidInput(format!(
            "INCIDENCE_LAB_THREADS must be a number, got `{raw}`"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| LabError::InvalidInput(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::BoundFailed) => ExitCode::from(1),
        Ok(Outcome::Inconsistent) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen { kind, out } => {
            let generated = kind.spec().generate()?;
            for p in &generated.collisions {
                eprintln!("note: merged duplicate point {p}");
            }
            write_out(out.as_deref(), &(config_to_json(&generated.config) + "\n"))?;
            Ok(Outcome::Ok)
        }
        Command::Count {
            config,
            method,
            levels,
            dyadic,
        } => {
            let cfg = read_config(&config)?;
            count(&cfg, method, levels, dyadic)
        }
        Command::Partition {
            config,
            levels,
            dump_poly,
        } => {
            let cfg = read_config(&config)?;
            let part = build_partition(cfg.points(), levels)?;
            println!("levels: {}", part.levels());
            println!("degree: {}", part.degree());
            println!("cells: {}", part.cells().len());
            println!(
                "max_cell: {} (bound {})",
                part.max_occupancy(),
                part.occupancy_bound()
            );
            println!("boundary_points: {}", part.boundary_points().len());
            for (sign, members) in part.cells() {
                println!("cell {sign}: {}", members.len());
            }
            if dump_poly {
                let text =
                    serde_json::to_string_pretty(&part.factor_text()).expect("maps serialize");
                println!("{text}");
            }
            Ok(Outcome::Ok)
        }
        Command::Verify {
            config,
            bounds,
            constant,
            family,
        } => {
            let cfg = read_config(&config)?;
            let kinds = bounds
                .iter()
                .map(|b| BoundKind::parse(b.trim()))
                .collect::<Result<Vec<_>>>()?;
            let fam = family
                .map(|name| CurveFamily::by_name(&name, cfg.degree(), cfg.field()))
                .transpose()?;
            if kinds.contains(&BoundKind::Family) && fam.is_none() {
                return Err(LabError::InvalidInput(
                    "the family bound needs --family".into(),
                ));
            }
            let constants = BoundConstants::uniform(parse_constant(&constant)?);
            let report = evaluate_bounds(&cfg, &constants, fam.as_ref())?;
            println!("incidences: {}", report.incidence_count);
            println!("constants: {}", describe_constants(&constants));
            let mut all = true;
            for kind in kinds {
                let v = report
                    .verdict(kind)
                    .expect("requested bounds are evaluated");
                all &= v.passes;
                println!(
                    "{:<8} rhs={:.6e} c_min={} {}",
                    kind.name(),
                    v.rhs,
                    v.c_min,
                    if v.passes { "PASS" } else { "FAIL" }
                );
            }
            Ok(if all {
                Outcome::Ok
            } else {
                Outcome::BoundFailed
            })
        }
        Command::Sweep {
            spec,
            out,
            format,
            timing,
        } => {
            let spec = SweepSpec::parse(&std::fs::read_to_string(&spec)?)?;
            let format = match (&format, &out) {
                (Some(f), _) => ReportFormat::parse(f)?,
                (None, Some(p)) => ReportFormat::from_path(p),
                (None, None) => ReportFormat::Csv,
            };
            let rows = run_sweep(&spec, SweepOptions { timing });
            for row in rows.iter().filter(|r| !r.is_ok()) {
                eprintln!("row {}: {}", row.config_id, row.status);
            }
            match &out {
                Some(p) => emit_report(
                    &rows,
                    format,
                    std::io::BufWriter::new(std::fs::File::create(p)?),
                )?,
                None => emit_report(&rows, format, std::io::stdout().lock())?,
            }
            Ok(if rows.iter().any(|r| r.is_consistency_failure()) {
                Outcome::Inconsistent
            } else {
                Outcome::Ok
            })
        }
        Command::Fit { input, x, y } => {
            let rows = read_report(
                &std::fs::read_to_string(&input)?,
                ReportFormat::from_path(&input),
            )?;
            let fit = fit_exponent(&rows, &x, &y)?;
            println!("slope: {:.9}", fit.slope);
            println!("intercept: {:.9}", fit.intercept);
            println!("residual: {:.9}", fit.residual);
            Ok(Outcome::Ok)
        }
    }
}

fn count(
    cfg: &PointConfiguration,
    method: Method,
    levels: Option<u32>,
    dyadic: bool,
) -> Result<Outcome> {
    let report = evaluate_bounds(cfg, &BoundConstants::default(), None)?;
    if let Method::Partition = method {
        let t = match levels {
            Some(t) => t,
            None if cfg.points().is_empty() || cfg.curves().is_empty() => 0,
            None => match choose_partition_degree(
                cfg.points().len() as u64,
                cfg.curves().len() as u64,
                cfg.dof() as u32,
            )? {
                PartitionDegree::Partition { levels, .. } => levels,
                PartitionDegree::Skip => 0,
            },
        };
        let part = build_partition(cfg.points(), t)?;
        let counted = incidence_count_partitioned(cfg, &part)?;
        let l = &counted.ledger;
        println!("levels: {t}");
        println!("deg_Q: {}", l.deg_q);
        println!("max_cell: {}", l.max_cell);
        println!("sum_Li: {}", l.sum_li);
        println!("cell_cell: {}", l.cell_cell);
        println!("alg_cell: {}", l.alg_cell);
        println!("alg_alg: {}", l.alg_alg);
        println!("cell_alg: {}", l.cell_alg);
        if counted.report.incidence_count != report.incidence_count {
            return Ok(Outcome::Inconsistent);
        }
    }
    if dyadic {
        for (i, step) in dyadic_ledger(cfg)?.iter().enumerate() {
            let degree = step.degree.map_or("-".to_string(), |d| d.to_string());
            println!(
                "round {i}: |P|={} |L|={} D={degree} t={} L_alg={} incidences={}",
                step.points, step.curves, step.levels, step.alg_curves, step.incidences
            );
        }
    }
    println!("incidences: {}", report.incidence_count);
    Ok(Outcome::Ok)
}
