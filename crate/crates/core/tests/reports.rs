use incidence_lab::algebra::Field;
use incidence_lab::generators::GeneratorSpec;
use incidence_lab::harness::{
    read_report, report_to_string, run_sweep, ReportFormat, SweepOptions, SweepSpec,
};

fn three_rows() -> SweepSpec {
    SweepSpec::from_specs([
        ("grid-3".to_string(), GeneratorSpec::GridLines { k: 3 }),
        (
            "random-f101".to_string(),
            GeneratorSpec::Random {
                field: Field::prime(101).unwrap(),
                d: 2,
                points: 50,
                curves: 20,
                seed: 7,
                range: 20,
            },
        ),
        (
            "circles".to_string(),
            GeneratorSpec::Family {
                field: Field::Rational,
                family: "circles".into(),
                d: None,
                points: 30,
                curves: 6,
                seed: 11,
            },
        ),
    ])
}

#[test]
fn csv_matches_golden_file() {
    let csv = report_to_string(
        &run_sweep(&three_rows(), SweepOptions::default()),
        ReportFormat::Csv,
    );
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(
            concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/golden_sweep.csv"),
            &csv,
        )
        .unwrap();
    }
    assert_eq!(csv, include_str!("data/golden_sweep.csv"));
}

#[test]
fn single_row_json_round_trip() {
    let spec = SweepSpec::from_specs([("grid-2".to_string(), GeneratorSpec::GridLines { k: 2 })]);
    let rows = run_sweep(&spec, SweepOptions::default());
    let json = report_to_string(&rows, ReportFormat::Json);
    let back = read_report(&json, ReportFormat::Json).unwrap();
    assert_eq!(back, rows);
    assert_eq!(report_to_string(&back, ReportFormat::Json), json);
}
