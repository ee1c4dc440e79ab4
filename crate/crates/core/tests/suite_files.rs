use tod_credal::domain::{DomainSpace, VariableDef};
use tod_credal::suite::{load_suite, save_suite};
use tod_credal::{Error, ScenarioSuite};

fn space() -> DomainSpace {
    DomainSpace::new(vec![
        VariableDef::new("Weather", ["Clear", "Rain", "Fog"]),
        VariableDef::new("Road", ["Highway", "Urban"]),
    ])
    .unwrap()
}

#[test]
fn save_then_load_reproduces_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.csv");
    let suite = ScenarioSuite::new(vec![4, 0, 9, 1, 3, 3]).unwrap();
    save_suite(&path, &space(), &suite).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("Weather,Road,count\nClear,Highway,4\n"), "{text}");
    assert_eq!(load_suite(&path, &space()).unwrap(), suite);
}

#[test]
fn row_per_scenario_files_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    std::fs::write(&path, "Weather,Road,count\nFog,Urban,1\nRain,Highway,1\nFog,Urban,1\n").unwrap();
    let suite = load_suite(&path, &space()).unwrap();
    assert_eq!(suite.counts(), &[0, 0, 1, 0, 0, 2]);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_suite("/definitely/not/here.csv", &space()).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(err.kind().exit_code(), 3);
}
