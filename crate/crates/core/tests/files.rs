use std::fs;

use coset_mtc::io::{
    load_branching_table, modular_data_from_json, modular_data_to_json, MAVERICK_JSON,
};
use coset_mtc::kw::{check_kwc, check_kwh, diagonal_branching};
use coset_mtc::{CosetSpec, CosetTheory, Error, Tolerances};

#[test]
fn maverick_loads_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maverick.json");
    fs::write(&path, MAVERICK_JSON).unwrap();
    let tol = Tolerances::default();
    let table = load_branching_table(&path, &tol).unwrap();
    assert_eq!(table.exp.len(), 18);
    assert!(check_kwc(&table, &tol).unwrap().passed);
    assert!(!check_kwh(&table, &tol).passed);
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_branching_table(&dir.path().join("nope.json"), &Tolerances::default());
    assert!(matches!(err, Err(Error::Io(_))));
}

#[test]
fn diagonal_table_has_vacuum_orbit() {
    let tol = Tolerances::default();
    let table = diagonal_branching(&CosetSpec::new(3, 1, 1).unwrap(), &tol).unwrap();
    // The vacuum orbit of the Z_3 action has three members.
    assert_eq!(table.vacuum_mult.len(), 3);
    assert!(table.vacuum_mult.iter().all(|&(_, _, m)| m == 1));
}

#[test]
fn coset_data_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coset.json");
    let th = CosetTheory::new(CosetSpec::new(3, 1, 2).unwrap(), Tolerances::default()).unwrap();
    let md = th.modular_data().unwrap();
    fs::write(&path, modular_data_to_json(&md).unwrap()).unwrap();
    let back = modular_data_from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, md);
    let report = th.verify_modular_data(&back).unwrap();
    assert!(report.passed(), "{report}");
}
