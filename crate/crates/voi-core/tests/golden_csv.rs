//! Byte-for-byte golden files for the CSV emitters.
//!
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p voi-core --test golden_csv`
//! and review the diff before committing.

use std::fs;
use std::path::PathBuf;

use voi_core::model::parse_instance;
use voi_core::rational::Rational;
use voi_core::scanner::{grid_scan, ray_scan, write_grid_csv, write_ray_csv};
use voi_core::{Belief, ProblemInstance};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; regenerate with UPDATE_GOLDEN=1"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn paper() -> ProblemInstance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../examples/paper.json");
    parse_instance(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn grid_unit_denominator_golden() {
    let inst = paper();
    let scan = grid_scan(
        inst.problem(),
        inst.channel("i").unwrap(),
        inst.channel("j").unwrap(),
        1,
    )
    .unwrap();
    let mut out = Vec::new();
    write_grid_csv(&scan, &mut out).unwrap();
    check_golden("grid_n1.csv", &String::from_utf8(out).unwrap());
}

#[test]
fn grid_n12_golden() {
    let inst = paper();
    let scan = grid_scan(
        inst.problem(),
        inst.channel("i").unwrap(),
        inst.channel("j").unwrap(),
        12,
    )
    .unwrap();
    let mut out = Vec::new();
    write_grid_csv(&scan, &mut out).unwrap();
    check_golden("grid_n12.csv", &String::from_utf8(out).unwrap());
}

#[test]
fn ray_paper_golden() {
    let inst = paper();
    let origin = Belief::new(vec![
        Rational::from_ratio(1, 4),
        Rational::from_ratio(1, 6),
        Rational::from_ratio(7, 12),
    ])
    .unwrap();
    let direction = [
        Rational::from_int(1),
        Rational::from_int(0),
        Rational::from_int(-1),
    ];
    let scan = ray_scan(
        inst.problem(),
        inst.channel("i").unwrap(),
        inst.channel("j").unwrap(),
        &origin,
        &direction,
        &Rational::from_ratio(1, 4),
    )
    .unwrap();
    let mut out = Vec::new();
    write_ray_csv(&scan, &mut out).unwrap();
    check_golden("ray_paper.csv", &String::from_utf8(out).unwrap());
}
