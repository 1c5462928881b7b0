//! Computed tables for every shipped space against the stored golden files.
//! Regenerate with `looplab dump --space S --coeff f2 --max-degree 60` and
//! `looplab dump --space S --coeff z --max-degree 120`.

use std::path::PathBuf;

use looplab::closedform::loop_cohomology;
use looplab::thom::{ct_assemble_z, SpaceDescriptor};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn loop_modules_match_golden_files() {
    for space in SpaceDescriptor::shipped() {
        let json = loop_cohomology(&space, 60).unwrap().to_json() + "\n";
        assert_eq!(json, golden(&format!("{space}.f2.json")), "{space}");
    }
}

#[test]
fn integral_tables_match_golden_files() {
    for space in SpaceDescriptor::shipped() {
        let tsv = ct_assemble_z(&space, 120).unwrap().to_tsv(120);
        assert_eq!(tsv, golden(&format!("{space}.z.tsv")), "{space}");
    }
}
