use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use pptgeo::state_io::state_json;
use pptgeo::table::render_json;
use pptgeo_core::private::construct_flower;
use pptgeo_core::Capacity;

fn pptgeo(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pptgeo")).args(args).current_dir(dir).env_remove("PPTGEO_MAX_DIM").output().unwrap()
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn stdout_carries_data_and_stderr_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = pptgeo(dir.path(), &["bounds", "--grid", "1:3,2:3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("l,d_s,p,first,second,exact,dominant\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    let manifest = json_of(&o.stderr);
    assert_eq!(manifest["outputs"]["-"].as_str().unwrap(), pptgeo::table::checksum(text.as_bytes()));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.cfg"), "experiment=wigner\nn=9\nsamples=5\nseed=4\nformat=json\n").unwrap();
    let o = pptgeo(dir.path(), &["run", "--config", "w.cfg", "--out", "w.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json_of(&std::fs::read(dir.path().join("w.json")).unwrap());
    assert_eq!(rows.as_array().unwrap().len(), 5);
    assert_eq!(rows[0]["n"], 9);
    let manifest = json_of(&std::fs::read(dir.path().join("w.json.manifest.json")).unwrap());
    assert_eq!(manifest["config"]["out"], "w.json");
    // The same config through the subcommand, with the seed overridden.
    let o = pptgeo(dir.path(), &["wigner", "--config", "w.cfg", "--seed", "5", "--samples", "3"]);
    assert!(o.status.success());
    assert_eq!(json_of(&o.stdout).as_array().unwrap().len(), 3);
    assert_eq!(json_of(&o.stdout)[0]["seed"], 5);
}

#[test]
fn conflicting_or_invalid_configs_exit_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.cfg"), "experiment=wigner\n").unwrap();
    assert_eq!(pptgeo(dir.path(), &["gap", "--config", "w.cfg"]).status.code(), Some(2));
    assert_eq!(pptgeo(dir.path(), &["run"]).status.code(), Some(2));
    assert_eq!(pptgeo(dir.path(), &["widths", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(pptgeo(dir.path(), &["bounds", "--epsilon", "3"]).status.code(), Some(2));
    assert_eq!(pptgeo(dir.path(), &["plot", "--in", "missing.csv", "--out", "x.svg"]).status.code(), Some(2));
}

#[test]
fn capacity_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pptgeo")).args(["boost", "--l", "2"]).current_dir(dir.path()).env("PPTGEO_MAX_DIM", "64").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity"));
}

#[test]
fn squeeze_reads_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = pptgeo(dir.path(), &["construct", "--ds", "2", "--out", "rho.json"]);
    assert!(o.status.success());
    let o = pptgeo(dir.path(), &["squeeze", "--in", "rho.json", "--out", "sq.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sq = json_of(&std::fs::read(dir.path().join("sq.json")).unwrap());
    assert_eq!(sq["is_ppt"], true);
    assert!(sq["residuals"]["transposed"].as_f64().unwrap() >= -1e-8);

    // The private bit is not PPT: the transposed residual is reported, not enforced.
    let gamma = construct_flower(2, Capacity::default()).unwrap().gamma;
    std::fs::write(dir.path().join("gamma.json"), render_json(&state_json(&gamma))).unwrap();
    let o = pptgeo(dir.path(), &["squeeze", "--in", "gamma.json"]);
    assert!(o.status.success());
    let sq = json_of(&o.stdout);
    assert_eq!(sq["is_ppt"], false);
    assert!(sq["residuals"]["transposed"].as_f64().unwrap() < -0.1);

    std::fs::write(dir.path().join("junk.json"), "{\"dims\": [2]}").unwrap();
    let o = pptgeo(dir.path(), &["squeeze", "--in", "junk.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("junk.json"));
}

#[test]
fn gap_rows_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let o = pptgeo(dir.path(), &["gap", "--ds", "3", "--random", "3", "--seed", "2"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "source,sample_id,distance,lower_bound,satisfied");
    assert_eq!(lines.len(), 1 + 2 + 3);
    assert!(lines[1].starts_with("flower,0,7.32050807568877") && lines[2].starts_with("closest_ppt,0,"));

    assert!(pptgeo(dir.path(), &["widths", "--samples", "12", "--out", "w.csv"]).status.success());
    assert!(pptgeo(dir.path(), &["plot", "--in", "w.csv", "--out", "w.svg"]).status.success());
    let svg = std::fs::read_to_string(dir.path().join("w.svg")).unwrap();
    assert!(svg.contains("h_PPT") && svg.contains("<rect"));
    assert_eq!(pptgeo(dir.path(), &["plot", "--in", "w.csv", "--kind", "bounds", "--out", "b.svg"]).status.code(), Some(2));
    assert!(!dir.path().join("b.svg").exists());
}

#[test]
fn fidelity_takes_explicit_schmidt_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let o = pptgeo(dir.path(), &["fidelity-ppt", "--schmidt", "0.8,0.6", "--format", "json"]);
    assert!(o.status.success());
    let rows = json_of(&o.stdout);
    assert!((rows[0]["overlap"].as_f64().unwrap() - 0.64).abs() < 1e-4);
    assert_eq!(pptgeo(dir.path(), &["fidelity-ppt", "--schmidt", "0.8,0.7"]).status.code(), Some(2));
}
