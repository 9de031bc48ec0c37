use std::process::{Command, Output};

use anisoscope::csv::parse_table;
use anisoscope::scheme::builtin_catalog;
use anisoscope::spectral::{anisotropy_polar, VelocityPolar};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anisoscope")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn every_output_starts_with_a_manifest() {
    let out = run(&["list-schemes"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# manifest: tool=anisoscope"));
    assert!(first.contains("command=list-schemes"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 10);
}

#[test]
fn wavenumber_curve_has_requested_samples() {
    let out = run(&["wavenumber", "--scheme", "E6", "--samples", "64"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = parse_table(&stdout(&out)).unwrap();
    let k = table.column("k_num").unwrap();
    assert_eq!(k.len(), 64);
    assert_eq!(k[0], 0.0);
}

#[test]
fn polar_output_reproduces_the_library_spread() {
    let out = run(&["polar", "--scheme", "E4", "--ppw", "4", "--angles", "72"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let back = VelocityPolar::from_csv(&stdout(&out)).unwrap();
    let direct = anisotropy_polar(builtin_catalog().scheme("E4").unwrap(), 4.0, 72).unwrap();
    assert_eq!(back.rows.len(), 72);
    assert_eq!(back.spread(), direct.spread());
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let out = run(&["--out", path.to_str().unwrap(), "wavenumber", "--scheme", "C4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# manifest:"));
    assert!(text.lines().next().unwrap().contains("outputs="));
}

#[test]
fn bad_arguments_exit_with_validation_status() {
    for args in [
        &["polar", "--bogus"][..],
        &["polar", "--scheme", "NOPE", "--ppw", "4"],
        &["polar", "--scheme", "E4", "--ppw=1"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).starts_with("ERROR:validation:"), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let table = stdout(&out);
    assert!(table.lines().filter(|l| l.contains(",true,")).count() >= 13);
    assert!(!table.contains(",false,"));
}

#[test]
fn simulate_reads_config_and_dumps_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# small run\nscheme=E4\nmarcher=leapfrog\nn=16\nk=0.2\nsteps=10\nrecord_stride=5\n").unwrap();
    let dump = dir.path().join("field.f64");
    let out = run(&["simulate", "--config", config.to_str().unwrap(), "--dump", dump.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = parse_table(&stdout(&out)).unwrap();
    assert_eq!(table.column("step").unwrap(), vec![0.0, 5.0, 10.0]);
    assert_eq!(std::fs::metadata(&dump).unwrap().len(), 16 * 16 * 8);
    assert!(dump.with_extension("f64.hdr").exists());
}

#[test]
fn simulate_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "scheme=E4\nspeed=3\n").unwrap();
    let out = run(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR:"));
}
