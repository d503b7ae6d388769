mod common;

use common::{cli_transcript, pssk, write_cli_inputs, CLI_RUNS};

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_cli_inputs(dir.path());
    dir
}

#[test]
fn every_scenario_run_succeeds() {
    let dir = setup();
    for args in CLI_RUNS {
        let (code, _, stderr) = pssk(dir.path(), args);
        assert_eq!(code, 0, "{args:?}: {stderr}");
    }
}

#[test]
fn signal_diagram_file() {
    let dir = setup();
    assert_eq!(pssk(dir.path(), CLI_RUNS[0]).0, 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("signal.dgm")).unwrap(), "1 3\n");
}

#[test]
fn image_and_mesh_diagram_files() {
    let dir = setup();
    assert_eq!(pssk(dir.path(), CLI_RUNS[1]).0, 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("ring.dim0.dgm")).unwrap(), "");
    assert_eq!(std::fs::read_to_string(dir.path().join("ring.dim1.dgm")).unwrap(), "# dim: 1\n0 1\n");
    assert_eq!(pssk(dir.path(), CLI_RUNS[2]).0, 0);
    // the inner square closes at its highest vertex
    let mesh1 = std::fs::read_to_string(dir.path().join("mesh.dim1.dgm")).unwrap();
    assert!(mesh1.lines().any(|l| l == "0 3"), "{mesh1}");
}

#[test]
fn kernel_of_single_point() {
    let dir = setup();
    let (code, out, _) = pssk(dir.path(), &["kernel", "--a", "a.dgm", "--b", "a.dgm", "--sigma", "1"]);
    assert_eq!(code, 0);
    let v: f64 = out.trim().parse().unwrap();
    assert!((v - (1.0 - (-0.25f64).exp()) / (8.0 * std::f64::consts::PI)).abs() < 1e-17);
    assert_eq!(out, "8.801237195560592e-3\n");
}

#[test]
fn bottleneck_to_empty_prints_five() {
    let dir = setup();
    assert_eq!(pssk(dir.path(), CLI_RUNS[7]), (0, "5\n".into(), String::new()));
}

#[test]
fn precision_flag_fixes_significant_digits() {
    let dir = setup();
    let (_, out, _) = pssk(dir.path(), &["--precision", "3", "kernel", "--a", "a.dgm", "--b", "a.dgm", "--sigma", "1"]);
    assert_eq!(out, "8.80e-3\n");
}

#[test]
fn usage_errors_exit_one() {
    let dir = setup();
    for args in [
        &["kernel", "--a", "a.dgm"][..],
        &["kernel", "--a", "a.dgm", "--b", "a.dgm", "--sigma", "1", "--bogus"],
        &["distance", "--a", "a.dgm", "--b", "b.dgm"],
        &["frobnicate"],
        &["kernel", "--a", "a.dgm", "--b", "a.dgm", "--sigma=-1"],
        &["feature-map", "--input", "a.dgm", "--sigma", "1", "--bounds", "0,1,0"],
        &["--precision", "18", "kernel", "--a", "a.dgm", "--b", "a.dgm", "--sigma", "1"],
    ] {
        let (code, _, stderr) = pssk(dir.path(), args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!stderr.is_empty());
    }
}

#[test]
fn data_errors_exit_two() {
    let dir = setup();
    std::fs::write(dir.path().join("bad.dgm"), "0 1\n3 2\n").unwrap();
    std::fs::write(dir.path().join("nan.csv"), "1\nfoo\n").unwrap();
    for args in [
        &["kernel", "--a", "missing.dgm", "--b", "a.dgm", "--sigma", "1"][..],
        &["kernel", "--a", "bad.dgm", "--b", "a.dgm", "--sigma", "1"],
        &["diagram", "--input", "nan.csv", "--kind", "signal1d", "--out", "x.dgm"],
    ] {
        let (code, stdout, stderr) = pssk(dir.path(), args);
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(stdout.is_empty() && stderr.starts_with("error:"), "{stderr}");
    }
    let (_, _, stderr) = pssk(dir.path(), &["kernel", "--a", "bad.dgm", "--b", "a.dgm", "--sigma", "1"]);
    assert!(stderr.contains("bad.dgm") && stderr.contains("line 2"), "{stderr}");
}

#[test]
fn every_subcommand_has_help() {
    let dir = setup();
    let subcommands = [
        &["diagram"][..],
        &["kernel"],
        &["gram"],
        &["distance"],
        &["landscape"],
        &["feature-map"],
        &["definiteness"],
        &["definiteness", "check"],
        &["definiteness", "search"],
        &["classify"],
        &["retrieval"],
    ];
    for sub in subcommands {
        let mut args = sub.to_vec();
        args.push("--help");
        let (code, out, _) = pssk(dir.path(), &args);
        assert_eq!(code, 0, "{sub:?}");
        assert!(out.contains("Usage:") && out.contains("--help"), "{sub:?}");
    }
}

#[test]
fn runs_are_byte_identical() {
    assert_eq!(cli_transcript(), cli_transcript());
}

#[test]
fn witness_directory_contents() {
    let dir = setup();
    let (code, out, _) = pssk(dir.path(), CLI_RUNS[15]);
    assert_eq!(code, 0);
    let kept = out.lines().find_map(|l| l.strip_prefix("kept ")).unwrap().split(',').count();
    let items = std::fs::read_to_string(dir.path().join("witness/items.txt")).unwrap();
    assert_eq!(items.lines().count(), kept);
    assert!(dir.path().join("witness/distances.csv").exists());
}
