use std::path::PathBuf;
use std::process::{Command, Output};

use shellconf_cli::read_csv;

fn shellconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellconf")).args(args).output().expect("binary runs")
}

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let t = read_csv(text).unwrap();
    let i = t.column(name).unwrap_or_else(|| panic!("no column {name}"));
    t.rows.iter().map(|r| r[i].render()).collect()
}

#[test]
fn atlas_example_has_twenty_rows() {
    let out = shellconf(&["atlas", "--config", &example("table1_atlas_n4.conf"), "--atlas.alpha=false", "--atlas.entropy=false", "--reproducible"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let data_lines = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_lines, 21);
    for e in column(&text, "energy") {
        assert!((e.parse::<f64>().unwrap() + 0.03125).abs() < 1e-6);
    }
    assert_eq!(column(&text, "serial").last().unwrap(), "t");
}

#[test]
fn fixed_gap_sweep_energy_rises() {
    let out = shellconf(&[
        "sweep",
        "--sweep.variable=fixed_gap",
        "--sweep.fixed_gap=1",
        "--sweep.start=0",
        "--sweep.stop=3",
        "--sweep.step=0.5",
        "--state.labels=1s",
        "--reproducible",
    ]);
    assert!(out.status.success());
    let e: Vec<f64> = column(&String::from_utf8(out.stdout).unwrap(), "energy").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(e.len(), 7);
    assert!(e.windows(2).all(|w| w[1] > w[0]), "{e:?}");
}

#[test]
fn free_entropy_row() {
    let out = shellconf(&["entropy", "--reproducible"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let s_r: f64 = column(&text, "s_r")[0].parse().unwrap();
    let s_p: f64 = column(&text, "s_p")[0].parse().unwrap();
    assert!((s_r - 4.14473).abs() < 1e-5);
    assert!((s_p - 2.42186).abs() < 1e-5);
}

#[test]
fn config_errors_exit_one() {
    for args in [
        vec!["solve", "--geometry.r_inner=3", "--geometry.r_outer=2"],
        vec!["sweep", "--sweep.start=2", "--sweep.stop=1"],
        vec!["solve", "--state.labels=1p"],
        vec!["solve", "--config", "/nonexistent/run.conf"],
        vec!["nonsense"],
        vec!["solve", "--not.a.key=1"],
    ] {
        let out = shellconf(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unknown_file_key_lists_valid_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "geometry.radius=1\n").unwrap();
    let out = shellconf(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("geometry.r_outer") && err.contains("numerics.n_points"), "{err}");
}

#[test]
fn numerical_failure_exits_two() {
    // screening strong enough that n = 3 is no longer bound
    let out = shellconf(&["atlas", "--potential.kind=debye", "--potential.lambda=1", "--atlas.n=3", "--atlas.alpha=false", "--atlas.entropy=false"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reproducible_output_is_byte_identical() {
    let args = ["polarizability", "--geometry.list=0:2;1:5", "--state.labels=1s,2p", "--reproducible"];
    let a = shellconf(&args);
    let b = shellconf(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let plain = shellconf(&args[..3]);
    assert!(String::from_utf8(plain.stdout).unwrap().contains("# generated_unix="));
    assert!(!String::from_utf8(a.stdout).unwrap().contains("generated_unix"));
}

#[test]
fn out_path_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solve.csv");
    let out = shellconf(&["solve", "--state.labels=1s,2s,3d", "--geometry.r_outer=5", "--out", path.to_str().unwrap(), "--reproducible"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let t = read_csv(&text).unwrap();
    assert_eq!(t.rows.len(), 3);
    assert!(t.rows.iter().all(|r| r.len() == t.header.len()));
    let e: f64 = column(&text, "energy")[0].parse().unwrap();
    // nine significant digits survive the round trip
    assert_eq!(shellconf_cli::table::format_float(e), column(&text, "energy")[0]);
    assert!(t.provenance.iter().any(|l| l.starts_with("grid n_points=200")));
}

#[test]
fn unwritable_out_path_exits_two() {
    let out = shellconf(&["solve", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_example_config_parses() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples"].iter().collect();
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "conf") {
            let text = std::fs::read_to_string(&path).unwrap();
            let pairs = shellconf_cli::config::parse_pairs(&text).unwrap();
            let cmd = pairs.iter().find(|(k, _)| k == "command").expect("example names its command");
            let command = shellconf_cli::Command::parse(&cmd.1).unwrap();
            shellconf_cli::parse_config(command, Some(&path), &[]).unwrap();
            n += 1;
        }
    }
    assert!(n >= 8);
}
