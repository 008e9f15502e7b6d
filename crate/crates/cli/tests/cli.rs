use std::path::Path;
use std::process::{Command, Output};

fn grainlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grainlab"))
        .args(args)
        .env_remove("GRAINLAB_CAPS")
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = grainlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn phi_prints_images() {
    assert_eq!(stdout(&["phi", "--x", "01", "--t", "1"]), "01 00\n");
    assert_eq!(stdout(&["phi", "--x", "0000", "--t", "2"]), "0000\n");
}

#[test]
fn confusable_pair() {
    assert_eq!(stdout(&["confusable", "--x1", "0110", "--x2", "0010", "--t", "1"]), "true\n");
}

#[test]
fn sir_at_p_one() {
    let out = stdout(&["sir", "--p", "1", "--J", "15"]);
    assert!(value(&out, "sir") < 0.5);
    assert!(value(&out, "error_bound") <= 0.004);
    assert_eq!(value(&out, "capacity_lower"), 0.5);
    assert_eq!(value(&out, "capacity_upper"), 0.5);
}

#[test]
fn clique_table_matches_reference() {
    let out = stdout(&["clique-table", "--m", "2:8", "--s", "1:2"]);
    assert!(out.starts_with("m,s,parts,reference\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 12);
    for r in rows {
        let parts: f64 = r[2].parse().unwrap();
        let reference: f64 = r[3].parse().unwrap();
        assert!(parts <= 1.1 * reference, "{r:?}");
    }
}

#[test]
fn every_csv_has_a_manifest() {
    for args in [
        &["fig3", "--grid", "0:1:0.5"][..],
        &["capacity", "--grid", "0:1:0.5"],
        &["fig1", "--tau-grid", "0.05:0.1:0.05"],
        &["bounds", "--tau-grid", "0.05:0.1:0.05"],
        &["zero-error", "--n", "2:4"],
        &["mnt", "--n", "4", "--t", "1"],
    ] {
        let out = stdout(args);
        let lines: Vec<&str> = out.lines().collect();
        let first_comment = lines.iter().position(|l| l.starts_with('#')).expect("manifest");
        assert!(first_comment >= 2, "{args:?}: header and rows come first");
        assert!(lines[first_comment..].iter().all(|l| l.starts_with('#')));
        assert!(out.contains(&format!("# command: {}\n", args[0])));
        assert!(out.contains("# timestamp: 1700000000\n"));
    }
}

#[test]
fn fig3_header_and_crossing() {
    let out = stdout(&["fig3", "--grid", "0:1:0.01", "--J", "15"]);
    assert!(out.starts_with("p,sir,capacity_lower,capacity_upper,error_bound\n"));
    assert!(out.contains("# note: sir < 1/2 from p="));
    for r in csv_rows(&out) {
        let f: Vec<f64> = r.iter().map(|c| c.parse().unwrap()).collect();
        assert!(f[2] <= f[3] + f[4]);
    }
}

#[test]
fn artifacts_are_reproducible() {
    let args = ["simulate", "--n", "200", "--p", "0.4", "--seed", "9", "--blocks", "3"];
    assert_eq!(stdout(&args), stdout(&args));
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        stdout(&["fig3", "--grid", "0:1:0.1", "--out", path.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_stats() {
    let out = stdout(&["simulate", "--n", "10000", "--p", "0.3", "--seed", "7", "--stats"]);
    assert_eq!(value(&out, "symbols"), 10000.0);
    assert_eq!(value(&out, "adjacent_erasures"), 0.0);
    assert_eq!(value(&out, "grain_after_grain"), 0.0);
    assert!((value(&out, "grain_frequency") - 0.3).abs() < 0.03);
}

#[test]
fn simulate_p_one_is_deterministic() {
    let out = stdout(&["simulate", "--n", "8", "--p", "1", "--initial", "1,0"]);
    let lines: Vec<&str> = out.lines().collect();
    let x: Vec<char> = lines[0][2..].chars().collect();
    let expect: String = (0..8).map(|i| x[i - i % 2]).collect();
    assert_eq!(lines[1], format!("y {expect}"));
}

#[test]
fn construct_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r8.code");
    let p = path.to_str().unwrap();
    stdout(&["construct", "--kind", "rn", "--n", "8", "--out", p]);
    assert!(stdout(&["verify-code", "--file", p, "--t", "4"]).ends_with("grain-correcting: true\n"));
    assert!(stdout(&["verify-code", "--file", p, "--t", "2", "--known-grain"]).contains("true"));

    let bad = dir.path().join("bad.code");
    std::fs::write(&bad, "# confusable pair\n0110\n0010\n").unwrap();
    let out = grainlab(&["verify-code", "--file", bad.to_str().unwrap(), "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = grainlab(&["verify-code", "--file", bad.to_str().unwrap(), "--t", "1", "--list", "2"]);
    assert_eq!(out.status.code(), Some(0));

    let hp = stdout(&["construct", "--kind", "hamming-prefix", "--m", "2"]);
    assert_eq!(hp.lines().filter(|l| !l.starts_with('#')).count(), 4);
    let g = stdout(&["construct", "--kind", "greedy-s1", "--n", "8", "--t", "1"]);
    assert!(g.lines().filter(|l| !l.starts_with('#')).count() * 8 >= 256);
}

#[test]
fn exit_codes() {
    assert_eq!(grainlab(&["sir", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(grainlab(&["bogus"]).status.code(), Some(2));
    assert_eq!(grainlab(&["phi", "--x", "012", "--t", "1"]).status.code(), Some(2));
    assert_eq!(grainlab(&["construct", "--kind", "rn"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.code");
    std::fs::write(&junk, "0101\nabc\n").unwrap();
    assert_eq!(grainlab(&["verify-code", "--file", junk.to_str().unwrap(), "--t", "1"]).status.code(), Some(2));

    let capped = grainlab(&["phi", "--x", "0101", "--t", "1", "--caps", "error_vectors_n=3"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds cap"));
    let timed = grainlab(&["mnt", "--n", "10", "--t", "1", "--timeout", "0.05"]);
    assert_eq!(timed.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&timed.stdout).contains(",false,"));
}

#[test]
fn caps_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_grainlab"))
        .args(["phi", "--x", "0101", "--t", "1"])
        .env("GRAINLAB_CAPS", "error_vectors_n=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grainlab.conf");
    std::fs::write(&cfg, "# defaults\nJ = 15\nerror_vectors_n = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(value(&stdout(&["--config", c, "sir", "--p", "0.5"]), "J"), 15.0);
    assert_eq!(value(&stdout(&["--config", c, "sir", "--p", "0.5", "--J", "20"]), "J"), 20.0);
    assert_eq!(grainlab(&["--config", c, "phi", "--x", "0101", "--t", "1"]).status.code(), Some(3));
    let ok = grainlab(&["--config", c, "--caps", "error_vectors_n=8", "phi", "--x", "0101", "--t", "1"]);
    assert!(ok.status.success());
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig3.svg");
    stdout(&["fig3", "--grid", "0:1:0.1", "--svg", svg.to_str().unwrap()]);
    let text = std::fs::read_to_string(Path::new(&svg)).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
}

#[test]
fn integer_bounds() {
    let out = stdout(&["bounds", "--n", "10", "--t", "1", "--list", "1"]);
    assert_eq!(value(&out, "error_vectors"), 10.0);
    assert_eq!(value(&out, "rn_size"), 32.0);
    assert!(out.contains("listdec_lower L=1 4\n"));
    assert!(grainlab(&["bounds", "--n", "10"]).status.code() == Some(2));
}

#[test]
fn zero_error_table() {
    let out = stdout(&["zero-error", "--n", "7:8"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["7", "3/7", "4/7"]);
    assert_eq!(rows[1], ["8", "1/2", "1/2"]);
}
