use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn voxdecode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voxdecode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Small planted dataset written by the CLI itself.
fn synth(dir: &Path, participants: &str, seed: &str) -> Output {
    voxdecode(&[
        "synth", "--out", s(dir), "--participants", participants, "--features", "80", "--planted", "8",
        "--effect", "2.0", "--sessions", "4", "--blocks-per-session", "2", "--scans-per-block", "4", "--seed", seed,
    ])
}

const FAST: &[&str] = &["--top-n", "20", "--rounds", "10", "--sample-fraction", "0.5"];

#[test]
fn synth_is_deterministic_and_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(code(&synth(&a, "2", "7")), 0);
    assert_eq!(code(&synth(&b, "2", "7")), 0);
    for f in ["manifest.json", "mask.bin", "scans.bin", "ground_truth.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let truth: serde_json::Value = serde_json::from_slice(&fs::read(a.join("ground_truth.json")).unwrap()).unwrap();
    assert_eq!(truth["planted"].as_array().unwrap().len(), 8);

    let bad = voxdecode(&["synth", "--out", s(&tmp.path().join("c")), "--effect", "-1"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--effect"));
    assert_eq!(code(&voxdecode(&["synth", "--out", s(&tmp.path().join("d")), "--bogus"])), 2);
}

#[test]
fn cv_reports_and_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert_eq!(code(&synth(&data, "2", "3")), 0);
    let run = |out: &str, extra: &[&str]| {
        let o = tmp.path().join(out);
        let mut args = vec!["cv", "--data", s(&data), "--out", s(&o), "--cycles", "1", "--seed", "5"];
        args.extend_from_slice(FAST);
        args.extend_from_slice(extra);
        (voxdecode(&args), o)
    };
    let (o1, d1) = run("r1", &["--scheme", "within", "--participant", "1"]);
    assert_eq!(code(&o1), 0, "{}", String::from_utf8_lossy(&o1.stderr));
    let (_, d2) = run("r2", &["--scheme", "within", "--participant", "1"]);
    for f in ["cv_report.json", "table1.tsv", "confusion.tsv"] {
        assert_eq!(fs::read(d1.join(f)).unwrap(), fs::read(d2.join(f)).unwrap());
    }
    let table = fs::read_to_string(d1.join("table1.tsv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "participant\taccuracy\tp_value");
    let row: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!(row[0], "1");
    assert!(row[1].parse::<f64>().unwrap() >= 0.0);
    assert_eq!(row[2], "NA");
    let confusion = fs::read_to_string(d1.join("confusion.tsv")).unwrap();
    assert!(confusion.starts_with("Participant 1 ("));

    let (missing, _) = run("r3", &["--scheme", "within"]);
    assert_eq!(code(&missing), 2);

    let one = tmp.path().join("one");
    assert_eq!(code(&synth(&one, "1", "3")), 0);
    let o = voxdecode(&["cv", "--data", s(&one), "--out", s(&tmp.path().join("r4")), "--scheme", "cross"]);
    assert_eq!(code(&o), 4);

    let nowhere = voxdecode(&["cv", "--data", s(&tmp.path().join("nope")), "--out", s(&tmp.path().join("r5")), "--scheme", "cross"]);
    assert_eq!(code(&nowhere), 4);
}

#[test]
fn permute_validates_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert_eq!(code(&synth(&data, "2", "4")), 0);
    let base = ["permute", "--data", s(&data), "--scheme", "within", "--participant", "0", "--cycles", "1"];
    let z = tmp.path().join("z");
    let mut zero = base.to_vec();
    zero.extend(["--n-perm", "0", "--out", s(&z)]);
    assert_eq!(code(&voxdecode(&zero)), 2);

    let mut ok = base.to_vec();
    let out = tmp.path().join("p");
    ok.extend(["--n-perm", "4", "--out", s(&out), "--json"]);
    ok.extend_from_slice(FAST);
    let o = voxdecode(&ok);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["null_accuracies"].as_array().unwrap().len(), 4);
    let table = fs::read_to_string(out.join("table1.tsv")).unwrap();
    assert!(table.lines().nth(1).unwrap().split('\t').nth(2).unwrap().parse::<f64>().is_ok());
}

#[test]
fn histomap_outputs_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert_eq!(code(&synth(&data, "2", "5")), 0);
    let run = |out: &str, extra: &[&str]| {
        let o = tmp.path().join(out);
        let mut args = vec!["histomap", "--data", s(&data), "--out", s(&o), "--folds", "4", "--top-voxels", "15"];
        args.extend_from_slice(FAST);
        args.extend_from_slice(extra);
        (voxdecode(&args), o)
    };
    let (o, dir) = run("h", &["--min-cluster", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["map.vol", "map.json", "thresholded.vol", "clusters.tsv"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("histomap_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["thresholded_voxels"], summary["surviving_voxels"]);
    let header: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("map.json")).unwrap()).unwrap();
    let n: u64 = header["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).product();
    assert_eq!(fs::metadata(dir.join("map.vol")).unwrap().len(), 4 * n);

    let (bad, _) = run("h2", &["--fwhm", "0"]);
    assert_eq!(code(&bad), 2);
    let (bad, _) = run("h3", &["--connectivity", "7"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn correlate_cases() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, rows: &[(u32, f64)]| {
        let p = tmp.path().join(name);
        let mut text = String::from("participant\tvalue\n");
        for (id, v) in rows {
            text.push_str(&format!("{id}\t{v}\n"));
        }
        fs::write(&p, text).unwrap();
        p
    };
    let acc = write("acc.tsv", &[(1, 0.6), (2, 0.7), (3, 0.9), (4, 0.65)]);
    let same = write("same.tsv", &[(1, 0.6), (2, 0.7), (3, 0.9), (4, 0.65)]);
    let anti = write("anti.tsv", &[(1, -0.6), (2, -0.7), (3, -0.9), (4, -0.65)]);
    let short = write("short.tsv", &[(1, 1.0), (2, 2.0), (3, 3.0)]);
    let r = |b: &Path, extra: &[&str]| {
        let mut args = vec!["correlate", "--accuracy", s(&acc), "--behavior", s(b), "--json"];
        args.extend_from_slice(extra);
        voxdecode(&args)
    };
    let o = r(&same, &[]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["r"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v: serde_json::Value = serde_json::from_slice(&r(&anti, &[]).stdout).unwrap();
    assert!((v["r"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    let o = r(&same, &["--omit", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(code(&r(&same, &["--omit", "9"])), 2);
    assert_eq!(code(&r(&short, &[])), 2);
}

#[test]
fn inspect_and_config() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert_eq!(code(&synth(&data, "2", "6")), 0);
    let o = voxdecode(&["inspect", "--data", s(&data), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_features"], 80);
    assert_eq!(v["participants"].as_array().unwrap().len(), 2);
    assert_eq!(v["participants"][0]["blocks"]["POS"], 4);

    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, r#"{"seed": 3, "synthetic": {"n_features": 40, "n_participants": 1}}"#).unwrap();
    let out = tmp.path().join("s");
    let o = voxdecode(&["synth", "--config", s(&cfg), "--out", s(&out), "--participants", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&voxdecode(&["inspect", "--data", s(&out), "--json"]).stdout).unwrap();
    assert_eq!(v["n_features"], 40);
    assert_eq!(v["participants"].as_array().unwrap().len(), 2);

    fs::write(&cfg, r#"{"seeed": 3}"#).unwrap();
    assert_eq!(code(&voxdecode(&["synth", "--config", s(&cfg), "--out", s(&out)])), 2);
}
