use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn auxetic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_auxetic")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const QUAD_OFFSETS: &str = r#""offsets": [[0,0],[0,1],[-1,0],[-1,1]]"#;

fn quad(lengths: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["quad", "--lengths", lengths, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    auxetic(&args)
}

#[test]
fn two_loop_linkage_reports_one_loop_of_intervals() {
    let t = TempDir::new().unwrap();
    let o = quad("1,2,3,3.5", t.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(t.path());
    assert_eq!(s["branches"], 2);
    assert_eq!(s["class"], "TwoLoops");
    assert_eq!(s["closed"], true);
    let (header, rows) = csv_rows(&t.path().join("intervals.csv"));
    assert_eq!(header, ["branch", "lo", "hi", "sign", "strict"]);
    assert_eq!(rows.len(), 2);
    let signs: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert!(signs.contains(&"1") && signs.contains(&"-1"));
    let (header, rows) = csv_rows(&t.path().join("path.csv"));
    assert_eq!(header, ["branch", "tau", "qx", "qy", "w11", "w12", "w22", "minEig", "area", "pseudo", "conic"]);
    assert_eq!(rows.len(), 2 * 1024);
}

#[test]
fn single_loop_linkage_excludes_two_points() {
    let t = TempDir::new().unwrap();
    let o = quad("3,1,1.5,2", t.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(t.path());
    assert_eq!(s["branches"], 1);
    assert_eq!(s["excluded_points"], 2);
}

#[test]
fn unassemblable_lengths_exit_2() {
    let t = TempDir::new().unwrap();
    let o = quad("1,1,1,10", t.path(), &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NoAssembly"));
    assert_eq!(code(&quad("1,1,1", t.path(), &[])), 2);
    assert_eq!(code(&quad("1,2,1,2", t.path(), &[])), 2);
    assert_eq!(code(&auxetic(&["quad"])), 2);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(code(&quad("1,2,3,3.5", a.path(), &["--samples", "256"])), 0);
    assert_eq!(code(&quad("1,2,3,3.5", b.path(), &["--samples", "256"])), 0);
    for f in ["path.csv", "intervals.csv", "summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

/// Rebuilds the diagonal lattice from the written coordinates and checks
/// every bar length of the quadrilateral encoding.
#[test]
fn path_rows_round_trip_to_the_bar_lengths() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(&quad("1,2,3,3.5", t.path(), &["--samples", "128"])), 0);
    let (_, rows) = csv_rows(&t.path().join("path.csv"));
    let offsets = [[0.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [-1.0, 1.0]];
    let s = [1.0, 3.5f64 * 3.5, 4.0, 9.0];
    let mut checked = 0;
    for r in &rows {
        if r[2].is_empty() {
            continue;
        }
        let v: Vec<f64> = r[2..7].iter().map(|x| x.parse().unwrap()).collect();
        let (q, w) = ([v[0], v[1]], [[v[2], v[3]], [v[3], v[4]]]);
        for (n, si) in offsets.iter().zip(s) {
            let u = [n[0] - q[0], n[1] - q[1]];
            let len2 = u[0] * (w[0][0] * u[0] + w[0][1] * u[1]) + u[1] * (w[1][0] * u[0] + w[1][1] * u[1]);
            assert!((len2 - si).abs() <= 1e-8 * si.max(1.0), "{len2} vs {si}");
        }
        checked += 1;
    }
    assert!(checked >= 250);
}

#[test]
fn json_format_writes_json_tables() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(&quad("1,2,3,3.5", t.path(), &["--format", "json", "--samples", "64"])), 0);
    let iv: Value = serde_json::from_str(&fs::read_to_string(t.path().join("intervals.json")).unwrap()).unwrap();
    assert_eq!(iv.as_array().unwrap().len(), 2);
    assert!(iv[0]["lo"].is_f64());
    assert!(!t.path().join("intervals.csv").exists());
}

#[test]
fn timestamp_is_opt_in() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(&quad("1,2,3,3.5", t.path(), &["--samples", "64"])), 0);
    assert!(summary(t.path()).get("timestamp").is_none());
    assert_eq!(code(&quad("1,2,3,3.5", t.path(), &["--samples", "64", "--timestamp"])), 0);
    assert!(summary(t.path())["timestamp"].is_u64());
}

#[test]
fn unwritable_output_exits_3() {
    let t = TempDir::new().unwrap();
    let file = t.path().join("occupied");
    fs::write(&file, "x").unwrap();
    let o = quad("1,2,3,3.5", &file, &["--samples", "64"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn framework_matches_the_quad_command() {
    let t = TempDir::new().unwrap();
    let spec = write_spec(
        t.path(),
        "q.json",
        &format!(r#"{{"dimension": 2, {QUAD_OFFSETS}, "squared_lengths": [1, 12.25, 4, 9]}}"#),
    );
    let out = t.path().join("out");
    let o = auxetic(&["framework", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["closed"], true);
    assert_eq!(s["verdict"], "closed");
    let (_, rows) = csv_rows(&out.join("intervals.csv"));
    assert_eq!(rows.len(), 2);
    let mut signs: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    signs.sort();
    assert_eq!(signs, ["-1", "1"]);
    let (header, g) = csv_rows(&out.join("gramG.csv"));
    assert_eq!(header, ["tau", "g00", "g01", "g02", "g11", "g12", "g22", "lambda0", "lambda1"]);
    assert_eq!(g.len(), csv_rows(&out.join("path.csv")).1.len());
    for r in &g {
        let l0: f64 = r[7].parse().unwrap();
        assert!(l0.abs() < 1e-8, "G should be rank deficient, min eigenvalue {l0}");
    }
    let (h, p) = csv_rows(&out.join("path.csv"));
    assert_eq!(h[0], "tau");
    assert!(p.iter().any(|r| r[8] == "true"));
}

#[test]
fn quad_block_and_lattice_encoding_agree() {
    let t = TempDir::new().unwrap();
    let spec = write_spec(t.path(), "q.json", r#"{"quad": {"lengths": [1, 2, 3, 3.5]}}"#);
    let out = t.path().join("out");
    assert_eq!(code(&auxetic(&["framework", &spec, "--out", out.to_str().unwrap()])), 0);
    assert_eq!(summary(&out)["seeded"], false);
    assert_eq!(csv_rows(&out.join("intervals.csv")).1.len(), 2);

    let qo = t.path().join("q");
    assert_eq!(code(&quad("1,2,3,3.5", &qo, &["--samples", "64"])), 0);
    assert_eq!(summary(&out)["spec_hash"], summary(&qo)["spec_hash"]);
}

/// The rhombus sits on the parallel-diagonal boundary: the lattice
/// degenerates before the loop can close.
#[test]
fn rhombus_spec_ends_at_the_boundary() {
    let t = TempDir::new().unwrap();
    let spec = write_spec(
        t.path(),
        "r.json",
        &format!(r#"{{"dimension": 2, {QUAD_OFFSETS}, "squared_lengths": [1, 1, 1, 1]}}"#),
    );
    let out = t.path().join("out");
    let o = auxetic(&["framework", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["verdict"], "boundary");
    assert_eq!(s["start"], "boundary");
    assert_eq!(s["end"], "boundary");
}

#[test]
fn rigid_spec_gives_a_point_report() {
    let t = TempDir::new().unwrap();
    let spec = write_spec(
        t.path(),
        "rigid.json",
        r#"{"dimension": 2, "offsets": [[0,0],[1,0],[0,1],[1,1],[-1,1],[2,1]],
            "squared_lengths": [1, 1, 1, 2, 2, 5]}"#,
    );
    let out = t.path().join("out");
    let o = auxetic(&["framework", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["mode"], "point");
    assert_eq!(s["tangent_dim"], 0);
    assert_eq!(s["status"], "NonAuxetic");
    assert!(!out.join("path.csv").exists());
}

#[test]
fn bad_spec_files_exit_2_and_missing_ones_exit_3() {
    let t = TempDir::new().unwrap();
    let out = t.path().join("out");
    let out = out.to_str().unwrap();
    for (name, text) in [
        ("broken.json", "{\"dimension\": 2,"),
        ("unknown.json", r#"{"dimension": 2, "colour": 1}"#),
        ("under.json", r#"{"dimension": 2, "offsets": [[0,0],[1,0]], "squared_lengths": [1,1]}"#),
        ("neg.json", &format!(r#"{{"dimension": 2, {QUAD_OFFSETS}, "squared_lengths": [1, -1, 1, 1]}}"#)),
    ] {
        let spec = write_spec(t.path(), name, text);
        assert_eq!(code(&auxetic(&["framework", &spec, "--out", out])), 2, "{name}");
    }
    let missing = t.path().join("nope.json");
    assert_eq!(code(&auxetic(&["framework", missing.to_str().unwrap(), "--out", out])), 3);
}

#[test]
fn exhausted_step_budget_exits_4_with_partial_output() {
    let t = TempDir::new().unwrap();
    let spec = write_spec(t.path(), "q.json", r#"{"quad": {"lengths": [1, 2, 3, 3.5]}}"#);
    let out = t.path().join("out");
    let o = auxetic(&["framework", &spec, "--max-steps", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let s = summary(&out);
    assert_eq!(s["verdict"], "failed");
    let (_, rows) = csv_rows(&out.join("path.csv"));
    assert!(!rows.is_empty() && rows.len() <= 7);
}

#[test]
fn conic_classes() {
    let cases = [
        ("1,0; 0,1; -1,0; 0,-1; 0.6,0.8", "Ellipse"),
        ("0,0; 1,1; 2,4; -1,1; 3,9", "Parabola"),
        ("1,1; -1,-1; 2,0.5; 0.5,2; -2,-0.5", "Hyperbola"),
    ];
    for (pts, class) in cases {
        let o = auxetic(&["conic", "--points", pts]);
        assert_eq!(code(&o), 0);
        let line = String::from_utf8(o.stdout).unwrap();
        assert!(line.starts_with(class), "{pts}: {line}");
        assert!(line.contains(" a=") && line.contains(" f="));
    }
}

#[test]
fn conic_json_and_file_input() {
    let t = TempDir::new().unwrap();
    let f = write_spec(t.path(), "pts.json", "[[1,0],[0,1],[-1,0],[0,-1],[0.6,0.8]]");
    let o = auxetic(&["conic", "--file", &f, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "Ellipse");
    let c: Vec<f64> = v["coefficients"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(c.len(), 6);
    assert!((c[0] - c[2]).abs() < 1e-12 && (c[0] + c[5]).abs() < 1e-12);
}

#[test]
fn degenerate_conic_input_exits_2() {
    let o = auxetic(&["conic", "--points", "0,0; 1,0; 2,0; 3,0; 4,0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DegeneratePencil"));
    assert_eq!(code(&auxetic(&["conic", "--points", "0,0; 1,0"])), 2);
    assert_eq!(code(&auxetic(&["conic"])), 2);
}

const ZERO_FLEX: &str = r#"{"dimension": 2, "offsets": [[0,0],[1,0],[0,1],[1,1],[-1,1]],
    "squared_lengths": [0.34, 0.34, 0.74, 0.74, 2.74]"#;

#[test]
fn zero_flexibility_gives_a_single_point() {
    let t = TempDir::new().unwrap();
    let out = t.path().join("out");
    let spec = write_spec(
        t.path(),
        "z.json",
        &format!(r#"{ZERO_FLEX}, "initial_config": {{"q": [0.5, 0.3], "omega": [1, 0, 1]}}}}"#),
    );
    let o = auxetic(&["framework", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["flexibility"], 0);
    assert_eq!(s["seeded"], false);
    assert_eq!(s["tangent_dim"], 0);
    assert!(!out.join("path.csv").exists());

    let seeded = write_spec(t.path(), "s.json", &format!("{ZERO_FLEX}}}"));
    assert_eq!(code(&auxetic(&["framework", &seeded, "--out", out.to_str().unwrap()])), 0);
    assert_eq!(summary(&out)["seeded"], true);

    let off = write_spec(
        t.path(),
        "o.json",
        &format!(r#"{ZERO_FLEX}, "initial_config": {{"q": [0.5, 0.3], "omega": [1, 0, 2]}}}}"#),
    );
    assert_eq!(code(&auxetic(&["framework", &off, "--out", out.to_str().unwrap()])), 2);
}
