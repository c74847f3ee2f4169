use std::process::{Command, Output};

use serde_json::Value;

const ONES: [&str; 18] = [
    "--a1", "1", "--a2", "1", "--b1", "1", "--b2", "1", "--c", "2", "--t1", "2", "--t2", "2", "--k1", "1", "--k2", "1",
];

fn appell(args: &[&str]) -> Output {
    appell_env(args, &[])
}

fn appell_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_appell"));
    cmd.args(args).env_remove("APPELL_MAX_TERMS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

/// `args` with the value of `flag` replaced, or the flag dropped when `value` is `None`.
fn set(args: &[&'static str], flag: &str, value: Option<&'static str>) -> Vec<&'static str> {
    let pos = args.iter().position(|a| *a == flag).expect("flag present");
    let mut out = args.to_vec();
    match value {
        Some(v) => out[pos + 1] = v,
        None => {
            out.drain(pos..pos + 2);
        }
    }
    out
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

/// Re-rendering the parsed document must give back the same bytes.
fn assert_round_trip(text: &str) {
    let v: Value = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

/// Direct double sum of the first discrete form with integer t's and k = 1.
fn f3d1_finite(a: [f64; 4], c: f64, t: [u32; 2], x: f64, y: f64) -> f64 {
    let poch = |a: f64, n: u32| (0..n).fold(1.0, |acc, i| acc * (a + i as f64));
    let fact = |n: u32| poch(1.0, n);
    let falling = |t: u32, n: u32| if n > t { 0.0 } else { fact(t) / fact(t - n) };
    let mut s = 0.0;
    for m in 0..=t[0] {
        for n in 0..=t[1] {
            s += poch(a[0], m) * poch(a[1], n) * poch(a[2], m) * poch(a[3], n) * falling(t[0], m) * falling(t[1], n)
                / (poch(c, m + n) * fact(m) * fact(n))
                * x.powi(m as i32)
                * y.powi(n as i32);
        }
    }
    s
}

#[test]
fn eval_terminating_json_matches_finite_sum() {
    let out = appell(&with(&with(&["eval", "f3d1"], &ONES), &["--x", "0.5", "--y", "0.5", "--format", "json"]));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["terminated"], Value::Bool(true));
    let expected = f3d1_finite([1.0; 4], 2.0, [2, 2], 0.5, 0.5);
    let re = v["value"]["re"].as_f64().unwrap();
    assert!((re - expected).abs() <= 1e-14 * expected);
    assert_eq!(v["value"]["im"].as_f64(), Some(0.0));
    assert_round_trip(&stdout(&out));
}

#[test]
fn eval_at_origin_is_one() {
    let out = appell(&with(&with(&["eval", "f3d1"], &ONES), &["--x", "0", "--y", "0"]));
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("f3d1 = 1+0i\n"));
}

#[test]
fn eval_divergence_exits_2() {
    let args = [
        "eval", "f3d1", "--a1", "1", "--a2", "1", "--b1", "1", "--b2", "1", "--c", "2", "--t1", "1.5", "--t2", "2",
        "--k1", "2", "--k2", "1", "--x", "0.3", "--y", "0.2", "--json",
    ];
    let out = appell(&args);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["diverged"], Value::Bool(true));
    assert!(v["antidiagonals"].as_u64().unwrap() <= 40);
    assert_round_trip(&stdout(&out));
}

#[test]
fn usage_errors_exit_64() {
    let base = with(&["eval", "f3d1"], &ONES);
    assert_eq!(code(&appell(&with(&base, &["--x", "0", "--y", "0", "--bogus", "1"]))), 64);
    assert_eq!(code(&appell(&with(&base, &["--x", "0"]))), 64);
    assert_eq!(code(&appell(&with(&base, &["--x", "zero", "--y", "0"]))), 64);
    assert_eq!(code(&appell(&with(&base, &["--x", "0", "--y", "0", "--json", "--csv"]))), 64);
    assert_eq!(code(&appell(&with(&base, &["--x", "0", "--y", "0", "--format", "xml"]))), 64);
    assert_eq!(code(&appell(&with(&base, &["--x", "0", "--y", "0", "--t", "1"]))), 64);
    assert_eq!(code(&appell(&["eval", "f9"])), 64);
    assert_eq!(code(&appell(&["check", "--group", "XX9"])), 64);
    assert_eq!(code(&appell(&[])), 64);
    let bad_env = appell_env(&with(&base, &["--x", "0", "--y", "0"]), &[("APPELL_MAX_TERMS", "lots")]);
    assert_eq!(code(&bad_env), 64);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&appell(&["--help"])), 0);
    assert_eq!(code(&appell(&["--version"])), 0);
    assert_eq!(code(&appell(&["eval", "--help"])), 0);
}

#[test]
fn domain_errors_exit_65() {
    let base = with(&["eval", "f3d1"], &ONES);
    let args = set(&base, "--c", Some("0"));
    assert_eq!(code(&appell(&with(&args, &["--x", "0", "--y", "0"]))), 65);
    let args = set(&base, "--k1", Some("-1"));
    assert_eq!(code(&appell(&with(&args, &["--x", "0", "--y", "0"]))), 65);
    let args = set(&base, "--k1", Some("1/2"));
    assert_eq!(code(&appell(&with(&args, &["--x", "0", "--y", "0"]))), 65);
    let kdf = ["eval", "kdf", "--upper", "1", "--lower", "-2", "--x", "0.1", "--y", "0.1"];
    assert_eq!(code(&appell(&kdf)), 65);
}

#[test]
fn max_terms_env_caps_the_sum() {
    let args = ["eval", "f3", "--a1", "1", "--a2", "1", "--b1", "1", "--b2", "1", "--c", "2", "--x", "0.3", "--y", "0.2", "--json"];
    let full = json(&appell(&args));
    assert_eq!(full["converged"], Value::Bool(true));
    let out = appell_env(&args, &[("APPELL_MAX_TERMS", "3")]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["converged"], Value::Bool(false));
    assert!(v["terms_used"].as_u64().unwrap() <= 16);
    let flag = json(&appell_env(&with(&args, &["--max-terms", "400"]), &[("APPELL_MAX_TERMS", "3")]));
    assert_eq!(flag, full);
}

#[test]
fn check_ct1_passes() {
    let out = appell(&["check", "--group", "CT1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("10/10 identities pass"));
}

#[test]
fn check_empty_panel_reports_no_cases() {
    let dir = std::env::temp_dir().join(format!("appell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    let out = appell(&["check", "--group", "all", "--panel", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "no cases\n");
    let v = json(&appell(&["check", "--panel", empty.to_str().unwrap(), "--json"]));
    assert_eq!(v["status"], "no_cases");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"[{"params": {"a1": 1}, "point": {"x": 0}}]"#).unwrap();
    assert_eq!(code(&appell(&["check", "--panel", bad.to_str().unwrap()])), 65);
    let missing = dir.join("missing.json");
    assert_eq!(code(&appell(&["check", "--panel", missing.to_str().unwrap()])), 65);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_custom_panel_runs_cases() {
    let dir = std::env::temp_dir().join(format!("appell-cli-panel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let panel = dir.join("panel.json");
    std::fs::write(
        &panel,
        r#"[{"params": {"a1": "7/3", "a2": "5/4", "b1": "2/5", "b2": "9/7", "c": "13/6",
                        "t1": 3, "t2": 2, "k1": 1, "k2": 2},
             "point": {"x": 0.3, "y": "0.2+0.1i"}}]"#,
    )
    .unwrap();
    let out = appell(&["check", "--group", "RC1", "--panel", panel.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "ok");
    assert!(v["cases_run"].as_u64().unwrap() >= 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failing_identities_exit_1() {
    let out = appell_env(&["check", "--group", "CT1"], &[("APPELL_MAX_TERMS", "1")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn check_qr1_json_has_45_entries() {
    let out = appell(&["check", "--group", "QR1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["identities"].as_array().unwrap().len(), 45);
    assert_round_trip(&text);
}

#[test]
fn check_exact_mode_runs() {
    let out = appell(&["check", "--group", "CT2", "--exact", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["mode"], "exact");
    for ident in v["identities"].as_array().unwrap() {
        assert_eq!(ident["max_rel"].as_f64(), Some(0.0));
    }
}

#[test]
fn list_filters_by_group() {
    let v = json(&appell(&["list", "--group", "CT1", "--json"]));
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|d| d["id"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 10);
    assert_eq!(ids[0], "CT1-1");
    let csv = stdout(&appell(&["list", "--group", "QR2", "--csv"]));
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.records().count(), 17);
}

fn table_cells(args: &[&str]) -> Vec<Value> {
    let out = appell(args);
    assert_eq!(code(&out), 0);
    assert_round_trip(&stdout(&out));
    json(&out)["cells"].as_array().unwrap().clone()
}

#[test]
fn one_axis_table() {
    let mut args = with(&["table", "f3d1"], &ONES);
    args.extend(["--y", "0.5", "--sweep", "x=0,0.25,0.5", "--json"]);
    let cells = table_cells(&args);
    assert_eq!(cells.len(), 3);
    assert_eq!(cells[0]["value"]["re"].as_f64(), Some(1.0 + 2.0 * 0.5 / 2.0 + 2.0 * 0.25 / 3.0));
    let mut origin = with(&["table", "f3d1"], &ONES);
    origin.extend(["--y", "0", "--sweep", "x=0,0.25,0.5", "--csv"]);
    let text = stdout(&appell(&origin));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let first = reader.records().next().unwrap().unwrap();
    assert_eq!(&first[0], "0");
    assert_eq!(&first[2], "1");
}

#[test]
fn two_axis_table_is_row_major_x_outer() {
    let mut args = with(&["table", "f3d1"], &ONES);
    args.extend(["--sweep", "y=0,0.25,0.5", "--sweep", "x=0:1/2:3", "--json"]);
    let cells = table_cells(&args);
    assert_eq!(cells.len(), 9);
    let coords: Vec<(String, String)> = cells
        .iter()
        .map(|c| (c["coords"]["x"].as_str().unwrap().to_string(), c["coords"]["y"].as_str().unwrap().to_string()))
        .collect();
    let xs = ["0", "1/4", "1/2"];
    let ys = ["0", "0.25", "0.5"];
    for (i, (x, y)) in coords.iter().enumerate() {
        assert_eq!(x, xs[i / 3]);
        assert_eq!(y, ys[i % 3]);
    }
}

#[test]
fn table_matches_repeated_eval() {
    let mut args = set(&with(&["table", "f3d1"], &ONES), "--t1", None);
    args.extend(["--sweep", "x=-0.3,0.2+0.1i", "--sweep", "t1=2,3", "--y", "0.4", "--json"]);
    let cells = table_cells(&args);
    assert_eq!(cells.len(), 4);
    assert_eq!(cells[0]["coords"]["t1"], "2");
    assert_eq!(cells[1]["coords"]["t1"], "2");
    for cell in cells {
        let t1 = cell["coords"]["t1"].as_str().unwrap().to_string();
        let x = cell["coords"]["x"].as_str().unwrap().to_string();
        let mut owned: Vec<String> = set(&with(&["eval", "f3d1"], &ONES), "--t1", None)
            .into_iter()
            .map(String::from)
            .collect();
        owned.extend(["--t1".into(), t1, "--x".into(), x, "--y".into(), "0.4".into(), "--json".into()]);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        let single = json(&appell(&refs));
        assert_eq!(single["value"], cell["value"]);
        assert_eq!(single["terms_used"], cell["terms_used"]);
    }
}

#[test]
fn table_rejects_bad_sweeps() {
    let mut args = with(&["table", "f3d1"], &ONES);
    args.extend(["--y", "0", "--sweep", "x=0,1/4", "--sweep", "a1=1,2", "--sweep", "a2=1,2"]);
    assert_eq!(code(&appell(&args)), 64);
    let mut args = with(&["table", "f3d1"], &ONES);
    args.extend(["--x", "0", "--y", "0", "--sweep", "x=0,1/4"]);
    assert_eq!(code(&appell(&args)), 64);
}

#[test]
fn other_functions_evaluate() {
    let f0 = appell(&["eval", "1f0d", "--a", "1", "--t", "3", "--k", "1", "--z", "0.5", "--json"]);
    assert_eq!(code(&f0), 0);
    assert_eq!(json(&f0)["value"]["re"].as_f64(), Some(1.0 + 1.5 + 1.5 + 0.75));
    for f in ["xi12", "xi22"] {
        let mut args = vec!["eval", f, "--a1", "1", "--b1", "1", "--c", "2", "--t", "2", "--k", "1", "--x", "0", "--y", "0"];
        if f == "xi12" {
            args.extend(["--a2", "1"]);
        }
        let out = appell(&args);
        assert_eq!(code(&out), 0, "{f}");
        assert!(stdout(&out).starts_with(&format!("{f} = 1+0i")));
    }
    let out = appell(&["eval", "f3d2", "--a1", "1", "--a2", "1", "--b1", "1", "--b2", "1", "--c", "2", "--t", "2", "--k", "1", "--x", "0.5", "--y", "0.5", "--csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["function", "re", "im", "terms_used", "terminated", "converged", "est_error"]);
}
