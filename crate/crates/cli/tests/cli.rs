use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn holonorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonorm"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn float(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

fn geometric_series(dir: &Path) -> String {
    let terms: Vec<String> = (0..=40)
        .map(|k| format!(r#"{{"alpha":[{k},0],"re":1.0}}"#))
        .collect();
    let path = dir.join("geo.json");
    std::fs::write(
        &path,
        format!(
            r#"{{"arity":2,"max_degree":40,"terms":[{}]}}"#,
            terms.join(",")
        ),
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn yosida_of_identity_is_bounded_with_sup_one() {
    let r = json(&holonorm(&["yosida", "--expr", "z1", "--seed", "7"]));
    let v = &r["results"]["verdict"];
    assert_eq!(v["classification"], "BOUNDED");
    assert!((float(&v["estimate"]["sup"]) - 1.0).abs() < 1e-12);
    assert_eq!(r["config"]["seed"], 7);
}

#[test]
fn hartogs_on_geometric_series() {
    let dir = tempfile::tempdir().unwrap();
    let geo = geometric_series(dir.path());
    let r = json(&holonorm(&["hartogs", "--series", &geo, "--rmin", "0.05"]));
    assert_eq!(r["results"]["convergence"], "CONVERGENT");
    assert!((float(&r["results"]["min_radius"]) - 1.0).abs() < 1e-9);
}

#[test]
fn input_errors_exit_with_two() {
    let out = holonorm(&["sharp", "--expr", "z1+*"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(
        msg.contains("syntax error") && msg.lines().count() == 1,
        "{msg}"
    );
    assert_eq!(
        holonorm(&["sharp", "--expr", "z1", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        holonorm(&["sharp", "--expr", "z3", "--arity", "2"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"arity":2,"max_degree":20,"terms":[{"alpha":[1],"re":1}]}"#,
    )
    .unwrap();
    assert_eq!(
        holonorm(&["hartogs", "--series", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(holonorm(&["hartogs"]).status.code(), Some(2));
    assert_eq!(
        holonorm(&["yosida", "--expr", "z1", "--ladder", "0.1,0.2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numeric_failures_exit_with_three() {
    // A pole of a function of two variables on the grid.
    let out = holonorm(&[
        "marty",
        "--expr",
        "1/z1 + z2",
        "--radii",
        "4",
        "--directions",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn one_variable_poles_are_handled() {
    let r = json(&holonorm(&["mu", "--expr", "1/z1"]));
    assert!((float(&r["results"]["values"][0]["mu"]) - 2.0).abs() < 1e-15);
}

#[test]
fn arity_is_inferred_from_expressions() {
    let r = json(&holonorm(&["sharp", "--expr", "exp(z1)*z3"]));
    assert_eq!(r["config"]["arity"], 3);
    assert_eq!(r["results"]["point"].as_array().unwrap().len(), 3);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = [
        "marty", "--family", "{j}*z1", "--count", "5", "--radii", "8", "--angles", "16",
    ];
    let stdout = holonorm(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(holonorm(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn csv_lists_ladder_rows() {
    let out = holonorm(&[
        "yosida", "--expr", "z1", "--format", "csv", "--radii", "16", "--angles", "16",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][0], "ladder");
    assert_eq!(rows[4][1].parse::<f64>().unwrap(), 0.01);
}

#[test]
fn timing_is_opt_in() {
    let r = json(&holonorm(&["sharp", "--expr", "z1"]));
    assert!(r.get("wall_clock_seconds").is_none());
    let r = json(&holonorm(&["sharp", "--expr", "z1", "--timing"]));
    assert!(r["wall_clock_seconds"].is_number());
}

/// Reports for fixed inputs match the checked-in files byte for byte. Set
/// `HOLONORM_BLESS=1` to regenerate them.
#[test]
fn golden_reports() {
    let cases: [(&str, &[&str]); 3] = [
        (
            "sharp.json",
            &["sharp", "--expr", "exp(z1)", "--arity", "2"],
        ),
        (
            "mu.json",
            &[
                "mu",
                "--expr",
                "(z1^2+1)/z1",
                "--expr",
                "1/z1",
                "--expr",
                "5",
            ],
        ),
        (
            "marty.json",
            &[
                "marty", "--family", "{j}*z1", "--count", "40", "--radii", "9", "--angles", "8",
            ],
        ),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in cases {
        let out = holonorm(args);
        assert_eq!(out.status.code(), Some(0));
        let path = dir.join(name);
        if std::env::var_os("HOLONORM_BLESS").is_some() {
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let expected = std::fs::read(&path).unwrap();
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&expected),
            "{name}"
        );
    }
}
