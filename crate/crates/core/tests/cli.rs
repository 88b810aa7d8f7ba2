use std::process::Command;

use rqc_statmech::cli::{cell, cell_to_f64, parse_rational, OutputEnvelope};
use serde_json::Value;

fn rqc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rqc"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> OutputEnvelope {
    let (code, out, err) = rqc(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let (code, out, err) = rqc(&full);
    assert_eq!(code, 0, "{full:?}: {err}");
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn field<'a>(env: &'a OutputEnvelope, row: usize, key: &str) -> &'a Value {
    env.result[row].get(key).unwrap_or_else(|| panic!("no {key} in row {row}"))
}

#[test]
fn plaquette_dumps() {
    let env = json(&["plaquettes", "--k", "2", "--q", "2"]);
    assert_eq!(env.result.len(), 4);
    assert!(env.result.iter().any(|r| r["value"] == "2/5" && r["across"] == 1));

    let one = json(&["plaquettes", "--k", "1"]);
    assert_eq!(one.result.len(), 1);
    assert_eq!(field(&one, 0, "weight"), "1");

    let three = json(&["plaquettes", "--k", "3", "--orbits"]);
    let weights: Vec<&str> = three.result.iter().map(|r| r["weight"].as_str().unwrap()).collect();
    assert!(weights.contains(&"(q^4 - q^2) / (q^6 + q^4 - 4q^2 - 4)"));
    assert!(weights.contains(&"(-2q^2 + 2) / (q^6 + q^4 - 4q^2 - 4)"));

    let keyed = json(&["plaquettes", "--k", "6", "--q", "3", "--key", "2,1,3,4,5,6:1,2,3,4,5,6"]);
    assert_eq!(field(&keyed, 0, "value"), "3/10");
}

#[test]
fn frame_potential_examples() {
    let env = json(&["framepotential", "exact-direct", "--n", "4", "--q", "2", "--t", "2", "--k", "1"]);
    assert_eq!(field(&env, 0, "value"), "1");
    assert_eq!(env.provenance.method.as_deref(), Some("direct"));

    let env = json(&["framepotential", "exact-transfer", "--n", "6", "--q", "2", "--t", "1", "--k", "2"]);
    assert_eq!(field(&env, 0, "value"), "8");

    let env = json(&[
        "framepotential", "exact-transfer", "--n", "4", "--q", "2", "--t", "3", "--k", "2",
        "--backend", "float",
    ]);
    assert!((field(&env, 0, "value").as_f64().unwrap() - 2.2048).abs() < 1e-12);
}

#[test]
fn monte_carlo_example_agrees_with_exact() {
    let args = [
        "framepotential", "montecarlo", "--n", "4", "--q", "2", "--t", "3", "--k", "2",
        "--samples", "100000", "--seed", "7",
    ];
    let env = json(&args);
    let mean = field(&env, 0, "mean").as_f64().unwrap();
    let se = field(&env, 0, "std_error").as_f64().unwrap();
    assert!(((mean - 2.2048) / se).abs() < 4.0);
    assert_eq!(env.provenance.seed, Some(7));
}

#[test]
fn seeded_runs_are_deterministic_across_thread_counts() {
    let base = [
        "framepotential", "montecarlo", "--n", "4", "--q", "2", "--t", "2", "--k", "2",
        "--samples", "500", "--seed", "3",
    ];
    let (_, a, _) = rqc(&base);
    let (_, b, _) = rqc(&base);
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let (_, c, _) = rqc(&one);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn bounds_examples() {
    let env = json(&["bounds", "--n", "4", "--q", "2", "--k", "2", "--t", "3"]);
    let fp2 = env.result.iter().find(|r| r["quantity"] == "fp2_upper_bound").unwrap();
    assert!((fp2["value"].as_f64().unwrap() - 2.8192).abs() < 1e-12);

    let env = json(&["bounds", "--n", "10", "--q", "2", "--k", "2", "--epsilon", "0.01"]);
    let t2 = env.result.iter().find(|r| r["quantity"] == "t2_design_depth").unwrap();
    let c = 1.0 / (5.0f64 / 4.0).ln();
    assert!((t2["constant"].as_f64().unwrap() - c).abs() < 1e-12);
    let want = c * (20.0 * 2f64.ln() + 10f64.ln() + 100f64.ln());
    assert!((t2["value"].as_f64().unwrap() - want).abs() < 1e-9);

    let env = json(&["bounds", "--n", "100", "--q", "2", "--k", "10"]);
    let lb = env.result.iter().find(|r| r["quantity"] == "tk_lower_bound").unwrap();
    assert!((lb["value"].as_f64().unwrap() - 1.81).abs() < 0.005);
}

#[test]
fn verify_passes() {
    for (k, q) in [("2", "2"), ("3", "2"), ("4", "3")] {
        let env = json(&["verify", "--k", k, "--q", q]);
        assert!(env.result.iter().all(|r| r["passed"] == true), "k={k} q={q}");
        if k == "3" {
            assert!(env.result.iter().any(|r| r["check"] == "pole_freeness"));
        }
    }
}

#[test]
fn walls_and_weingarten() {
    let env = json(&["walls", "--ng", "3", "--t", "4"]);
    assert!(env.result.iter().all(|r| r["count"] == "2"));
    let env = json(&["weingarten", "--k", "2", "--d", "2"]);
    let id = env.result.iter().find(|r| r["cycle_type"] == "(1,1)").unwrap();
    assert_eq!(id["value"], "1/3");
    assert_eq!(id["restricted_value"], "1/3");
}

#[test]
fn exit_codes() {
    let fp = ["framepotential", "exact-direct", "--n", "4", "--q", "2", "--t", "2", "--k", "2"];
    let mut with_samples = fp.to_vec();
    with_samples.extend(["--samples", "100"]);
    assert_eq!(rqc(&with_samples).0, 4);
    let mut with_seed = fp.to_vec();
    with_seed.extend(["--seed", "1"]);
    assert_eq!(rqc(&with_seed).0, 4);
    assert_eq!(rqc(&["framepotential", "exact-direct", "--n", "four"]).0, 4);
    assert_eq!(rqc(&["framepotential", "exact-direct", "--n", "5", "--q", "2", "--t", "2", "--k", "2", "--bc", "periodic"]).0, 4);
    assert_eq!(rqc(&["plaquettes", "--k", "3", "--key", "1,2:2,1"]).0, 4);

    let (code, _, err) = rqc(&[
        "framepotential", "exact-direct", "--n", "6", "--q", "2", "--t", "3", "--k", "3",
        "--max-entries", "100",
    ]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(rqc(&["plaquettes", "--k", "6"]).0, 2);
    assert_eq!(rqc(&["verify", "--k", "6"]).0, 2);
    assert_eq!(rqc(&["--help"]).0, 0);
    assert_eq!(rqc(&["--version"]).0, 0);
}

#[test]
fn exact_outputs_are_strings() {
    let env = json(&["framepotential", "exact-transfer", "--n", "4", "--q", "2", "--t", "3", "--k", "2"]);
    assert_eq!(field(&env, 0, "value"), "1378/625");
    let v = parse_rational(field(&env, 0, "value").as_str().unwrap()).unwrap();
    assert_eq!(v, num_rational::BigRational::new(1378.into(), 625.into()));
}

const PAYLOADS: &[&[&str]] = &[
    &["plaquettes", "--k", "3", "--q", "3"],
    &["framepotential", "exact-transfer", "--n", "5", "--q", "2", "--t", "2", "--k", "3"],
    &["framepotential", "montecarlo", "--n", "4", "--q", "2", "--t", "2", "--k", "2", "--samples", "200", "--seed", "1"],
    &["bounds", "--n", "8", "--q", "3", "--k", "3", "--t", "4", "--epsilon", "0.1"],
    &["verify", "--k", "2"],
    &["weingarten", "--k", "4", "--d", "3"],
    &["walls", "--ng", "5", "--t", "3", "--walls", "2"],
    &["evidence", "--n", "4", "--k", "2", "--q", "2", "3", "--t", "2", "3"],
    &["geometry", "--n", "5", "--q", "2", "--t", "3"],
];

#[test]
fn json_round_trip_is_idempotent() {
    for args in PAYLOADS {
        let (_, text, _) = rqc(args);
        let env: OutputEnvelope = serde_json::from_str(&text).unwrap();
        let again = env.to_json() + "\n";
        assert_eq!(text, again, "{args:?}");
        let twice: OutputEnvelope = serde_json::from_str(&again).unwrap();
        assert_eq!(env, twice);
    }
}

#[test]
fn csv_carries_the_json_cells() {
    for args in PAYLOADS {
        let env = json(args);
        let (header, rows) = csv_rows(args);
        assert_eq!(header, env.columns(), "{args:?}");
        assert_eq!(rows.len(), env.result.len());
        for (row, rec) in rows.iter().zip(&env.result) {
            for (col, text) in header.iter().zip(row) {
                let v = rec.get(col);
                assert_eq!(text, &cell(v), "{args:?} {col}");
                if let Some(x) = v.and_then(cell_to_f64) {
                    assert_eq!(text.parse::<f64>().ok().or_else(|| cell_to_f64(&Value::String(text.clone()))), Some(x));
                }
            }
        }
    }
}
