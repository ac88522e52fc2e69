use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(schema: &str, instance: &Value) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} does not match {}: {errors:?}", instance, path.display());
}

fn fockcat(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fockcat")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("stdout is not one JSON value ({e}): {stdout}"));
    (out.status.code().unwrap(), value, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn vev_example() {
    let (code, v, _) = fockcat(&["vev", "--in", "0", "--out", "0", "--valences", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["cardinality"], "1/48");
    validate("vev", &v);
}

#[test]
fn compose_constant_example() {
    let (code, v, stderr) = fockcat(&["gf", "E of E", "--order", "6"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "COMPOSE_CONST");
    assert!(stderr.contains("composition"));
    validate("error", &v);
}

#[test]
fn inner_example() {
    let (code, v, _) = fockcat(&["inner", "Z^2", "Z^3", "--order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["cardinality"], "0");
    validate("inner", &v);
}

#[test]
fn every_subcommand_matches_its_schema() {
    let cases: &[(&[&str], &str)] = &[
        (&["gf", "E ∘ Eplus", "--order", "8"], "series"),
        (&["gf", "Phase(Z^2, 1/2) + Z^2", "--order", "3"], "series"),
        (&["solve", "B = Z + B^2", "--order", "12"], "series"),
        (&["evolve", "Z^3 + E", "--angle", "1/8", "--order", "5"], "series"),
        (&["evolve", "Z", "--angle", "-0.5 rad", "--order", "2"], "series"),
        (&["inner", "E", "Phase(E, 1/3)", "--order", "6", "--fock"], "inner"),
        (&["expect", "PHI^4", "--in", "1", "--out", "1"], "expect"),
        (&["vev", "--in", "1", "--out", "1", "--valences", "2"], "vev"),
        (&["diagrams", "--in", "1", "--out", "2", "--valences", "3,2", "--random-checks", "10", "--seed", "3"], "diagrams"),
        (&["dyson", "--out", "1", "--potential", "3:0.05", "--time", "0.5", "--order", "2", "--cutoff", "16"], "dyson"),
        (&["dyson", "--potential", "3:0.05,4:0.01", "--order", "1", "--cutoff", "12"], "dyson"),
        (&["dyson", "--out", "1", "--potential", "3:0.1", "--convention", "positive"], "dyson"),
        (&["query", "fock_inner(Z^2, Z^2, 4)"], "inner"),
    ];
    for (args, schema) in cases {
        let (code, v, _) = fockcat(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        validate(schema, &v);
    }
}

#[test]
fn every_error_path_has_a_stable_code() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["gf", "Z + * E"], 2, "PARSE"),
        (&["gf", "Z + W"], 2, "PARSE"),
        (&["gf", "E of E"], 2, "COMPOSE_CONST"),
        (&["dyson", "--potential", "4:1.5", "--time", "3", "--order", "0", "--cutoff", "6"], 2, "CUTOFF"),
        (&["vev", "--out", "9", "--valences", "1"], 2, "SIZE"),
        (&["solve", "B = 1 + B"], 2, "DIVERGED"),
        (&["expect", "E", "--in", "1"], 2, "TYPE"),
        (&["dyson", "--potential", "2:0.1"], 2, "INPUT"),
        (&["gf"], 1, "USAGE"),
        (&["vev", "--valences", "x"], 1, "USAGE"),
        (&["nonsense"], 1, "USAGE"),
    ];
    for (args, exit, code) in cases {
        let (status, v, stderr) = fockcat(args);
        assert_eq!(status, *exit, "{args:?}: {v}");
        assert_eq!(v["error"]["code"], *code, "{args:?}: {v}");
        assert!(!stderr.is_empty());
        validate("error", &v);
    }
}

#[test]
fn output_file_and_plain_format() {
    let dir = std::env::temp_dir().join(format!("fockcat-it-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("vev.json");
    let out = Command::new(env!("CARGO_BIN_EXE_fockcat")).args(["vev", "--valences", "4", "-o", file.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["cardinality"], "1/8");

    let failed = dir.join("never.json");
    let out = Command::new(env!("CARGO_BIN_EXE_fockcat")).args(["gf", "E of E", "--output", failed.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!failed.exists());

    let out = Command::new(env!("CARGO_BIN_EXE_fockcat")).args(["gf", "O", "--order", "3", "--plain"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "coeffs: 1 1 1 1"), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seeds_make_checks_reproducible() {
    let run = |seed: &str| fockcat(&["diagrams", "--in", "2", "--valences", "4,2", "--random-checks", "25", "--seed", seed]).1;
    let (a, b) = (run("11"), run("11"));
    assert_eq!(a, b);
    assert_eq!(a["random_checks"]["passed"], 25);
}
