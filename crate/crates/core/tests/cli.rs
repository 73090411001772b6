use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-ktheory")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_family_three() {
    let out = run(&["compute", "--n", "3", "--d", "3", "--weights", "1,1,1", "--prime", "3", "--exponent", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("i >= 0 even: Z/3 ⊕ Z/3"), "{text}");
    assert!(text.contains("i >= 0 odd:  Z/3 ⊕ Z/3"), "{text}");
    assert!(text.contains("i < 0:       0"), "{text}");
}

#[test]
fn compute_smallest_case_json() {
    let out = run(&["compute", "--n", "2", "--d", "2", "--weights", "1,1", "--prime", "2", "--exponent", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["matrix"]["entries"], serde_json::json!([["-2"]]));
    assert_eq!(v["even_group"]["invariant_factors"], serde_json::json!(["2"]));
    assert_eq!(v["odd_group"]["invariant_factors"], serde_json::json!(["2"]));
}

#[test]
fn invalid_input_exits_two() {
    let out = run(&["compute", "--n", "4", "--d", "3", "--weights", "1,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not coprime"), "{err}");
    assert!(out.stdout.is_empty());

    assert_eq!(run(&["compute", "--n", "5", "--weights", "1,2,2", "--prime", "4"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--n", "5", "--weights", "1,2,2", "--prime", "2", "--exponent", "0"]).status.code(), Some(2));
    assert_eq!(run(&["quiver", "--n", "5", "--weights", "1,2,2", "--format", "pretty"]).status.code(), Some(2));
    assert_eq!(run(&["matrix", "--n", "7", "--weights", "1,2,4", "--source", "fixture"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn quiver_dot() {
    let out = run(&["quiver", "--n", "5", "--d", "3", "--weights", "1,2,2", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 7);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 4);
}

#[test]
fn quiver_json_round_trips() {
    let out = run(&["quiver", "--n", "5", "--weights", "1,2,2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let q: cyclic_ktheory::Quiver = serde_json::from_value(v["quiver"].clone()).unwrap();
    let p = cyclic_ktheory::validate_params(5, 3, &[1, 2, 2]).unwrap();
    assert_eq!(q, cyclic_ktheory::build_quiver(&p));
}

#[test]
fn cartan_low_dim() {
    let out = run(&["cartan", "--n", "5", "--d", "3", "--weights", "1,2,2", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("P = [1, 1, 3, 3]"), "{text}");
    assert!(text.contains("enumeration: agrees"));
    assert!(text.contains("[ 3 3 1 1 ]"), "{text}");
}

#[test]
fn matrix_json_has_determinant() {
    let out = run(&["matrix", "--n", "5", "--weights", "1,2,2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["determinant"], "25");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn snf_fixture_product_is_26() {
    let out = run(&["snf", "--fixture", "paper-low-dim", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let product: i64 = v["snf"]["divisors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_str().unwrap().parse::<i64>().unwrap())
        .product();
    assert_eq!(product, 26);
}

#[test]
fn verify_paper_outputs() {
    let out = run(&["verify-paper", "--fixture", "low-dim-example"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("printed det claim:    26"), "{text}");
    assert!(text.contains("perfect square"), "{text}");
    assert!(text.contains("DISCREPANCY"), "{text}");

    let out = run(&["verify-paper", "--fixture", "family", "--d", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verification"]["agreement"], true);

    let out = run(&["verify-paper", "--fixture", "family", "--d", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict:"));

    assert_eq!(run(&["verify-paper", "--fixture", "family"]).status.code(), Some(2));
}

#[test]
fn sweep_family_and_determinism() {
    let out = run(&["sweep", "--n", "3,5,7", "--weights-mode", "ones", "--primes", "n"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].contains("Z/3 ⊕ Z/3"));
    assert!(lines[3].contains(&vec!["Z/7"; 6].join(" ⊕ ")));

    let args = ["sweep", "--n", "2..8", "--weights-mode", "all", "--primes", "2,3,5", "--exponents", "1,2"];
    let a = run(&[&args[..], &["--jobs", "1"]].concat());
    let b = run(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_low_dim_over_primes() {
    let out = run(&["sweep", "--n", "5", "--weights-mode", "explicit", "--weights", "1,2,2", "--primes", "2..13", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let l = row["coefficient"]["l"].as_u64().unwrap();
        assert_eq!(row["determinant"], "25");
        assert_eq!(row["vanishing"].as_bool().unwrap(), 25 % l != 0, "l={l}");
    }
    let table: cyclic_ktheory::sweep::SweepTable = serde_json::from_value(v).unwrap();
    assert_eq!(table.rows.len(), 6);
}

#[test]
fn sweep_edge_cases() {
    let out = run(&["sweep", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
    let out = run(&["sweep", "--n", "2..12", "--weights-mode", "all", "--primes", "2", "--max-cells", "5"]);
    assert_eq!(out.status.code(), Some(2));
}
