use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;

fn bsf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsf")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bsf(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    bsf(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--emit", "json"]);
    serde_json::from_str(&ok(&a)).unwrap()
}

fn table<'a>(doc: &'a Value, name: &str) -> &'a [Value] {
    doc["payload"]["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["name"] == name)
        .unwrap_or_else(|| panic!("no table {name}"))["rows"]
        .as_array()
        .unwrap()
}

/// First column → last column of a table.
fn column_map(doc: &Value, name: &str) -> BTreeMap<String, f64> {
    table(doc, name)
        .iter()
        .map(|r| {
            let r = r.as_array().unwrap();
            (r[0].as_str().unwrap().to_string(), r[r.len() - 1].as_f64().unwrap())
        })
        .collect()
}

#[test]
fn evolve_examples() {
    let hom = column_map(&json(&["evolve", "--circuit", "fourier(2)@0,1", "--input", "1,1"]), "outcomes");
    assert_eq!(hom.len(), 2);
    assert!((hom["|2,0⟩"] - 0.5).abs() < 1e-12 && (hom["|0,2⟩"] - 0.5).abs() < 1e-12);

    let swap = column_map(&json(&["evolve", "--circuit", "permute(1,0)", "--input", "2,0"]), "outcomes");
    assert_eq!(swap.into_iter().collect::<Vec<_>>(), vec![("|0,2⟩".to_string(), 1.0)]);

    let even = column_map(&json(&["evolve", "--circuit", "fourier(2)@0,1", "--input", "2,2"]), "outcomes");
    assert!(even.keys().all(|k| k.trim_matches(['|', '⟩']).split(',').all(|n| n.parse::<u32>().unwrap() % 2 == 0)));
    assert!((even.values().sum::<f64>() - 1.0).abs() < 1e-10);
}

#[test]
fn outcomes_are_sorted_by_probability() {
    let doc = json(&["evolve", "--circuit", "fourier(3)", "--input", "2,1,0"]);
    let p: Vec<f64> = table(&doc, "outcomes").iter().map(|r| r[1].as_f64().unwrap()).collect();
    assert!(p.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn suppress_examples() {
    let doc = json(&["suppress", "--circuit", "fourier(2)", "--gen", "pauli_x(2)", "--char", "0", "--n", "2"]);
    let rows = column_map(&doc, "suppressed");
    assert_eq!(rows.keys().collect::<Vec<_>>(), vec!["|1,1⟩"]);
    assert!(rows["|1,1⟩"] < 1e-10);

    let doc = json(&["suppress", "--circuit", "fourier(4)", "--gen", "pauli_x(4)", "--input", "1,1,1,1"]);
    let rows = column_map(&doc, "suppressed");
    let law = |s: &str| -> bool {
        let n: Vec<usize> = s.trim_matches(['|', '⟩']).split(',').map(|x| x.parse().unwrap()).collect();
        n.iter().enumerate().map(|(j, k)| j * k).sum::<usize>() % 4 != 0
    };
    // 35 four-photon outcomes, 10 with Σ j·n_j ≡ 0 (mod 4)
    assert_eq!(rows.len(), 25);
    assert!(rows.keys().all(|k| law(k)));
    assert!(rows.values().all(|a| *a < 1e-10));

    let doc = json(&["suppress", "--circuit", "fourier(2)", "--n", "2"]);
    assert!(table(&doc, "suppressed").is_empty());
}

#[test]
fn antisymmetric_character_suppresses_bunching() {
    // the -1 eigenspace of the swap at n = 2 is |2,0⟩ - |0,2⟩
    let doc = json(&["suppress", "--circuit", "fourier(2)", "--gen", "pauli_x(2)", "--char", "1/2", "--n", "2"]);
    let rows = column_map(&doc, "suppressed");
    assert_eq!(rows.keys().collect::<Vec<_>>(), vec!["|0,2⟩", "|2,0⟩"]);
}

#[test]
fn measure_examples() {
    let half = [
        "measure",
        "--circuit",
        "tensor(fourier(2), identity(2))",
        "--gen",
        "tensor(pauli_x(2), identity(2))",
        "--input",
    ];
    let mut a = half.to_vec();
    a.push("beta+*beta-");
    let rows = column_map(&json(&a), "characters");
    assert!((rows["0"] - 0.5).abs() < 1e-12);

    let mut a = half.to_vec();
    a.push("beta-*beta-");
    let rows = column_map(&json(&a), "characters");
    assert_eq!(rows.len(), 1);
    assert!((rows["0"] - 1.0).abs() < 1e-12);

    let doc = json(&[
        "measure",
        "--circuit",
        "tensor(fourier(3), identity(2))",
        "--gen",
        "tensor(pauli_x(3), identity(2))",
        "--input",
        "beta-*beta-*beta-",
    ]);
    assert_eq!(column_map(&doc, "characters").len(), 1);
}

#[test]
fn bell_examples() {
    let csv = ok(&["bell", "--m", "8", "--table", "--emit", "csv"]);
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("8,403/512,0.787109375,0.9195"), "{row}");

    let csv = ok(&["bell", "--table", "--m-max", "12", "--emit", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,p_exact,p,e,odd_extension");
    assert_eq!(lines.len(), 12);

    let text = ok(&["bell", "--m", "2", "--oracle"]);
    assert!(text.contains("max POVM deviation < 1e-8: PASS"), "{text}");
}

#[test]
fn bell_povm_is_complete() {
    let doc = json(&["bell", "--m", "4", "--povm"]);
    let mut sum = [[0.0f64; 4]; 4];
    for r in table(&doc, "povm") {
        let (i, j) = (r[1].as_u64().unwrap() as usize, r[2].as_u64().unwrap() as usize);
        sum[i][j] += r[3].as_f64().unwrap();
    }
    for (i, row) in sum.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
    }
    assert_eq!(table(&doc, "kraus").len(), 8);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["evolve", "--circuit", "fourier(2", "--input", "1,1"]), 2);
    assert_eq!(code(&["evolve", "--circuit", "fourier(2)", "--input", "gamma"]), 2);
    assert_eq!(code(&["evolve", "--circuit", "fourier(3)", "--input", "1,1"]), 2);
    assert_eq!(code(&["evolve", "--bogus"]), 2);
    assert_eq!(code(&["bell", "--m", "4", "--oracle"]), 3);
    assert_eq!(code(&["bell", "--m", "4", "--oracle", "--force"]), 3);
    assert_eq!(code(&["suppress", "--circuit", "identity(2)", "--gen", "pauli_x(2)", "--n", "2"]), 4);
    assert_eq!(code(&["suppress", "--circuit", "fourier(2)", "--gen", "fourier(2)", "--n", "2"]), 4);
    assert_eq!(
        code(&["measure", "--circuit", "fourier(2)", "--gen", "pauli_x(2)", "--gen", "pauli_z(2)", "--input", "1,1"]),
        4
    );
    assert_eq!(code(&["bell", "--m", "1"]), 2);
}

#[test]
fn size_limit_reports_the_basis() {
    let out = bsf(&["bell", "--m", "4", "--oracle", "--force"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("77558760"), "{err}");
    let out = Command::new(env!("CARGO_BIN_EXE_bsf"))
        .args(["evolve", "--circuit", "fourier(6)", "--input", "2,2,2,0,0,0"])
        .env("BSF_MAX_BASIS", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_have_positions() {
    let out = bsf(&["evolve", "--circuit", "fourier(2)@0,1;\n pauli_y(2)", "--input", "1,1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--circuit: line 2, column 2: unknown gate 'pauli_y'"), "{err}");
}

#[test]
fn circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hom.circ");
    std::fs::write(&path, "permute(1,0)\nfourier(2)\n").unwrap();
    let rows = column_map(&json(&["evolve", "--circuit-file", path.to_str().unwrap(), "--input", "1,1"]), "outcomes");
    assert_eq!(rows.len(), 2);
}

#[test]
fn documents_are_deterministic() {
    let args =
        ["suppress", "--circuit", "fourier(3)", "--gen", "pauli_x(3)", "--n", "3", "--seed", "7", "--emit", "json"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    assert_eq!(a, ok(&threaded));
    let b = ok(&["bell", "--m", "2", "--oracle", "--emit", "json"]);
    assert_eq!(b, ok(&["bell", "--m", "2", "--oracle", "--emit", "json", "--threads", "1"]));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["bell", "--table", "--m-max", "20"];
    let doc = json(&args);
    let mut a = args.to_vec();
    a.extend(["--emit", "csv"]);
    let csv = ok(&a);
    let rows = table(&doc, "success");
    for (line, row) in csv.lines().skip(1).zip(rows) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[2].parse::<f64>().unwrap(), row[2].as_f64().unwrap());
        assert_eq!(cells[3].parse::<f64>().unwrap(), row[3].as_f64().unwrap());
        assert_eq!(cells[1], row[1].as_str().unwrap());
    }
}

#[test]
fn json_has_the_document_fields() {
    let doc = json(&["bell", "--m", "2"]);
    for k in ["command", "inputs", "digest", "payload", "version"] {
        assert!(doc.get(k).is_some(), "missing {k}");
    }
    assert_eq!(doc["digest"].as_str().unwrap().len(), 64);
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
}
