use std::io::Write;
use std::process::{Command, Output};

fn sugihara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sugihara"))
        .args(args)
        .env_remove("SUGIHARA_SIZE_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = sugihara(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn rule_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn dual_of_z4_matches_golden() {
    let golden = include_str!("golden/dual_6_Z4.txt");
    assert_eq!(ok(&["dual", "6", "--of", "Z4"]), golden);
}

#[test]
fn dual_from_json_file_matches_chain() {
    let z4 = sugihara::SugiharaChain::new(4).unwrap();
    let f = rule_file(&z4.algebra().to_json().unwrap());
    let from_file = ok(&["dual", "6", "--of", f.path().to_str().unwrap()]);
    let from_name = ok(&["dual", "6", "--of", "Z4"]);
    assert_eq!(from_file.lines().skip(1).collect::<Vec<_>>(), from_name.lines().skip(1).collect::<Vec<_>>());
}

#[test]
fn freecount_small() {
    assert_eq!(ok(&["freecount", "3", "2"]).trim(), "1296");
    assert_eq!(ok(&["freecount", "2", "1"]).trim(), "4");
}

#[test]
fn admalg_reports_cardinality() {
    let out = ok(&["admalg", "6"]);
    assert!(out.lines().any(|l| l == "|B_6| = 20"), "{out}");
    for method in ["recursive", "duality"] {
        let other = ok(&["admalg", "6", "--method", method]);
        assert!(other.contains("|B_6| = 20"));
    }
    assert!(ok(&["admalg", "5", "--cross-check"]).contains("agree: yes"));
}

#[test]
fn check_reports_both_verdicts() {
    let f = rule_file("# modus ponens for the disjunctive syllogism\np, ~p | q |- q\n");
    let out = ok(&["check", f.path().to_str().unwrap(), "--k", "7", "--mode", "both"]);
    assert!(out.contains("admissible in B7: no"), "{out}");
    assert!(out.contains("derivable in Z7: no"), "{out}");
    assert!(out.lines().any(|l| l.trim_start().starts_with("p = ")));

    let even = ok(&["check", f.path().to_str().unwrap(), "--k", "6", "--mode", "admissible"]);
    assert!(even.contains("admissible in B6: yes"), "{even}");
    assert!(!even.contains("derivable"));
}

#[test]
fn check_accepts_unicode_input_and_output() {
    let f = rule_file("p, ¬p ∨ q ⊢ q\n");
    let out = ok(&["--unicode", "check", f.path().to_str().unwrap(), "--k", "4"]);
    assert!(out.starts_with("p, ¬p ∨ q ⊢ q\n"), "{out}");
    let ascii = ok(&["check", f.path().to_str().unwrap(), "--k", "4"]);
    assert!(ascii.starts_with("p, ~p | q |- q\n"), "{ascii}");
}

#[test]
fn check_json_output() {
    let f = rule_file("p, ~p | q |- q\n|- p -> p\n");
    let out = ok(&["--format", "json", "check", f.path().to_str().unwrap(), "--k", "5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rules = v["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 2);
    assert_eq!(rules[0]["line"], 1);
    assert_eq!(rules[0]["results"][0]["verdict"], "no");
    assert!(rules[0]["results"][0]["countermodel"]["p"].is_array());
    assert_eq!(rules[1]["results"][1]["verdict"], "yes");
}

#[test]
fn exit_codes_by_error_class() {
    let usage = sugihara(&["algebra", "0"]);
    assert_eq!(usage.status.code(), Some(2));
    let unknown = sugihara(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));

    let bound = sugihara(&["freecount", "9", "5"]);
    assert_eq!(bound.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bound.stderr).contains("size bound"));

    let f = rule_file("p |- q\np ->\n");
    let parse = sugihara(&["check", f.path().to_str().unwrap(), "--k", "4"]);
    assert_eq!(parse.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));

    let io = sugihara(&["check", "/nonexistent/rules.txt", "--k", "4"]);
    assert_eq!(io.status.code(), Some(5));
}

#[test]
fn size_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sugihara"))
        .args(["freecount", "3", "2"])
        .env("SUGIHARA_SIZE_BOUND", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn algebra_dump() {
    let out = ok(&["algebra", "4"]);
    assert_eq!(
        out,
        "Z4: -2 -1 1 2\nsubalgebras: 3\n  {-2,2}\n  {-1,1}\n  {-2,-1,1,2}\ncongruences: 3\n  ~0: {-2} {-1} {1} {2}\n  ~1: {-2} {-1,1} {2}\n  ~2: {-2,-1,1,2}\n"
    );
}

#[test]
fn pez_verify() {
    let out = ok(&["pez", "5", "--verify"]);
    assert!(out.contains("closure equals brute force: yes"), "{out}");
    assert!(out.starts_with("generators of PEZ(5): 4\n"), "{out}");
}

#[test]
fn testspace_verify() {
    let out = ok(&["testspace", "6", "--verify"]);
    assert!(out.starts_with("Y6: 7 point(s)\n"), "{out}");
    for line in ["nu embeds D(Z6): yes", "mu is a morphism: yes", "mu is onto: yes", "bold points generate: yes"] {
        assert!(out.contains(line), "missing {line}");
    }
}

#[test]
fn table1_columns() {
    let out = ok(&["table1", "--max-k", "6"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows[1], vec!["3", "2", "1296", "3", "6"]);
    assert_eq!(rows[2], vec!["4", "2", "20736", "3", "8"]);
    assert_eq!(rows[3], vec!["5", "3", "-", "7", "16"]);
    assert_eq!(rows[4], vec!["6", "3", "-", "7", "20"]);
}

#[test]
fn table2_json_is_complete() {
    let out = ok(&["--format", "json", "table2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row["results"].as_array().unwrap().len(), 5);
    }
    assert_eq!(rows[3]["rule"], "q, p -> q -> r |- p -> r");
}

#[test]
fn dumps_are_stable() {
    for args in [&["admalg", "7"][..], &["testspace", "7"], &["table2"]] {
        assert_eq!(ok(args), ok(args));
    }
}
