use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sunflower-kit"))
}

fn family_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("sunflower-kit-cli-{}-{name}.txt", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const FULL_4_2: &str = "n=4 m=2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

#[test]
fn sunflower_witness_with_empty_core() {
    let f = family_file("singletons", "n=3 m=1\n1\n2\n3\n");
    let o = run(&["sunflower", "--input", f.to_str().unwrap(), "--k", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["claim_id"], "sunflower");
    assert_eq!(v["holds"], true);
    assert_eq!(v["witness"]["core"], serde_json::json!([]));
    assert_eq!(v["witness"]["petals"].as_array().unwrap().len(), 3);
    assert!(v["runtime_ms"].is_u64());
}

#[test]
fn sunflower_absent_below_threshold_is_vacuous() {
    let f = family_file("pair", "n=3 m=1\n1\n2\n");
    let o = run(&["sunflower", "--input", f.to_str().unwrap(), "--k", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["holds"], "vacuous");
}

#[test]
fn split_identity_on_full_family() {
    let f = family_file("full42", FULL_4_2);
    let o = run(&["split-check", "--input", f.to_str().unwrap(), "--d", "2", "--j", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["claim_id"], "lemma-3.1");
    assert_eq!(v["lhs"], "24");
    assert_eq!(v["rhs"], "24");
}

#[test]
fn split_check_all_levels() {
    let f = family_file("full42-all", FULL_4_2);
    let o = run(&["split-check", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn verify_lemmas_passes() {
    let o = run(&["verify-lemmas", "--max-x", "300", "--precision", "128", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|v| v["holds"] == true));
}

#[test]
fn reads_standard_input() {
    let mut child = bin().args(["md", "--input", "-", "--l", "3"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(FULL_4_2.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("observation-a") && text.contains(" true "));
}

#[test]
fn generated_family_round_trips() {
    let o = run(&["gen", "--seed", "11", "--n", "10", "--m", "3", "--count", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let f = family_file("generated", &text);
    let again = run(&["gen", "--seed", "11", "--n", "10", "--m", "3", "--count", "12"]);
    assert_eq!(text, stdout(&again));
    let k = run(&["kappa", "--input", f.to_str().unwrap(), "--json"]);
    assert_eq!(k.status.code(), Some(0));
    assert_eq!(json_lines(&k)[0]["claim_id"], "kappa");
    let j = run(&["gen", "--seed", "11", "--n", "10", "--m", "3", "--count", "12", "--json"]);
    assert_eq!(json_lines(&j)[0]["sets"].as_array().unwrap().len(), 12);
}

#[test]
fn gamma_and_generator_subcommands() {
    let f = family_file("gamma", FULL_4_2);
    let p = f.to_str().unwrap();
    let o = run(&["gamma-check", "--input", p, "--b", "3/2", "--core", "--json"]);
    assert_eq!(json_lines(&o).len(), 3);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["gamma-check", "--input", p, "--b", "4", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o)[0]["holds"], false);
    let o = run(&["egt-find", "--input", p, "--l", "3", "--lambda", "6/5", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let generated = ["--seed", "1", "--n", "10", "--m", "2", "--count", "6"];
    let o = run(&[&["egt-find", "--l", "6", "--lambda", "6/5", "--eps", "130321/160000", "--json"][..], &generated[..]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json_lines(&o)[0]["claim_id"], "theorem-1.2");
    let o = run(&["egt4-verify", "--input", p, "--l", "3", "--gamma", "1/2", "--json"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let o = run(&["ext", "--input", p, "--l", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["claim_id"], "eq-1.1");
    let o = run(&["split-find", "--input", p, "--seed", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn pi_check_on_toy_partition() {
    let f = family_file("toy", "n=4 m=2\n1 3\n1 4\n2 3\n2 4\n");
    let o = run(&[
        "pi-check", "--input", f.to_str().unwrap(), "--blocks", "1,2;3,4", "--q", "1", "--j", "1", "--b", "2", "--base", "4", "--json",
    ]);
    let lines = json_lines(&o);
    assert_eq!(lines[0]["claim_id"], "property-pi");
    assert!(matches!(o.status.code(), Some(0 | 1)));
}

#[test]
fn exit_codes() {
    let malformed = family_file("bad", "n=4 m=2\n1 2 3\n");
    assert_eq!(run(&["md", "--input", malformed.to_str().unwrap(), "--l", "3"]).status.code(), Some(2));
    assert_eq!(run(&["md", "--input", "/nonexistent/family.txt", "--l", "3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["gamma-check", "--n", "5", "--m", "2", "--count", "3", "--b", "x"]).status.code(), Some(2));
    let dense = run(&["sunflower", "--n", "9", "--m", "2", "--count", "36", "--k", "4", "--budget", "1"]);
    assert_eq!(dense.status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_suite_subset() {
    let o = run(&["oracle-suite", "--quick", "--only", "C7", "--only", "I2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS C7") && text.contains("PASS I2"));
}
