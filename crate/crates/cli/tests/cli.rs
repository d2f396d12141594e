use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klein-lattice")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn h1_of_s3_with_trivial_z2_action_has_two_classes() {
    let r = report(&["h1", "compute", "--group", "Z2", "--coeff", "S3", "--action", "trivial"]);
    assert_eq!(r["result"]["h1_size"], 2);
    assert_eq!(r["request"]["command"], "h1");
    assert_eq!(r["request"]["subcommand"], "compute");
    assert_eq!(r["seed"], 0);
}

#[test]
fn k3_lattice_file_is_classified_by_signature() {
    let r = report(&["lattice", "classify", "--in", &data("k3.json")]);
    assert_eq!(r["result"]["type"], "Other");
    assert_eq!(r["result"]["signature"]["positive"], 3);
    assert_eq!(r["result"]["signature"]["negative"], 19);
}

#[test]
fn dihedral_group_has_three_finite_subgroup_classes() {
    let r = report(&["hk", "classify-subgroups", "--gamma", &data("dihedral.json"), "--domain", &data("cert.json")]);
    assert_eq!(r["result"]["classes"], 3);
    assert_eq!(r["completeness"]["kind"], "bounded_search");
}

#[test]
fn shipped_certificate_verifies() {
    let r = report(&["cone", "verify", "--domain", &data("cert.json"), "--seed", "3", "--samples", "200"]);
    assert_eq!(r["result"]["report"]["covering"]["samples"], 200);
    assert_eq!(r["seed"], 3);
}

#[test]
fn domain_command_reproduces_the_shipped_certificate() {
    let r = report(&[
        "cone", "domain", "--cone", &data("pell_cone.json"), "--gamma", &data("pell_group.json"), "--xi", "[1,0]",
    ]);
    let shipped: Value = serde_json::from_str(&std::fs::read_to_string(data("cert.json")).unwrap()).unwrap();
    assert_eq!(r["result"], shipped);
}

#[test]
fn same_request_gives_the_same_payload() {
    let args = ["cone", "siegel", "--domain", &data("cert.json"), "--depth", "10"];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["result"]["count"], 3);
}

#[test]
fn halved_certificate_fails_verification_with_exit_two() {
    let out = run(&["cone", "verify", "--domain", &data("negative/cert_half.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kahler_preserving_operator_fails_the_anti_torelli_check() {
    let d = |f: &str| data(&format!("toy-fix-ns/{f}"));
    let out = run(&[
        "hk", "torelli", "--source", &d("hodge.json"), "--target", &d("hodge.json"), "--phi", &d("dagger.json"),
        "--kahler-source", &d("kahler.json"), "--kahler-target", &d("kahler.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["holds"], false);
    let ok = report(&[
        "hk", "torelli", "--source", &d("hodge.json"), "--target", &d("hodge.json"), "--phi", &d("sigma.json"),
        "--kahler-source", &d("kahler.json"), "--kahler-target", &d("kahler.json"),
    ]);
    assert_eq!(ok["result"]["holds"], true);
}

#[test]
fn real_structures_of_the_k3_case_pass_the_hilbert_checks() {
    let d = |f: &str| data(&format!("k3-u-split/{f}"));
    let r = report(&["hk", "hilbert", "--hodge", &d("hodge.json"), "--sigma", &d("sigma.json"), "--n", "2"]);
    assert_eq!(r["verified"], true);
    let k = report(&["hk", "kaut-criterion", "--hodge", &d("hodge.json"), "--phi", &d("dagger.json"), "--kahler", &d("kahler.json")]);
    assert_eq!(k["result"]["verdict"], "klein_realizable");
    assert_eq!(k["result"]["sign"], -1);
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(run(&["lattice", "signature", "--in", "missing-file.json"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    let bad_action = r#"{"table":[[0,1,2,3,4,5],[0,1,2,3,4]]}"#;
    assert_eq!(run(&["h1", "compute", "--group", "Z2", "--coeff", "S3", "--action", bad_action]).status.code(), Some(1));
    let out = run(&["lattice", "signature", "--in", "U"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invalid_thread_count_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_klein-lattice"))
        .args(["lattice", "signature", "--in", "U"])
        .env("KLEIN_LATTICE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sectors_csv_is_written_next_to_the_report() {
    let dir = std::env::temp_dir().join(format!("klein-lattice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("sectors.csv");
    let json = dir.join("report.json");
    let out = run(&[
        "cone", "verify", "--domain", &data("cert.json"), "--samples", "50",
        "--sectors", csv.to_str().unwrap(), "--sector-depth", "1", "--out", json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("kind,label,word_length,x0,x1,x2"));
    assert_eq!(text.lines().filter(|l| l.starts_with("boundary")).count(), 2);
    assert_eq!(text.lines().filter(|l| l.starts_with("translate")).count(), 4);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["request"]["subcommand"], "verify");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn real_forms_and_filtration_examples_agree() {
    let r = report(&["h1", "filtration", "--example", "infinite-dihedral"]);
    assert_eq!(r["verified"], true);
    let r = report(&["h1", "real-forms", "--group", "Z2", "--holomorphic", "[true,false]", "--sigma", "1"]);
    assert_eq!(r["result"]["agree"], true);
    assert_eq!(r["result"]["real_structures"], 1);
}
