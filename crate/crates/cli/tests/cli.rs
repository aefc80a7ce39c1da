use std::path::PathBuf;
use std::process::{Command, Output};

fn subm(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subm"));
    c.args(args).env_remove("SUBM_BUDGET");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn spec_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const PHI0: &str = r#"{"kind":"table","universe":3,"values":[0,1,1,1,1,1,1,2]}"#;

#[test]
fn eval_and_exit_codes() {
    let p = spec_file("phi0.json", PHI0);
    let p = p.to_str().unwrap();
    let o = subm(&["eval", "--spec", p, "--set", "0,1,2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: 2\n"));
    let o = subm(&["eval", "--spec", p, "--set", ""], &[]);
    assert!(stdout(&o).contains("value: 0\n"));
    // outside the table universe
    assert_eq!(subm(&["eval", "--spec", p, "--set", "7"], &[]).status.code(), Some(2));
    let bad = spec_file("bad.json", r#"{"kind":"table","universe":3,"values":[0,1,1,1,1,1,1,2],"x":1}"#);
    let o = subm(&["eval", "--spec", bad.to_str().unwrap(), "--set", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field"));
    assert_eq!(subm(&["eval"], &[]).status.code(), Some(2));
}

#[test]
fn pathology_json_is_deterministic() {
    let p = spec_file("phi0-path.json", PHI0);
    let args = ["pathology", "--spec", p.to_str().unwrap(), "--json"];
    let a = subm(&args, &[]);
    let b = subm(&args, &[]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["results"]["degree"], "4/3");
    assert_eq!(v["exit_code"], 0);
    assert!(v["results"].get("degree_approx").is_none());
    let v: serde_json::Value = serde_json::from_slice(&subm(&[&args[..], &["--approx"]].concat(), &[]).stdout).unwrap();
    assert_eq!(v["results"]["degree_approx"], "1.333333");
}

#[test]
fn select_reports_and_budget_override() {
    let basis = spec_file("basis.json", r#"{"kind":"vector_seq","generator":"basis"}"#);
    let o = subm(&["select", "--selector", "bp", "--spec", basis.to_str().unwrap(), "--length", "30", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certificate"]["M"], "3/2");
    assert_eq!(v["certificate"]["verified"], true);

    let bm = spec_file("bm.json", r#"{"kind":"named","ideal":"block-multiples"}"#);
    let o = subm(&["select", "--selector", "tall", "--spec", bm.to_str().unwrap(), "--stream", "diagonal", "--budget", "400"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));

    let flat = spec_file("flat.json", r#"{"kind":"vector_seq","generator":"flat"}"#);
    let args = ["select", "--selector", "small-norm", "--spec", flat.to_str().unwrap(), "--length", "3"];
    let o = subm(&args, &[("SUBM_BUDGET", "25")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("--budget 25"));
}

#[test]
fn demo_passes_with_one_flag() {
    let o = subm(&["demo"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0 fail, 1 flagged"), "{out}");
    assert!(!out.contains("[FAIL]"));
}

#[test]
fn readme_block_listing_matches_arith_v1() {
    use subm_core::ideals::{ArithV1, PartitionScheme};
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap();
    for n in 0..5u64 {
        let line = readme.lines().find(|l| l.starts_with(&format!("B{n}: "))).unwrap();
        let listed: Vec<u64> = line[4..].split(", ").map(|x| x.parse().unwrap()).collect();
        assert_eq!(listed.len(), 50);
        assert_eq!(listed, ArithV1.block_prefix(n, 50).iter().collect::<Vec<_>>(), "B{n}");
    }
}
