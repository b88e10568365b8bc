use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use tanfree::conic::Conic;
use tanfree::constructions;
use tanfree::Plane;

fn tanfree(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tanfree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    if let Some(s) = stdin {
        input.write_all(s.as_bytes()).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn desargues5() -> String {
    let pl = Plane::with_order(5).unwrap();
    constructions::interior_points(&Conic::canonical(&pl).unwrap()).unwrap().to_json()
}

#[test]
fn verify_from_stdin() {
    let out = tanfree(&["verify", "--set", "-"], Some(&desargues5()));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "VALID");
    assert_eq!(v["spectrum"], "0:6 2:15 3:10");
}

#[test]
fn verify_rejects_sets_with_tangents() {
    let pl = Plane::with_order(5).unwrap();
    let s = tanfree::PointSet::from_indices(&pl, &[0, 1, 2]).to_json();
    let out = tanfree(&["verify", "--set", "-"], Some(&s));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "INVALID");
}

#[test]
fn verify_from_file() {
    let path = std::env::temp_dir().join(format!("tanfree-cli-{}.json", std::process::id()));
    std::fs::write(&path, desargues5()).unwrap();
    let out = tanfree(&["verify", "--set", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(json(&out)["size"], 10);
}

#[test]
fn search_min_q5() {
    let out = tanfree(&["search-min", "--q", "5", "--cap", "12", "--workers", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["u"], 10);
}

#[test]
fn output_is_reproducible() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("wall_time");
        v.to_string()
    };
    let a = tanfree(&["search-min", "--q", "7", "--cap", "14", "--workers", "1"], None);
    let b = tanfree(&["search-min", "--q", "7", "--cap", "14", "--workers", "3"], None);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn exterior_extend_q7() {
    let out = tanfree(&["exterior-extend", "--q", "7"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["off_line_extenders"], 0);
}

#[test]
fn long_orders_need_opt_in() {
    let out = tanfree(&["search-min", "--q", "9", "--cap", "15"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(tanfree(&["no-such-command"], None).status.code(), Some(2));
    assert_eq!(tanfree(&["verify", "--set", "-"], Some("not json")).status.code(), Some(2));
    assert_eq!(tanfree(&["construct", "--q", "6", "--kind", "trivial"], None).status.code(), Some(2));
}

#[test]
fn other_subcommands() {
    let v = json(&tanfree(&["field-info", "--q", "9"], None));
    assert_eq!(v["field"]["modulus"], serde_json::json!([1, 0, 1]));
    let v = json(&tanfree(&["construct", "--q", "9", "--kind", "frobenius"], None));
    assert_eq!(v["certificate"]["status"], "FLAGGED");
    let v = json(&tanfree(&["spectrum", "--n", "10", "--q", "5"], None));
    assert_eq!(v["solutions"].as_array().unwrap().len(), 2);
    let v = json(&tanfree(&["enumerate", "--q", "3", "--n", "6"], None));
    assert_eq!(v["count"], 78);
    let v = json(&tanfree(&["classify", "--q", "3", "--n", "6"], None));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    let v = json(&tanfree(&["exterior-clique", "--q", "7", "--no3col"], None));
    assert!(v["tangent_free_unions"].as_u64().unwrap() > 0);
    let trivial = constructions::trivial(&Plane::with_order(5).unwrap()).to_json();
    let v = json(&tanfree(&["dual-codeword", "--set", "-"], Some(&trivial)));
    assert_eq!(v["result"], "FOUND");
    assert_eq!(v["weight"], 10);
    let v = json(&tanfree(&["peel", "--q", "5", "--erased", "-"], Some(&desargues5())));
    assert_eq!(v["residual_size"], 10);
    let out = tanfree(&["theoremsuite", "--level", "quick"], None);
    assert_eq!(out.status.code(), Some(0));
}
