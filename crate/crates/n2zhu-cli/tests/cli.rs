use n2zhu_cli::cache::{key, Cache, CACHE_ENV};
use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn n2zhu(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_n2zhu"));
    cmd.args(args).env_remove(CACHE_ENV);
    if let Some(dir) = cache {
        cmd.env(CACHE_ENV, dir);
    }
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const SEARCH: &[&str] =
    &["singular", "search", "--module", "vac", "--p", "4", "--pp", "1", "--level", "3", "--charge", "0"];

#[test]
fn invalid_parameters_exit_with_2() {
    let out = n2zhu(&["zhu", "sigma", "--p", "1", "--pp", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p >= 2"));
    let out = n2zhu(&["zhu", "sigma", "--p", "4", "--pp", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = n2zhu(&["pbw", "reduce", "--p", "4", "--pp", "1", "--expr", "(* G+_1/2"], None);
    assert_eq!(out.status.code(), Some(2));
    let out =
        n2zhu(&["bgg", "verify", "--variant", "nope", "--p", "4", "--pp", "1", "--r", "1", "--max-level", "2"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_search_finds_the_vacuum_vector() {
    let out = n2zhu(SEARCH, None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "singular-search/1");
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["matches_stored_vector"], true);
    assert_eq!(r["weight"], "3/1@0/1");
}

#[test]
fn jacobi_has_no_violations() {
    let out = n2zhu(&["algebra", "check-jacobi", "--p", "3", "--pp", "2", "--window", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["violations"], Value::Array(vec![]));
}

#[test]
fn pbw_reduce_orders_modes() {
    let out = n2zhu(&["pbw", "reduce", "--p", "4", "--pp", "1", "--expr", "(* G+_1/2 G-_-1/2)"], None);
    let r = report(&out);
    assert_eq!(r["normal_form"]["G-_-1/2 G+_1/2"], "-1/1");
    assert_eq!(r["normal_form"]["L_0"], "2/1");
    assert_eq!(r["normal_form"]["J_0"], "1/1");
}

#[test]
fn sigma_image_matches_the_known_polynomial() {
    let out = n2zhu(&["zhu", "sigma", "--p", "4", "--pp", "1", "--express-singular"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["proportional_to_known"], true);
}

#[test]
fn fusion_with_minus_a_third() {
    let out = n2zhu(&["fz", "fusion", "--j", "-1/3"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["dimension"], 2);
    let labels: Vec<&str> = r["summands"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["C_1/3", "Pi C(-1)"]);
}

#[test]
fn char_csv() {
    let out = n2zhu(&["char", "--module", "vac", "--p", "4", "--pp", "1", "--max-level", "2", "--format", "csv"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("level,charge,dim"));
    assert!(text.lines().any(|l| l == "2/1,0/1,3"));
}

#[test]
fn bgg_verify_matches() {
    let out = n2zhu(
        &["bgg", "verify", "--variant", "affine-parabolic", "--p", "3", "--pp", "1", "--r", "1", "--max-level", "3"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["match"], true);
}

#[test]
fn cache_hits_and_corrupt_entries() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = n2zhu(SEARCH, None);
    let miss = n2zhu(SEARCH, Some(dir.path()));
    let hit = n2zhu(SEARCH, Some(dir.path()));
    assert_eq!(fresh.stdout, miss.stdout);
    assert_eq!(miss.stdout, hit.stdout);
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let path = entries[0].as_ref().unwrap().path();
    let name = path.file_stem().unwrap().to_str().unwrap().to_string();

    // A well-formed entry is served as is.
    Cache::new(dir.path()).put(&name, 0, "planted\n");
    assert_eq!(n2zhu(SEARCH, Some(dir.path())).stdout, b"planted\n");
    assert_eq!(n2zhu(&[&["--no-cache"], SEARCH].concat(), Some(dir.path())).stdout, fresh.stdout);

    // A tampered entry is a miss and gets rewritten.
    let text = fs::read_to_string(&path).unwrap().replace("planted", "tampered");
    fs::write(&path, text).unwrap();
    assert_eq!(n2zhu(SEARCH, Some(dir.path())).stdout, fresh.stdout);
    assert_eq!(Cache::new(dir.path()).get(&name).map(|e| e.1.into_bytes()), Some(fresh.stdout));
    assert_eq!(key("{}").len(), 64);
}
