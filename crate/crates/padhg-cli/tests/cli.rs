//! Runs the `padhg` binary end to end.

use std::process::{Command, Output};

use padhg::PAdic;
use serde_json::Value;

fn padhg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padhg")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// `Σ unit_i p^(val + i)` reduced mod `p^k`, for a non-negative valuation.
fn residue_of(v: &Value, k: u32) -> u64 {
    let p = v["p"].as_u64().unwrap();
    let val = v["val"].as_u64().unwrap() as u32;
    let modulus = p.pow(k);
    v["unit"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, d)| d.as_u64().unwrap() * p.pow(val + i as u32) % modulus)
        .sum::<u64>()
        % modulus
}

#[test]
fn digamma_at_a_quarter() {
    let out = padhg(&["polygamma", "--r", "0", "--z", "1/4", "--p", "5", "--prec", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verb"], "polygamma");
    assert!(v["precision"]["certified"].as_u64().unwrap() >= 6);
    // −(1/5) log(8^4)
    let expected = PAdic::from_int(5, 4096).iwasawa_log().unwrap().shift(-1).neg_p();
    assert_eq!(residue_of(&v["result"], 6), expected.residue(6).unwrap());
}

#[test]
fn gamma_at_one() {
    let out = padhg(&["gamma", "--z", "1", "--p", "7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let k = v["result"]["prec"].as_u64().unwrap() as u32;
    assert_eq!(residue_of(&v["result"], k), 7u64.pow(k) - 1);
}

#[test]
fn intertwiner_check_succeeds() {
    let out = padhg(&["verify-intertwiner", "--a", "1/3,2/3", "--b", "1,1", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn exit_codes() {
    let math = padhg(&["gamma", "--z", "1/5", "--p", "5"]);
    assert_eq!(math.status.code(), Some(1));
    let v = json(&math);
    assert_eq!(v["error"], "NonIntegralArgument");
    assert!(v["detail"].is_string());
    assert_eq!(padhg(&["gamma", "--zz", "1"]).status.code(), Some(2));
    assert_eq!(padhg(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(padhg(&["zeta", "--r", "1", "--p", "5", "--prec", "4"]).status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["zeta", "--r", "3", "--p", "7", "--prec", "4", "--json"][..],
        &["gamma-k", "--a", "1/3,2/3", "--b", "1,1/2", "--k", "1", "--p", "5", "--prec", "5", "--json"],
        &["legendre", "--lambda", "3", "--p", "7", "--json"],
    ] {
        let first = padhg(args);
        let second = padhg(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&first.stdout));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let v = json(&first);
        assert!(v["p"].is_u64());
        assert!(v["formula"].is_string());
    }
}
