//! JSON renderings of library values. Rationals are always `"num/den"`.

use n2zhu::pbw::{Key, Vector};
use n2zhu::poly::{coeff_table, format_poly, Poly};
use n2zhu::reps::CharacterSeries;
use n2zhu::scalar::fmt_q;
use n2zhu::Q;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Basis key as text: the creation monomial, followed by the top state when
/// the top space is not one-dimensional.
pub fn key_text(k: &Key) -> String {
    if k.1 == 0 {
        k.0.to_string()
    } else {
        format!("{} |{}>", k.0, k.1)
    }
}

pub fn vector(v: &Vector) -> BTreeMap<String, String> {
    v.iter().map(|(k, c)| (key_text(k), fmt_q(c))).collect()
}

/// Weight key `level_num/level_den@charge_num/charge_den`.
pub fn weight_key(level: &Q, charge: &Q) -> String {
    format!("{}@{}", fmt_q(level), fmt_q(charge))
}

pub fn poly(p: &Poly<Q>, names: &[&str]) -> Value {
    json!({
        "variables": names,
        "coefficients": coeff_table(p),
        "text": format_poly(p, names),
    })
}

pub fn character(ch: &CharacterSeries) -> BTreeMap<String, i64> {
    ch.entries.iter().map(|((h, j), n)| (weight_key(h, j), *n)).collect()
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}
