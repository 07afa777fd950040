use flipk_core::linalg::IntMatrix;
use flipk_core::GradedGroup;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Integers as JSON numbers when they fit in `i64`, decimal strings otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.row_iter().map(ints).collect())
}

pub fn graded(g: &GradedGroup) -> Value {
    json!({ "K0": g.g0.to_string(), "K1": g.g1.to_string() })
}

pub fn ints_text(xs: &[BigInt]) -> String {
    let items: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

pub fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = m.row_iter().map(ints_text).collect();
    format!("[{}]", rows.join(", "))
}
