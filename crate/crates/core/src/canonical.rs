//! Canonical JSON text: object keys sorted, 2-space indentation, arrays in
//! their original order, trailing newline. Two structurally equal values
//! always produce identical bytes.

use serde::Serialize;
use serde_json::{Map, Value};

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("in-memory value serializes to JSON");
    let mut text = serde_json::to_string_pretty(&sort_keys(value)).expect("JSON value prints");
    text.push('\n');
    text
}

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}
