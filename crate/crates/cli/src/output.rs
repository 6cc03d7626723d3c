//! Report rendering: every number becomes a decimal string.

use serde_json::Value;

pub fn stringify_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => *v = Value::String(n.to_string()),
        Value::Array(a) => a.iter_mut().for_each(stringify_numbers),
        Value::Object(o) => o.values_mut().for_each(stringify_numbers),
        _ => {}
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &Value) -> String {
    let mut v = report.clone();
    stringify_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_become_strings() {
        let v = json!({"a": 1, "b": [2, {"c": -3}], "d": true, "e": null});
        assert_eq!(to_json(&v), to_json(&json!({"a": "1", "b": ["2", {"c": "-3"}], "d": true, "e": null})));
    }
}
