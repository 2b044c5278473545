use serde_json::{Map, Value};

use ffperm::wire::SCHEMA_VERSION;

use crate::Format;

/// Renders a payload object, stamping the schema version.
pub fn render(format: Format, payload: Value) -> String {
    let mut obj = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Plain => obj
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", scalar(v)))
            .collect(),
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in &obj {
                s.push_str(&format!("{k},{}\n", csv_field(&scalar(v))));
            }
            s
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
