use serde::Serialize;
use serde_json::{json, Value};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

pub struct Output {
    pub json: Value,
    pub text: String,
    /// A detector/oracle disagreement was found.
    pub disagreement: bool,
}

/// Wraps a command body with the schema and command name.
pub fn envelope<T: Serialize>(command: &str, body: T) -> Value {
    let mut value = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(map), Ok(Value::Object(extra))) = (&mut value, serde_json::to_value(body))
    {
        map.extend(extra);
    }
    value
}

pub fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
