//! JSON report envelope shared by every command.

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// `serde_json`'s default map is ordered by key, so serializing through
/// [`Value`] gives key-sorted output at every depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs: Map::new(),
            results: Value::Null,
            pass: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn results(mut self, results: impl Serialize) -> Self {
        self.results = to_value(results);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    /// Pretty-printed, key-sorted, newline-terminated.
    pub fn render(&self) -> String {
        let value = to_value(self);
        let mut out = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
        out.push('\n');
        out
    }
}

pub fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report fields serialize to JSON")
}
