use serde_json::{json, Value};
use std::io::Write;

/// Output of one command: human-readable lines plus a structured payload.
pub struct Report {
    pub pass: bool,
    pub lines: Vec<String>,
    pub data: Value,
}

impl Report {
    pub fn new(pass: bool) -> Report {
        Report { pass, lines: Vec::new(), data: Value::Null }
    }

    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    pub fn print_text(&self) {
        let mut out = std::io::stdout().lock();
        for l in &self.lines {
            // a closed pipe is not worth a panic
            if writeln!(out, "{l}").is_err() {
                return;
            }
        }
    }

    pub fn print_structured(&self, config: Value) {
        let doc = json!({
            "tool": "essalg",
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "pass": self.pass,
            "result": self.data,
        });
        let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
    }
}
