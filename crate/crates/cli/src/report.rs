use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use mg_core::rational::format_decimal;
use mg_core::Rational;

/// Significant digits of every decimal in a report.
pub const DIGITS: usize = 12;

#[derive(Clone, Debug)]
pub enum Entry {
    Exact(Rational),
    /// Floating-point result, already rendered.
    Approx(String),
    Text(String),
}

#[derive(Clone, Debug)]
pub struct Line {
    pub name: String,
    pub value: Entry,
}

/// Output of one computation. Plain text prints one `name = value` line per
/// entry; JSON prints one object per entry.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub lines: Vec<Line>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            lines: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn exact(&mut self, name: impl Into<String>, r: Rational) {
        self.push(name, Entry::Exact(r));
    }

    pub fn approx(&mut self, name: impl Into<String>, text: String) {
        self.push(name, Entry::Approx(text));
    }

    pub fn text(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.push(name, Entry::Text(text.into()));
    }

    pub fn warn(&mut self, w: impl ToString) {
        self.warnings.push(w.to_string());
    }

    fn push(&mut self, name: impl Into<String>, value: Entry) {
        self.lines.push(Line {
            name: name.into(),
            value,
        });
    }

    pub fn plain(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = match &l.value {
                Entry::Exact(r) => writeln!(out, "{} = {} ({})", l.name, r, format_decimal(r, DIGITS)),
                Entry::Approx(t) | Entry::Text(t) => writeln!(out, "{} = {}", l.name, t),
            };
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }

    /// One JSON object per line, newline separated.
    pub fn json(&self) -> String {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut out = String::new();
        for l in &self.lines {
            let (exact, decimal) = match &l.value {
                Entry::Exact(r) => (Value::String(r.to_string()), Value::String(format_decimal(r, DIGITS))),
                Entry::Approx(t) => (Value::Null, Value::String(t.clone())),
                Entry::Text(t) => (Value::String(t.clone()), Value::Null),
            };
            let obj = json!({
                "command": self.command,
                "quantity": l.name,
                "inputs": inputs,
                "exact": exact,
                "decimal": decimal,
                "warnings": self.warnings,
            });
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.json()
        } else {
            self.plain()
        }
    }
}
