//! Reports, exit codes and their text and JSON renderings.

use std::io::{IsTerminal, Write};

use serde_json::{Map, Value};

pub const SCHEMA: &str = "mltmf.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Negative,
    Error,
    Budget,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Error => 2,
            Status::Budget => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Negative => "negative",
            Status::Error => "error",
            Status::Budget => "budget_exceeded",
        }
    }

    fn ansi(self) -> &'static str {
        match self {
            Status::Ok => "\x1b[32m",
            Status::Negative => "\x1b[31m",
            Status::Error | Status::Budget => "\x1b[33m",
        }
    }
}

/// What a subcommand produced: a status, reason codes for anything but success, a JSON body
/// and the lines shown in text mode.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub reasons: Vec<String>,
    pub body: Map<String, Value>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), status: Status::Ok, reasons: Vec::new(), body: Map::new(), lines: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.body.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    /// Marks the report negative with `code`; a stronger status already set is kept.
    pub fn fail(&mut self, code: &str) -> &mut Self {
        if self.status == Status::Ok {
            self.status = Status::Negative;
        }
        if !self.reasons.iter().any(|r| r == code) {
            self.reasons.push(code.to_string());
        }
        self
    }

    /// Marks the report as an input error with `code`.
    pub fn invalid(&mut self, code: &str) -> &mut Self {
        if self.status != Status::Budget {
            self.status = Status::Error;
        }
        if !self.reasons.iter().any(|r| r == code) {
            self.reasons.push(code.to_string());
        }
        self
    }

    pub fn error(command: &str, status: Status, code: &str, message: &str) -> Self {
        let mut r = Report::new(command);
        r.status = status;
        r.reasons.push(code.to_string());
        r.set("message", message);
        r.line(format!("error: {message}"));
        r
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.body.clone();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), self.command.clone().into());
        out.insert("status".into(), self.status.name().into());
        out.insert("exit_code".into(), self.status.exit_code().into());
        out.insert("reasons".into(), self.reasons.clone().into());
        Value::Object(out)
    }

    pub fn to_text(&self, color: bool) -> String {
        let status = if color {
            format!("{}{}\x1b[0m", self.status.ansi(), self.status.name())
        } else {
            self.status.name().to_string()
        };
        let mut out = format!("{}: {status}", self.command);
        if !self.reasons.is_empty() {
            out.push_str(&format!(" [{}]", self.reasons.join(", ")));
        }
        out.push('\n');
        for l in &self.lines {
            out.push_str("  ");
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    /// Writes the report; text-mode errors go to stderr. A closed pipe is not an error.
    pub fn emit(&self, json: bool) {
        let to_err = !json && matches!(self.status, Status::Error | Status::Budget);
        let text = if json {
            let mut t = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
            t.push('\n');
            t
        } else {
            let color = std::env::var_os("MLTMF_NO_COLOR").is_none()
                && if to_err { std::io::stderr().is_terminal() } else { std::io::stdout().is_terminal() };
            self.to_text(color)
        };
        let _ = if to_err {
            std::io::stderr().write_all(text.as_bytes())
        } else {
            std::io::stdout().write_all(text.as_bytes())
        };
    }
}
