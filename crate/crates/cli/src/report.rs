//! Reports: keyed checks, a config snapshot and the command echo.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use divlog_core::report::Verdict;
use serde::Serialize;
use serde_json::Value;

use crate::config::Config;

pub const REPORT_SCHEMA: &str = "divlog.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn of<W>(v: &Verdict<W>) -> Status {
        match v {
            Verdict::Passed { .. } => Status::Pass,
            Verdict::Refuted { .. } => Status::Fail,
            Verdict::Inconclusive { .. } => Status::Inconclusive,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub status: Status,
    pub summary: String,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub config: Config,
    pub status: Status,
    pub checks: BTreeMap<String, Check>,
}

impl Report {
    pub fn new(command: Vec<String>, config: Config) -> Self {
        Report { schema: REPORT_SCHEMA, command, config, status: Status::Pass, checks: BTreeMap::new() }
    }

    pub fn add(&mut self, name: impl Into<String>, status: Status, summary: impl Into<String>, detail: impl Serialize) {
        let detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self.checks.insert(name.into(), Check { status, summary: summary.into(), detail });
        self.status = self.checks.values().map(|c| c.status).max().unwrap_or(Status::Pass);
    }

    /// Adds a verdict, summarising its case count and label.
    pub fn verdict<W: Serialize>(&mut self, name: &str, v: &Verdict<W>, extra: &str) {
        let mut summary = format!("{}, {} cases", v.label(), v.cases());
        if let Verdict::Inconclusive { reason, .. } = v {
            let _ = write!(summary, ": {reason}");
        }
        if !extra.is_empty() {
            let _ = write!(summary, "; {extra}");
        }
        self.add(name, Status::of(v), summary, v);
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn text(&self) -> String {
        let mut out = format!("divlog {}\n", self.command.join(" "));
        let width = self.checks.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        for (name, c) in &self.checks {
            let pad = width - name.chars().count();
            let _ = writeln!(out, "  {name}{}  {:<12} {}", " ".repeat(pad), c.status.label(), c.summary);
            if c.status == Status::Fail {
                if let Some(w) = c.detail.get("witness") {
                    let _ = writeln!(out, "  {}  witness: {w}", " ".repeat(width));
                }
            }
        }
        let _ = writeln!(out, "status: {}", self.status.label());
        out
    }
}
