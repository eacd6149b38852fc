use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// What a subcommand produced, rendered in the requested format.
#[derive(Debug, Default)]
pub struct Report {
    pub ok: bool,
    pub lines: Vec<String>,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub data: Value,
}

impl Report {
    pub fn new() -> Self {
        Report {
            ok: true,
            data: Value::Null,
            ..Report::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn check(&mut self, pass: bool) -> &'static str {
        self.ok &= pass;
        if pass {
            "pass"
        } else {
            "FAIL"
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.csv_rows.push(cells);
    }

    pub fn set_data<T: Serialize>(&mut self, data: &T) {
        self.data = serde_json::to_value(data).expect("report data serializes");
    }

    pub fn render(&self, format: Format, command: &str, seed: u64) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for l in &self.lines {
                    let _ = writeln!(out, "{l}");
                }
                let _ = writeln!(
                    out,
                    "# cmap {} {command} seed={seed} {}",
                    env!("CARGO_PKG_VERSION"),
                    if self.ok { "ok" } else { "failed" }
                );
                out
            }
            Format::Json => {
                let v = json!({
                    "tool": "cmap",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": command,
                    "seed": seed,
                    "ok": self.ok,
                    "data": self.data,
                });
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            }
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "# cmap {} {command} seed={seed}", env!("CARGO_PKG_VERSION"));
                if !self.csv_header.is_empty() {
                    let _ = writeln!(out, "{}", self.csv_header.join(","));
                }
                for r in &self.csv_rows {
                    let _ = writeln!(out, "{}", r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
                }
                out
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
