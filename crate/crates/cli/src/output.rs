use std::fmt::Write as _;

use serde_json::Value;

use crate::config::Format;

pub const CSV_SCHEMA: &str = "# ab-shift-lab schema v1";

/// A command result in all three renderings.
pub struct Output {
    pub command: &'static str,
    pub json: Value,
    pub csv_header: String,
    pub csv_rows: Vec<String>,
    pub text: String,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = format!("{}\n# command: {}\n{}\n", CSV_SCHEMA, self.command, self.csv_header);
                for r in &self.csv_rows {
                    let _ = writeln!(s, "{}", r);
                }
                s
            }
            Format::Text => self.text.clone(),
        }
    }
}
