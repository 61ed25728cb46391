//! Analysis reports with a machine form and a text form.
//!
//! The machine form is JSON whose object keys are sorted by the serializer,
//! so identical inputs produce byte-identical output. Rationals appear as
//! exact strings. The text form renders the same content as aligned tables.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::format::Erratum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub name: String,
    pub machine: Value,
    pub text: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errata: Vec<Erratum>,
}

impl Section {
    pub fn new(name: impl Into<String>, machine: Value, text: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            machine,
            text: text.into(),
            errata: Vec::new(),
        }
    }

    /// A section whose analysis could not run, with the reason.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Section {
            name: name.into(),
            machine: serde_json::json!({ "skipped": reason }),
            text: format!("skipped: {reason}"),
            errata: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format_version: String,
    pub title: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            format_version: "1".to_string(),
            title: title.into(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.title));
        for s in &self.sections {
            out.push_str(&format!("\n== {} ==\n", s.name));
            out.push_str(&s.text);
            if !s.text.ends_with('\n') {
                out.push('\n');
            }
            for e in &s.errata {
                out.push_str(&format!(
                    "erratum at {}: printed {} but derived {}{}\n",
                    e.location,
                    e.printed,
                    e.derived,
                    e.note
                        .as_deref()
                        .map(|n| format!(" ({n})"))
                        .unwrap_or_default()
                ));
            }
        }
        out
    }
}

/// Pads each column to its widest cell, two spaces between columns.
pub fn align_rows(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{:width$}", cell, width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
