//! Structured-text reports.
//!
//! Every command persists its results as a flat `key = value` document with
//! a fixed insertion order, so runs with the same configuration and seed
//! produce byte-identical files and regressions show up as one-line diffs.
//! The document always opens with the report name, the library version, and
//! the full configuration it ran under; wall-clock measurements are
//! deliberately excluded (they belong on the console, not in diffable
//! output).

use std::fmt::Display;

/// The library version, embedded in every report.
pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// An ordered `key = value` document.
///
/// Keys are unique; pushing a duplicate panics, because a report that
/// silently overwrote a result would hide bugs. Values are stored already
/// rendered, so the document owns its exact byte representation.
#[derive(Debug, Clone)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    /// Start a report: `report = <name>`, then `version = <crate version>`.
    pub fn new(name: &str) -> Self {
        let mut report = Report { entries: Vec::new() };
        report.push("report", name);
        report.push("version", version());
        report
    }

    /// Append one entry. Panics on a duplicate key.
    pub fn push(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        let key = key.into();
        assert!(
            !key.is_empty() && key.chars().all(|c| !c.is_whitespace() && c != '='),
            "report key {key:?} must be a single token"
        );
        assert!(
            self.entries.iter().all(|(k, _)| *k != key),
            "report key {key:?} pushed twice"
        );
        self.entries.push((key, value.to_string()));
        self
    }

    /// Append one entry under the `config.` prefix.
    pub fn push_config(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.push(format!("config.{key}"), value)
    }

    /// Append a `key[i] = value` sequence entry.
    pub fn push_indexed(&mut self, key: &str, index: usize, value: impl Display) -> &mut Self {
        self.push(format!("{key}[{index}]"), value)
    }

    /// Look an entry up by exact key (mainly for tests and summaries).
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Render the document. The exact bytes are part of the contract:
    /// one `key = value` line per entry, insertion order, trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

/// Render a float so that equal values always produce equal bytes and the
/// text round-trips to the same bits. Integers stay readable (`2` not
/// `2e0`), and anything fractional keeps full precision.
pub fn fmt_float(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        let shortest = format!("{x}");
        debug_assert_eq!(shortest.parse::<f64>().ok(), Some(x));
        shortest
    }
}
