//! Machine-readable experiment reports: CSV (primary) and a JSON mirror.
//!
//! Reports are byte-deterministic: metadata lines, column order and row
//! order are all fixed by the producing experiment, never by thread timing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A long-format table with ordered metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            meta: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// CSV with `# key=value` comment lines, a header row, UTF-8, LF.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let escaped: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
            let _ = writeln!(s, "{}", escaped.join(","));
        }
        s
    }

    /// JSON mirror with the same keys and rows.
    pub fn to_json(&self) -> String {
        let meta: BTreeMap<&str, &str> = self
            .meta
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        let body = serde_json::json!({
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&body).expect("report serializes")
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}
