//! Check records, verification reports, and their text rendering.
//!
//! Every verification suite in this crate reports through these types: one
//! [`CheckRecord`] per property, collected into a [`VerificationReport`]
//! whose overall verdict is the conjunction of the parts. Rendering is plain
//! `key = value` text, one block per check, deterministic for a fixed
//! configuration so that repeated runs diff clean.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

/// Outcome of one verified property.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    /// Stable dotted identifier, e.g. `claim.range`.
    pub id: String,
    /// Self-contained mathematical statement of what was checked.
    pub description: String,
    pub passed: bool,
    /// Headline measured quantity (worst value, deviation, drift...).
    pub value: f64,
    /// The gate `value` was held against, when one exists.
    pub threshold: Option<f64>,
    /// Signed distance to the pass/fail boundary; negative means violated.
    pub margin: f64,
    /// Where or how the worst case happened, human-readable.
    pub witness: Option<String>,
    /// Qualifier such as `degenerate` or `experimental`.
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(id: &str, description: &str, passed: bool, margin: f64) -> Self {
        CheckRecord {
            id: id.to_string(),
            description: description.to_string(),
            passed,
            value: margin,
            threshold: None,
            margin,
            witness: None,
            note: None,
        }
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.value = value;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn with_witness(mut self, witness: String) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn with_note_opt(mut self, note: Option<&str>) -> Self {
        if let Some(n) = note {
            self.note = Some(n.to_string());
        }
        self
    }
}

/// An ordered collection of check records plus the configuration echo.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Suite name; merged reports keep the outermost one.
    pub title: String,
    /// `key = value` pairs describing the exact configuration that ran.
    pub config: Vec<(String, String)>,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(title: &str) -> Self {
        VerificationReport {
            title: title.to_string(),
            config: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn set_config(&mut self, key: &str, value: &str) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn set_config_f64(&mut self, key: &str, value: f64) {
        self.config.push((key.to_string(), format!("{value:.16e}")));
    }

    /// Append another suite's records (its config echo is dropped; the
    /// merged report's own echo is authoritative).
    pub fn absorb(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    /// True iff every record passed.
    pub fn overall(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.records.iter().filter(|r| r.passed).count()
    }

    /// Render as diff-friendly text: a header, the config echo, one block
    /// per check, and a summary. Floats print with 17 significant digits so
    /// the file round-trips the exact doubles.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(256 + self.records.len() * 256);
        let _ = writeln!(out, "# {} verification report", self.title);
        let _ = writeln!(out, "tool = revcurv {}", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.config {
            let _ = writeln!(out, "config.{k} = {v}");
        }
        for rec in &self.records {
            let _ = writeln!(out, "\n[check]");
            let _ = writeln!(out, "id = {}", rec.id);
            let _ = writeln!(out, "description = {}", rec.description);
            let _ = writeln!(out, "passed = {}", rec.passed);
            let _ = writeln!(out, "value = {:.16e}", rec.value);
            if let Some(th) = rec.threshold {
                let _ = writeln!(out, "threshold = {th:.16e}");
            }
            let _ = writeln!(out, "margin = {:.16e}", rec.margin);
            if let Some(w) = &rec.witness {
                let _ = writeln!(out, "witness = {w}");
            }
            if let Some(n) = &rec.note {
                let _ = writeln!(out, "note = {n}");
            }
        }
        let failed: Vec<&str> = self
            .records
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.id.as_str())
            .collect();
        let _ = writeln!(out, "\n[summary]");
        let _ = writeln!(out, "total = {}", self.records.len());
        let _ = writeln!(out, "passed = {}", self.passed_count());
        let _ = writeln!(out, "failed = {}", self.records.len() - self.passed_count());
        if !failed.is_empty() {
            let _ = writeln!(out, "failed_ids = {}", failed.join(","));
        }
        let _ = writeln!(out, "overall = {}", if self.overall() { "pass" } else { "fail" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut rep = VerificationReport::new("demo");
        rep.push(CheckRecord::new("a", "first", true, 1.0));
        assert!(rep.overall());
        rep.push(CheckRecord::new("b", "second", false, -0.5));
        assert!(!rep.overall());
        assert_eq!(rep.passed_count(), 1);
    }

    #[test]
    fn render_lists_failures_and_roundtrips_floats() {
        let mut rep = VerificationReport::new("demo");
        rep.set_config_f64("delta", 0.1);
        rep.push(
            CheckRecord::new("x.y", "margin check", false, -1.0 / 3.0)
                .with_value(0.3333333333333333)
                .with_threshold(1e-9)
                .with_witness("t = 0.25".to_string()),
        );
        let text = rep.render();
        assert!(text.contains("config.delta = 1.0000000000000001e-1"));
        assert!(text.contains("failed_ids = x.y"));
        assert!(text.contains("overall = fail"));
        // The rendered value parses back to the identical double.
        let line = text
            .lines()
            .find(|l| l.starts_with("value = "))
            .unwrap()
            .trim_start_matches("value = ");
        assert_eq!(line.parse::<f64>().unwrap(), 0.3333333333333333);
    }

    #[test]
    fn absorb_merges_records_in_order() {
        let mut main = VerificationReport::new("all");
        main.push(CheckRecord::new("one", "", true, 0.0));
        let mut sub = VerificationReport::new("sub");
        sub.push(CheckRecord::new("two", "", true, 0.0));
        main.absorb(sub);
        assert_eq!(main.records.len(), 2);
        assert_eq!(main.records[1].id, "two");
    }
}
