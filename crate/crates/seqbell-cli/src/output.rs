//! Deterministic emission: 17-significant-digit floats for CSV, pretty JSON
//! for machine consumption, both written to a file or stdout.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Formats a float with 17 significant digits, enough to round-trip `f64`
/// exactly.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a CSV document: header row plus rows of 17-digit floats.
pub fn csv_document(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| float17(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes `content` to `out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn json_document<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float17_round_trips() {
        for &x in &[120.0 / 29.0, 2.0 / 3.0, 3.0 - 5.0_f64.sqrt(), 1e-300] {
            let parsed: f64 = float17(x).parse().unwrap();
            assert_eq!(parsed, x);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let doc = csv_document(&["a", "b"], &[vec![1.0, 0.5]]);
        let mut lines = doc.lines();
        assert_eq!(lines.next(), Some("a,b"));
        assert_eq!(
            lines.next(),
            Some("1.0000000000000000e0,5.0000000000000000e-1")
        );
    }
}
