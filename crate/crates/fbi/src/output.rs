//! CSV and JSON artifacts.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal form, so identical runs give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Writes `# config_sha256=<hash>`, the header row and the data rows.
pub fn write_csv<W: Write>(mut out: W, table: &Table, hash: &str) -> Result<(), CliError> {
    writeln!(out, "# config_sha256={hash}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(dir: &Path, stem: &str, table: &Table, hash: &str) -> Result<(), CliError> {
    let path = dir.join(format!("{stem}_{}.csv", table.name));
    let f = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(f), table, hash)
}

pub fn write_json_file(
    dir: &Path,
    stem: &str,
    value: &serde_json::Value,
) -> Result<(), CliError> {
    let path = dir.join(format!("{stem}.json"));
    let mut text = serde_json::to_string_pretty(value).expect("summary serializes");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
