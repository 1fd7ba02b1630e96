use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    Text,
}

/// A table cell. Floats are rounded to 12 significant digits on entry so the
/// JSON and CSV renderings carry the same numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn num(x: f64) -> Self {
        let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
        Cell::Num(if r == 0.0 { 0.0 } else { r })
    }

    pub fn int(x: impl TryInto<i64>) -> Self {
        Cell::Int(x.try_into().unwrap_or(i64::MAX))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of the canonical JSON of `command` and `inputs`.
    pub digest: String,
    pub payload: Payload,
    pub version: String,
}

impl ResultDocument {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, payload: Payload) -> Self {
        let canonical = serde_json::to_string(&(command, &inputs)).expect("string map serializes");
        let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
        Self { command: command.into(), inputs, digest, payload, version: env!("CARGO_PKG_VERSION").into() }
    }

    pub fn render(&self, emit: Emit) -> Result<String, CliError> {
        match emit {
            Emit::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::internal(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Emit::Csv => self.csv(),
            Emit::Text => Ok(self.text()),
        }
    }

    /// One CSV block per table, separated by blank lines.
    fn csv(&self) -> Result<String, CliError> {
        let mut blocks = Vec::new();
        for t in &self.payload.tables {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::internal(e.to_string());
            w.write_record(&t.columns).map_err(io)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::internal(e.to_string()))?;
            blocks.push(String::from_utf8(bytes).expect("CSV of UTF-8 cells"));
        }
        Ok(blocks.join("\n"))
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "bsf {} {}", self.version, self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "  {k}: {v}");
        }
        let _ = writeln!(s, "  digest: {}", self.digest);
        for t in &self.payload.tables {
            let _ = writeln!(s, "\n[{}]", t.name);
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| {
                    cells.iter().map(|r| r[c].chars().count()).chain([t.columns[c].chars().count()]).max().unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                let padded: Vec<String> = row.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            for r in &cells {
                let _ = writeln!(s, "{}", line(r));
            }
            if t.rows.is_empty() {
                let _ = writeln!(s, "(none)");
            }
        }
        if !self.payload.notes.is_empty() {
            s.push('\n');
            for n in &self.payload.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultDocument {
        let mut t = Table::new("outcomes", &["outcome", "probability"]);
        t.push(vec![Cell::text("|2,0⟩"), Cell::num(0.1 + 0.2)]);
        t.push(vec![Cell::text("a,b"), Cell::num(1.0 / 3.0)]);
        t.push(vec![Cell::int(3), Cell::num(-0.0)]);
        let inputs = [("circuit".to_string(), "fourier(2)@0,1".to_string())].into_iter().collect();
        ResultDocument::new("evolve", inputs, Payload { tables: vec![t], notes: vec!["note".into()] })
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let doc = sample();
        let json = doc.render(Emit::Json).unwrap();
        let back: ResultDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.render(Emit::Json).unwrap(), json);
    }

    #[test]
    fn rounding_to_twelve_digits() {
        assert_eq!(Cell::num(0.1 + 0.2), Cell::Num(0.3));
        assert_eq!(Cell::num(0.787109375), Cell::Num(0.787109375));
        assert_eq!(Cell::num(-0.0), Cell::Num(0.0));
    }

    #[test]
    fn csv_quotes_and_matches_json_numbers() {
        let csv = sample().render(Emit::Csv).unwrap();
        assert_eq!(
            csv,
            "outcome,probability\n|2,0⟩,0.3\n\"a,b\",0.333333333333\n3,0.0\n".replace("|2,0⟩", "\"|2,0⟩\"")
        );
    }

    #[test]
    fn digest_depends_on_inputs_only() {
        let a = sample();
        let mut b = sample();
        b.payload.notes.clear();
        assert_eq!(ResultDocument::new(&b.command, b.inputs.clone(), b.payload.clone()).digest, a.digest);
        assert_eq!(a.digest.len(), 64);
    }
}
