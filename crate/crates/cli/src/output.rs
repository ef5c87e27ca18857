//! Tabular results, their CSV and JSON encodings, and a validator that
//! parses either encoding back.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Null
        }
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, String>,
}

/// What a scenario produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scenario-level results, emitted as top-level JSON keys.
    #[serde(flatten)]
    pub summary: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
        }
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut s = format!("# {} {}\n# scenario={}\n# seed={}\n", m.tool, m.version, m.scenario, m.seed);
        for (k, v) in &m.params {
            s += &format!("# param {k}={v}\n");
        }
        for (k, v) in &m.tolerances {
            s += &format!("# tol {k}={v}\n");
        }
        for (k, v) in &self.summary {
            s += &format!("# summary {k}={}\n", compact(v));
        }
        s += &self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s += &cells.join(",");
            s.push('\n');
        }
        s
    }
}

/// JSON numbers in summaries use the same 17-digit form as CSV cells.
fn compact(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Null => String::new(),
        Cell::Bool(b) => b.to_string(),
        Cell::Int(i) => i.to_string(),
        Cell::Num(x) => format!("{x:.16e}"),
        Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
        Cell::Text(t) => t.clone(),
    }
}

/// Summary of a validated file.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub scenario: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Checks an emitted file against the output schema and decodes it.
pub fn validate(text: &str) -> Result<Parsed, CliError> {
    if text.trim_start().starts_with('{') {
        validate_json(text)
    } else {
        validate_csv(text)
    }
}

fn schema_error(msg: impl Into<String>) -> CliError {
    CliError::Validation(format!("output schema: {}", msg.into()))
}

fn validate_json(text: &str) -> Result<Parsed, CliError> {
    let out: Output = serde_json::from_str(text).map_err(|e| schema_error(e.to_string()))?;
    check_table(&out.columns, &out.rows)?;
    if out.metadata.tool != crate::TOOL {
        return Err(schema_error("unknown producer"));
    }
    Ok(Parsed { scenario: out.metadata.scenario, seed: out.metadata.seed, columns: out.columns, rows: out.rows })
}

fn check_table(columns: &[String], rows: &[Vec<Cell>]) -> Result<(), CliError> {
    if columns.is_empty() {
        return Err(schema_error("no columns"));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != columns.len()) {
        return Err(schema_error(format!("row {i} has {} cells, expected {}", r.len(), columns.len())));
    }
    Ok(())
}

fn split_csv(line: &str) -> Result<Vec<String>, CliError> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match (ch, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    if quoted {
        return Err(schema_error("unterminated quote"));
    }
    cells.push(cur);
    Ok(cells)
}

fn parse_cell(text: &str) -> Cell {
    if text.is_empty() {
        Cell::Null
    } else if let Ok(b) = text.parse::<bool>() {
        Cell::Bool(b)
    } else if let Ok(i) = text.parse::<i64>() {
        Cell::Int(i)
    } else if let Ok(x) = text.parse::<f64>() {
        Cell::Num(x)
    } else {
        Cell::Text(text.to_string())
    }
}

fn validate_csv(text: &str) -> Result<Parsed, CliError> {
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| schema_error("empty file"))?;
    if !first.starts_with(&format!("# {} ", crate::TOOL)) {
        return Err(schema_error("missing producer line"));
    }
    let (mut scenario, mut seed) = (None, None);
    let mut header = None;
    let mut rows = Vec::new();
    for line in lines {
        if header.is_none() {
            if let Some(meta) = line.strip_prefix("# ") {
                if let Some(s) = meta.strip_prefix("scenario=") {
                    scenario = Some(s.to_string());
                } else if let Some(s) = meta.strip_prefix("seed=") {
                    seed = Some(s.parse::<u64>().map_err(|_| schema_error("bad seed"))?);
                } else if !(meta.starts_with("param ") || meta.starts_with("tol ") || meta.starts_with("summary ")) {
                    return Err(schema_error(format!("unknown metadata line `{line}`")));
                }
                continue;
            }
            header = Some(split_csv(line)?);
            continue;
        }
        rows.push(split_csv(line)?.iter().map(|c| parse_cell(c)).collect());
    }
    let columns = header.ok_or_else(|| schema_error("missing header row"))?;
    check_table(&columns, &rows)?;
    Ok(Parsed {
        scenario: scenario.ok_or_else(|| schema_error("missing scenario"))?,
        seed: seed.ok_or_else(|| schema_error("missing seed"))?,
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Output {
        Output {
            metadata: Metadata {
                tool: crate::TOOL.into(),
                version: "0".into(),
                scenario: "demo".into(),
                seed: 7,
                params: BTreeMap::from([("a".into(), "1".into())]),
                tolerances: BTreeMap::new(),
            },
            columns: vec!["x".into(), "label".into(), "flag".into(), "n".into(), "missing".into()],
            rows: vec![vec![Cell::Num(0.1), "a,\"b\"".into(), true.into(), 3usize.into(), f64::NAN.into()]],
            summary: BTreeMap::from([("k".into(), Value::from(1.5))]),
        }
    }

    #[test]
    fn csv_round_trip() {
        let out = sample();
        let text = out.to_csv();
        assert!(text.contains("1.0000000000000001e-1"));
        let parsed = validate(&text).unwrap();
        assert_eq!(parsed.rows, out.rows);
        assert_eq!(parsed.columns, out.columns);
        assert_eq!((parsed.scenario.as_str(), parsed.seed), ("demo", 7));
    }

    #[test]
    fn json_round_trip() {
        let out = sample();
        let parsed = validate(&out.render(Format::Json)).unwrap();
        assert_eq!(parsed.rows, out.rows);
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(validate("").is_err());
        assert!(validate("x,y\n1,2\n").is_err());
        let mut text = sample().to_csv();
        text.push_str("1,2\n");
        assert!(validate(&text).is_err());
        assert!(validate("{\"metadata\": 1}").is_err());
    }
}
