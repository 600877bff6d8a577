//! Tabular output with embedded run metadata.
//!
//! CSV files start with `#` metadata lines (schema, command, seed, config as
//! one-line JSON) followed by a mandatory header row. Floats are written in
//! shortest round-trip scientific notation. JSON files carry the same
//! metadata plus the rows as objects keyed by column name; non-finite
//! floats become `null`.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::args::{Command, Format};
use crate::error::{CliError, Result};

pub const SCHEMA: &str = "fbn-probe/1";
const CONFIG_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => "NaN".into(),
            Cell::Float(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Float(x) => format!("{x:e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, cmd: &Command, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.render_csv(cmd),
            Format::Json => self.render_json(cmd),
        }
    }

    fn render_csv(&self, cmd: &Command) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let seed = cmd.seed().map_or("none".to_string(), |s| s.to_string());
        let meta = format!(
            "# schema: {SCHEMA}\n# command: {}\n# seed: {seed}\n{CONFIG_PREFIX}{}\n",
            cmd.name(),
            serde_json::to_string(cmd)?
        );
        out.extend_from_slice(meta.as_bytes());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.into_inner()
            .map_err(|e| CliError::Csv(e.into_error().into()))
    }

    fn render_json(&self, cmd: &Command) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json_value()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "command": cmd.name(),
            "seed": cmd.seed(),
            "config": cmd,
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text.into_bytes())
    }
}

/// Recovers the run configuration embedded in an output file.
pub fn embedded_config(text: &str, path: &Path) -> Result<Command> {
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text)?;
        let config = doc
            .get("config")
            .cloned()
            .ok_or_else(|| CliError::MissingConfig(path.to_path_buf()))?;
        return Ok(serde_json::from_value(config)?);
    }
    let line = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .ok_or_else(|| CliError::MissingConfig(path.to_path_buf()))?;
    Ok(serde_json::from_str(line)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(std::iter::once("fbn-probe").chain(args.iter().copied()))
            .unwrap()
            .command
    }

    #[test]
    fn float_cells_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5] {
            let text = Cell::Float(x).csv_text();
            assert_eq!(text.parse::<f64>().unwrap(), x);
        }
        assert_eq!(Cell::Float(f64::NAN).csv_text(), "NaN");
        assert_eq!(Cell::Float(f64::INFINITY).json_value(), Value::Null);
    }

    #[test]
    fn config_survives_both_formats() {
        let cmd = parse(&["helstrom", "--gamma1", "1.2,1.3", "--lambda", "0.5"]);
        let mut table = Table::new(&["x"]);
        table.push(vec![Cell::Int(1)]);
        for format in [Format::Csv, Format::Json] {
            let text = String::from_utf8(table.render(&cmd, format).unwrap()).unwrap();
            let back = embedded_config(&text, Path::new("t")).unwrap();
            assert_eq!(back, cmd);
        }
    }

    #[test]
    fn output_path_is_not_part_of_config() {
        let a = parse(&["qfi-opt", "--out", "a.csv"]);
        let b = parse(&["qfi-opt", "--out", "b.csv"]);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
