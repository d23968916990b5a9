//! Tables and their CSV / JSON encodings.

use std::io::Write;

use logcrystal_core::spectrum::LevelIndex;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Level(LevelIndex),
    /// No value, e.g. the neighbour gap of the lowest level.
    Missing,
}

impl Cell {
    /// 17 significant digits, enough to round-trip any `f64`.
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Level(m) => m.to_string(),
            Cell::Missing => String::new(),
        }
    }

    /// Non-finite floats become `null`.
    fn json(&self) -> Value {
        match self {
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Missing => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Level(m) => json!(m.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Summary values written after the rows.
    pub footer: Option<Value>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            footer: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(
        &self,
        out: &mut dyn Write,
        command: &str,
        config: &RunConfig,
        format: Format,
    ) -> std::io::Result<()> {
        let config_json = serde_json::to_value(config).expect("config serialises");
        let generator = format!("logcrystal {}", env!("CARGO_PKG_VERSION"));
        match format {
            Format::Csv => {
                writeln!(out, "# {generator}")?;
                writeln!(out, "# command: {command}")?;
                writeln!(out, "# config: {config_json}")?;
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                if let Some(footer) = &self.footer {
                    writeln!(out, "# footer: {footer}")?;
                }
            }
            Format::Json => {
                let rows: Vec<Vec<Value>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::json).collect())
                    .collect();
                let doc = json!({
                    "generator": generator,
                    "command": command,
                    "config": config_json,
                    "columns": self.columns,
                    "rows": rows,
                    "footer": self.footer.clone().unwrap_or(Value::Null),
                });
                writeln!(out, "{doc}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(table: &Table, format: Format) -> String {
        let mut buf = Vec::new();
        table
            .write(&mut buf, "test", &RunConfig::default(), format)
            .unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_round_trips_floats() {
        let mut t = Table::new(vec!["x", "m", "flag", "gap"]);
        let x = 0.1 + 0.2;
        t.push(vec![
            Cell::Float(x),
            Cell::Level(LevelIndex::from_twice(-3)),
            Cell::Bool(true),
            Cell::Missing,
        ]);
        let text = render(&t, Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# logcrystal "));
        assert!(lines[2].starts_with("# config: {"));
        assert_eq!(lines[3], "x,m,flag,gap");
        let cells: Vec<&str> = lines[4].split(',').collect();
        assert_eq!(cells[0].parse::<f64>().unwrap(), x);
        assert_eq!(cells[1], "-3/2");
        assert_eq!(cells[3], "");
    }

    #[test]
    fn json_document() {
        let mut t = Table::new(vec!["t", "w"]);
        t.push(vec![Cell::Float(1.5), Cell::Float(f64::INFINITY)]);
        t.footer = Some(json!({"period": 2.0}));
        let doc: Value = serde_json::from_str(&render(&t, Format::Json)).unwrap();
        assert_eq!(doc["columns"], json!(["t", "w"]));
        assert_eq!(doc["rows"][0], json!([1.5, null]));
        assert_eq!(doc["footer"]["period"], json!(2.0));
        assert_eq!(doc["config"]["model"]["n"], json!(440));
    }
}
