use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One CSV cell.
pub(crate) enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

pub(crate) struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write(&self, format: Format, command: &str, config: &impl Serialize, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                writeln!(out, "# config: {}", envelope_config(command, config))?;
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::render).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj = self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json()));
                        Value::Object(obj.collect())
                    })
                    .collect();
                write_json(command, config, json!({ "rows": rows }), out)?;
            }
        }
        Ok(())
    }
}

fn envelope_config(command: &str, config: &impl Serialize) -> Value {
    json!({ "command": command, "args": config })
}

/// `{"config": …, "result": …}` on one pretty-printed document.
pub(crate) fn write_json(command: &str, config: &impl Serialize, result: Value, out: &mut dyn Write) -> CliResult<()> {
    let doc = json!({ "config": envelope_config(command, config), "result": result });
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    writeln!(out, "{text}")?;
    Ok(())
}
