use std::io::Write;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::CliError;

/// One output cell. `Missing` marks "no qualifying n" (`NONE` in CSV);
/// `Empty` marks a value that does not apply.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(u64),
    Big(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
    Empty,
}

impl Cell {
    pub fn opt_int(v: Option<u64>) -> Cell {
        v.map_or(Cell::Missing, Cell::Int)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Missing => "NONE".into(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Big(s) | Cell::Text(s) => Value::from(s.as_str()),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::from(*v),
            Cell::Missing | Cell::Empty => Value::Null,
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A command's result: a table, optionally with a richer JSON form.
pub struct Output {
    pub table: Table,
    pub json: Option<Value>,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Output { table, json: None }
    }
}

pub fn write(out: &Output, format: Format, w: impl Write) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(&out.table.header)?;
            for row in &out.table.rows {
                csv.write_record(row.iter().map(Cell::csv))?;
            }
            csv.flush()?;
        }
        Format::Json => {
            let value = out.json.clone().unwrap_or_else(|| out.table.to_json());
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, &value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}
