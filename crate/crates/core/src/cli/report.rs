use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::opmatrix::ResidualReport;

/// Decimal with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
}

fn text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => text(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(r.iter().map(Cell::json))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name.clone()));
        m.insert("rows".into(), Value::Array(rows));
        Value::Object(m)
    }

    fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv))?;
        }
        w.flush()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub max_abs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn from_report(name: &str, r: &ResidualReport) -> Self {
        Self {
            name: name.to_string(),
            max_abs: r.max_abs,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }

    /// A count-like check that passes only at zero deviation.
    pub fn exact(name: &str, deviation: f64) -> Self {
        Self {
            name: name.to_string(),
            max_abs: deviation,
            tolerance: 0.0,
            pass: deviation == 0.0,
        }
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name.clone()));
        m.insert("max_abs".into(), num(self.max_abs));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("pass".into(), Value::from(self.pass));
        Value::Object(m)
    }
}

/// Echoed parameters in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Echo(Map<String, Value>);

impl Echo {
    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.0.insert(key.into(), num(x));
        self
    }

    pub fn int(&mut self, key: &str, i: usize) -> &mut Self {
        self.0.insert(key.into(), Value::from(i));
        self
    }

    pub fn text(&mut self, key: &str, s: &str) -> &mut Self {
        self.0.insert(key.into(), Value::from(s));
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub params: Echo,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl RunReport {
    pub fn new(command: &str, params: Echo) -> Self {
        Self {
            command: command.to_string(),
            params,
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, r: &ResidualReport) {
        self.checks.push(Check::from_report(name, r));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("params".into(), Value::Object(self.params.0.clone()));
        m.insert(
            "checks".into(),
            Value::Array(self.checks.iter().map(Check::json).collect()),
        );
        let tables = if self.tables.is_empty() {
            Value::Null
        } else {
            Value::Array(self.tables.iter().map(Table::json).collect())
        };
        m.insert("tables".into(), tables);
        m.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Value::Object(m)
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}  max_abs = {}  tolerance = {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                text(c.max_abs),
                text(c.tolerance)
            ));
        }
        out.push_str(if self.pass() { "overall PASS\n" } else { "overall FAIL\n" });
        out
    }

    /// One file `<command>_<table>.csv` per table.
    pub fn write_csv(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        for t in &self.tables {
            t.write_csv(&dir.join(format!("{}_{}.csv", self.command, t.name)))?;
        }
        Ok(())
    }
}
