//! Output tables. Every campaign produces one table with a fixed column
//! list; the CSV column order and the JSON field names are part of the
//! output contract and are documented in the README.

use std::io::Write;

use sdioph_core::{Rational, Result};

/// Floats are rendered with twelve significant digits in scientific
/// notation, identically in CSV and JSON.
pub fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// A number that is exact when the arithmetic allowed it and a float
/// otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn cell(&self) -> Cell {
        match self {
            Scalar::Exact(r) => Cell::Rat(r.clone()),
            Scalar::Approx(x) => Cell::Float(*x),
        }
    }
}

/// One table entry. Rationals render as "a/b" strings, booleans as
/// true/false, absent values as the empty CSV field and JSON null.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Rat(Rational),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(x) => sig12(*x),
            Cell::Rat(r) => r.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(n) => serde_json::Value::from(n),
                Err(_) => serde_json::Value::String(v.to_string()),
            },
            Cell::Float(x) => serde_json::Value::String(sig12(*x)),
            Cell::Rat(r) => serde_json::Value::String(r.to_string()),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Bool(b) => serde_json::Value::Bool(*b),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

/// A finished campaign: the table plus the pass verdict. `violation` is
/// set when a checked inequality failed, which maps to exit code 2.
#[derive(Clone, Debug)]
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub violation: bool,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new(kind: &'static str, columns: Vec<&'static str>) -> Self {
        Table {
            kind,
            columns,
            rows: Vec::new(),
            violation: false,
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)
            .map_err(|e| sdioph_core::Error::Parse(e.to_string()))?;
        for row in &self.rows {
            let rec: Vec<String> = row.iter().map(Cell::csv).collect();
            w.write_record(&rec)
                .map_err(|e| sdioph_core::Error::Parse(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| sdioph_core::Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Single JSON document; object keys come out in lexicographic
    /// order, so the field set rather than the order is the contract.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert((*name).to_string(), cell.json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut top = serde_json::Map::new();
        top.insert("kind".into(), serde_json::Value::String(self.kind.into()));
        top.insert("rows".into(), serde_json::Value::Array(rows));
        let mut out = serde_json::Value::Object(top).to_string();
        out.push('\n');
        out
    }

    pub fn write_to(&self, out: &mut dyn Write, json: bool) -> Result<()> {
        let text = if json { self.to_json() } else { self.to_csv()? };
        out.write_all(text.as_bytes())
            .map_err(|e| sdioph_core::Error::Parse(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(sig12(0.4375), "4.37500000000e-1");
        assert_eq!(sig12(1.0), "1.00000000000e0");
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(-12345.678), "-1.23456780000e4");
    }

    #[test]
    fn csv_and_json_round_trip_the_same_row() {
        let mut t = Table::new("demo", vec!["n", "value", "ok", "note"]);
        t.push(vec![
            Cell::Int(3),
            Cell::Rat(Rational::new(1.into(), 8.into())),
            Cell::Bool(true),
            Cell::Empty,
        ]);
        assert_eq!(t.to_csv().unwrap(), "n,value,ok,note\n3,1/8,true,\n");
        assert_eq!(
            t.to_json(),
            "{\"kind\":\"demo\",\"rows\":[{\"n\":3,\"note\":null,\"ok\":true,\"value\":\"1/8\"}]}\n"
        );
    }
}
