use serde_json::{json, Value};

use super::config::Format;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.replace([',', '\n', '\r'], ";"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(format_float(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        if s.contains('e') || s == "NaN" || s == "inf" || s == "-inf" {
            if let Ok(x) = s.parse::<f64>() {
                return Cell::Num(x);
            }
        }
        Cell::Text(s.to_string())
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

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits, which round-trips every double.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// One output file: header comments, columns, rows, and trailing analysis
/// records (fits, classifications) as JSON values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub analysis: Vec<Value>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(&format!("# {h}\n"));
        }
        out.push_str(&format!("# columns: {}\n", self.columns.join(",")));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for a in &self.analysis {
            out.push_str(&format!("# analysis: {a}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let v = json!({
            "header": self.header,
            "columns": self.columns,
            "rows": rows,
            "analysis": self.analysis,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("table serialises");
        s.push('\n');
        s
    }

    /// Reads back a file written by [`Table::to_csv`].
    pub fn parse_csv(text: &str) -> Result<Table> {
        let mut t = Table::default();
        let mut have_columns = false;
        for line in text.lines() {
            if let Some(c) = line.strip_prefix("# ") {
                if let Some(a) = c.strip_prefix("analysis: ") {
                    t.analysis.push(serde_json::from_str(a).map_err(|e| Error::Config(format!("bad analysis line: {e}")))?);
                } else if !c.starts_with("columns: ") {
                    t.header.push(c.to_string());
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if !have_columns {
                t.columns = fields.iter().map(|s| s.to_string()).collect();
                have_columns = true;
                continue;
            }
            if fields.len() != t.columns.len() {
                return Err(Error::Config(format!("row has {} fields, expected {}", fields.len(), t.columns.len())));
            }
            t.rows.push(fields.into_iter().map(Cell::parse).collect());
        }
        if !have_columns {
            return Err(Error::Config("no column line".into()));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "value", "status"]);
        t.header.push("xyquench 0.1.0".into());
        t.push(vec![3usize.into(), 0.5.into(), "ok".into()]);
        t.analysis.push(json!({"fit": 1}));
        let s = t.to_csv();
        assert_eq!(
            s,
            "# xyquench 0.1.0\n# columns: n,value,status\nn,value,status\n3,5.0000000000000000e-1,ok\n# analysis: {\"fit\":1}\n"
        );
        assert_eq!(Table::parse_csv(&s).unwrap().to_csv(), s);
    }

    #[test]
    fn text_cannot_break_columns() {
        assert_eq!(Cell::from("a,b\nc").csv(), "a;b;c");
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_float(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
