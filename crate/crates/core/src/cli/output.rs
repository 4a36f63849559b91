//! Tabular results and their CSV/JSON serialisation.

use std::io::Write;

use serde_json::{Map, Value};

use super::config::OutputFormat;

/// Header rows of every command.
pub mod headers {
    pub const EXPONENTS: &[&str] = &["n", "lambda_plus", "lambda_minus", "gap"];
    pub const FAMILY: &[&str] = &[
        "alpha",
        "exact_stable",
        "side",
        "verdict",
        "fitted_exponent",
    ];
    pub const SOLVE: &[&str] = &["r", "u", "u_r"];
    pub const STABILITY: &[&str] = &["kind", "r1", "r2", "lambda_min"];
    pub const CLASSIFY: &[&str] = &[
        "n",
        "verdict",
        "fitted_exponent",
        "u_infinity",
        "m_fit",
        "r0_fit",
        "log_growth",
        "vacuous_bound",
        "side",
    ];
    pub const SWEEP: &[&str] = &[
        "n",
        "alpha",
        "exact_stable",
        "side",
        "verdict",
        "fitted_exponent",
    ];
    pub const VERIFY: &[&str] = &["id", "name", "passed", "detail"];
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    pub fn real(x: Option<f64>) -> Cell {
        x.map_or(Cell::Missing, Cell::Real)
    }

    pub fn text(s: impl ToString) -> Cell {
        Cell::Text(s.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => Value::from(*x),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Human-readable remarks for stderr; never part of the serialised table.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(headers: &'static [&'static str]) -> Self {
        Table {
            headers,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> std::io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                out.write_all(b"\n")
            }
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_reals() {
        let mut t = Table::new(headers::VERIFY);
        t.push(vec![
            Cell::Int(1),
            Cell::text("a, b"),
            Cell::Bool(true),
            Cell::Real(0.1),
        ]);
        t.push(vec![
            Cell::Int(2),
            Cell::text("say \"hi\""),
            Cell::Bool(false),
            Cell::Missing,
        ]);
        let text = t.render(OutputFormat::Csv);
        assert_eq!(
            text,
            "id,name,passed,detail\n1,\"a, b\",true,0.1\n2,\"say \"\"hi\"\"\",false,\n"
        );
    }

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, -1.914213562373095, 1e-300, 6.02e23, 0.0] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn json_rows_are_objects_in_header_order() {
        let mut t = Table::new(headers::EXPONENTS);
        t.push(vec![
            Cell::Int(10),
            Cell::Real(0.0),
            Cell::Real(-6.0),
            Cell::Real(f64::NAN),
        ]);
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(
            text,
            r#"[{"n":10,"lambda_plus":0.0,"lambda_minus":-6.0,"gap":null}]"#
        );
    }
}
