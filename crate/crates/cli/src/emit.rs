//! Rendering of command results as JSON, CSV or an aligned text table.

use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[value(name = "table", alias = "pretty-table")]
    Table,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    Flag(bool),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(o: Option<T>) -> Self {
        o.map_or(Cell::Empty, Into::into)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {
        $(impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::Int(x as i64)
            }
        })*
    };
}
int_cell!(i32, i64, u32, usize);

/// Two cells, real and imaginary part.
pub fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Real(z.re), Cell::Real(z.im)]
}

/// Header pair `name.re`, `name.im`.
pub fn complex_headers(name: &str) -> [String; 2] {
    [format!("{name}.re"), format!("{name}.im")]
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// A command result. `table` is `None` for JSON-only output.
pub struct Emission {
    pub json: Value,
    pub table: Option<Table>,
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("this output is only available with --format json")]
    JsonOnly,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn render(format: Format, emission: &Emission) -> Result<String, RenderError> {
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(&emission.json)
            .expect("JSON values always serialize")
            + "\n");
    }
    let table = emission.table.as_ref().ok_or(RenderError::JsonOnly)?;
    Ok(match format {
        Format::Csv => render_csv(table)?,
        _ => render_table(table),
    })
}

fn csv_text(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        // Shortest round-trip form, with an exponent for very small or large values.
        Cell::Real(x) => format!("{x:?}"),
        Cell::Flag(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn render_csv(table: &Table) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers)?;
    for row in &table.rows {
        w.write_record(row.iter().map(csv_text))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn table_text(cell: &Cell) -> String {
    match cell {
        Cell::Real(x) if *x != 0.0 && x.abs() < 1e-4 => format!("{x:.2e}"),
        Cell::Real(x) => {
            let s = format!("{x:.6}");
            // Avoid "-0.000000".
            if s.trim_start_matches('-')
                .chars()
                .all(|c| c == '0' || c == '.')
            {
                format!("{:.6}", 0.0)
            } else {
                s
            }
        }
        Cell::Flag(true) => "PASS".into(),
        Cell::Flag(false) => "FAIL".into(),
        other => csv_text(other),
    }
}

fn render_table(table: &Table) -> String {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(table_text).collect())
        .collect();
    let widths: Vec<usize> = (0..table.headers.len())
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].chars().count())
                .chain([table.headers[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |parts: &[String]| {
        let padded: Vec<String> = parts
            .iter()
            .zip(&widths)
            .map(|(p, w)| format!("{p:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&table.headers);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out += &line(&rule);
    for r in &cells {
        out += &line(r);
    }
    out
}
