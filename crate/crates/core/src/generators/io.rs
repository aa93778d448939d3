//! Coloring files.
//!
//! JSON: `{"n1": 2, "n2": 2, "colors": [[1, 2], [3, 4]]}`.
//! CSV: `n1` lines of `n2` comma-separated non-negative integers, no header.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{materialize, ColoringSource, DEFAULT_CELL_CAP};
use crate::canonical::{ColorId, Grid};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Guesses from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::params(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Serialize)]
struct ColoringOut<'a> {
    n1: usize,
    n2: usize,
    colors: &'a [Vec<u64>],
}

#[derive(Deserialize)]
struct ColoringIn {
    n1: usize,
    n2: usize,
    colors: Vec<Vec<serde_json::Number>>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn color_value(n: &serde_json::Number, row: usize, col: usize) -> Result<ColorId> {
    if let Some(v) = n.as_u64() {
        return Ok(ColorId(v));
    }
    let what = if n.as_i64().is_some_and(|v| v < 0) || n.as_f64().is_some_and(|v| v < 0.0) {
        "negative color"
    } else {
        "color is not a 64-bit non-negative integer"
    };
    Err(Error::InvalidParams(format!("{what} {n} at row {row}, column {col}")))
}

pub fn parse_json(text: &str) -> Result<ColoringSource> {
    let raw: ColoringIn =
        serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    if raw.colors.len() != raw.n1 {
        return Err(Error::Dimension(format!(
            "declared n1 = {} but found {} rows",
            raw.n1,
            raw.colors.len()
        )));
    }
    let mut cells = Vec::with_capacity(raw.n1 * raw.n2);
    for (r, row) in raw.colors.iter().enumerate() {
        if row.len() != raw.n2 {
            return Err(Error::Dimension(format!(
                "row {r} has {} entries, declared n2 = {}",
                row.len(),
                raw.n2
            )));
        }
        for (c, n) in row.iter().enumerate() {
            cells.push(color_value(n, r, c)?);
        }
    }
    Ok(ColoringSource::dense(Grid::new(raw.n1, raw.n2, cells)?))
}

/// Parses CSV; `declared` optionally pins the expected dimensions.
pub fn parse_csv(text: &str, declared: Option<(usize, usize)>) -> Result<ColoringSource> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut width = None;
    let mut rows = 0;
    let mut cells = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(parse_error(
                    line,
                    record.len().min(w) + 1,
                    format!("ragged row: {} fields, expected {w}", record.len()),
                ))
            }
            _ => {}
        }
        for (i, field) in record.iter().enumerate() {
            let v: u64 = field.parse().map_err(|_| {
                if field.starts_with('-') {
                    parse_error(line, i + 1, format!("negative color `{field}`"))
                } else {
                    parse_error(line, i + 1, format!("`{field}` is not a non-negative integer"))
                }
            })?;
            cells.push(ColorId(v));
        }
        rows += 1;
    }
    let cols = width.unwrap_or(0);
    if let Some((n1, n2)) = declared {
        if (n1, n2) != (rows, cols) {
            return Err(Error::Dimension(format!("declared {n1}x{n2}, file is {rows}x{cols}")));
        }
    }
    Ok(ColoringSource::dense(Grid::new(rows, cols, cells)?))
}

pub fn to_json(src: &ColoringSource) -> Result<String> {
    let grid = materialize(src, DEFAULT_CELL_CAP)?;
    let rows = grid.to_rows();
    let out = ColoringOut {
        n1: grid.rows(),
        n2: grid.cols(),
        colors: &rows,
    };
    let mut s = serde_json::to_string(&out).expect("coloring serializes");
    s.push('\n');
    Ok(s)
}

pub fn to_csv(src: &ColoringSource) -> Result<String> {
    let grid = materialize(src, DEFAULT_CELL_CAP)?;
    let mut s = String::new();
    for r in 0..grid.rows() {
        let line: Vec<String> = grid.row(r).iter().map(|c| c.0.to_string()).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn load_coloring(path: &Path, format: Format) -> Result<ColoringSource> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    match format {
        Format::Json => parse_json(&text),
        Format::Csv => parse_csv(&text, None),
    }
}

pub fn save_coloring(src: &ColoringSource, path: &Path, format: Format) -> Result<()> {
    let text = match format {
        Format::Json => to_json(src)?,
        Format::Csv => to_csv(src)?,
    };
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
