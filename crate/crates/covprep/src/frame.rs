//! `SeriesFrame`: a date-indexed numeric table with explicit missing markers.
//! This is the single data currency passed between pipeline stages.

use std::io::Write;
use std::path::Path;

use chrono::{Days, NaiveDate};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A numeric cell; `None` marks a missing observation.
pub type Cell = Option<f64>;

/// Frame-level metadata carried alongside the numeric columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMeta {
    pub iso_code: String,
    pub location: String,
    pub continent: Option<String>,
    pub tests_units: Option<String>,
    /// First non-missing value of the `population` column, frozen as a scalar.
    pub population: Option<f64>,
    /// Hex digest of the source file bytes.
    pub source_digest: String,
}

/// Date-indexed numeric table. Dates are daily and contiguous; every column
/// vector has the same length as the date index.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFrame {
    pub dates: Vec<NaiveDate>,
    pub columns: IndexMap<String, Vec<Cell>>,
    pub meta: FrameMeta,
}

impl SeriesFrame {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[Cell]> {
        self.columns.get(name).map(|v| v.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(|s| s.as_str())
    }

    /// Population scalar, required by per-capita computations.
    pub fn population(&self) -> Result<f64> {
        match self.meta.population {
            Some(p) if p > 0.0 => Ok(p),
            _ => Err(Error::NonpositivePopulation),
        }
    }

    /// Check the structural invariants: contiguous daily dates, equal column
    /// lengths, positive population when present.
    pub fn validate(&self) -> Result<()> {
        for w in self.dates.windows(2) {
            if w[0].checked_add_days(Days::new(1)) != Some(w[1]) {
                return Err(Error::InvalidConfig(format!(
                    "dates not contiguous at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        for (name, col) in &self.columns {
            if col.len() != self.dates.len() {
                return Err(Error::InvalidConfig(format!(
                    "column `{name}` has length {} but frame has {} dates",
                    col.len(),
                    self.dates.len()
                )));
            }
        }
        if let Some(p) = self.meta.population {
            if !(p > 0.0) {
                return Err(Error::NonpositivePopulation);
            }
        }
        Ok(())
    }

    /// Serialize to RFC-4180 CSV: `date` column first, then the numeric
    /// columns in frame order. Missing cells become literal empty fields.
    /// Values use the shortest round-trip decimal form, so re-parsing yields
    /// bitwise-equal numbers.
    pub fn to_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["date".to_string()];
        header.extend(self.columns.keys().cloned());
        w.write_record(&header)?;
        for (i, d) in self.dates.iter().enumerate() {
            let mut rec = vec![d.format("%Y-%m-%d").to_string()];
            for col in self.columns.values() {
                rec.push(match col[i] {
                    Some(v) => format_cell(v),
                    None => String::new(),
                });
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.to_csv(f)
    }

    /// Re-parse a frame written by [`SeriesFrame::to_csv`]. Metadata is not
    /// stored in the CSV and must be supplied by the caller.
    pub fn from_csv<R: std::io::Read>(input: R, meta: FrameMeta) -> Result<SeriesFrame> {
        let mut r = csv::Reader::from_reader(input);
        let headers: Vec<String> = r.headers()?.iter().map(|s| s.to_string()).collect();
        if headers.first().map(|s| s.as_str()) != Some("date") {
            return Err(Error::MissingHeader("date".into()));
        }
        let mut dates = Vec::new();
        let mut columns: IndexMap<String, Vec<Cell>> = headers[1..]
            .iter()
            .map(|h| (h.clone(), Vec::new()))
            .collect();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let d = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d").map_err(|_| {
                Error::MalformedDate {
                    row,
                    value: rec[0].to_string(),
                }
            })?;
            dates.push(d);
            for (j, h) in headers[1..].iter().enumerate() {
                let cell = rec.get(j + 1).unwrap_or("");
                columns.get_mut(h).unwrap().push(parse_cell(cell));
            }
        }
        if dates.is_empty() {
            return Err(Error::EmptyFile);
        }
        Ok(SeriesFrame {
            dates,
            columns,
            meta,
        })
    }
}

/// Shortest decimal form that parses back to the same f64.
pub fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

/// Numeric parsing: integers, decimals, scientific notation. Anything else
/// (including the empty string) is missing.
pub fn parse_cell(s: &str) -> Cell {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn empty_meta() -> FrameMeta {
    FrameMeta {
        iso_code: String::new(),
        location: String::new(),
        continent: None,
        tests_units: None,
        population: None,
        source_digest: String::new(),
    }
}
