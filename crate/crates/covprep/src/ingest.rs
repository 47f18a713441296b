//! OWID-schema CSV ingestion: per-location frames, date-range filtering,
//! column classification and grouping.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{Days, NaiveDate};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::frame::{parse_cell, Cell, FrameMeta, SeriesFrame};

/// Column content class, decided over the whole series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnClass {
    /// All values missing.
    Empty,
    /// At least one value present and all present values equal.
    Constant,
    Variable,
}

/// Preprocessing group used by the custom pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnGroup {
    /// Weekly-reported update columns (new_cases, new_deaths).
    NewColumns,
    /// Columns without weekly patterns or computational dependencies.
    Independent,
    /// Everything else: constants and computationally dependent columns.
    Remaining,
}

/// Columns with weekly reporting patterns. Fixed membership, not inferred.
pub const NEW_COLUMNS: &[&str] = &["new_cases", "new_deaths"];

/// Columns treated as independent inputs. Fixed membership, not inferred.
pub const INDEPENDENT_COLUMNS: &[&str] = &[
    "new_tests",
    "new_vaccinations",
    "reproduction_rate",
    "people_vaccinated",
    "people_fully_vaccinated",
    "total_boosters",
    "stringency_index",
];

/// Categorical OWID columns, retained only in frame metadata.
const CATEGORICAL: &[&str] = &["iso_code", "location", "continent", "tests_units"];

/// Parse an OWID-schema CSV into one raw frame per location, keyed by
/// iso_code. Each frame spans its location's observed date range with missing
/// rows inserted for absent days; rows are sorted ascending by date.
pub fn parse_owid_csv(path: &Path) -> Result<BTreeMap<String, SeriesFrame>> {
    let bytes = std::fs::read(path)?;
    let digest = hex_digest(&bytes);
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let headers: Vec<String> = reader.headers()?.iter().map(|s| s.to_string()).collect();
    for required in ["iso_code", "location", "date", "population"] {
        if !headers.iter().any(|h| h == required) {
            return Err(Error::MissingHeader(required.to_string()));
        }
    }
    let idx_of = |name: &str| headers.iter().position(|h| h == name);
    let iso_i = idx_of("iso_code").unwrap();
    let loc_i = idx_of("location").unwrap();
    let date_i = idx_of("date").unwrap();
    let continent_i = idx_of("continent");
    let tests_units_i = idx_of("tests_units");

    let numeric_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| *h != "date" && !CATEGORICAL.contains(&h.as_str()))
        .map(|(i, h)| (i, h.clone()))
        .collect();

    struct Raw {
        location: String,
        continent: Option<String>,
        tests_units: Option<String>,
        rows: BTreeMap<NaiveDate, Vec<Cell>>,
    }
    let mut per_location: BTreeMap<String, Raw> = BTreeMap::new();

    let mut row_no = 0usize;
    for rec in reader.records() {
        let rec = rec?;
        let date_s = rec.get(date_i).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_s, "%Y-%m-%d").map_err(|_| {
            Error::MalformedDate {
                row: row_no,
                value: date_s.to_string(),
            }
        })?;
        let iso = rec.get(iso_i).unwrap_or("").to_string();
        let entry = per_location.entry(iso).or_insert_with(|| Raw {
            location: rec.get(loc_i).unwrap_or("").to_string(),
            continent: continent_i
                .and_then(|i| rec.get(i))
                .filter(|s| !s.is_empty())
                .map(|s| s.to_string()),
            tests_units: tests_units_i
                .and_then(|i| rec.get(i))
                .filter(|s| !s.is_empty())
                .map(|s| s.to_string()),
            rows: BTreeMap::new(),
        });
        let values: Vec<Cell> = numeric_cols
            .iter()
            .map(|(i, _)| parse_cell(rec.get(*i).unwrap_or("")))
            .collect();
        entry.rows.insert(date, values);
        row_no += 1;
    }
    if per_location.is_empty() {
        return Err(Error::EmptyFile);
    }

    let mut frames = BTreeMap::new();
    for (iso, raw) in per_location {
        let first = *raw.rows.keys().next().unwrap();
        let last = *raw.rows.keys().next_back().unwrap();
        let mut dates = Vec::new();
        let mut columns: IndexMap<String, Vec<Cell>> = numeric_cols
            .iter()
            .map(|(_, name)| (name.clone(), Vec::new()))
            .collect();
        let mut d = first;
        loop {
            dates.push(d);
            match raw.rows.get(&d) {
                Some(values) => {
                    for (j, (_, name)) in numeric_cols.iter().enumerate() {
                        columns.get_mut(name).unwrap().push(values[j]);
                    }
                }
                None => {
                    for (_, name) in &numeric_cols {
                        columns.get_mut(name).unwrap().push(None);
                    }
                }
            }
            if d == last {
                break;
            }
            d = d.checked_add_days(Days::new(1)).unwrap();
        }
        let population = columns
            .get("population")
            .and_then(|col| col.iter().flatten().next().copied())
            .filter(|p| *p > 0.0);
        let frame = SeriesFrame {
            dates,
            columns,
            meta: FrameMeta {
                iso_code: iso.clone(),
                location: raw.location,
                continent: raw.continent,
                tests_units: raw.tests_units,
                population,
                source_digest: digest.clone(),
            },
        };
        frame.validate()?;
        frames.insert(iso, frame);
    }
    Ok(frames)
}

/// Restrict one location's frame to `[start, end]`, inserting all-missing
/// rows for days absent from the source so the daily grid stays contiguous.
pub fn filter_location(
    frames: &BTreeMap<String, SeriesFrame>,
    iso_code: &str,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<SeriesFrame> {
    let src = frames
        .get(iso_code)
        .ok_or_else(|| Error::UnknownLocation(iso_code.to_string()))?;
    if start > end {
        return Err(Error::EmptyRange);
    }
    // Reject ranges that share no day with the source data.
    if end < src.dates[0] || start > *src.dates.last().unwrap() {
        return Err(Error::EmptyRange);
    }
    let mut dates = Vec::new();
    let mut columns: IndexMap<String, Vec<Cell>> = src
        .columns
        .keys()
        .map(|name| (name.clone(), Vec::new()))
        .collect();
    let mut d = start;
    loop {
        dates.push(d);
        let src_idx = if d >= src.dates[0] && d <= *src.dates.last().unwrap() {
            Some((d - src.dates[0]).num_days() as usize)
        } else {
            None
        };
        for (name, out) in columns.iter_mut() {
            out.push(src_idx.and_then(|i| src.columns[name][i]));
        }
        if d == end {
            break;
        }
        d = d.checked_add_days(Days::new(1)).unwrap();
    }
    let frame = SeriesFrame {
        dates,
        columns,
        meta: src.meta.clone(),
    };
    frame.validate()?;
    Ok(frame)
}

/// Classify each column as Empty, Constant, or Variable.
pub fn classify_columns(frame: &SeriesFrame) -> IndexMap<String, ColumnClass> {
    frame
        .columns
        .iter()
        .map(|(name, col)| {
            let mut present = col.iter().flatten();
            let class = match present.next() {
                None => ColumnClass::Empty,
                Some(first) => {
                    if present.all(|v| v == first) {
                        ColumnClass::Constant
                    } else {
                        ColumnClass::Variable
                    }
                }
            };
            (name.clone(), class)
        })
        .collect()
}

/// Assign every numeric column to exactly one preprocessing group.
pub fn group_columns(frame: &SeriesFrame) -> IndexMap<String, ColumnGroup> {
    frame
        .columns
        .keys()
        .map(|name| {
            let group = if NEW_COLUMNS.contains(&name.as_str()) {
                ColumnGroup::NewColumns
            } else if INDEPENDENT_COLUMNS.contains(&name.as_str()) {
                ColumnGroup::Independent
            } else {
                ColumnGroup::Remaining
            };
            (name.clone(), group)
        })
        .collect()
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "iso_code,continent,location,date,population,new_cases,total_cases";

    #[test]
    fn missing_header_is_an_error() {
        let f = write_csv("iso_code,location,date\nIND,India,2020-01-05\n");
        match parse_owid_csv(f.path()) {
            Err(Error::MissingHeader(h)) => assert_eq!(h, "population"),
            other => panic!("expected MissingHeader, got {other:?}"),
        }
    }

    #[test]
    fn malformed_date_is_an_error() {
        let f = write_csv(&format!("{HEADER}\nIND,Asia,India,05/01/2020,1e9,1,1\n"));
        assert!(matches!(
            parse_owid_csv(f.path()),
            Err(Error::MalformedDate { .. })
        ));
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = write_csv(&format!("{HEADER}\n"));
        assert!(matches!(parse_owid_csv(f.path()), Err(Error::EmptyFile)));
    }

    #[test]
    fn single_blank_row_yields_all_missing_frame() {
        let f = write_csv(&format!("{HEADER}\nIND,Asia,India,2020-01-05,,,\n"));
        let frames = parse_owid_csv(f.path()).unwrap();
        let frame = &frames["IND"];
        assert_eq!(frame.len(), 1);
        assert!(frame.columns.values().all(|c| c[0].is_none()));
        assert_eq!(frame.meta.population, None);
    }

    #[test]
    fn out_of_order_rows_are_sorted() {
        let f1 = write_csv(&format!(
            "{HEADER}\nIND,Asia,India,2020-01-07,1e9,3,6\nIND,Asia,India,2020-01-05,1e9,1,1\nIND,Asia,India,2020-01-06,1e9,2,3\n"
        ));
        let f2 = write_csv(&format!(
            "{HEADER}\nIND,Asia,India,2020-01-05,1e9,1,1\nIND,Asia,India,2020-01-06,1e9,2,3\nIND,Asia,India,2020-01-07,1e9,3,6\n"
        ));
        let a = parse_owid_csv(f1.path()).unwrap();
        let b = parse_owid_csv(f2.path()).unwrap();
        assert_eq!(a["IND"].dates, b["IND"].dates);
        assert_eq!(a["IND"].columns, b["IND"].columns);
    }

    #[test]
    fn interior_gaps_become_all_missing_rows() {
        let f = write_csv(&format!(
            "{HEADER}\nIND,Asia,India,2020-01-05,1e9,1,1\nIND,Asia,India,2020-01-09,1e9,2,3\n"
        ));
        let frames = parse_owid_csv(f.path()).unwrap();
        let frame = &frames["IND"];
        assert_eq!(frame.len(), 5);
        for i in 1..4 {
            assert!(frame.columns["new_cases"][i].is_none());
        }
        frame.validate().unwrap();
    }

    #[test]
    fn filter_inserts_missing_days_and_checks_errors() {
        let f = write_csv(&format!(
            "{HEADER}\nIND,Asia,India,2020-01-05,1e9,1,1\nIND,Asia,India,2020-01-06,1e9,2,3\n"
        ));
        let frames = parse_owid_csv(f.path()).unwrap();
        let d = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap();
        let out = filter_location(&frames, "IND", d("2020-01-04"), d("2020-01-08")).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.columns["new_cases"][0].is_none());
        assert_eq!(out.columns["new_cases"][1], Some(1.0));
        assert!(out.columns["new_cases"][4].is_none());

        let one = filter_location(&frames, "IND", d("2020-01-05"), d("2020-01-05")).unwrap();
        assert_eq!(one.len(), 1);

        assert!(matches!(
            filter_location(&frames, "XXX", d("2020-01-05"), d("2020-01-05")),
            Err(Error::UnknownLocation(_))
        ));
        assert!(matches!(
            filter_location(&frames, "IND", d("2021-01-01"), d("2021-01-02")),
            Err(Error::EmptyRange)
        ));
    }

    #[test]
    fn classification_matches_definitions() {
        let f = write_csv(&format!(
            "{HEADER}\nIND,Asia,India,2020-01-05,,1,\nIND,Asia,India,2020-01-06,1.38e9,2,\nIND,Asia,India,2020-01-07,1.38e9,3,\n"
        ));
        let frames = parse_owid_csv(f.path()).unwrap();
        let classes = classify_columns(&frames["IND"]);
        assert_eq!(classes["total_cases"], ColumnClass::Empty);
        assert_eq!(classes["population"], ColumnClass::Constant);
        assert_eq!(classes["new_cases"], ColumnClass::Variable);
    }

    #[test]
    fn group_assignment_is_a_partition() {
        let f = write_csv(
            "iso_code,location,date,population,new_deaths,stringency_index,total_deaths_per_million\nIND,India,2020-01-05,1e9,1,50,0.1\n",
        );
        let frames = parse_owid_csv(f.path()).unwrap();
        let groups = group_columns(&frames["IND"]);
        assert_eq!(groups["new_deaths"], ColumnGroup::NewColumns);
        assert_eq!(groups["stringency_index"], ColumnGroup::Independent);
        assert_eq!(groups["total_deaths_per_million"], ColumnGroup::Remaining);
        assert_eq!(groups.len(), frames["IND"].columns.len());
    }
}
