//! Inter-column computational dependencies: declarative specs with integer
//! processing orders, and recomputation of derived columns in that order.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Cell, SeriesFrame};

/// The formula used to compute a derived column from its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormulaKind {
    /// First differences of a running total; element 0 keeps the total.
    NewFromTotal,
    /// Cumulative sum of a daily-update column.
    TotalFromNew,
    /// Trailing 7-day moving average (partial window at the head).
    Smoothed7,
    /// raw * scale / population, scale in {100, 1000, 1000000}.
    PerCapita { scale: f64 },
    /// Trailing 7-day mean of new_cases/new_tests over valid days.
    PositiveRate,
    /// Reciprocal of positive_rate where positive.
    TestsPerCase,
}

/// One derived column: target, formula, inputs, and processing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencySpec {
    pub target: String,
    #[serde(flatten)]
    pub kind: FormulaKind,
    pub inputs: Vec<String>,
    pub order: u32,
}

/// A set of dependency specs executed in ascending order (ties in list order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DependencyGraph {
    pub specs: Vec<DependencySpec>,
}

/// out[0] = total[0]; out[t] = total[t] - total[t-1].
pub fn compute_new_from_total(total: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(total.len());
    for (t, &v) in total.iter().enumerate() {
        out.push(if t == 0 { v } else { v - total[t - 1] });
    }
    out
}

/// out[t] = sum of new[0..=t].
pub fn compute_total_from_new(new: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    new.iter()
        .map(|&v| {
            acc += v;
            acc
        })
        .collect()
}

/// Trailing 7-day mean of case/test ratios, restricted to in-range days with
/// positive tests. Days with no valid term in the window become missing.
pub fn compute_positive_rate(new_cases: &[f64], new_tests: &[f64]) -> Vec<Cell> {
    debug_assert_eq!(new_cases.len(), new_tests.len());
    (0..new_cases.len())
        .map(|t| {
            let mut sum = 0.0;
            let mut n = 0usize;
            for i in 0..7 {
                if t >= i && new_tests[t - i] > 0.0 {
                    sum += new_cases[t - i] / new_tests[t - i];
                    n += 1;
                }
            }
            if n == 0 {
                None
            } else {
                Some(sum / n as f64)
            }
        })
        .collect()
}

/// 1 / positive_rate where positive_rate > 0, missing otherwise.
pub fn compute_tests_per_case(positive_rate: &[Cell]) -> Vec<Cell> {
    positive_rate
        .iter()
        .map(|v| match v {
            Some(r) if *r > 0.0 => Some(1.0 / r),
            _ => None,
        })
        .collect()
}

/// Trailing 7-day moving average; the first six entries use a partial window.
pub fn compute_smoothed7(raw: &[f64]) -> Vec<f64> {
    (0..raw.len())
        .map(|t| {
            let lo = t.saturating_sub(6);
            let w = &raw[lo..=t];
            w.iter().sum::<f64>() / w.len() as f64
        })
        .collect()
}

/// out[t] = raw[t] * scale / population.
pub fn compute_per_capita(raw: &[f64], population: f64, scale: f64) -> Result<Vec<f64>> {
    if !(population > 0.0) {
        return Err(Error::NonpositivePopulation);
    }
    Ok(raw.iter().map(|&v| v * scale / population).collect())
}

impl DependencyGraph {
    pub fn new(specs: Vec<DependencySpec>) -> DependencyGraph {
        DependencyGraph { specs }
    }

    /// Check targets are unique and orders induce a valid topological
    /// execution: every derived input has a strictly smaller order.
    pub fn validate(&self) -> Result<()> {
        let mut orders: IndexMap<&str, u32> = IndexMap::new();
        for spec in &self.specs {
            if orders.insert(spec.target.as_str(), spec.order).is_some() {
                return Err(Error::CyclicGraph(spec.target.clone()));
            }
        }
        for spec in &self.specs {
            for input in &spec.inputs {
                if let Some(&input_order) = orders.get(input.as_str()) {
                    if input_order >= spec.order {
                        return Err(Error::CyclicGraph(spec.target.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Specs sorted by (order, original position).
    pub fn execution_order(&self) -> Vec<&DependencySpec> {
        let mut indexed: Vec<(usize, &DependencySpec)> = self.specs.iter().enumerate().collect();
        indexed.sort_by_key(|(i, s)| (s.order, *i));
        indexed.into_iter().map(|(_, s)| s).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<DependencyGraph> {
        Ok(serde_json::from_str(s)?)
    }
}

fn spec(target: &str, kind: FormulaKind, inputs: &[&str], order: u32) -> DependencySpec {
    DependencySpec {
        target: target.to_string(),
        kind,
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
        order,
    }
}

/// The full dependency table for the OWID schema: the death-column subgraph
/// generalized to cases, tests, and vaccinations, plus the rate columns.
pub fn build_default_graph() -> DependencyGraph {
    use FormulaKind::*;
    let per_million = PerCapita { scale: 1e6 };
    let per_thousand = PerCapita { scale: 1e3 };
    let per_hundred = PerCapita { scale: 1e2 };
    DependencyGraph::new(vec![
        // order 1: daily updates derived from a cumulative source
        spec("new_people_vaccinated", NewFromTotal, &["people_vaccinated"], 1),
        // order 2: totals, smoothed, and first per-capita columns
        spec("total_cases", TotalFromNew, &["new_cases"], 2),
        spec("total_deaths", TotalFromNew, &["new_deaths"], 2),
        spec("total_tests", TotalFromNew, &["new_tests"], 2),
        spec("total_vaccinations", TotalFromNew, &["new_vaccinations"], 2),
        spec("new_cases_smoothed", Smoothed7, &["new_cases"], 2),
        spec("new_deaths_smoothed", Smoothed7, &["new_deaths"], 2),
        spec("new_tests_smoothed", Smoothed7, &["new_tests"], 2),
        spec("new_vaccinations_smoothed", Smoothed7, &["new_vaccinations"], 2),
        spec(
            "new_people_vaccinated_smoothed",
            Smoothed7,
            &["new_people_vaccinated"],
            2,
        ),
        spec("new_cases_per_million", per_million, &["new_cases"], 2),
        spec("new_deaths_per_million", per_million, &["new_deaths"], 2),
        // order 3: per-capita columns over derived inputs, and positive_rate
        spec("total_cases_per_million", per_million, &["total_cases"], 3),
        spec("total_deaths_per_million", per_million, &["total_deaths"], 3),
        spec(
            "new_cases_smoothed_per_million",
            per_million,
            &["new_cases_smoothed"],
            3,
        ),
        spec(
            "new_deaths_smoothed_per_million",
            per_million,
            &["new_deaths_smoothed"],
            3,
        ),
        spec(
            "new_vaccinations_smoothed_per_million",
            per_million,
            &["new_vaccinations_smoothed"],
            3,
        ),
        spec("total_tests_per_thousand", per_thousand, &["total_tests"], 3),
        spec("new_tests_per_thousand", per_thousand, &["new_tests"], 3),
        spec(
            "new_tests_smoothed_per_thousand",
            per_thousand,
            &["new_tests_smoothed"],
            3,
        ),
        spec(
            "total_vaccinations_per_hundred",
            per_hundred,
            &["total_vaccinations"],
            3,
        ),
        spec(
            "people_vaccinated_per_hundred",
            per_hundred,
            &["people_vaccinated"],
            3,
        ),
        spec(
            "people_fully_vaccinated_per_hundred",
            per_hundred,
            &["people_fully_vaccinated"],
            3,
        ),
        spec("total_boosters_per_hundred", per_hundred, &["total_boosters"], 3),
        spec(
            "new_people_vaccinated_smoothed_per_hundred",
            per_hundred,
            &["new_people_vaccinated_smoothed"],
            3,
        ),
        spec("positive_rate", PositiveRate, &["new_cases", "new_tests"], 3),
        // order 4: consumes the derived positive_rate
        spec("tests_per_case", TestsPerCase, &["positive_rate"], 4),
    ])
}

/// Evaluate one spec against the frame's current columns.
fn evaluate_spec(frame: &SeriesFrame, spec: &DependencySpec) -> Result<Vec<Cell>> {
    let dense = |name: &str| -> Result<Vec<f64>> {
        let col = frame
            .column(name)
            .ok_or_else(|| Error::MissingInput {
                target: spec.target.clone(),
                input: name.to_string(),
            })?;
        col.iter()
            .map(|c| {
                c.ok_or_else(|| Error::MissingInput {
                    target: spec.target.clone(),
                    input: name.to_string(),
                })
            })
            .collect()
    };
    let sparse = |name: &str| -> Result<Vec<Cell>> {
        frame
            .column(name)
            .map(|c| c.to_vec())
            .ok_or_else(|| Error::MissingInput {
                target: spec.target.clone(),
                input: name.to_string(),
            })
    };
    let as_cells = |v: Vec<f64>| v.into_iter().map(Some).collect::<Vec<Cell>>();
    match spec.kind {
        FormulaKind::NewFromTotal => Ok(as_cells(compute_new_from_total(&dense(&spec.inputs[0])?))),
        FormulaKind::TotalFromNew => Ok(as_cells(compute_total_from_new(&dense(&spec.inputs[0])?))),
        FormulaKind::Smoothed7 => Ok(as_cells(compute_smoothed7(&dense(&spec.inputs[0])?))),
        FormulaKind::PerCapita { scale } => Ok(as_cells(compute_per_capita(
            &dense(&spec.inputs[0])?,
            frame.population()?,
            scale,
        )?)),
        FormulaKind::PositiveRate => Ok(compute_positive_rate(
            &dense(&spec.inputs[0])?,
            &dense(&spec.inputs[1])?,
        )),
        FormulaKind::TestsPerCase => Ok(compute_tests_per_case(&sparse(&spec.inputs[0])?)),
    }
}

/// Overwrite every target column with its formula output, in ascending
/// processing order. Targets absent from the frame are created.
pub fn run_computation_processing(
    frame: &SeriesFrame,
    graph: &DependencyGraph,
) -> Result<SeriesFrame> {
    graph.validate()?;
    let mut out = frame.clone();
    for spec in graph.execution_order() {
        let values = evaluate_spec(&out, spec)?;
        out.columns.insert(spec.target.clone(), values);
    }
    Ok(out)
}
