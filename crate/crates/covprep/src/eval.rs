//! Evaluation metrics (RMSE, R-squared, RMSE variance), chronological
//! train/validation/test splitting, and per-model report assembly.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SeriesFrame;
use crate::model::cv::{CvTable, MODEL_FAMILIES, UNIMPLEMENTED_FAMILIES};
use crate::model::{default_grid, fit, kfold_grid_search, standardize_apply, standardize_fit, Matrix, ModelSpec};
use crate::select::FeatureMatrix;

pub const CV_FOLDS: usize = 5;

/// Chronological split fractions; must sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl Default for SplitSpec {
    fn default() -> SplitSpec {
        SplitSpec {
            train: 0.7,
            validation: 0.15,
            test: 0.15,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.validation, self.test];
        if parts.iter().any(|f| *f <= 0.0)
            || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(Error::InvalidConfig(format!(
                "split fractions must be positive and sum to 1, got {parts:?}"
            )));
        }
        Ok(())
    }
}

/// Contiguous (train, validation, test) index ranges with boundaries at
/// floor(n*f_train) and floor(n*(f_train+f_val)).
pub fn split_chronological(
    n: usize,
    spec: &SplitSpec,
) -> Result<(std::ops::Range<usize>, std::ops::Range<usize>, std::ops::Range<usize>)> {
    spec.validate()?;
    let a = (n as f64 * spec.train).floor() as usize;
    let b = (n as f64 * (spec.train + spec.validation)).floor() as usize;
    if a == 0 || b <= a || n <= b {
        return Err(Error::TooFewRows { got: n, need: 3 });
    }
    Ok((0..a, a..b, b..n))
}

pub fn rmse(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::LengthMismatch(y.len(), y_hat.len()));
    }
    if y.is_empty() {
        return Err(Error::Empty);
    }
    Ok((y
        .iter()
        .zip(y_hat)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / y.len() as f64)
        .sqrt())
}

pub fn r2(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::LengthMismatch(y.len(), y_hat.len()));
    }
    if y.len() < 2 {
        return Err(Error::TooFewSamples { got: y.len(), need: 2 });
    }
    let m = y.iter().sum::<f64>() / y.len() as f64;
    let sst: f64 = y.iter().map(|v| (v - m) * (v - m)).sum();
    if sst <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sse: f64 = y
        .iter()
        .zip(y_hat)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(1.0 - sse / sst)
}

/// Population variance (n = 3) of the three split RMSEs.
pub fn rmse_variance(train: f64, val: f64, test: f64) -> f64 {
    let m = (train + val + test) / 3.0;
    ((train - m) * (train - m) + (val - m) * (val - m) + (test - m) * (test - m)) / 3.0
}

/// One model family's row in the report. Metric fields are absent for
/// families without an implementation (SVR).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub pipeline: String,
    pub model: String,
    pub train_rmse: Option<f64>,
    pub val_rmse: Option<f64>,
    pub test_rmse: Option<f64>,
    /// None when the corresponding split target has zero variance.
    pub train_r2: Option<f64>,
    pub val_r2: Option<f64>,
    pub test_r2: Option<f64>,
    pub rmse_variance: Option<f64>,
    pub best_params: Option<ModelSpec>,
    /// Marks splits where R-squared was undefined.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_variance_target: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub pipeline: String,
    /// Ascending test RMSE; metric-free rows sort last.
    pub rows: Vec<ModelReport>,
    pub cv_tables: IndexMap<String, CvTable>,
}

impl EvalReport {
    /// Table-layout CSV: Pipeline | Model | Test RMSE | Test R2 | RMSE Variance.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pipeline,model,test_rmse,test_r2,rmse_variance\n");
        for row in &self.rows {
            let cell = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.pipeline,
                row.model,
                cell(row.test_rmse),
                cell(row.test_r2),
                cell(row.rmse_variance),
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn sort_rows(rows: &mut [ModelReport]) {
    rows.sort_by(|a, b| match (a.test_rmse, b.test_rmse) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

/// Tune, refit, and score every model family on a chronological split of the
/// given feature matrix. The scaler is fit on the training rows only and
/// applied to all splits; hyperparameters are chosen by k-fold CV on the
/// training rows only.
pub fn evaluate_pipeline(
    fm: &FeatureMatrix,
    split: &SplitSpec,
    pipeline_id: &str,
    seed: u64,
    grid_overrides: &IndexMap<String, Vec<ModelSpec>>,
) -> Result<EvalReport> {
    let n = fm.n_rows();
    let (tr, va, te) = split_chronological(n, split)?;
    let slice = |r: &std::ops::Range<usize>| -> (Matrix, Vec<f64>) {
        (
            fm.x[r.clone()].to_vec(),
            fm.y[r.clone()].to_vec(),
        )
    };
    let (train_x, train_y) = slice(&tr);
    let (val_x, val_y) = slice(&va);
    let (test_x, test_y) = slice(&te);

    let scaler = standardize_fit(&train_x)?;
    let train_z = standardize_apply(&train_x, &scaler);
    let val_z = standardize_apply(&val_x, &scaler);
    let test_z = standardize_apply(&test_x, &scaler);

    let mut rows = Vec::new();
    let mut cv_tables = IndexMap::new();
    for &family in MODEL_FAMILIES {
        let grid = grid_overrides
            .get(family)
            .cloned()
            .unwrap_or_else(|| default_grid(family, seed));
        let (best, table) = kfold_grid_search(&grid, &train_z, &train_y, CV_FOLDS)?;
        cv_tables.insert(family.to_string(), table);
        let model = fit(&best, &train_z, &train_y, &fm.names)?;

        let score = |x: &Matrix, y: &[f64]| -> Result<(f64, Option<f64>, bool)> {
            let pred = model.predict(x);
            let e = rmse(y, &pred)?;
            match r2(y, &pred) {
                Ok(v) => Ok((e, Some(v), false)),
                Err(Error::ZeroVariance) => Ok((e, None, true)),
                Err(other) => Err(other),
            }
        };
        let (train_rmse, train_r2, z1) = score(&train_z, &train_y)?;
        let (val_rmse, val_r2, z2) = score(&val_z, &val_y)?;
        let (test_rmse, test_r2, z3) = score(&test_z, &test_y)?;

        rows.push(ModelReport {
            pipeline: pipeline_id.to_string(),
            model: family.to_string(),
            train_rmse: Some(train_rmse),
            val_rmse: Some(val_rmse),
            test_rmse: Some(test_rmse),
            train_r2,
            val_r2,
            test_r2,
            rmse_variance: Some(rmse_variance(train_rmse, val_rmse, test_rmse)),
            best_params: Some(best),
            zero_variance_target: z1 || z2 || z3,
            note: None,
        });
    }
    for &family in UNIMPLEMENTED_FAMILIES {
        rows.push(ModelReport {
            pipeline: pipeline_id.to_string(),
            model: family.to_string(),
            train_rmse: None,
            val_rmse: None,
            test_rmse: None,
            train_r2: None,
            val_r2: None,
            test_r2: None,
            rmse_variance: None,
            best_params: None,
            zero_variance_target: false,
            note: Some("not implemented".to_string()),
        });
    }
    sort_rows(&mut rows);
    Ok(EvalReport {
        pipeline: pipeline_id.to_string(),
        rows,
        cv_tables,
    })
}

/// Per-column (date, original, processed) CSV for external plotting. Missing
/// cells serialize as empty fields.
pub fn series_export_csv(
    original: &SeriesFrame,
    processed: &SeriesFrame,
    column: &str,
) -> Result<String> {
    let orig = original
        .columns
        .get(column)
        .ok_or_else(|| Error::MissingHeader(column.to_string()))?;
    let proc_col = processed
        .columns
        .get(column)
        .ok_or_else(|| Error::MissingHeader(column.to_string()))?;
    let mut out = String::from("date,original,processed\n");
    for (i, date) in processed.dates.iter().enumerate() {
        let o = original
            .dates
            .iter()
            .position(|d| d == date)
            .and_then(|j| orig[j]);
        let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        out.push_str(&format!("{date},{},{}\n", fmt(o), fmt(proc_col[i])));
    }
    Ok(out)
}
