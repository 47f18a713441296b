//! End-to-end orchestration of the standard and custom preprocessing
//! pipelines: configuration, stage sequencing, and artifact emission.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::derive::{build_default_graph, run_computation_processing, DependencyGraph};
use crate::error::{Error, Result};
use crate::eval::{evaluate_pipeline, split_chronological, EvalReport, SplitSpec};
use crate::frame::{Cell, SeriesFrame};
use crate::impute::{
    linear_extrapolate, linear_interpolate, weekly_pattern_impute, zero_fill, ExtrapolationMode,
};
use crate::ingest::{
    classify_columns, filter_location, group_columns, parse_owid_csv, ColumnClass, ColumnGroup,
};
use crate::model::ModelSpec;
use crate::outlier::{
    global_zscore_outliers, replace_by_interpolation, rolling_zscore_outliers, winsorize_local,
    DetectionMethod, OutlierReport, Replacement,
};
use crate::rng::fork_seed;
use crate::select::{iterative_feature_selection, FeatureMatrix, SelectionTrace};
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    Standard,
    Custom,
    #[default]
    Compare,
}

impl std::str::FromStr for PipelineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<PipelineKind> {
        match s {
            "standard" => Ok(PipelineKind::Standard),
            "custom" => Ok(PipelineKind::Custom),
            "compare" => Ok(PipelineKind::Compare),
            other => Err(Error::InvalidConfig(format!(
                "unknown pipeline `{other}` (expected standard | custom | compare)"
            ))),
        }
    }
}

fn default_corr_th() -> f64 {
    0.8
}
fn default_vif_th() -> f64 {
    10.0
}
fn default_z_th() -> f64 {
    2.0
}
fn default_window() -> usize {
    30
}
fn default_target() -> String {
    "new_deaths".to_string()
}

/// Flat, file-loadable run configuration. CLI flags override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub location: String,
    #[serde(default)]
    pub start: Option<NaiveDate>,
    #[serde(default)]
    pub end: Option<NaiveDate>,
    #[serde(default)]
    pub pipeline: PipelineKind,
    #[serde(default = "default_target")]
    pub target: String,
    #[serde(default = "default_corr_th")]
    pub corr_th: f64,
    #[serde(default = "default_vif_th")]
    pub vif_th: f64,
    #[serde(default = "default_z_th")]
    pub z_th: f64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default)]
    pub split: SplitSpec,
    #[serde(default)]
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default)]
    pub extrapolation: ExtrapolationMode,
    /// Per-family hyperparameter grid overrides; families absent here use the
    /// built-in default grids.
    #[serde(default)]
    pub grid_overrides: IndexMap<String, Vec<ModelSpec>>,
    /// Overrides the per-pipeline default replacement (standard:
    /// interpolation, custom: winsorize).
    #[serde(default)]
    pub outlier_replacement: Option<Replacement>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: PipelineConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.corr_th <= 0.0 || self.vif_th <= 0.0 || self.z_th <= 0.0 {
            return Err(Error::InvalidConfig(
                "thresholds must be positive".to_string(),
            ));
        }
        if self.window < 3 {
            return Err(Error::InvalidConfig(format!(
                "window must be at least 3, got {}",
                self.window
            )));
        }
        self.split.validate()?;
        if let (Some(s), Some(e)) = (self.start, self.end) {
            if s > e {
                return Err(Error::InvalidConfig(format!(
                    "start {s} is after end {e}"
                )));
            }
        }
        Ok(())
    }
}

/// Everything one pipeline run produces, already written to `out_dir`.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub pipeline: String,
    pub report: EvalReport,
    pub trace: SelectionTrace,
    pub outliers: Vec<OutlierReport>,
    pub processed: SeriesFrame,
    pub selected_features: Vec<String>,
    pub out_dir: PathBuf,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_stage(name))
}

fn load_frame(cfg: &PipelineConfig) -> Result<SeriesFrame> {
    let frames = parse_owid_csv(&cfg.input)?;
    let base = frames
        .get(&cfg.location)
        .ok_or_else(|| Error::UnknownLocation(cfg.location.clone()))?;
    let start = cfg.start.unwrap_or_else(|| base.dates[0]);
    let end = cfg.end.unwrap_or_else(|| *base.dates.last().unwrap());
    filter_location(&frames, &cfg.location, start, end)
}

/// Variable columns of the raw frame, in frame order.
fn variable_columns(frame: &SeriesFrame) -> Vec<String> {
    classify_columns(frame)
        .into_iter()
        .filter(|(_, c)| *c == ColumnClass::Variable)
        .map(|(n, _)| n)
        .collect()
}

fn impute_column(col: &[Cell], mode: ExtrapolationMode) -> Vec<Cell> {
    zero_fill(&linear_extrapolate(&linear_interpolate(col), mode))
}

/// Clamp globally flagged points to mean +/- z_th * std, with the statistics
/// computed excluding all flagged points.
fn winsorize_global(series: &[Cell], indices: &[usize], z_th: f64) -> Vec<Cell> {
    let flagged: std::collections::HashSet<usize> = indices.iter().copied().collect();
    let surviving: Vec<f64> = series
        .iter()
        .enumerate()
        .filter(|(i, _)| !flagged.contains(i))
        .filter_map(|(_, v)| *v)
        .collect();
    let mut out = series.to_vec();
    if surviving.len() < 2 {
        return out;
    }
    let m = mean(&surviving);
    let s = std_dev(&surviving);
    for &i in indices {
        if let Some(x) = series[i] {
            out[i] = Some(x.clamp(m - z_th * s, m + z_th * s));
        }
    }
    out
}

/// Dense feature matrix over the named columns; errors if any cell is still
/// missing after preprocessing.
fn feature_matrix(
    frame: &SeriesFrame,
    features: &[String],
    target: &str,
) -> Result<FeatureMatrix> {
    let dense = |name: &str| -> Result<Vec<f64>> {
        frame
            .column(name)
            .ok_or_else(|| Error::MissingHeader(name.to_string()))?
            .iter()
            .map(|c| {
                c.ok_or_else(|| Error::MissingInput {
                    target: "feature matrix".to_string(),
                    input: name.to_string(),
                })
            })
            .collect()
    };
    let y = dense(target)?;
    let mut cols = Vec::with_capacity(features.len());
    for name in features {
        cols.push(dense(name)?);
    }
    let n = y.len();
    let x = (0..n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    FeatureMatrix::new(features.to_vec(), x, y)
}

fn write_artifacts(
    cfg: &PipelineConfig,
    out_dir: &Path,
    report: &EvalReport,
    trace: &SelectionTrace,
    outliers: &[OutlierReport],
    processed: &SeriesFrame,
    graph: Option<&DependencyGraph>,
) -> Result<()> {
    std::fs::create_dir_all(out_dir.join("outliers"))?;
    std::fs::write(out_dir.join("report.csv"), report.to_csv())?;
    std::fs::write(out_dir.join("report.json"), report.to_json()?)?;
    std::fs::write(
        out_dir.join("selection_trace.json"),
        serde_json::to_string_pretty(trace)?,
    )?;
    for rep in outliers {
        if rep.indices.is_empty() {
            continue;
        }
        std::fs::write(
            out_dir.join("outliers").join(format!("{}.json", rep.column)),
            serde_json::to_string_pretty(rep)?,
        )?;
    }
    processed.write_csv(&out_dir.join("processed.csv"))?;
    if let Some(g) = graph {
        std::fs::write(out_dir.join("graph.json"), g.to_json()?)?;
    }
    std::fs::write(
        out_dir.join("config.json"),
        serde_json::to_string_pretty(cfg)?,
    )?;
    Ok(())
}

fn check_target(features: &[String], target: &str) -> Result<()> {
    if features.iter().any(|f| f == target) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "target `{target}` is not a variable column of the input"
        )))
    }
}

/// Standard pipeline: impute everything, repair global outliers, select
/// features on the full series, then split / standardize / evaluate.
pub fn run_standard(cfg: &PipelineConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let raw = stage("ingest", load_frame(cfg))?;
    let variable = variable_columns(&raw);
    stage("ingest", check_target(&variable, &cfg.target))?;

    let mut frame = raw.clone();
    for name in &variable {
        let col = impute_column(&frame.columns[name], cfg.extrapolation);
        frame.columns.insert(name.clone(), col);
    }

    let replacement = cfg.outlier_replacement.unwrap_or(Replacement::Interpolation);
    let mut outliers = Vec::new();
    for name in &variable {
        let col = frame.columns[name].clone();
        let indices = global_zscore_outliers(&col, cfg.z_th);
        let repaired = match replacement {
            Replacement::Interpolation => replace_by_interpolation(&col, &indices),
            Replacement::Winsorize => winsorize_global(&col, &indices, cfg.z_th),
        };
        frame.columns.insert(name.clone(), repaired);
        outliers.push(OutlierReport {
            column: name.clone(),
            method: DetectionMethod::Global,
            window: None,
            threshold: cfg.z_th,
            indices,
            replaced_with: replacement,
        });
    }

    let features: Vec<String> = variable.iter().filter(|n| **n != cfg.target).cloned().collect();
    let fm = stage("select", feature_matrix(&frame, &features, &cfg.target))?;
    let (selected, mut trace) = stage(
        "select",
        iterative_feature_selection(&fm, cfg.vif_th, cfg.corr_th, fork_seed(cfg.seed, "select")),
    )?;
    trace.metadata.insert("pipeline".into(), "standard".into());
    trace.metadata.insert("selection_stage".into(), "pre_split".into());

    let report = stage(
        "evaluate",
        evaluate_pipeline(
            &fm.retain(&selected),
            &cfg.split,
            "standard",
            fork_seed(cfg.seed, "eval"),
            &cfg.grid_overrides,
        ),
    )?;

    stage(
        "artifacts",
        write_artifacts(cfg, &cfg.out, &report, &trace, &outliers, &frame, None),
    )?;
    Ok(RunArtifacts {
        pipeline: "standard".to_string(),
        report,
        trace,
        outliers,
        processed: frame,
        selected_features: selected,
        out_dir: cfg.out.clone(),
    })
}

/// Custom pipeline: per-group imputation (weekly pattern for the new_*
/// columns), local winsorization, dependency-graph recomputation, then
/// train-only feature selection before split / standardize / evaluate.
pub fn run_custom(cfg: &PipelineConfig) -> Result<RunArtifacts> {
    cfg.validate()?;
    let raw = stage("ingest", load_frame(cfg))?;
    let variable = variable_columns(&raw);
    stage("ingest", check_target(&variable, &cfg.target))?;
    let groups = group_columns(&raw);

    let mut frame = raw.clone();
    let replacement = cfg.outlier_replacement.unwrap_or(Replacement::Winsorize);
    let mut outliers = Vec::new();
    for name in &variable {
        let group = groups[name.as_str()];
        if group == ColumnGroup::Remaining {
            continue;
        }
        let mut col = frame.columns[name].clone();
        if group == ColumnGroup::NewColumns {
            col = weekly_pattern_impute(&col);
        }
        col = impute_column(&col, cfg.extrapolation);

        let indices = stage(
            "outlier",
            rolling_zscore_outliers(&col, cfg.window, cfg.z_th),
        )?;
        col = match replacement {
            Replacement::Winsorize => winsorize_local(&col, &indices, cfg.window, cfg.z_th),
            Replacement::Interpolation => replace_by_interpolation(&col, &indices),
        };
        frame.columns.insert(name.clone(), col);
        outliers.push(OutlierReport {
            column: name.clone(),
            method: DetectionMethod::Local,
            window: Some(cfg.window),
            threshold: cfg.z_th,
            indices,
            replaced_with: replacement,
        });
    }

    let graph = build_default_graph();
    frame = stage("derive", run_computation_processing(&frame, &graph))?;
    // derived columns may still carry missing stretches (e.g. positive_rate
    // before the first valid test day)
    for spec in graph.execution_order() {
        let col = impute_column(&frame.columns[&spec.target], cfg.extrapolation);
        frame.columns.insert(spec.target.clone(), col);
    }

    // graph-created columns join the candidate feature set
    let mut features: Vec<String> = variable.clone();
    for spec in graph.execution_order() {
        if !features.contains(&spec.target) {
            features.push(spec.target.clone());
        }
    }
    features.retain(|n| *n != cfg.target);

    let fm = stage("select", feature_matrix(&frame, &features, &cfg.target))?;
    let (train_range, _, _) = stage("select", split_chronological(fm.n_rows(), &cfg.split))?;
    let fm_train = FeatureMatrix::new(
        fm.names.clone(),
        fm.x[train_range.clone()].to_vec(),
        fm.y[train_range].to_vec(),
    )?;
    let (selected, mut trace) = stage(
        "select",
        iterative_feature_selection(
            &fm_train,
            cfg.vif_th,
            cfg.corr_th,
            fork_seed(cfg.seed, "select"),
        ),
    )?;
    trace.metadata.insert("pipeline".into(), "custom".into());
    trace.metadata.insert("selection_stage".into(), "train_only".into());

    let report = stage(
        "evaluate",
        evaluate_pipeline(
            &fm.retain(&selected),
            &cfg.split,
            "custom",
            fork_seed(cfg.seed, "eval"),
            &cfg.grid_overrides,
        ),
    )?;

    stage(
        "artifacts",
        write_artifacts(cfg, &cfg.out, &report, &trace, &outliers, &frame, Some(&graph)),
    )?;
    Ok(RunArtifacts {
        pipeline: "custom".to_string(),
        report,
        trace,
        outliers,
        processed: frame,
        selected_features: selected,
        out_dir: cfg.out.clone(),
    })
}

/// Merge two pipeline reports into the comparison CSV and a markdown summary
/// with per-model metric ratios and the selected-feature lists.
pub fn compare_reports(
    standard: &RunArtifacts,
    custom: &RunArtifacts,
) -> Result<(String, String)> {
    if standard.report.rows.is_empty() || custom.report.rows.is_empty() {
        return Err(Error::MissingRun);
    }
    let mut csv = String::from("pipeline,model,test_rmse,test_r2,rmse_variance\n");
    for report in [&standard.report, &custom.report] {
        for line in report.to_csv().lines().skip(1) {
            csv.push_str(line);
            csv.push('\n');
        }
    }

    let mut md = String::from("# Pipeline comparison\n\n");
    md.push_str("## Per-model deltas (custom / standard)\n\n");
    md.push_str("| Model | Standard test RMSE | Custom test RMSE | RMSE ratio | Variance ratio |\n");
    md.push_str("|---|---|---|---|---|\n");
    for row in &standard.report.rows {
        let other = custom
            .report
            .rows
            .iter()
            .find(|r| r.model == row.model)
            .ok_or(Error::MissingRun)?;
        match (row.test_rmse, other.test_rmse) {
            (Some(s), Some(c)) => {
                let vr = match (row.rmse_variance, other.rmse_variance) {
                    (Some(sv), Some(cv)) if sv > 0.0 => format!("{:.4}", cv / sv),
                    _ => "-".to_string(),
                };
                md.push_str(&format!(
                    "| {} | {:.4} | {:.4} | {:.4} | {} |\n",
                    row.model,
                    s,
                    c,
                    c / s,
                    vr
                ));
            }
            _ => {
                md.push_str(&format!("| {} | - | - | - | - |\n", row.model));
            }
        }
    }

    let best = |art: &RunArtifacts| -> Option<(String, f64)> {
        art.report
            .rows
            .iter()
            .filter_map(|r| r.test_rmse.map(|v| (r.model.clone(), v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    md.push_str("\n## Best model per pipeline\n\n");
    for (label, art) in [("standard", standard), ("custom", custom)] {
        if let Some((model, v)) = best(art) {
            md.push_str(&format!("- {label}: {model} (test RMSE {v:.4})\n"));
        }
    }

    md.push_str("\n## Shortlisted features\n\n");
    md.push_str("| Standard pipeline | Custom pipeline |\n|---|---|\n");
    let rows = standard
        .selected_features
        .len()
        .max(custom.selected_features.len());
    for i in 0..rows {
        md.push_str(&format!(
            "| {} | {} |\n",
            standard.selected_features.get(i).map(String::as_str).unwrap_or(""),
            custom.selected_features.get(i).map(String::as_str).unwrap_or(""),
        ));
    }
    Ok((csv, md))
}

/// Run both pipelines into `out/standard` and `out/custom`, then write the
/// merged comparison artifacts at the top level.
pub fn compare(cfg: &PipelineConfig) -> Result<(RunArtifacts, RunArtifacts)> {
    cfg.validate()?;
    let mut std_cfg = cfg.clone();
    std_cfg.pipeline = PipelineKind::Standard;
    std_cfg.out = cfg.out.join("standard");
    let mut cus_cfg = cfg.clone();
    cus_cfg.pipeline = PipelineKind::Custom;
    cus_cfg.out = cfg.out.join("custom");

    let standard = run_standard(&std_cfg)?;
    let custom = run_custom(&cus_cfg)?;
    let (csv, md) = compare_reports(&standard, &custom)?;
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.out.join("compare.csv"), csv)?;
    std::fs::write(cfg.out.join("compare.md"), md)?;
    Ok((standard, custom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn temp_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!(
            "covprep-pipe-{tag}-{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    fn test_config(tag: &str) -> PipelineConfig {
        let dir = temp_dir(tag);
        let input = dir.join("owid.csv");
        crate::synthetic::generate_owid_fixture(&input, 42).unwrap();
        let mut grid_overrides = IndexMap::new();
        let one = |params: ModelParams| vec![ModelSpec { params, seed: 0 }];
        grid_overrides.insert("LinearRegression".into(), one(ModelParams::Ols));
        grid_overrides.insert("Ridge".into(), one(ModelParams::Ridge { lambda: 0.1 }));
        grid_overrides.insert("Lasso".into(), one(ModelParams::Lasso { lambda: 0.01 }));
        grid_overrides.insert(
            "ElasticNet".into(),
            one(ModelParams::ElasticNet { lambda: 0.01, mix: 0.5 }),
        );
        grid_overrides.insert("KNeighborsRegressor".into(), one(ModelParams::Knn { k: 5 }));
        grid_overrides.insert(
            "DecisionTreeRegressor".into(),
            one(ModelParams::DecisionTree { max_depth: Some(8), min_samples_leaf: 5 }),
        );
        grid_overrides.insert(
            "RandomForestRegressor".into(),
            one(ModelParams::RandomForest { n_trees: 10 }),
        );
        grid_overrides.insert(
            "GradientBoostingRegressor".into(),
            one(ModelParams::GradientBoosting { stages: 30, shrinkage: 0.1, depth: 3 }),
        );
        grid_overrides.insert(
            "MLPRegressor".into(),
            one(ModelParams::Mlp { hidden: vec![16], learning_rate: 1e-3, batch_size: 32, max_epochs: 50 }),
        );
        PipelineConfig {
            input,
            location: "IND".to_string(),
            start: None,
            end: None,
            pipeline: PipelineKind::Compare,
            target: default_target(),
            corr_th: 0.8,
            vif_th: 10.0,
            z_th: 2.0,
            window: 30,
            split: SplitSpec::default(),
            seed: 7,
            out: dir.join("out"),
            extrapolation: ExtrapolationMode::Linear,
            grid_overrides,
            outlier_replacement: None,
        }
    }

    #[test]
    fn config_json_round_trip_with_defaults() {
        let dir = temp_dir("cfg");
        let path = dir.join("config.json");
        std::fs::write(
            &path,
            r#"{"input": "owid.csv", "location": "IND", "out": "artifacts"}"#,
        )
        .unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.target, "new_deaths");
        assert_eq!(cfg.corr_th, 0.8);
        assert_eq!(cfg.vif_th, 10.0);
        assert_eq!(cfg.z_th, 2.0);
        assert_eq!(cfg.window, 30);
        assert_eq!(cfg.pipeline, PipelineKind::Compare);
        assert_eq!(cfg.split, SplitSpec::default());
        // invalid thresholds are rejected
        std::fs::write(
            &path,
            r#"{"input": "owid.csv", "location": "IND", "out": "a", "z_th": -1.0}"#,
        )
        .unwrap();
        assert!(matches!(
            PipelineConfig::load(&path),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn standard_run_produces_all_artifacts() {
        let cfg = test_config("std");
        let art = run_standard(&cfg).unwrap();
        for file in ["report.csv", "report.json", "selection_trace.json", "processed.csv"] {
            assert!(cfg.out.join(file).is_file(), "{file}");
        }
        assert!(cfg.out.join("outliers").is_dir());
        assert!(std::fs::read_dir(cfg.out.join("outliers")).unwrap().count() > 0);
        // processed frame is missing-free on the variable columns
        let dt_row = art
            .report
            .rows
            .iter()
            .find(|r| r.model == "DecisionTreeRegressor")
            .unwrap();
        assert!(dt_row.test_rmse.unwrap().is_finite());
        assert!(!art.selected_features.is_empty());
        assert_eq!(art.trace.metadata["selection_stage"], "pre_split");
    }

    #[test]
    fn custom_run_enforces_graph_consistency() {
        let cfg = test_config("cus");
        let art = run_custom(&cfg).unwrap();
        assert!(cfg.out.join("graph.json").is_file());
        // Eq. 3 consistency: total_deaths is the running sum of new_deaths
        let new_deaths: Vec<f64> = art.processed.columns["new_deaths"]
            .iter()
            .map(|c| c.unwrap())
            .collect();
        let total_deaths: Vec<f64> = art.processed.columns["total_deaths"]
            .iter()
            .map(|c| c.unwrap())
            .collect();
        let mut acc = 0.0;
        for (n, t) in new_deaths.iter().zip(&total_deaths) {
            acc += n;
            assert!((acc - t).abs() < 1e-9);
        }
        // weekly lumps are gone from the region where the fixture plants them
        let blocks = crate::impute::detect_weekly_blocks(&art.processed.columns["new_deaths"]);
        assert!(
            blocks
                .iter()
                .all(|b| b.start_index < 1000 || b.start_index >= 1180),
            "residual weekly blocks: {blocks:?}"
        );
        assert_eq!(art.trace.metadata["selection_stage"], "train_only");
        // the SVR placeholder row exists
        assert!(art.report.rows.iter().any(|r| r.model == "SVR"));
    }

    #[test]
    fn unknown_location_is_an_ingest_stage_error() {
        let mut cfg = test_config("loc");
        cfg.location = "XYZ".to_string();
        match run_standard(&cfg) {
            Err(Error::Stage { stage, source }) => {
                assert_eq!(stage, "ingest");
                assert!(matches!(*source, Error::UnknownLocation(_)));
            }
            other => panic!("expected stage error, got {other:?}"),
        }
    }

    #[test]
    fn identical_reports_compare_at_ratio_one() {
        let cfg = test_config("selfcmp");
        let art = run_standard(&cfg).unwrap();
        let (csv, md) = compare_reports(&art, &art).unwrap();
        assert!(csv.lines().count() > 1);
        // every implemented model row reports exactly ratio 1
        let ratio_rows: Vec<&str> = md
            .lines()
            .filter(|l| l.starts_with("| ") && l.matches('|').count() == 6 && !l.contains("Model") && !l.contains("| - |"))
            .collect();
        assert!(!ratio_rows.is_empty());
        for row in ratio_rows {
            let cols: Vec<&str> = row.split('|').map(str::trim).collect();
            assert_eq!(cols[4], "1.0000", "{row}");
        }
    }
}
