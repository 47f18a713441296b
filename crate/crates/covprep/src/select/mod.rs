//! Iterative feature selection: correlation filtering, permutation / mutual
//! information / single-feature importance metrics, VIF-driven removal, and
//! lasso-based refinement, with a full per-iteration trace.

pub mod mi;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::cv::fold_ranges;
use crate::model::{coord, fit, linear, Matrix, ModelParams, ModelSpec, TrainedModel};
use crate::rng::rng_for;
use crate::stats::{mean, pearson, std_dev};

pub use mi::mutual_information;

pub const DEFAULT_CORR_THRESHOLD: f64 = 0.8;
pub const DEFAULT_VIF_THRESHOLD: f64 = 10.0;
pub const PFI_REPEATS: usize = 10;
pub const MI_NEIGHBORS: usize = 3;
const LASSO_GRID_SIZE: usize = 20;
const COEF_DROP_EPS: f64 = 1e-10;

/// A dense feature table: no missing values, one row per time point.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<String>,
    pub x: Matrix,
    pub y: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(names: Vec<String>, x: Matrix, y: Vec<f64>) -> Result<FeatureMatrix> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(x.len(), y.len()));
        }
        if x.iter().any(|r| r.len() != names.len()) {
            return Err(Error::LengthMismatch(
                names.len(),
                x.iter().map(|r| r.len()).find(|&l| l != names.len()).unwrap_or(0),
            ));
        }
        Ok(FeatureMatrix { names, x, y })
    }

    pub fn n_rows(&self) -> usize {
        self.x.len()
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.x.iter().map(|r| r[j]).collect()
    }

    pub fn remove_column(&mut self, j: usize) {
        self.names.remove(j);
        for row in &mut self.x {
            row.remove(j);
        }
    }

    /// Keep only the named columns, preserving current order.
    pub fn retain(&self, keep: &[String]) -> FeatureMatrix {
        let idx: Vec<usize> = self
            .names
            .iter()
            .enumerate()
            .filter(|(_, n)| keep.contains(n))
            .map(|(j, _)| j)
            .collect();
        FeatureMatrix {
            names: idx.iter().map(|&j| self.names[j].clone()).collect(),
            x: self
                .x
                .iter()
                .map(|r| idx.iter().map(|&j| r[j]).collect())
                .collect(),
            y: self.y.clone(),
        }
    }
}

/// One feature's metrics within a selection iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceRecord {
    pub feature: String,
    pub pfi: f64,
    pub mi: f64,
    pub sfi: f64,
    #[serde(with = "vif_serde")]
    pub vif: f64,
    pub combined: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    HighVif,
    ZeroCoefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionIteration {
    pub records: Vec<ImportanceRecord>,
    pub removed: Option<String>,
    pub reason: Option<RemovalReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SelectionTrace {
    pub iterations: Vec<SelectionIteration>,
    pub final_features: Vec<String>,
    /// Free-form context, e.g. which pipeline stage ran the selection.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub metadata: IndexMap<String, String>,
}

/// Serializes infinite VIF as the string "inf"; finite values as numbers.
mod vif_serde {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    struct VifVisitor;

    impl Visitor<'_> for VifVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a number or the string \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                other => Err(E::custom(format!("unexpected vif token {other:?}"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        d.deserialize_any(VifVisitor)
    }
}

/// Drop zero-variance columns, then resolve every feature pair with
/// |corr| > `corr_th` (descending |corr|) by keeping the member more
/// correlated with the target.
pub fn correlation_filter(fm: &FeatureMatrix, corr_th: f64) -> FeatureMatrix {
    let cols: Vec<Vec<f64>> = (0..fm.n_features()).map(|j| fm.column(j)).collect();
    let mut alive: Vec<bool> = cols.iter().map(|c| std_dev(c) > 0.0).collect();

    let target_corr: Vec<f64> = cols
        .iter()
        .map(|c| {
            let r = pearson(c, &fm.y);
            if r.is_nan() {
                0.0
            } else {
                r.abs()
            }
        })
        .collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            if !alive[a] || !alive[b] {
                continue;
            }
            let r = pearson(&cols[a], &cols[b]);
            if !r.is_nan() && r.abs() > corr_th {
                pairs.push((r.abs(), a, b));
            }
        }
    }
    pairs.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    for (_, a, b) in pairs {
        if alive[a] && alive[b] {
            // on a target-correlation tie keep the earlier column
            let drop = if target_corr[b] < target_corr[a] { b } else if target_corr[a] < target_corr[b] { a } else { b };
            alive[drop] = false;
        }
    }

    let keep: Vec<String> = fm
        .names
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(n, _)| n.clone())
        .collect();
    fm.retain(&keep)
}

fn rmse(pred: &[f64], truth: &[f64]) -> f64 {
    (pred.iter()
        .zip(truth)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / truth.len() as f64)
        .sqrt()
}

/// Mean RMSE increase over `repeats` seeded shufflings of each column.
pub fn permutation_importance(
    model: &TrainedModel,
    fm: &FeatureMatrix,
    repeats: usize,
    seed: u64,
) -> Vec<f64> {
    let baseline = rmse(&model.predict(&fm.x), &fm.y);
    let n = fm.n_rows();
    fm.names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let mut rng = rng_for(seed, &format!("pfi/{name}"));
            let mut idx: Vec<usize> = (0..n).collect();
            let mut total = 0.0;
            for _ in 0..repeats {
                idx.shuffle(&mut rng);
                let mut xp = fm.x.clone();
                for (r, &src) in idx.iter().enumerate() {
                    xp[r][j] = fm.x[src][j];
                }
                total += rmse(&model.predict(&xp), &fm.y) - baseline;
            }
            total / repeats as f64
        })
        .collect()
}

/// Mean out-of-fold R-squared of a univariate regression under 5-fold
/// chronological CV, floored at zero.
pub fn single_feature_impact(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::LengthMismatch(n, y.len()));
    }
    if n < 10 {
        return Err(Error::TooFewSamples { got: n, need: 10 });
    }
    let folds = fold_ranges(n, 5);
    let mut r2_sum = 0.0;
    let mut count = 0usize;
    for fold in folds {
        let train: Vec<usize> = (0..n).filter(|i| !fold.contains(i)).collect();
        let tx: Vec<f64> = train.iter().map(|&i| x[i]).collect();
        let ty: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let mx = mean(&tx);
        let my = mean(&ty);
        let var: f64 = tx.iter().map(|v| (v - mx) * (v - mx)).sum();
        let cov: f64 = tx.iter().zip(&ty).map(|(v, w)| (v - mx) * (w - my)).sum();
        let slope = if var > 0.0 { cov / var } else { 0.0 };
        let intercept = my - slope * mx;

        let test_y: Vec<f64> = fold.clone().map(|i| y[i]).collect();
        let tm = mean(&test_y);
        let sse: f64 = fold
            .clone()
            .map(|i| {
                let e = y[i] - (slope * x[i] + intercept);
                e * e
            })
            .sum();
        let sst: f64 = test_y.iter().map(|v| (v - tm) * (v - tm)).sum();
        let r2 = if sst > 0.0 {
            1.0 - sse / sst
        } else if sse < 1e-18 {
            1.0
        } else {
            0.0
        };
        r2_sum += r2;
        count += 1;
    }
    Ok((r2_sum / count as f64).max(0.0))
}

/// Variance inflation factors: 1/(1 - R_j^2) with R_j^2 from regressing each
/// column on all the others; exact collinearity reports +infinity.
pub fn vif(fm: &FeatureMatrix) -> Vec<f64> {
    let p = fm.n_features();
    let n = fm.n_rows();
    if p < 2 {
        return vec![1.0; p];
    }
    if n <= p {
        return vec![f64::INFINITY; p];
    }
    (0..p)
        .map(|j| {
            let target = fm.column(j);
            let others: Matrix = fm
                .x
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let tm = mean(&target);
            let sst: f64 = target.iter().map(|v| (v - tm) * (v - tm)).sum();
            if sst == 0.0 {
                return f64::INFINITY; // constant column: the intercept alone is exact
            }
            let model = match linear::fit_ridge(&others, &target, 0.0) {
                Ok(m) => m,
                Err(_) => return f64::INFINITY,
            };
            let sse: f64 = model
                .predict(&others)
                .iter()
                .zip(&target)
                .map(|(p, t)| (p - t) * (p - t))
                .sum();
            let r2 = 1.0 - sse / sst;
            if r2 >= 1.0 - 1e-12 {
                f64::INFINITY
            } else {
                (1.0 / (1.0 - r2)).max(1.0)
            }
        })
        .collect()
}

fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo).is_normal() {
        return vec![0.5; values.len()];
    }
    values.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

/// Sum of the min-max normalized metrics; range [0, 3]. A metric constant
/// across features contributes 0.5 for everyone.
pub fn combined_importance(pfi: &[f64], mi: &[f64], sfi: &[f64]) -> Vec<f64> {
    let (a, b, c) = (
        min_max_normalize(pfi),
        min_max_normalize(mi),
        min_max_normalize(sfi),
    );
    a.iter()
        .zip(&b)
        .zip(&c)
        .map(|((x, y), z)| x + y + z)
        .collect()
}

/// Fit a lasso with the regularization weight chosen by 5-fold CV over 20
/// log-spaced values in [1e-4, 1e+1] * lambda_max, then drop features whose
/// coefficient magnitude falls below 1e-10. Standardizes internally, so the
/// drop decision is scale-free.
pub fn lasso_refine(fm: &FeatureMatrix) -> FeatureMatrix {
    if fm.n_features() == 0 || fm.n_rows() < 2 {
        return fm.clone();
    }
    let scaler = match crate::model::standardize_fit(&fm.x) {
        Ok(s) => s,
        Err(_) => return fm.clone(),
    };
    let z = crate::model::standardize_apply(&fm.x, &scaler);
    let lambda_max = coord::lasso_lambda_max(&z, &fm.y);
    if lambda_max == 0.0 {
        // the target carries no linear signal; every coefficient is zero
        return fm.retain(&[]);
    }
    let grid: Vec<f64> = (0..LASSO_GRID_SIZE)
        .map(|i| {
            let t = i as f64 / (LASSO_GRID_SIZE - 1) as f64;
            lambda_max * 10f64.powf(-4.0 + 5.0 * t)
        })
        .collect();

    let n = fm.n_rows();
    let folds = fold_ranges(n, 5.min(n));
    let mut best = (f64::INFINITY, grid[0]);
    for &lambda in &grid {
        let mut total = 0.0;
        let mut count = 0usize;
        for fold in &folds {
            if fold.is_empty() || fold.len() == n {
                continue;
            }
            let train: Vec<usize> = (0..n).filter(|i| !fold.contains(i)).collect();
            let tx: Matrix = train.iter().map(|&i| z[i].clone()).collect();
            let ty: Vec<f64> = train.iter().map(|&i| fm.y[i]).collect();
            let (m, _) = coord::fit_elastic_net(&tx, &ty, lambda, 1.0);
            let vx: Matrix = fold.clone().map(|i| z[i].clone()).collect();
            let vy: Vec<f64> = fold.clone().map(|i| fm.y[i]).collect();
            total += rmse(&m.predict(&vx), &vy);
            count += 1;
        }
        if count == 0 {
            continue;
        }
        let score = total / count as f64;
        if score < best.0 {
            best = (score, lambda);
        }
    }

    let (model, _) = coord::fit_elastic_net(&z, &fm.y, best.1, 1.0);
    let keep: Vec<String> = fm
        .names
        .iter()
        .zip(&model.coefficients)
        .filter(|(_, c)| c.abs() >= COEF_DROP_EPS)
        .map(|(n, _)| n.clone())
        .collect();
    fm.retain(&keep)
}

fn jittered(values: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    let sigma = std_dev(values);
    let scale = 1e-10 * if sigma > 0.0 { sigma } else { 1.0 };
    values
        .iter()
        .map(|v| v + scale * (rng.random::<f64>() - 0.5))
        .collect()
}

fn iteration_records(fm: &FeatureMatrix, seed: u64) -> Result<Vec<ImportanceRecord>> {
    let spec = ModelSpec {
        params: ModelParams::Ols,
        seed,
    };
    let model = fit(&spec, &fm.x, &fm.y, &fm.names)?;
    let pfi = permutation_importance(&model, fm, PFI_REPEATS, seed);

    let y_jit = jittered(&fm.y, &mut rng_for(seed, "mi/__target"));
    let mut mi_scores = Vec::with_capacity(fm.n_features());
    let mut sfi_scores = Vec::with_capacity(fm.n_features());
    for (j, name) in fm.names.iter().enumerate() {
        let col = fm.column(j);
        let col_jit = jittered(&col, &mut rng_for(seed, &format!("mi/{name}")));
        mi_scores.push(mutual_information(&col_jit, &y_jit, MI_NEIGHBORS)?);
        sfi_scores.push(single_feature_impact(&col, &fm.y)?);
    }
    let vifs = vif(fm);
    let combined = combined_importance(&pfi, &mi_scores, &sfi_scores);
    Ok(fm
        .names
        .iter()
        .enumerate()
        .map(|(j, name)| ImportanceRecord {
            feature: name.clone(),
            pfi: pfi[j],
            mi: mi_scores[j],
            sfi: sfi_scores[j],
            vif: vifs[j],
            combined: combined[j],
        })
        .collect())
}

/// The full selection loop: correlation filter once, then repeatedly compute
/// the importance metrics and VIF, remove the least-important feature among
/// those with VIF above the threshold, and lasso-refine, until every
/// surviving feature clears the VIF threshold.
pub fn iterative_feature_selection(
    fm: &FeatureMatrix,
    vif_th: f64,
    corr_th: f64,
    seed: u64,
) -> Result<(Vec<String>, SelectionTrace)> {
    let mut current = correlation_filter(fm, corr_th);
    if current.n_features() == 0 {
        return Err(Error::Degenerate);
    }
    let budget = current.n_features();
    let mut iterations = Vec::new();

    for _ in 0..=budget {
        let records = iteration_records(&current, seed)?;
        let vifs: Vec<f64> = records.iter().map(|r| r.vif).collect();
        let max_vif = vifs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max_vif <= vif_th {
            iterations.push(SelectionIteration {
                records,
                removed: None,
                reason: None,
            });
            let final_features = current.names.clone();
            return Ok((
                final_features.clone(),
                SelectionTrace {
                    iterations,
                    final_features,
                    metadata: IndexMap::new(),
                },
            ));
        }

        // min combined importance among the over-threshold features;
        // ties resolve to the first in current column order
        let mut pick = 0usize;
        let mut pick_combined = f64::INFINITY;
        for (j, r) in records.iter().enumerate() {
            if vifs[j] > vif_th && r.combined < pick_combined {
                pick = j;
                pick_combined = r.combined;
            }
        }
        let removed_name = current.names[pick].clone();
        iterations.push(SelectionIteration {
            records: records.clone(),
            removed: Some(removed_name),
            reason: Some(RemovalReason::HighVif),
        });
        current.remove_column(pick);
        if current.n_features() == 0 {
            return Err(Error::Degenerate);
        }

        let refined = lasso_refine(&current);
        let dropped: Vec<String> = current
            .names
            .iter()
            .filter(|n| !refined.names.contains(n))
            .cloned()
            .collect();
        for name in dropped {
            let j = current.names.iter().position(|n| *n == name).unwrap();
            let recs: Vec<ImportanceRecord> = records
                .iter()
                .filter(|r| current.names.contains(&r.feature))
                .cloned()
                .collect();
            iterations.push(SelectionIteration {
                records: recs,
                removed: Some(name),
                reason: Some(RemovalReason::ZeroCoefficient),
            });
            current.remove_column(j);
        }
        if current.n_features() == 0 {
            return Err(Error::Degenerate);
        }
    }
    unreachable!("each iteration removes at least one feature");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(rng: &mut impl Rng) -> f64 {
        let u1: f64 = rng.random_range(f64::EPSILON..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn fm_from_cols(names: &[&str], cols: &[Vec<f64>], y: Vec<f64>) -> FeatureMatrix {
        let n = cols[0].len();
        let x: Matrix = (0..n)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        FeatureMatrix::new(names.iter().map(|s| s.to_string()).collect(), x, y).unwrap()
    }

    #[test]
    fn duplicate_column_keeps_one_survivor() {
        let a: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).sin()).collect();
        let y: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let fm = fm_from_cols(&["a", "a_copy"], &[a.clone(), a], y);
        let out = correlation_filter(&fm, 0.8);
        assert_eq!(out.names, vec!["a"]);
    }

    #[test]
    fn uncorrelated_columns_both_survive() {
        let mut rng = rng_for(3, "cf-noise");
        let a: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let b: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let y: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        let fm = fm_from_cols(&["a", "b"], &[a, b], y);
        let out = correlation_filter(&fm, 0.8);
        assert_eq!(out.names, vec!["a", "b"]);
    }

    #[test]
    fn correlated_triple_keeps_most_target_correlated() {
        let mut rng = rng_for(4, "cf-triple");
        let z: Vec<f64> = (0..300).map(|_| gauss(&mut rng)).collect();
        let x1 = z.clone();
        let x2: Vec<f64> = z.iter().map(|v| v + 0.2 * gauss(&mut rng)).collect();
        let x3: Vec<f64> = z.iter().map(|v| v + 0.25 * gauss(&mut rng)).collect();
        // target tracks x1 most closely
        let y: Vec<f64> = x1.iter().map(|v| v + 0.3 * gauss(&mut rng)).collect();
        let fm = fm_from_cols(&["x1", "x2", "x3"], &[x1, x2, x3], y);
        let out = correlation_filter(&fm, 0.8);
        assert_eq!(out.names, vec!["x1"]);
    }

    #[test]
    fn zero_variance_column_is_dropped() {
        let a: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let c = vec![7.0; 30];
        let y = a.clone();
        let fm = fm_from_cols(&["a", "const"], &[a, c], y);
        let out = correlation_filter(&fm, 0.8);
        assert_eq!(out.names, vec!["a"]);
    }

    fn pfi_setup() -> (TrainedModel, FeatureMatrix) {
        let mut rng = rng_for(5, "pfi");
        let x1: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let noise: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let y = x1.clone();
        let fm = fm_from_cols(&["x1", "noise"], &[x1, noise], y);
        let spec = ModelSpec {
            params: ModelParams::Ols,
            seed: 0,
        };
        let model = fit(&spec, &fm.x, &fm.y, &fm.names).unwrap();
        (model, fm)
    }

    #[test]
    fn pfi_separates_signal_from_noise() {
        let (model, fm) = pfi_setup();
        let scores = permutation_importance(&model, &fm, 10, 17);
        assert!(scores[0] > 0.0);
        assert!(scores[0] > scores[1] * 10.0, "{scores:?}");
        assert!(scores[1].abs() < 0.05, "{scores:?}");
    }

    #[test]
    fn pfi_is_deterministic() {
        let (model, fm) = pfi_setup();
        let a = permutation_importance(&model, &fm, 10, 17);
        let b = permutation_importance(&model, &fm, 10, 17);
        assert_eq!(a, b);
    }

    #[test]
    fn sfi_noiseless_line_is_one() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.7 - 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let s = single_feature_impact(&x, &y).unwrap();
        assert!((s - 1.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn sfi_noise_floors_at_zero() {
        // out-of-fold R^2 of an irrelevant regressor is negative in
        // expectation, so the floor engages for most draws
        let mut hits = 0;
        for seed in 0..5 {
            let mut rng = rng_for(seed, "sfi-noise");
            let x: Vec<f64> = (0..500).map(|_| gauss(&mut rng)).collect();
            let y: Vec<f64> = (0..500).map(|_| gauss(&mut rng)).collect();
            let s = single_feature_impact(&x, &y).unwrap();
            assert!(s < 0.02, "{s}");
            if s == 0.0 {
                hits += 1;
            }
        }
        assert!(hits >= 3, "floor engaged only {hits}/5 times");
    }

    #[test]
    fn sfi_matches_analytic_r_squared() {
        // y = x + e with sd(e) = sd(x)  =>  rho^2 = 0.5
        let mut rng = rng_for(7, "sfi-half");
        let x: Vec<f64> = (0..1000).map(|_| gauss(&mut rng)).collect();
        let y: Vec<f64> = x.iter().map(|v| v + gauss(&mut rng)).collect();
        let s = single_feature_impact(&x, &y).unwrap();
        assert!((s - 0.5).abs() < 0.1, "{s}");
    }

    #[test]
    fn sfi_too_few_samples_errors() {
        assert!(matches!(
            single_feature_impact(&[1.0; 5], &[1.0; 5]),
            Err(Error::TooFewSamples { got: 5, need: 10 })
        ));
    }

    #[test]
    fn vif_orthogonal_columns_are_one() {
        // exactly orthogonal, zero-mean patterns
        let a: Vec<f64> = (0..40).map(|i| if (i / 2) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let b: Vec<f64> = (0..40).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let y = vec![0.0; 40];
        let fm = fm_from_cols(&["a", "b"], &[a, b], y);
        let v = vif(&fm);
        assert!((v[0] - 1.0).abs() < 1e-6 && (v[1] - 1.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn vif_duplicates_are_infinite() {
        let a: Vec<f64> = (0..30).map(|i| (i as f64 * 0.4).sin()).collect();
        let fm = fm_from_cols(&["a", "a2"], &[a.clone(), a], vec![0.0; 30]);
        let v = vif(&fm);
        assert!(v.iter().all(|x| x.is_infinite()), "{v:?}");
    }

    #[test]
    fn vif_hits_ten_at_ninety_percent_r_squared() {
        // x2 = 3a + b with orthogonal unit-variance a, b  =>  R^2 = 0.9
        let n = 40;
        let a: Vec<f64> = (0..n).map(|i| if (i / 2) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let b: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let x1: Vec<f64> = a.iter().map(|v| 3.0 * v).collect();
        let x2: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 3.0 * p + q).collect();
        let fm = fm_from_cols(&["x1", "x2"], &[x1, x2], vec![0.0; n]);
        let v = vif(&fm);
        assert!((v[1] - 10.0).abs() < 1e-6, "{v:?}");
    }

    /// Independent VIF via a hand-rolled normal-equation solve.
    fn brute_force_vif(fm: &FeatureMatrix) -> Vec<f64> {
        let p = fm.n_features();
        let n = fm.n_rows();
        (0..p)
            .map(|j| {
                // design: intercept + all other columns
                let others: Vec<usize> = (0..p).filter(|&c| c != j).collect();
                let d = others.len() + 1;
                let mut a = vec![vec![0.0; d]; d];
                let mut rhs = vec![0.0; d];
                let cell = |i: usize, c: usize| if c == 0 { 1.0 } else { fm.x[i][others[c - 1]] };
                for r in 0..d {
                    for c in 0..d {
                        a[r][c] = (0..n).map(|i| cell(i, r) * cell(i, c)).sum();
                    }
                    rhs[r] = (0..n).map(|i| cell(i, r) * fm.x[i][j]).sum();
                }
                // gaussian elimination
                for col in 0..d {
                    let piv = (col..d).max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs())).unwrap();
                    a.swap(col, piv);
                    rhs.swap(col, piv);
                    for r in col + 1..d {
                        let f = a[r][col] / a[col][col];
                        for c in col..d {
                            a[r][c] -= f * a[col][c];
                        }
                        rhs[r] -= f * rhs[col];
                    }
                }
                let mut beta = vec![0.0; d];
                for r in (0..d).rev() {
                    let s: f64 = (r + 1..d).map(|c| a[r][c] * beta[c]).sum();
                    beta[r] = (rhs[r] - s) / a[r][r];
                }
                let tm = mean(&fm.column(j));
                let (mut sse, mut sst) = (0.0, 0.0);
                for i in 0..n {
                    let pred: f64 = (0..d).map(|c| beta[c] * cell(i, c)).sum();
                    sse += (fm.x[i][j] - pred) * (fm.x[i][j] - pred);
                    sst += (fm.x[i][j] - tm) * (fm.x[i][j] - tm);
                }
                1.0 / (1.0 - (1.0 - sse / sst))
                    .max(1e-300)
            })
            .map(|v| v.max(1.0))
            .collect()
    }

    #[test]
    fn vif_matches_brute_force_on_small_matrices() {
        let mut rng = rng_for(8, "vif-brute");
        for _ in 0..5 {
            let n = 60;
            let a: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let b: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let c: Vec<f64> = a
                .iter()
                .zip(&b)
                .map(|(p, q)| 0.6 * p + 0.3 * q + 0.5 * gauss(&mut rng))
                .collect();
            let d: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let fm = fm_from_cols(&["a", "b", "c", "d"], &[a, b, c, d], vec![0.0; n]);
            let fast = vif(&fm);
            let slow = brute_force_vif(&fm);
            for (f, s) in fast.iter().zip(&slow) {
                assert!((f - s).abs() / s < 1e-8, "{fast:?} vs {slow:?}");
            }
        }
    }

    #[test]
    fn combined_importance_hits_range_bounds() {
        let pfi = [3.0, 1.0, 0.0];
        let mi = [2.0, 0.5, 0.1];
        let sfi = [0.9, 0.2, 0.05];
        let c = combined_importance(&pfi, &mi, &sfi);
        assert!((c[0] - 3.0).abs() < 1e-12);
        assert!((c[2] - 0.0).abs() < 1e-12);
        // a constant metric contributes 0.5 to everyone
        let c2 = combined_importance(&[1.0, 1.0], &[0.0, 2.0], &[5.0, 5.0]);
        assert!((c2[0] - 1.0).abs() < 1e-12);
        assert!((c2[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lasso_refine_drops_pure_noise() {
        let n = 100;
        let x1: Vec<f64> = (0..n).map(|i| (i as f64 * 0.17).sin()).collect();
        // orthogonalize a second column against x1 and the intercept
        let raw: Vec<f64> = (0..n).map(|i| (i as f64 * 0.53).cos()).collect();
        let m1 = mean(&x1);
        let mr = mean(&raw);
        let num: f64 = x1.iter().zip(&raw).map(|(a, b)| (a - m1) * (b - mr)).sum();
        let den: f64 = x1.iter().map(|a| (a - m1) * (a - m1)).sum();
        let x2: Vec<f64> = raw
            .iter()
            .zip(&x1)
            .map(|(b, a)| (b - mr) - num / den * (a - m1))
            .collect();
        let y: Vec<f64> = x1.iter().map(|v| 2.0 * v).collect();
        let fm = fm_from_cols(&["signal", "noise"], &[x1, x2], y);
        let out = lasso_refine(&fm);
        assert_eq!(out.names, vec!["signal"]);
    }

    #[test]
    fn lasso_refine_keeps_informative_features() {
        let n = 120;
        let x1: Vec<f64> = (0..n).map(|i| (i as f64 * 0.23).sin()).collect();
        let x2: Vec<f64> = (0..n).map(|i| (i as f64 * 0.61).cos()).collect();
        let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 3.0 * a - 2.0 * b).collect();
        let fm = fm_from_cols(&["a", "b"], &[x1, x2], y);
        let out = lasso_refine(&fm);
        assert_eq!(out.names, vec!["a", "b"]);
    }

    #[test]
    fn lasso_refine_drops_zero_variance_feature() {
        let n = 80;
        let x1: Vec<f64> = (0..n).map(|i| (i as f64 * 0.31).sin()).collect();
        let flat = vec![4.0; n];
        let y: Vec<f64> = x1.iter().map(|v| v + 1.0).collect();
        let fm = fm_from_cols(&["a", "flat"], &[x1, flat], y);
        let out = lasso_refine(&fm);
        assert_eq!(out.names, vec!["a"]);
    }

    fn orthogonal_fm(n: usize) -> FeatureMatrix {
        let mut rng = rng_for(9, "ifs-orth");
        let a: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
        let b: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
        let c: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
        let y: Vec<f64> = a
            .iter()
            .zip(&b)
            .zip(&c)
            .map(|((p, q), r)| 2.0 * p - q + 0.5 * r)
            .collect();
        fm_from_cols(&["a", "b", "c"], &[a, b, c], y)
    }

    #[test]
    fn orthogonal_features_need_no_removals() {
        let fm = orthogonal_fm(150);
        let (features, trace) = iterative_feature_selection(&fm, 10.0, 0.8, 21).unwrap();
        assert_eq!(features, vec!["a", "b", "c"]);
        assert_eq!(trace.iterations.len(), 1);
        assert!(trace.iterations[0].removed.is_none());
        assert!(trace.iterations[0].records.iter().all(|r| r.vif < 10.0));
    }

    #[test]
    fn collinear_pair_is_broken_by_the_vif_path() {
        // corr_th = 1.0 lets the duplicates through the filter; VIF must catch them
        let mut rng = rng_for(10, "ifs-dup");
        let a: Vec<f64> = (0..150).map(|_| gauss(&mut rng)).collect();
        let b: Vec<f64> = (0..150).map(|_| gauss(&mut rng)).collect();
        let y: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        let fm = fm_from_cols(&["a", "a2", "b"], &[a.clone(), a, b], y);
        let (features, trace) = iterative_feature_selection(&fm, 10.0, 1.0, 22).unwrap();
        assert_eq!(features.len(), 2);
        assert!(features.contains(&"b".to_string()));
        let removals: Vec<&SelectionIteration> = trace
            .iterations
            .iter()
            .filter(|it| it.removed.is_some())
            .collect();
        assert_eq!(removals.len(), 1);
        assert_eq!(removals[0].reason, Some(RemovalReason::HighVif));
        // the flagged iteration saw infinite VIF on the duplicated pair
        assert!(removals[0].records.iter().any(|r| r.vif.is_infinite()));
    }

    #[test]
    fn trace_is_complete_and_deterministic() {
        let mut rng = rng_for(11, "ifs-trace");
        let a: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 0.1 * gauss(&mut rng)).collect();
        let c: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let d: Vec<f64> = (0..200).map(|_| gauss(&mut rng)).collect();
        let y: Vec<f64> = a.iter().zip(&c).map(|(p, q)| p + q).collect();
        let fm = fm_from_cols(&["a", "b", "c", "d"], &[a, b, c, d], y);
        let (f1, t1) = iterative_feature_selection(&fm, 10.0, 0.8, 23).unwrap();
        let (f2, t2) = iterative_feature_selection(&fm, 10.0, 0.8, 23).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(
            serde_json::to_string(&t1).unwrap(),
            serde_json::to_string(&t2).unwrap()
        );
        // removals account exactly for the initial-minus-final feature count
        let filtered = correlation_filter(&fm, 0.8);
        let removals = t1.iterations.iter().filter(|it| it.removed.is_some()).count();
        assert_eq!(removals, filtered.n_features() - f1.len());
        // final features all clear the threshold in the last iteration
        let last = t1.iterations.last().unwrap();
        assert!(last.removed.is_none());
        assert!(last.records.iter().all(|r| r.vif <= 10.0));
        // every iteration carries a full record set for its feature count
        for it in &t1.iterations {
            assert!(!it.records.is_empty());
        }
    }

    #[test]
    fn infinite_vif_serializes_as_inf_token() {
        let rec = ImportanceRecord {
            feature: "x".into(),
            pfi: 0.1,
            mi: 0.2,
            sfi: 0.3,
            vif: f64::INFINITY,
            combined: 1.5,
        };
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"vif\":\"inf\""), "{json}");
        let back: ImportanceRecord = serde_json::from_str(&json).unwrap();
        assert!(back.vif.is_infinite());
        let finite = ImportanceRecord { vif: 2.5, ..rec };
        let json = serde_json::to_string(&finite).unwrap();
        assert!(json.contains("\"vif\":2.5"), "{json}");
        let back: ImportanceRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.vif, 2.5);
    }
}
