//! k-fold cross-validation with contiguous chronological folds, grid search,
//! and the default hyperparameter grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{fit, Matrix, ModelParams, ModelSpec};

/// One grid point's cross-validation outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvEntry {
    pub spec: ModelSpec,
    pub fold_rmse: Vec<f64>,
    pub mean_rmse: f64,
}

pub type CvTable = Vec<CvEntry>;

/// Contiguous chronological fold boundaries: fold i covers
/// [floor(n*i/k), floor(n*(i+1)/k)).
pub fn fold_ranges(n: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    (0..k)
        .map(|i| (n * i / k)..(n * (i + 1) / k))
        .collect()
}

fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64)
        .sqrt()
}

/// Evaluate every grid point with k-fold CV and return the argmin spec (ties
/// resolve to the earlier grid point) plus the full CV table.
pub fn kfold_grid_search(
    grid: &[ModelSpec],
    x: &Matrix,
    y: &[f64],
    k: usize,
) -> Result<(ModelSpec, CvTable)> {
    let n = x.len();
    if n < k || k == 0 {
        return Err(Error::TooFewRows { got: n, need: k });
    }
    let folds = fold_ranges(n, k);
    let names: Vec<String> = (0..x.first().map_or(0, |r| r.len()))
        .map(|j| format!("f{j}"))
        .collect();
    let mut table = Vec::with_capacity(grid.len());
    for spec in grid {
        let mut fold_rmse = Vec::with_capacity(k);
        for fold in &folds {
            if fold.is_empty() {
                continue;
            }
            let train_x: Matrix = x
                .iter()
                .enumerate()
                .filter(|(i, _)| !fold.contains(i))
                .map(|(_, r)| r.clone())
                .collect();
            let train_y: Vec<f64> = y
                .iter()
                .enumerate()
                .filter(|(i, _)| !fold.contains(i))
                .map(|(_, v)| *v)
                .collect();
            let test_x: Matrix = x[fold.clone()].to_vec();
            let test_y = &y[fold.clone()];
            let model = fit(spec, &train_x, &train_y, &names)?;
            fold_rmse.push(rmse(&model.predict(&test_x), test_y));
        }
        let mean_rmse = fold_rmse.iter().sum::<f64>() / fold_rmse.len() as f64;
        table.push(CvEntry {
            spec: spec.clone(),
            fold_rmse,
            mean_rmse,
        });
    }
    let best = table
        .iter()
        .min_by(|a, b| a.mean_rmse.total_cmp(&b.mean_rmse))
        .ok_or(Error::Empty)?
        .spec
        .clone();
    Ok((best, table))
}

/// Default hyperparameter grid per model family.
pub fn default_grid(name: &str, seed: u64) -> Vec<ModelSpec> {
    let lambdas = [1e-3, 1e-2, 1e-1, 1.0, 10.0];
    let params: Vec<ModelParams> = match name {
        "LinearRegression" => vec![ModelParams::Ols],
        "Ridge" => lambdas
            .iter()
            .map(|&lambda| ModelParams::Ridge { lambda })
            .collect(),
        "Lasso" => lambdas
            .iter()
            .map(|&lambda| ModelParams::Lasso { lambda })
            .collect(),
        "ElasticNet" => lambdas
            .iter()
            .flat_map(|&lambda| {
                [0.2, 0.5, 0.8]
                    .iter()
                    .map(move |&mix| ModelParams::ElasticNet { lambda, mix })
            })
            .collect(),
        "KNeighborsRegressor" => [3usize, 5, 9, 15]
            .iter()
            .map(|&k| ModelParams::Knn { k })
            .collect(),
        "DecisionTreeRegressor" => [Some(4usize), Some(8), Some(16), None]
            .iter()
            .flat_map(|&max_depth| {
                [1usize, 5].iter().map(move |&min_samples_leaf| {
                    ModelParams::DecisionTree {
                        max_depth,
                        min_samples_leaf,
                    }
                })
            })
            .collect(),
        "RandomForestRegressor" => [100usize, 300]
            .iter()
            .map(|&n_trees| ModelParams::RandomForest { n_trees })
            .collect(),
        "GradientBoostingRegressor" => [200usize, 500]
            .iter()
            .flat_map(|&stages| {
                [0.05, 0.1].iter().flat_map(move |&shrinkage| {
                    [2usize, 3].iter().map(move |&depth| {
                        ModelParams::GradientBoosting {
                            stages,
                            shrinkage,
                            depth,
                        }
                    })
                })
            })
            .collect(),
        "MLPRegressor" => [vec![64usize], vec![64, 32]]
            .iter()
            .flat_map(|hidden| {
                [1e-3, 1e-2].iter().map(move |&learning_rate| ModelParams::Mlp {
                    hidden: hidden.clone(),
                    learning_rate,
                    batch_size: 32,
                    max_epochs: 500,
                })
            })
            .collect(),
        _ => Vec::new(),
    };
    params
        .into_iter()
        .map(|params| ModelSpec { params, seed })
        .collect()
}

/// The model families evaluated by the reports, in a fixed order. SVR is part
/// of the report layout but has no implementation behind it.
pub const MODEL_FAMILIES: &[&str] = &[
    "LinearRegression",
    "Ridge",
    "Lasso",
    "ElasticNet",
    "KNeighborsRegressor",
    "DecisionTreeRegressor",
    "RandomForestRegressor",
    "GradientBoostingRegressor",
    "MLPRegressor",
];

pub const UNIMPLEMENTED_FAMILIES: &[&str] = &["SVR"];
