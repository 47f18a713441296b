//! Ensemble models built on the CART tree: bootstrap random forest and
//! least-squares gradient boosting.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::tree::{fit_on_rows, Tree, TreeConfig};
use crate::model::Matrix;

/// B bootstrap trees with per-split feature subsampling of ceil(p/3).
pub fn fit_forest(x: &Matrix, y: &[f64], n_trees: usize, rng: &mut ChaCha8Rng) -> Vec<Tree> {
    let n = x.len();
    let p = x[0].len();
    let config = TreeConfig {
        max_depth: None,
        min_samples_leaf: 1,
        mtry: Some(p.div_ceil(3)),
    };
    (0..n_trees)
        .map(|_| {
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            fit_on_rows(x, y, &rows, &config, &mut Some(rng))
        })
        .collect()
}

pub fn predict_forest(trees: &[Tree], x: &Matrix) -> Vec<f64> {
    x.iter()
        .map(|row| trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / trees.len() as f64)
        .collect()
}

/// Least-squares gradient boosting: shrinkage-weighted sum of depth-limited
/// trees fit to residuals, starting from the target mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedModel {
    pub init: f64,
    pub shrinkage: f64,
    pub trees: Vec<Tree>,
}

pub fn fit_boosting(
    x: &Matrix,
    y: &[f64],
    stages: usize,
    shrinkage: f64,
    depth: usize,
) -> BoostedModel {
    let n = x.len();
    let init = y.iter().sum::<f64>() / n as f64;
    let config = TreeConfig {
        max_depth: Some(depth),
        min_samples_leaf: 1,
        mtry: None,
    };
    let rows: Vec<usize> = (0..n).collect();
    let mut residual: Vec<f64> = y.iter().map(|t| t - init).collect();
    let mut trees = Vec::with_capacity(stages);
    for _ in 0..stages {
        let tree = fit_on_rows(x, &residual, &rows, &config, &mut None);
        for (r, row) in residual.iter_mut().zip(x) {
            *r -= shrinkage * tree.predict_row(row);
        }
        trees.push(tree);
    }
    BoostedModel {
        init,
        shrinkage,
        trees,
    }
}

impl BoostedModel {
    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        x.iter()
            .map(|row| {
                self.init
                    + self.shrinkage
                        * self
                            .trees
                            .iter()
                            .map(|t| t.predict_row(row))
                            .sum::<f64>()
            })
            .collect()
    }
}
