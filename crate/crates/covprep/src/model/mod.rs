//! From-scratch regression model zoo with a uniform fit/predict contract.
//!
//! All models are deterministic given (spec, seed). Trained models serialize
//! to a versioned JSON document whose round trip reproduces identical
//! predictions.

pub mod boosting;
pub mod coord;
pub mod cv;
pub mod knn;
pub mod linear;
pub mod mlp;
pub mod scaler;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_for;

pub use cv::{default_grid, kfold_grid_search, CvTable};
pub use scaler::{standardize_apply, standardize_fit, ScalerParams};

/// Row-major design matrix.
pub type Matrix = Vec<Vec<f64>>;

/// Model kind plus hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Ols,
    Ridge {
        lambda: f64,
    },
    Lasso {
        lambda: f64,
    },
    ElasticNet {
        lambda: f64,
        /// l1 share of the penalty: 1 = lasso, 0 = ridge.
        mix: f64,
    },
    Knn {
        k: usize,
    },
    DecisionTree {
        max_depth: Option<usize>,
        min_samples_leaf: usize,
    },
    RandomForest {
        n_trees: usize,
    },
    GradientBoosting {
        stages: usize,
        shrinkage: f64,
        depth: usize,
    },
    Mlp {
        hidden: Vec<usize>,
        learning_rate: f64,
        batch_size: usize,
        max_epochs: usize,
    },
}

impl ModelParams {
    /// Display name matching the report layout.
    pub fn model_name(&self) -> &'static str {
        match self {
            ModelParams::Ols => "LinearRegression",
            ModelParams::Ridge { .. } => "Ridge",
            ModelParams::Lasso { .. } => "Lasso",
            ModelParams::ElasticNet { .. } => "ElasticNet",
            ModelParams::Knn { .. } => "KNeighborsRegressor",
            ModelParams::DecisionTree { .. } => "DecisionTreeRegressor",
            ModelParams::RandomForest { .. } => "RandomForestRegressor",
            ModelParams::GradientBoosting { .. } => "GradientBoostingRegressor",
            ModelParams::Mlp { .. } => "MLPRegressor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub params: ModelParams,
    pub seed: u64,
}

/// Learned parameters, opaque per kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Learned {
    Linear(linear::LinearModel),
    Knn(knn::KnnModel),
    Tree(tree::Tree),
    Forest(Vec<tree::Tree>),
    Boosting(boosting::BoostedModel),
    Mlp(mlp::MlpNet),
}

/// A fitted model: spec, learned parameters, and training metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub version: u32,
    pub spec: ModelSpec,
    pub n_rows: usize,
    pub feature_names: Vec<String>,
    /// Set when coordinate descent hit its sweep cap (warning, not failure).
    pub not_converged: bool,
    pub learned: Learned,
}

/// Fit a model. `x` must already be standardized by the caller where the
/// contract requires it.
pub fn fit(spec: &ModelSpec, x: &Matrix, y: &[f64], feature_names: &[String]) -> Result<TrainedModel> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let mut not_converged = false;
    let learned = match &spec.params {
        ModelParams::Ols => Learned::Linear(linear::fit_ridge(x, y, 0.0)?),
        ModelParams::Ridge { lambda } => Learned::Linear(linear::fit_ridge(x, y, *lambda)?),
        ModelParams::Lasso { lambda } => {
            let (m, conv) = coord::fit_elastic_net(x, y, *lambda, 1.0);
            not_converged = !conv;
            Learned::Linear(m)
        }
        ModelParams::ElasticNet { lambda, mix } => {
            let (m, conv) = coord::fit_elastic_net(x, y, *lambda, *mix);
            not_converged = !conv;
            Learned::Linear(m)
        }
        ModelParams::Knn { k } => Learned::Knn(knn::fit(x, y, *k)),
        ModelParams::DecisionTree {
            max_depth,
            min_samples_leaf,
        } => Learned::Tree(tree::fit(
            x,
            y,
            &tree::TreeConfig {
                max_depth: *max_depth,
                min_samples_leaf: *min_samples_leaf,
                mtry: None,
            },
            None,
        )),
        ModelParams::RandomForest { n_trees } => {
            let mut rng = rng_for(spec.seed, "random_forest");
            Learned::Forest(boosting::fit_forest(x, y, *n_trees, &mut rng))
        }
        ModelParams::GradientBoosting {
            stages,
            shrinkage,
            depth,
        } => Learned::Boosting(boosting::fit_boosting(x, y, *stages, *shrinkage, *depth)),
        ModelParams::Mlp {
            hidden,
            learning_rate,
            batch_size,
            max_epochs,
        } => {
            let mut rng = rng_for(spec.seed, "mlp");
            Learned::Mlp(mlp::fit(
                x,
                y,
                hidden,
                *learning_rate,
                *batch_size,
                *max_epochs,
                &mut rng,
            ))
        }
    };
    Ok(TrainedModel {
        version: 1,
        spec: spec.clone(),
        n_rows: x.len(),
        feature_names: feature_names.to_vec(),
        not_converged,
        learned,
    })
}

impl TrainedModel {
    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        match &self.learned {
            Learned::Linear(m) => m.predict(x),
            Learned::Knn(m) => m.predict(x),
            Learned::Tree(t) => x.iter().map(|row| t.predict_row(row)).collect(),
            Learned::Forest(trees) => boosting::predict_forest(trees, x),
            Learned::Boosting(b) => b.predict(x),
            Learned::Mlp(net) => x.iter().map(|row| net.forward(row)).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<TrainedModel> {
        Ok(serde_json::from_str(s)?)
    }
}
