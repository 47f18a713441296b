//! Feature standardization to zero mean and unit (population) standard
//! deviation, with train-fit statistics applied to held-out data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Matrix;
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    /// Population std per feature; 1.0 substituted for near-zero variance.
    pub stds: Vec<f64>,
}

pub fn standardize_fit(x_train: &Matrix) -> Result<ScalerParams> {
    if x_train.is_empty() || x_train[0].is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let p = x_train[0].len();
    let mut means = Vec::with_capacity(p);
    let mut stds = Vec::with_capacity(p);
    for j in 0..p {
        let col: Vec<f64> = x_train.iter().map(|r| r[j]).collect();
        means.push(mean(&col));
        let s = std_dev(&col);
        stds.push(if s < 1e-12 { 1.0 } else { s });
    }
    Ok(ScalerParams { means, stds })
}

pub fn standardize_apply(x: &Matrix, params: &ScalerParams) -> Matrix {
    x.iter()
        .map(|row| {
            row.iter()
                .zip(&params.means)
                .zip(&params.stds)
                .map(|((v, m), s)| (v - m) / s)
                .collect()
        })
        .collect()
}
