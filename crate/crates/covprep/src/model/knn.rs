//! k-nearest-neighbors regression: mean of the k nearest training targets by
//! Euclidean distance, ties broken by lower training-row index.

use serde::{Deserialize, Serialize};

use crate::model::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub x: Matrix,
    pub y: Vec<f64>,
}

pub fn fit(x: &Matrix, y: &[f64], k: usize) -> KnnModel {
    KnnModel {
        k: k.max(1),
        x: x.to_vec(),
        y: y.to_vec(),
    }
}

impl KnnModel {
    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        x.iter().map(|row| self.predict_row(row)).collect()
    }

    fn predict_row(&self, row: &[f64]) -> f64 {
        let mut dist: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, train)| {
                let d2: f64 = train
                    .iter()
                    .zip(row)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (d2, i)
            })
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let k = self.k.min(dist.len());
        dist[..k].iter().map(|(_, i)| self.y[*i]).sum::<f64>() / k as f64
    }
}
