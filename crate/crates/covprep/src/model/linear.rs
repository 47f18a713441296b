//! Ordinary least squares and ridge regression via the normal equations.
//!
//! Objective convention shared with the coordinate-descent solvers:
//! (1/2n)||y - Xb - b0||^2 + (lambda/2)||b||^2, intercept unpenalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        x.iter()
            .map(|row| {
                self.intercept
                    + row
                        .iter()
                        .zip(&self.coefficients)
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Solve a dense linear system by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in (col + 1)..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Ok(x)
}

/// Fit by normal equations: (Z'Z/n + n_lambda D) w = Z'y/n with Z = [X, 1]
/// and D penalizing everything but the intercept. lambda = 0 gives OLS; on a
/// singular OLS system a diagonal jitter of 1e-10 is added before failing.
pub fn fit_ridge(x: &Matrix, y: &[f64], lambda: f64) -> Result<LinearModel> {
    if x.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let n = x.len();
    let p = x[0].len();
    let nf = n as f64;
    // Gram matrix of [X, 1] scaled by 1/n.
    let mut a = vec![vec![0.0; p + 1]; p + 1];
    let mut b = vec![0.0; p + 1];
    for (row, &target) in x.iter().zip(y) {
        for i in 0..p {
            for j in i..p {
                a[i][j] += row[i] * row[j] / nf;
            }
            a[i][p] += row[i] / nf;
            b[i] += row[i] * target / nf;
        }
        b[p] += target / nf;
    }
    a[p][p] = 1.0;
    for i in 0..p + 1 {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    for (i, row) in a.iter_mut().enumerate().take(p) {
        row[i] += lambda;
    }
    match solve(a.clone(), b.clone()) {
        Ok(w) => Ok(split(w)),
        Err(Error::SingularSystem) if lambda == 0.0 => {
            for (i, row) in a.iter_mut().enumerate().take(p) {
                row[i] += 1e-10;
            }
            solve(a, b).map(split)
        }
        Err(e) => Err(e),
    }
}

fn split(mut w: Vec<f64>) -> LinearModel {
    let intercept = w.pop().unwrap();
    LinearModel {
        coefficients: w,
        intercept,
    }
}
