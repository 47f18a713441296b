//! Cyclic coordinate descent for lasso and elastic net.
//!
//! Objective: (1/2n)||y - Xb - b0||^2 + lambda * (mix*||b||_1 + (1-mix)/2*||b||_2^2)
//! with the intercept handled by centering and left unpenalized.

use crate::model::linear::LinearModel;
use crate::model::Matrix;

pub const TOL: f64 = 1e-6;
pub const MAX_SWEEPS: usize = 10_000;

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Smallest lambda that zeroes every coefficient of the pure lasso (mix = 1).
pub fn lasso_lambda_max(x: &Matrix, y: &[f64]) -> f64 {
    let n = x.len();
    let p = if n == 0 { 0 } else { x[0].len() };
    let nf = n as f64;
    let xm: Vec<f64> = (0..p)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();
    let ym = y.iter().sum::<f64>() / nf;
    (0..p)
        .map(|j| {
            x.iter()
                .zip(y)
                .map(|(r, t)| (r[j] - xm[j]) * (t - ym))
                .sum::<f64>()
                .abs()
                / nf
        })
        .fold(0.0, f64::max)
}

/// Fit by cyclic coordinate descent. Returns the model and whether the sweep
/// loop converged (max coefficient change below [`TOL`]) before [`MAX_SWEEPS`].
pub fn fit_elastic_net(x: &Matrix, y: &[f64], lambda: f64, mix: f64) -> (LinearModel, bool) {
    let n = x.len();
    let p = if n == 0 { 0 } else { x[0].len() };
    let nf = n as f64;
    let xm: Vec<f64> = (0..p)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();
    let ym = y.iter().sum::<f64>() / nf;
    // centered columns, column-major
    let xc: Vec<Vec<f64>> = (0..p)
        .map(|j| x.iter().map(|r| r[j] - xm[j]).collect())
        .collect();
    let yc: Vec<f64> = y.iter().map(|t| t - ym).collect();
    let col_sq: Vec<f64> = xc.iter().map(|c| c.iter().map(|v| v * v).sum()).collect();

    let mut beta = vec![0.0; p];
    let mut residual = yc.clone();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut max_delta: f64 = 0.0;
        for j in 0..p {
            if col_sq[j] == 0.0 {
                continue;
            }
            let old = beta[j];
            // rho = (1/n) x_j' (r + x_j * old)
            let dot: f64 = xc[j].iter().zip(&residual).map(|(a, r)| a * r).sum();
            let rho = dot / nf + col_sq[j] / nf * old;
            let new = soft_threshold(rho, lambda * mix) / (col_sq[j] / nf + lambda * (1.0 - mix));
            if new != old {
                let delta = new - old;
                for (r, a) in residual.iter_mut().zip(&xc[j]) {
                    *r -= delta * a;
                }
                beta[j] = new;
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < TOL {
            converged = true;
            break;
        }
    }
    let intercept = ym - xm.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
    (
        LinearModel {
            coefficients: beta,
            intercept,
        },
        converged,
    )
}
