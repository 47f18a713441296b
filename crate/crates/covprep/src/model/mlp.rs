//! Fully-connected multilayer perceptron: ReLU hidden layers, linear output,
//! mini-batch gradient descent with momentum and validation early stopping.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::Matrix;

pub const MOMENTUM: f64 = 0.9;
pub const EARLY_STOP_DELTA: f64 = 1e-4;
pub const EARLY_STOP_PATIENCE: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpNet {
    /// weights[l][out][in]
    pub weights: Vec<Vec<Vec<f64>>>,
    pub biases: Vec<Vec<f64>>,
}

impl MlpNet {
    /// Glorot-uniform initialization from the given generator.
    pub fn init(sizes: &[usize], rng: &mut ChaCha8Rng) -> MlpNet {
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push(
                (0..fan_out)
                    .map(|_| (0..fan_in).map(|_| rng.random_range(-bound..bound)).collect())
                    .collect(),
            );
            biases.push(vec![0.0; fan_out]);
        }
        MlpNet { weights, biases }
    }

    fn layer_count(&self) -> usize {
        self.weights.len()
    }

    /// Forward pass returning the activations of every layer (input first).
    fn activations(&self, row: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![row.to_vec()];
        for l in 0..self.layer_count() {
            let prev = acts.last().unwrap();
            let last = l == self.layer_count() - 1;
            let out: Vec<f64> = self.weights[l]
                .iter()
                .zip(&self.biases[l])
                .map(|(wrow, b)| {
                    let z = wrow.iter().zip(prev).map(|(w, a)| w * a).sum::<f64>() + b;
                    if last {
                        z
                    } else {
                        z.max(0.0)
                    }
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    pub fn forward(&self, row: &[f64]) -> f64 {
        self.activations(row).last().unwrap()[0]
    }

    /// Half-MSE loss over the batch and its analytic gradients.
    pub fn loss_and_grads(
        &self,
        xb: &[&[f64]],
        yb: &[f64],
    ) -> (f64, Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) {
        let m = xb.len() as f64;
        let mut gw: Vec<Vec<Vec<f64>>> = self
            .weights
            .iter()
            .map(|l| l.iter().map(|r| vec![0.0; r.len()]).collect())
            .collect();
        let mut gb: Vec<Vec<f64>> = self.biases.iter().map(|l| vec![0.0; l.len()]).collect();
        let mut loss = 0.0;
        for (row, &target) in xb.iter().zip(yb) {
            let acts = self.activations(row);
            let pred = acts.last().unwrap()[0];
            let err = pred - target;
            loss += err * err / (2.0 * m);
            // delta of the linear output layer
            let mut delta = vec![err / m];
            for l in (0..self.layer_count()).rev() {
                let prev = &acts[l];
                for (j, &d) in delta.iter().enumerate() {
                    gb[l][j] += d;
                    for (i, &a) in prev.iter().enumerate() {
                        gw[l][j][i] += d * a;
                    }
                }
                if l > 0 {
                    // propagate through the ReLU of layer l-1
                    let mut next = vec![0.0; prev.len()];
                    for (j, &d) in delta.iter().enumerate() {
                        for (i, n) in next.iter_mut().enumerate() {
                            *n += d * self.weights[l][j][i];
                        }
                    }
                    for (n, &a) in next.iter_mut().zip(prev) {
                        if a <= 0.0 {
                            *n = 0.0;
                        }
                    }
                    delta = next;
                }
            }
        }
        (loss, gw, gb)
    }

    fn rmse(&self, x: &Matrix, y: &[f64], rows: &[usize]) -> f64 {
        let sse: f64 = rows
            .iter()
            .map(|&i| {
                let e = self.forward(&x[i]) - y[i];
                e * e
            })
            .sum();
        (sse / rows.len() as f64).sqrt()
    }
}

/// Train an MLP. The last tenth of the rows (chronologically) is held out as
/// an internal validation split for early stopping; the best-validation
/// weights are returned.
pub fn fit(
    x: &Matrix,
    y: &[f64],
    hidden: &[usize],
    learning_rate: f64,
    batch_size: usize,
    max_epochs: usize,
    rng: &mut ChaCha8Rng,
) -> MlpNet {
    let n = x.len();
    let p = x[0].len();
    let mut sizes = vec![p];
    sizes.extend_from_slice(hidden);
    sizes.push(1);
    let mut net = MlpNet::init(&sizes, rng);

    let n_val = if n >= 20 { (n / 10).max(1) } else { 0 };
    let train_rows: Vec<usize> = (0..n - n_val).collect();
    let val_rows: Vec<usize> = (n - n_val..n).collect();
    let monitor_rows: &[usize] = if n_val > 0 { &val_rows } else { &train_rows };

    let mut vel_w: Vec<Vec<Vec<f64>>> = net
        .weights
        .iter()
        .map(|l| l.iter().map(|r| vec![0.0; r.len()]).collect())
        .collect();
    let mut vel_b: Vec<Vec<f64>> = net.biases.iter().map(|l| vec![0.0; l.len()]).collect();

    let mut best = net.clone();
    let mut best_rmse = net.rmse(x, y, monitor_rows);
    let mut stale = 0usize;
    let mut order = train_rows.clone();
    for _ in 0..max_epochs {
        order.shuffle(rng);
        for batch in order.chunks(batch_size.max(1)) {
            let xb: Vec<&[f64]> = batch.iter().map(|&i| x[i].as_slice()).collect();
            let yb: Vec<f64> = batch.iter().map(|&i| y[i]).collect();
            let (_, gw, gb) = net.loss_and_grads(&xb, &yb);
            for l in 0..net.weights.len() {
                for j in 0..net.weights[l].len() {
                    for i in 0..net.weights[l][j].len() {
                        vel_w[l][j][i] = MOMENTUM * vel_w[l][j][i] - learning_rate * gw[l][j][i];
                        net.weights[l][j][i] += vel_w[l][j][i];
                    }
                    vel_b[l][j] = MOMENTUM * vel_b[l][j] - learning_rate * gb[l][j];
                    net.biases[l][j] += vel_b[l][j];
                }
            }
        }
        let e = net.rmse(x, y, monitor_rows);
        if e.is_finite() && e < best_rmse - EARLY_STOP_DELTA {
            best_rmse = e;
            best = net.clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= EARLY_STOP_PATIENCE {
                break;
            }
            if !e.is_finite() {
                break; // diverged; keep the best snapshot
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let mut rng = rng_for(42, "mlp-grad");
        let mut net = MlpNet::init(&[3, 6, 4, 1], &mut rng);
        // perturb biases so ReLUs are not all on the boundary
        for l in net.biases.iter_mut() {
            for b in l.iter_mut() {
                *b = rng.random_range(-0.1..0.1);
            }
        }
        let x: Matrix = (0..5)
            .map(|i| {
                let t = i as f64;
                vec![(t * 0.7).sin(), (t * 1.3).cos(), t * 0.2 - 0.5]
            })
            .collect();
        let y: Vec<f64> = x.iter().map(|r| r[0] - 2.0 * r[1] + 0.3 * r[2]).collect();
        let xb: Vec<&[f64]> = x.iter().map(|r| r.as_slice()).collect();
        let (_, gw, gb) = net.loss_and_grads(&xb, &y);

        let h = 1e-6;
        let mut checked = 0usize;
        for l in 0..net.weights.len() {
            for j in 0..net.weights[l].len() {
                for i in 0..net.weights[l][j].len() {
                    let orig = net.weights[l][j][i];
                    net.weights[l][j][i] = orig + h;
                    let (lp, _, _) = net.loss_and_grads(&xb, &y);
                    net.weights[l][j][i] = orig - h;
                    let (lm, _, _) = net.loss_and_grads(&xb, &y);
                    net.weights[l][j][i] = orig;
                    let fd = (lp - lm) / (2.0 * h);
                    let analytic = gw[l][j][i];
                    let scale = fd.abs().max(analytic.abs());
                    if scale > 1e-8 {
                        assert!(
                            (fd - analytic).abs() / scale < 1e-4,
                            "w[{l}][{j}][{i}]: fd {fd} vs analytic {analytic}"
                        );
                        checked += 1;
                    }
                }
                let orig = net.biases[l][j];
                net.biases[l][j] = orig + h;
                let (lp, _, _) = net.loss_and_grads(&xb, &y);
                net.biases[l][j] = orig - h;
                let (lm, _, _) = net.loss_and_grads(&xb, &y);
                net.biases[l][j] = orig;
                let fd = (lp - lm) / (2.0 * h);
                let analytic = gb[l][j];
                let scale = fd.abs().max(analytic.abs());
                if scale > 1e-8 {
                    assert!(
                        (fd - analytic).abs() / scale < 1e-4,
                        "b[{l}][{j}]: fd {fd} vs analytic {analytic}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 20, "too few informative gradient checks");
    }

    #[test]
    fn learns_a_linear_function() {
        let x: Matrix = (0..200)
            .map(|i| {
                let t = i as f64 / 200.0;
                vec![t, (t * 6.0).sin()]
            })
            .collect();
        let y: Vec<f64> = x.iter().map(|r| 3.0 * r[0] + r[1]).collect();
        let net = fit(&x, &y, &[16], 5e-2, 32, 300, &mut rng_for(1, "mlp-fit"));
        let rows: Vec<usize> = (0..x.len()).collect();
        let e = net.rmse(&x, &y, &rows);
        let sd = crate::stats::std_dev(&y);
        assert!(e < 0.3 * sd, "rmse {e} vs sd {sd}");
    }
}
