//! CART regression tree: variance-reduction splits with exhaustive threshold
//! search over midpoints of sorted unique values.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone)]
pub struct TreeConfig {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features considered per split; `None` means all.
    pub mtry: Option<usize>,
}

struct Builder<'a> {
    x: &'a Matrix,
    y: &'a [f64],
    config: &'a TreeConfig,
    nodes: Vec<Node>,
}

/// Best split of `rows` on `feature`: (gain, threshold). Scans the sorted
/// column with prefix sums; thresholds are midpoints of consecutive distinct
/// values.
fn best_split_on_feature(
    x: &Matrix,
    y: &[f64],
    rows: &[usize],
    feature: usize,
    min_leaf: usize,
) -> Option<(f64, f64)> {
    let mut sorted: Vec<usize> = rows.to_vec();
    sorted.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]).then(a.cmp(&b)));
    let n = sorted.len();
    let total_sum: f64 = sorted.iter().map(|&i| y[i]).sum();
    let total_sq: f64 = sorted.iter().map(|&i| y[i] * y[i]).sum();
    let parent_sse = total_sq - total_sum * total_sum / n as f64;

    let mut best: Option<(f64, f64)> = None;
    let mut left_sum = 0.0;
    let mut left_sq = 0.0;
    for (cnt, win) in sorted.windows(2).enumerate() {
        let (i, j) = (win[0], win[1]);
        left_sum += y[i];
        left_sq += y[i] * y[i];
        let n_left = cnt + 1;
        let n_right = n - n_left;
        if x[i][feature] == x[j][feature] {
            continue; // no threshold between equal values
        }
        if n_left < min_leaf || n_right < min_leaf {
            continue;
        }
        let right_sum = total_sum - left_sum;
        let right_sq = total_sq - left_sq;
        let sse = (left_sq - left_sum * left_sum / n_left as f64)
            + (right_sq - right_sum * right_sum / n_right as f64);
        let gain = parent_sse - sse;
        let threshold = (x[i][feature] + x[j][feature]) / 2.0;
        // strictly-better keeps the first (lowest) threshold on ties
        if best.map_or(true, |(g, _)| gain > g) {
            best = Some((gain, threshold));
        }
    }
    best
}

impl Builder<'_> {
    fn build(&mut self, rows: &[usize], depth: usize, rng: &mut Option<&mut ChaCha8Rng>) -> usize {
        let n = rows.len();
        let mean = rows.iter().map(|&i| self.y[i]).sum::<f64>() / n as f64;
        let depth_reached = self
            .config
            .max_depth
            .is_some_and(|d| depth >= d);
        if depth_reached || n < 2 * self.config.min_samples_leaf.max(1) {
            return self.push(Node::Leaf { value: mean });
        }

        let p = self.x[0].len();
        let features: Vec<usize> = match (self.config.mtry, rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < p => {
                let mut all: Vec<usize> = (0..p).collect();
                all.shuffle(rng);
                let mut picked: Vec<usize> = all.into_iter().take(m).collect();
                picked.sort_unstable(); // keep first-feature tie order stable
                picked
            }
            _ => (0..p).collect(),
        };

        // strictly-better comparison keeps the first feature on gain ties
        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &features {
            if let Some((gain, thr)) =
                best_split_on_feature(self.x, self.y, rows, f, self.config.min_samples_leaf)
            {
                if best.map_or(true, |(g, _, _)| gain > g) {
                    best = Some((gain, f, thr));
                }
            }
        }
        let (gain, feature, threshold) = match best {
            Some(b) if b.0 > 1e-12 => b,
            _ => return self.push(Node::Leaf { value: mean }),
        };
        let _ = gain;

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.x[i][feature] <= threshold);
        let id = self.push(Node::Split {
            feature,
            threshold,
            left: 0,
            right: 0,
        });
        let left = self.build(&left_rows, depth + 1, rng);
        let right = self.build(&right_rows, depth + 1, rng);
        if let Node::Split {
            left: l, right: r, ..
        } = &mut self.nodes[id]
        {
            *l = left;
            *r = right;
        }
        id
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Fit a CART regression tree on the given rows. `rng` is only used for
/// per-split feature subsampling (random forest).
pub fn fit(x: &Matrix, y: &[f64], config: &TreeConfig, mut rng: Option<&mut ChaCha8Rng>) -> Tree {
    let rows: Vec<usize> = (0..x.len()).collect();
    fit_on_rows(x, y, &rows, config, &mut rng)
}

pub fn fit_on_rows(
    x: &Matrix,
    y: &[f64],
    rows: &[usize],
    config: &TreeConfig,
    rng: &mut Option<&mut ChaCha8Rng>,
) -> Tree {
    let mut b = Builder {
        x,
        y,
        config,
        nodes: Vec::new(),
    };
    b.build(rows, 0, rng);
    Tree { nodes: b.nodes }
}

impl Tree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut id = 0usize;
        loop {
            match &self.nodes[id] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}
