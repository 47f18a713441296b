//! Outlier detection and processing: global fixed z-score over the whole
//! series, and local rolling-window z-score with winsorization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Cell;
use crate::impute::{linear_extrapolate, linear_interpolate, ExtrapolationMode};
use crate::stats::{mean, std_dev};

/// Minimum number of valid window points before a rolling z-score is trusted.
pub const MIN_WINDOW_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionMethod {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    Interpolation,
    Winsorize,
}

/// Per-column record of what was flagged and how it was processed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub column: String,
    pub method: DetectionMethod,
    pub window: Option<usize>,
    pub threshold: f64,
    pub indices: Vec<usize>,
    pub replaced_with: Replacement,
}

/// Indices where |x - mean| / std > z_th, with mean/std over all non-missing
/// values (population std). Empty when fewer than two values are present or
/// the deviation is zero.
pub fn global_zscore_outliers(series: &[Cell], z_th: f64) -> Vec<usize> {
    let present: Vec<f64> = series.iter().flatten().copied().collect();
    if present.len() < 2 {
        return Vec::new();
    }
    let m = mean(&present);
    let s = std_dev(&present);
    if s <= 0.0 {
        return Vec::new();
    }
    series
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|x| (i, x)))
        .filter(|(_, x)| ((x - m) / s).abs() > z_th)
        .map(|(i, _)| i)
        .collect()
}

/// Rolling (trailing, causal) z-score detection: index i is flagged when
/// |x_i - mu_i| / sigma_i > z_th, with mu/sigma over the non-missing entries
/// of window [i-window+1, i]. Windows with fewer than
/// [`MIN_WINDOW_POINTS`] valid points or zero deviation flag nothing.
pub fn rolling_zscore_outliers(
    series: &[Cell],
    window: usize,
    z_th: f64,
) -> Result<Vec<usize>> {
    if window < 3 {
        return Err(Error::WindowTooSmall(window));
    }
    let mut flagged = Vec::new();
    for i in 0..series.len() {
        let x = match series[i] {
            Some(x) => x,
            None => continue,
        };
        let lo = i.saturating_sub(window - 1);
        let vals: Vec<f64> = series[lo..=i].iter().flatten().copied().collect();
        if vals.len() < MIN_WINDOW_POINTS {
            continue;
        }
        let m = mean(&vals);
        let s = std_dev(&vals);
        if s <= 0.0 {
            continue;
        }
        if ((x - m) / s).abs() > z_th {
            flagged.push(i);
        }
    }
    Ok(flagged)
}

/// Set flagged entries to missing, then repair by linear interpolation and
/// extrapolation.
pub fn replace_by_interpolation(series: &[Cell], indices: &[usize]) -> Vec<Cell> {
    let mut s = series.to_vec();
    for &i in indices {
        s[i] = None;
    }
    linear_extrapolate(&linear_interpolate(&s), ExtrapolationMode::Linear)
}

/// Clamp each flagged x_i to the nearest bound of mu_i +/- z_th * sigma_i,
/// where mu/sigma are recomputed over the window excluding all flagged points.
/// A flagged point whose window lacks enough surviving values is left as is.
pub fn winsorize_local(
    series: &[Cell],
    indices: &[usize],
    window: usize,
    z_th: f64,
) -> Vec<Cell> {
    let flagged: std::collections::HashSet<usize> = indices.iter().copied().collect();
    let mut out = series.to_vec();
    for &i in indices {
        let x = match series[i] {
            Some(x) => x,
            None => continue,
        };
        let lo = i.saturating_sub(window - 1);
        let vals: Vec<f64> = (lo..=i)
            .filter(|j| !flagged.contains(j))
            .filter_map(|j| series[j])
            .collect();
        if vals.len() < 2 {
            continue;
        }
        let m = mean(&vals);
        let s = std_dev(&vals);
        let (lo_b, hi_b) = (m - z_th * s, m + z_th * s);
        out[i] = Some(x.clamp(lo_b, hi_b));
    }
    out
}
