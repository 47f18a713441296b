//! Missing-value imputation (linear interpolation, boundary extrapolation,
//! zero fill) and weekly reporting-pattern correction by even redistribution.

use crate::frame::Cell;
use serde::{Deserialize, Serialize};

/// How boundary gaps are extended when at least two points are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationMode {
    /// Extend the line through the two nearest known points.
    #[default]
    Linear,
    /// Repeat the nearest known value.
    Constant,
}

/// A run of zero days ending in one lump-sum report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeeklyBlock {
    pub start_index: usize,
    pub length: usize,
    pub total: f64,
}

/// Fill every interior missing run bounded by known values on both sides with
/// the straight line between the bounds. Leading/trailing missing untouched.
pub fn linear_interpolate(series: &[Cell]) -> Vec<Cell> {
    let mut out = series.to_vec();
    let mut prev_known: Option<usize> = None;
    for i in 0..out.len() {
        if out[i].is_some() {
            if let Some(p) = prev_known {
                if i > p + 1 {
                    let a = out[p].unwrap();
                    let b = out[i].unwrap();
                    let span = (i - p) as f64;
                    for j in (p + 1)..i {
                        out[j] = Some(a + (b - a) * ((j - p) as f64) / span);
                    }
                }
            }
            prev_known = Some(i);
        }
    }
    out
}

/// Fill leading/trailing missing values by extending through the nearest two
/// known points (or repeating the nearest known value in constant mode).
/// No-op when fewer than two values are known, except that constant mode
/// still fills from a single known point.
pub fn linear_extrapolate(series: &[Cell], mode: ExtrapolationMode) -> Vec<Cell> {
    let mut out = series.to_vec();
    let known: Vec<usize> = out
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|_| i))
        .collect();
    if known.is_empty() {
        return out;
    }
    if known.len() == 1 {
        // Only one anchor: a line is undefined, fall back to constant tails.
        if mode == ExtrapolationMode::Constant {
            let v = out[known[0]];
            for cell in out.iter_mut() {
                if cell.is_none() {
                    *cell = v;
                }
            }
        }
        return out;
    }
    let (first, second) = (known[0], known[1]);
    let (last, before_last) = (known[known.len() - 1], known[known.len() - 2]);
    for i in 0..first {
        out[i] = Some(match mode {
            ExtrapolationMode::Linear => {
                let slope = (out[second].unwrap() - out[first].unwrap())
                    / ((second - first) as f64);
                out[first].unwrap() - slope * ((first - i) as f64)
            }
            ExtrapolationMode::Constant => out[first].unwrap(),
        });
    }
    for i in (last + 1)..out.len() {
        out[i] = Some(match mode {
            ExtrapolationMode::Linear => {
                let slope = (out[last].unwrap() - out[before_last].unwrap())
                    / ((last - before_last) as f64);
                out[last].unwrap() + slope * ((i - last) as f64)
            }
            ExtrapolationMode::Constant => out[last].unwrap(),
        });
    }
    out
}

/// Replace every remaining missing value with 0.0. Never overwrites a
/// non-missing value.
pub fn zero_fill(series: &[Cell]) -> Vec<Cell> {
    series.iter().map(|v| Some(v.unwrap_or(0.0))).collect()
}

/// Scan left to right for maximal runs of (k-1) exact zeros followed by one
/// non-zero entry, k in 2..=7, non-overlapping. Missing entries disqualify a
/// candidate block.
pub fn detect_weekly_blocks(series: &[Cell]) -> Vec<WeeklyBlock> {
    let mut blocks = Vec::new();
    let mut claimed_until = 0usize; // first index not claimed by a prior block
    for i in 0..series.len() {
        let v = match series[i] {
            Some(v) if v != 0.0 => v,
            _ => continue,
        };
        // Count exact zeros immediately before i, up to 6, not crossing a
        // prior block.
        let mut zeros = 0usize;
        while zeros < 6 && i > zeros && i - zeros - 1 >= claimed_until {
            match series[i - zeros - 1] {
                Some(z) if z == 0.0 => zeros += 1,
                _ => break,
            }
        }
        if zeros >= 1 {
            let start = i - zeros;
            blocks.push(WeeklyBlock {
                start_index: start,
                length: zeros + 1,
                total: v,
            });
            claimed_until = i + 1;
        }
    }
    blocks
}

/// Redistribute each detected block's total evenly over its days. Blocks with
/// a negative lump value are left untouched (data-revision artifacts, not
/// weekly totals). The series sum is preserved.
pub fn weekly_pattern_impute(series: &[Cell]) -> Vec<Cell> {
    let mut out = series.to_vec();
    for b in detect_weekly_blocks(series) {
        if b.total < 0.0 {
            continue;
        }
        let per_day = b.total / b.length as f64;
        for cell in out.iter_mut().skip(b.start_index).take(b.length) {
            *cell = Some(per_day);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> Vec<Cell> {
        xs.iter().copied().map(Some).collect()
    }

    #[test]
    fn interpolate_midpoint_and_runs() {
        assert_eq!(
            linear_interpolate(&[Some(1.0), None, Some(3.0)]),
            v(&[1.0, 2.0, 3.0])
        );
        assert_eq!(
            linear_interpolate(&[None, Some(5.0), None]),
            vec![None, Some(5.0), None]
        );
        assert_eq!(
            linear_interpolate(&[Some(0.0), None, None, Some(9.0)]),
            v(&[0.0, 3.0, 6.0, 9.0])
        );
    }

    #[test]
    fn extrapolate_tails() {
        assert_eq!(
            linear_extrapolate(&[None, Some(2.0), Some(4.0)], ExtrapolationMode::Linear),
            v(&[0.0, 2.0, 4.0])
        );
        assert_eq!(
            linear_extrapolate(&[Some(1.0), Some(3.0), None], ExtrapolationMode::Linear),
            v(&[1.0, 3.0, 5.0])
        );
        assert_eq!(
            linear_extrapolate(&[None, None], ExtrapolationMode::Linear),
            vec![None, None]
        );
        // Constant mode repeats the boundary values.
        assert_eq!(
            linear_extrapolate(&[None, Some(2.0), Some(4.0), None], ExtrapolationMode::Constant),
            v(&[2.0, 2.0, 4.0, 4.0])
        );
        // Single known point: linear is a no-op, constant fills.
        assert_eq!(
            linear_extrapolate(&[None, Some(7.0)], ExtrapolationMode::Linear),
            vec![None, Some(7.0)]
        );
        assert_eq!(
            linear_extrapolate(&[None, Some(7.0)], ExtrapolationMode::Constant),
            v(&[7.0, 7.0])
        );
    }

    #[test]
    fn zero_fill_only_touches_missing() {
        assert_eq!(zero_fill(&[None]), v(&[0.0]));
        assert_eq!(zero_fill(&v(&[1.0, 1.5, 2.0])), v(&[1.0, 1.5, 2.0]));
        assert_eq!(zero_fill(&[None, Some(7.0)]), v(&[0.0, 7.0]));
    }

    #[test]
    fn block_detection_cases() {
        let b = detect_weekly_blocks(&v(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 70.0]));
        assert_eq!(
            b,
            vec![WeeklyBlock {
                start_index: 0,
                length: 7,
                total: 70.0
            }]
        );
        assert!(detect_weekly_blocks(&v(&[5.0, 6.0, 7.0])).is_empty());
        let b = detect_weekly_blocks(&v(&[
            0.0, 0.0, 21.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 14.0,
        ]));
        assert_eq!(
            b,
            vec![
                WeeklyBlock {
                    start_index: 0,
                    length: 3,
                    total: 21.0
                },
                WeeklyBlock {
                    start_index: 3,
                    length: 7,
                    total: 14.0
                }
            ]
        );
    }

    #[test]
    fn block_detection_skips_missing_and_singletons() {
        // Missing entry inside the zero run disqualifies the longer block.
        let series = vec![Some(0.0), None, Some(0.0), Some(9.0)];
        assert_eq!(
            detect_weekly_blocks(&series),
            vec![WeeklyBlock {
                start_index: 2,
                length: 2,
                total: 9.0
            }]
        );
        // A lone non-zero value with no zeros before it is not a block.
        assert!(detect_weekly_blocks(&v(&[9.0])).is_empty());
    }

    #[test]
    fn weekly_impute_redistributes_evenly() {
        assert_eq!(
            weekly_pattern_impute(&v(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 70.0])),
            v(&[10.0; 7])
        );
        assert_eq!(
            weekly_pattern_impute(&v(&[0.0, 0.0, 21.0])),
            v(&[7.0, 7.0, 7.0])
        );
        // Negative lump stays untouched.
        assert_eq!(
            weekly_pattern_impute(&v(&[0.0, -5.0])),
            v(&[0.0, -5.0])
        );
    }

    #[test]
    fn weekly_impute_is_idempotent_for_positive_blocks() {
        let s = v(&[3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 70.0, 2.0, 0.0, 8.0]);
        let once = weekly_pattern_impute(&s);
        let twice = weekly_pattern_impute(&once);
        assert_eq!(once, twice);
    }

    proptest! {
        #[test]
        fn weekly_impute_conserves_sum(raw in proptest::collection::vec(0u32..40, 1..80)) {
            // Build a series of zeros and positive lumps.
            let series: Vec<Cell> = raw
                .iter()
                .map(|&x| Some(if x < 30 { 0.0 } else { (x as f64) * 3.7 }))
                .collect();
            let sum_before: f64 = series.iter().flatten().sum();
            let imputed = weekly_pattern_impute(&series);
            let sum_after: f64 = imputed.iter().flatten().sum();
            let scale = sum_before.abs().max(1.0);
            prop_assert!(((sum_before - sum_after) / scale).abs() < 1e-12);
        }

        #[test]
        fn interpolation_reconstructs_lines_exactly(
            slope in -5.0f64..5.0,
            intercept in -100.0f64..100.0,
            mask in proptest::collection::vec(any::<bool>(), 4..60),
        ) {
            let line: Vec<f64> = (0..mask.len()).map(|i| intercept + slope * i as f64).collect();
            let mut gapped: Vec<Cell> = line
                .iter()
                .zip(&mask)
                .map(|(&v, &keep)| if keep { Some(v) } else { None })
                .collect();
            // Guarantee at least two known points so extrapolation is defined.
            gapped[0] = Some(line[0]);
            let last = gapped.len() - 1;
            gapped[last] = Some(line[last]);
            let rebuilt = linear_extrapolate(
                &linear_interpolate(&gapped),
                ExtrapolationMode::Linear,
            );
            for (got, want) in rebuilt.iter().zip(&line) {
                prop_assert!((got.unwrap() - want).abs() < 1e-9);
            }
        }

        #[test]
        fn zero_fill_never_overwrites(xs in proptest::collection::vec(
            proptest::option::of(-1e6f64..1e6), 0..50)) {
            let filled = zero_fill(&xs);
            for (orig, out) in xs.iter().zip(&filled) {
                match orig {
                    Some(v) => prop_assert_eq!(out.unwrap(), *v),
                    None => prop_assert_eq!(out.unwrap(), 0.0),
                }
            }
        }
    }
}
