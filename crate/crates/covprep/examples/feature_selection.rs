//! Iterative feature selection on a small synthetic regression problem:
//! correlation pre-filter, then combined importance (permutation, mutual
//! information, single-feature impact) with VIF-driven removal, and a final
//! lasso refinement. The full trace is printed as JSON.

use covprep::rng::rng_for;
use covprep::select::{iterative_feature_selection, FeatureMatrix};
use rand::Rng;

fn main() -> covprep::Result<()> {
    let n = 300;
    let mut rng = rng_for(3, "example-select");
    let mut noise = || -> f64 { rng.random_range(-0.5..0.5) };

    // x0, x1 drive the target; x2 duplicates x0 (collinear); x3 is noise
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / n as f64;
        let x0 = (25.0 * t).sin() + noise() * 0.1;
        let x1 = t * 4.0 + noise() * 0.1;
        let x2 = x0 + noise() * 0.01;
        let x3 = noise();
        rows.push(vec![x0, x1, x2, x3]);
        y.push(2.0 * x0 - x1 + noise() * 0.05);
    }
    let names = ["driver_a", "trend", "driver_a_copy", "noise"]
        .map(String::from)
        .to_vec();
    let fm = FeatureMatrix::new(names, rows, y)?;

    let (selected, trace) = iterative_feature_selection(&fm, 10.0, 0.8, 7)?;
    println!("selected features: {selected:?}");
    for (i, it) in trace.iterations.iter().enumerate() {
        match (&it.removed, &it.reason) {
            (Some(name), Some(reason)) => {
                println!("iteration {i}: removed {name} ({reason:?})")
            }
            _ => println!("iteration {i}: nothing removed, selection converged"),
        }
        for r in &it.records {
            println!(
                "    {:<15} pfi {:>7.4}  mi {:>7.4}  sfi {:>7.4}  vif {:>10.3}  combined {:.4}",
                r.feature, r.pfi, r.mi, r.sfi, r.vif, r.combined
            );
        }
    }
    println!("\ntrace JSON:\n{}", serde_json::to_string_pretty(&trace).unwrap());
    Ok(())
}
