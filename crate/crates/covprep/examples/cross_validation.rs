//! Grid-search every model family with chronological k-fold cross-validation
//! on a synthetic series and print the winning hyperparameters per family.

use covprep::model::cv::{default_grid, kfold_grid_search, MODEL_FAMILIES, UNIMPLEMENTED_FAMILIES};
use covprep::rng::rng_for;
use rand::Rng;

fn main() -> covprep::Result<()> {
    let n = 400;
    let mut rng = rng_for(5, "example-cv");
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / 40.0;
        let a = t.sin();
        let b = (0.5 * t).cos();
        x.push(vec![a, b, rng.random_range(-1.0..1.0)]);
        y.push(3.0 * a - 2.0 * b + rng.random_range(-0.2..0.2));
    }

    for family in MODEL_FAMILIES {
        if UNIMPLEMENTED_FAMILIES.contains(family) {
            println!("{family:<28} not implemented");
            continue;
        }
        let grid = default_grid(family, 11);
        let (best, table) = kfold_grid_search(&grid, &x, &y, 5)?;
        let best_entry = table
            .iter()
            .min_by(|a, b| a.mean_rmse.total_cmp(&b.mean_rmse))
            .unwrap();
        println!(
            "{family:<28} grid size {:>2}, best mean CV RMSE {:.4}, params {}",
            grid.len(),
            best_entry.mean_rmse,
            serde_json::to_string(&best.params).unwrap()
        );
    }
    Ok(())
}
