//! Fit each implemented model family directly on a small dataset, compare
//! in-sample RMSE, and round-trip one trained model through JSON.

use covprep::model::{fit, ModelParams, ModelSpec, TrainedModel};
use covprep::rng::rng_for;
use rand::Rng;

fn main() -> covprep::Result<()> {
    let n = 250;
    let mut rng = rng_for(2, "example-zoo");
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / 25.0;
        x.push(vec![t.sin(), t.cos(), rng.random_range(-1.0..1.0)]);
        y.push(2.0 * t.sin() - t.cos() + rng.random_range(-0.1..0.1));
    }
    let names = ["s", "c", "noise"].map(String::from).to_vec();

    let specs = [
        ModelParams::Ols,
        ModelParams::Ridge { lambda: 0.1 },
        ModelParams::Lasso { lambda: 0.01 },
        ModelParams::ElasticNet { lambda: 0.01, mix: 0.5 },
        ModelParams::Knn { k: 5 },
        ModelParams::DecisionTree { max_depth: Some(6), min_samples_leaf: 5 },
        ModelParams::RandomForest { n_trees: 20 },
        ModelParams::GradientBoosting { stages: 50, shrinkage: 0.1, depth: 3 },
        ModelParams::Mlp { hidden: vec![16], learning_rate: 1e-2, batch_size: 32, max_epochs: 100 },
    ];
    for params in specs {
        let spec = ModelSpec { params, seed: 0 };
        let model = fit(&spec, &x, &y, &names)?;
        let pred = model.predict(&x);
        let rmse = (pred
            .iter()
            .zip(&y)
            .map(|(p, t)| (p - t) * (p - t))
            .sum::<f64>()
            / n as f64)
            .sqrt();
        println!("{:<28} in-sample RMSE {rmse:.4}", spec.params.model_name());
    }

    // trained models serialize; predictions survive the round trip exactly
    let spec = ModelSpec { params: ModelParams::Ridge { lambda: 0.1 }, seed: 0 };
    let model = fit(&spec, &x, &y, &names)?;
    let restored = TrainedModel::from_json(&model.to_json()?)?;
    assert_eq!(model.predict(&x), restored.predict(&x));
    println!("\nJSON round trip reproduces predictions bit for bit");
    Ok(())
}
