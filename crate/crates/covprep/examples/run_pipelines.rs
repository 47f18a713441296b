//! End-to-end run of both pipelines on the synthetic fixture, with the
//! comparison artifacts written to target/examples/pipelines/. A reduced
//! hyperparameter grid keeps the run short; drop `grid_overrides` to use the
//! full default grids.

use indexmap::IndexMap;

use covprep::eval::SplitSpec;
use covprep::impute::ExtrapolationMode;
use covprep::model::{ModelParams, ModelSpec};
use covprep::pipeline::{compare, PipelineConfig, PipelineKind};
use covprep::synthetic::{generate_owid_fixture, FIXTURE_ISO};

fn small_grids() -> IndexMap<String, Vec<ModelSpec>> {
    let one = |params: ModelParams| vec![ModelSpec { params, seed: 0 }];
    let mut grids = IndexMap::new();
    grids.insert("LinearRegression".into(), one(ModelParams::Ols));
    grids.insert("Ridge".into(), one(ModelParams::Ridge { lambda: 0.1 }));
    grids.insert("Lasso".into(), one(ModelParams::Lasso { lambda: 0.01 }));
    grids.insert(
        "ElasticNet".into(),
        one(ModelParams::ElasticNet { lambda: 0.01, mix: 0.5 }),
    );
    grids.insert("KNeighborsRegressor".into(), one(ModelParams::Knn { k: 5 }));
    grids.insert(
        "DecisionTreeRegressor".into(),
        one(ModelParams::DecisionTree { max_depth: Some(8), min_samples_leaf: 5 }),
    );
    grids.insert(
        "RandomForestRegressor".into(),
        one(ModelParams::RandomForest { n_trees: 20 }),
    );
    grids.insert(
        "GradientBoostingRegressor".into(),
        one(ModelParams::GradientBoosting { stages: 50, shrinkage: 0.1, depth: 3 }),
    );
    grids.insert(
        "MLPRegressor".into(),
        one(ModelParams::Mlp {
            hidden: vec![16],
            learning_rate: 1e-3,
            batch_size: 32,
            max_epochs: 60,
        }),
    );
    grids
}

fn main() -> covprep::Result<()> {
    let dir = std::path::Path::new("target/examples/pipelines");
    std::fs::create_dir_all(dir)?;
    let input = dir.join("owid_fixture.csv");
    generate_owid_fixture(&input, 42)?;

    let cfg = PipelineConfig {
        input,
        location: FIXTURE_ISO.to_string(),
        start: None,
        end: None,
        pipeline: PipelineKind::Compare,
        target: "new_deaths".to_string(),
        corr_th: 0.8,
        vif_th: 10.0,
        z_th: 2.0,
        window: 30,
        split: SplitSpec::default(),
        seed: 7,
        out: dir.join("out"),
        extrapolation: ExtrapolationMode::Linear,
        grid_overrides: small_grids(),
        outlier_replacement: None,
    };

    let (standard, custom) = compare(&cfg)?;
    println!(
        "standard pipeline selected {} features: {:?}",
        standard.selected_features.len(),
        standard.selected_features
    );
    println!(
        "custom pipeline selected {} features: {:?}",
        custom.selected_features.len(),
        custom.selected_features
    );

    println!("\ncomparison (test RMSE ascending per pipeline):");
    print!("{}", std::fs::read_to_string(cfg.out.join("compare.csv"))?);
    println!("\nartifacts in {}", cfg.out.display());
    Ok(())
}
