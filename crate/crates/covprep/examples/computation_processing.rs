//! Recompute derived columns from their inputs via the dependency graph, so
//! cumulative totals, smoothed series, and rates are internally consistent
//! after imputation and outlier repair changed the base columns.

use covprep::derive::{build_default_graph, run_computation_processing};
use covprep::impute::{
    linear_extrapolate, linear_interpolate, zero_fill, ExtrapolationMode,
};
use covprep::ingest::{group_columns, parse_owid_csv, ColumnGroup};
use covprep::synthetic::{generate_owid_fixture, FIXTURE_ISO};

fn main() -> covprep::Result<()> {
    let dir = std::path::Path::new("target/examples");
    std::fs::create_dir_all(dir)?;
    let input = dir.join("owid_fixture.csv");
    generate_owid_fixture(&input, 42)?;
    let frames = parse_owid_csv(&input)?;
    let mut frame = frames[FIXTURE_ISO].clone();

    // densify the graph's base inputs
    let groups = group_columns(&frame);
    for (name, group) in &groups {
        if *group == ColumnGroup::Remaining {
            continue;
        }
        let dense = zero_fill(&linear_extrapolate(
            &linear_interpolate(&frame.columns[name.as_str()]),
            ExtrapolationMode::Linear,
        ));
        frame.columns.insert(name.clone(), dense);
    }

    let graph = build_default_graph();
    println!("dependency graph: {} specs, execution order:", graph.specs.len());
    for spec in graph.execution_order() {
        println!("  order {} {:<35} <- {:?}", spec.order, spec.target, spec.inputs);
    }

    // before: the source's total_cases carries a -15000 revision that breaks
    // consistency with new_cases
    let inconsistency = |f: &covprep::SeriesFrame| -> usize {
        let new: Vec<f64> = f.columns["new_cases"].iter().map(|c| c.unwrap_or(0.0)).collect();
        let mut acc = 0.0;
        f.columns["total_cases"]
            .iter()
            .zip(&new)
            .filter(|(t, n)| {
                acc += *n;
                t.map(|t| (t - acc).abs() > 1e-6).unwrap_or(false)
            })
            .count()
    };
    println!("\ninconsistent total_cases days before: {}", inconsistency(&frame));
    let processed = run_computation_processing(&frame, &graph)?;
    println!("inconsistent total_cases days after:  {}", inconsistency(&processed));
    println!(
        "new_people_vaccinated created: {}",
        processed.columns.contains_key("new_people_vaccinated")
    );

    std::fs::write(dir.join("graph.json"), graph.to_json()?)?;
    println!("graph written to {}", dir.join("graph.json").display());
    Ok(())
}
