//! Parse an OWID-style CSV, pick one location, and report how each numeric
//! column classifies (empty / constant / variable) and groups.

use covprep::ingest::{
    classify_columns, group_columns, parse_owid_csv, ColumnClass, ColumnGroup,
};
use covprep::synthetic::{generate_owid_fixture, FIXTURE_ISO};

fn main() -> covprep::Result<()> {
    let dir = std::path::Path::new("target/examples");
    std::fs::create_dir_all(dir)?;
    let input = dir.join("owid_fixture.csv");
    generate_owid_fixture(&input, 42)?;

    let frames = parse_owid_csv(&input)?;
    let frame = &frames[FIXTURE_ISO];
    println!(
        "{} ({}): {} days, {} numeric columns, population {:?}",
        frame.meta.location,
        frame.meta.iso_code,
        frame.dates.len(),
        frame.columns.len(),
        frame.population(),
    );

    let classes = classify_columns(frame);
    let groups = group_columns(frame);
    let count = |c: ColumnClass| classes.values().filter(|v| **v == c).count();
    println!(
        "classification: {} empty, {} constant, {} variable",
        count(ColumnClass::Empty),
        count(ColumnClass::Constant),
        count(ColumnClass::Variable),
    );

    println!("\nvariable columns and their preprocessing group:");
    for (name, class) in &classes {
        if *class != ColumnClass::Variable {
            continue;
        }
        let group = match groups[name.as_str()] {
            ColumnGroup::NewColumns => "new (weekly pattern)",
            ColumnGroup::Independent => "independent",
            ColumnGroup::Remaining => "remaining (derived/constant)",
        };
        println!("  {name:<40} {group}");
    }
    Ok(())
}
