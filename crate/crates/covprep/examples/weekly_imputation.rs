//! Detect weekly reporting lumps (six zeros followed by a seven-day total)
//! in new_deaths and spread each lump evenly, then fill remaining gaps.

use covprep::impute::{
    detect_weekly_blocks, linear_extrapolate, linear_interpolate, weekly_pattern_impute,
    zero_fill, ExtrapolationMode,
};
use covprep::ingest::parse_owid_csv;
use covprep::synthetic::{generate_owid_fixture, FIXTURE_ISO};

fn main() -> covprep::Result<()> {
    let dir = std::path::Path::new("target/examples");
    std::fs::create_dir_all(dir)?;
    let input = dir.join("owid_fixture.csv");
    generate_owid_fixture(&input, 42)?;
    let frames = parse_owid_csv(&input)?;
    let frame = &frames[FIXTURE_ISO];
    let series = &frame.columns["new_deaths"];

    let blocks = detect_weekly_blocks(series);
    println!("found {} weekly blocks in new_deaths", blocks.len());
    for b in blocks.iter().take(3) {
        println!(
            "  days {}..{} lump total {:.1} -> {:.2} per day",
            b.start_index,
            b.start_index + b.length,
            b.total,
            b.total / b.length as f64
        );
    }

    let spread = weekly_pattern_impute(series);
    let filled = zero_fill(&linear_extrapolate(
        &linear_interpolate(&spread),
        ExtrapolationMode::Linear,
    ));

    let missing_before = series.iter().filter(|c| c.is_none()).count();
    let missing_after = filled.iter().filter(|c| c.is_none()).count();
    println!("missing cells: {missing_before} before, {missing_after} after");

    // the lump total is conserved by the even spread
    if let Some(b) = detect_weekly_blocks(series).first() {
        let sum: f64 = spread[b.start_index..b.start_index + b.length]
            .iter()
            .map(|c| c.unwrap())
            .sum();
        println!(
            "first block: original total {:.3}, spread total {:.3}",
            b.total, sum
        );
    }
    Ok(())
}
