//! Compare global and rolling-window z-score outlier detection on new_cases,
//! and show the two repair strategies (interpolation vs winsorizing).

use covprep::impute::{
    linear_extrapolate, linear_interpolate, zero_fill, ExtrapolationMode,
};
use covprep::ingest::parse_owid_csv;
use covprep::outlier::{
    global_zscore_outliers, replace_by_interpolation, rolling_zscore_outliers, winsorize_local,
};
use covprep::synthetic::{generate_owid_fixture, FIXTURE_ISO};

fn main() -> covprep::Result<()> {
    let dir = std::path::Path::new("target/examples");
    std::fs::create_dir_all(dir)?;
    let input = dir.join("owid_fixture.csv");
    generate_owid_fixture(&input, 42)?;
    let frames = parse_owid_csv(&input)?;
    let raw = &frames[FIXTURE_ISO].columns["new_cases"];

    // outlier detection expects a dense series, so impute first
    let series = zero_fill(&linear_extrapolate(
        &linear_interpolate(raw),
        ExtrapolationMode::Linear,
    ));

    let z_th = 2.0;
    let window = 30;
    let global = global_zscore_outliers(&series, z_th);
    let local = rolling_zscore_outliers(&series, window, z_th)?;
    println!(
        "new_cases: {} global outliers (z > {z_th}), {} local outliers (window {window})",
        global.len(),
        local.len()
    );

    let interpolated = replace_by_interpolation(&series, &local);
    let winsorized = winsorize_local(&series, &local, window, z_th);
    for &i in local.iter().take(5) {
        println!(
            "  day {i}: {:.1} -> interpolated {:.1}, winsorized {:.1}",
            series[i].unwrap(),
            interpolated[i].unwrap(),
            winsorized[i].unwrap()
        );
    }
    Ok(())
}
