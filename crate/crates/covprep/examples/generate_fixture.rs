//! Generate the deterministic OWID-style fixture CSV used by the other
//! examples. Usage: `cargo run --example generate_fixture [-- <path> [seed]]`.

use std::path::PathBuf;

use covprep::synthetic::{generate_owid_fixture, FIXTURE_DAYS, FIXTURE_ISO};

fn main() -> covprep::Result<()> {
    let mut args = std::env::args().skip(1);
    let path: PathBuf = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| "target/examples/owid_fixture.csv".into());
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(42);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    generate_owid_fixture(&path, seed)?;
    println!(
        "wrote {} days for {} to {} (seed {seed})",
        FIXTURE_DAYS,
        FIXTURE_ISO,
        path.display()
    );
    Ok(())
}
