//! Deterministic generator for an India-like OWID-schema CSV fixture.
//!
//! The fixture reproduces the structural quirks the pipelines exist to fix:
//! weekly-lumped death reporting, missing patches, spike outliers, stale
//! derived columns, and a mix of empty / constant / variable columns.

use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use indexmap::IndexMap;
use rand::Rng;

use crate::error::Result;
use crate::rng::rng_for;

pub const FIXTURE_ISO: &str = "IND";
pub const FIXTURE_LOCATION: &str = "India";
pub const FIXTURE_DAYS: usize = 1680;
pub const FIXTURE_POPULATION: f64 = 1_417_173_173.0;

pub fn fixture_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 5).unwrap()
}

/// Names of the twelve intentionally all-missing columns.
pub const EMPTY_COLUMNS: &[&str] = &[
    "icu_patients",
    "icu_patients_per_million",
    "hosp_patients",
    "hosp_patients_per_million",
    "weekly_icu_admissions",
    "weekly_icu_admissions_per_million",
    "weekly_hosp_admissions",
    "weekly_hosp_admissions_per_million",
    "excess_mortality",
    "excess_mortality_cumulative",
    "excess_mortality_cumulative_absolute",
    "excess_mortality_cumulative_per_million",
];

/// The fourteen constant demographic columns (population is the fifteenth
/// constant numeric column).
pub const CONSTANT_COLUMNS: &[(&str, f64)] = &[
    ("population_density", 476.0),
    ("median_age", 28.2),
    ("aged_65_older", 5.989),
    ("aged_70_older", 3.414),
    ("gdp_per_capita", 6426.674),
    ("extreme_poverty", 21.2),
    ("cardiovasc_death_rate", 282.28),
    ("diabetes_prevalence", 10.39),
    ("female_smokers", 1.9),
    ("male_smokers", 20.6),
    ("handwashing_facilities", 59.55),
    ("hospital_beds_per_thousand", 0.53),
    ("life_expectancy", 69.66),
    ("human_development_index", 0.645),
];

type Col = Vec<Option<f64>>;

fn bump(t: f64, center: f64, width: f64, height: f64) -> f64 {
    let d = (t - center) / width;
    height * (-d * d).exp()
}

fn noise(rng: &mut impl Rng, scale: f64) -> f64 {
    scale * (rng.random::<f64>() - 0.5)
}

fn cumsum(raw: &Col) -> Col {
    let mut total = 0.0;
    raw.iter()
        .map(|v| {
            v.map(|x| {
                total += x;
                total
            })
        })
        .collect()
}

/// Centered 7-day mean, deliberately different from the trailing-window
/// convention the dependency graph enforces.
fn centered_smooth(raw: &Col) -> Col {
    let n = raw.len();
    (0..n)
        .map(|t| {
            let lo = t.saturating_sub(3);
            let hi = (t + 4).min(n);
            let vals: Vec<f64> = (lo..hi).filter_map(|i| raw[i]).collect();
            if vals.is_empty() {
                None
            } else {
                Some(vals.iter().sum::<f64>() / vals.len() as f64)
            }
        })
        .collect()
}

fn per_capita(raw: &Col, scale: f64) -> Col {
    raw.iter()
        .map(|v| v.map(|x| x * scale / FIXTURE_POPULATION))
        .collect()
}

/// Day from which the upstream snapshot stopped refreshing its derived
/// death columns; they repeat the last computed value from here on.
pub const STALE_DERIVED_FROM: usize = 1300;

fn freeze_tail(col: &Col, from: usize) -> Col {
    let frozen = col[from - 1];
    col.iter()
        .enumerate()
        .map(|(i, v)| if i >= from { frozen } else { *v })
        .collect()
}

fn build_columns(seed: u64) -> IndexMap<String, Col> {
    let n = FIXTURE_DAYS;
    let mut rng = rng_for(seed, "fixture");

    // --- epidemic curve ---------------------------------------------------
    let mut new_cases: Col = (0..n)
        .map(|i| {
            let t = i as f64;
            if i < 55 {
                return Some(0.0);
            }
            let waves = bump(t, 250.0, 80.0, 85_000.0)
                + bump(t, 480.0, 55.0, 350_000.0)
                + bump(t, 740.0, 35.0, 280_000.0)
                + bump(t, 1080.0, 50.0, 160_000.0)
                + bump(t, 1380.0, 60.0, 40_000.0)
                + 400.0;
            let v = waves * (1.0 + noise(&mut rng, 0.25));
            Some(v.max(0.0).round())
        })
        .collect();
    // reporting-dump spikes
    for &i in &[300usize, 512, 760, 910, 1101, 1422] {
        if let Some(v) = new_cases[i] {
            new_cases[i] = Some((v * 3.2 + 20_000.0).round());
        }
    }
    // missing patch
    for c in new_cases.iter_mut().take(710).skip(700) {
        *c = None;
    }

    // deaths follow cases with a lag and higher relative noise
    let mut new_deaths: Col = (0..n)
        .map(|i| {
            let src = new_cases[i.saturating_sub(12)].unwrap_or(0.0);
            let v = src * 0.0125 * (1.0 + noise(&mut rng, 0.35));
            Some(v.max(0.0).round())
        })
        .collect();
    // weekly-lumped reporting: six zero days then the week's sum
    let mut i = 1000;
    while i + 7 <= 1180 {
        let total: f64 = new_deaths[i..i + 7].iter().flatten().sum();
        for d in new_deaths.iter_mut().take(i + 6).skip(i) {
            *d = Some(0.0);
        }
        new_deaths[i + 6] = Some(total);
        i += 7;
    }
    for &i in &[530usize, 770] {
        if let Some(v) = new_deaths[i] {
            new_deaths[i] = Some((v * 6.0 + 3_000.0).round());
        }
    }
    for d in new_deaths.iter_mut().take(420).skip(415) {
        *d = None;
    }

    // tests scale with cases against a drifting positivity target
    let new_tests: Col = (0..n)
        .map(|i| {
            let t = i as f64;
            if i < 60 || (300..315).contains(&i) {
                return None;
            }
            let positivity = 0.03 + 0.10 * ((t / 400.0).sin().abs());
            let cases = new_cases[i].unwrap_or(0.0);
            let v = (cases.max(200.0) / positivity) * (1.0 + noise(&mut rng, 0.15));
            Some(v.max(0.0).round())
        })
        .collect();

    let reproduction_rate: Col = (0..n)
        .map(|i| {
            let t = i as f64;
            if !(60..1500).contains(&i) {
                return None;
            }
            Some(((1.0 + 0.6 * (t / 120.0).sin() + noise(&mut rng, 0.08)) * 100.0).round() / 100.0)
        })
        .collect();

    // vaccination program: logistic uptake from day 380
    let people_vaccinated: Col = (0..n)
        .map(|i| {
            if i < 380 {
                return None;
            }
            let t = (i as f64 - 380.0) / 180.0;
            let v = 1.02e9 / (1.0 + (-(t - 1.8)).exp());
            Some(v.round())
        })
        .collect();
    let people_fully_vaccinated: Col = (0..n)
        .map(|i| {
            if i < 440 {
                return None;
            }
            let t = (i as f64 - 440.0) / 190.0;
            Some((0.95e9 / (1.0 + (-(t - 1.9)).exp())).round())
        })
        .collect();
    let total_boosters: Col = (0..n)
        .map(|i| {
            if i < 720 {
                return None;
            }
            let t = (i as f64 - 720.0) / 160.0;
            Some((2.2e8 / (1.0 + (-(t - 2.0)).exp())).round())
        })
        .collect();
    let new_vaccinations: Col = (0..n)
        .map(|i| {
            if i < 380 {
                return None;
            }
            let t = i as f64;
            let v = (bump(t, 560.0, 120.0, 9.0e6) + bump(t, 800.0, 150.0, 6.5e6) + 1.0e5)
                * (1.0 + noise(&mut rng, 0.2));
            Some(v.max(0.0).round())
        })
        .collect();

    let stringency_index: Col = (0..n)
        .map(|i| {
            let v = match i {
                0..=59 => 11.0,
                60..=170 => 96.3,
                171..=330 => 74.5,
                331..=460 => 58.0,
                461..=560 => 82.0,
                561..=800 => 61.2,
                801..=1100 => 41.7,
                _ => 16.7,
            };
            Some(v)
        })
        .collect();

    // --- derived columns as a stale upstream snapshot would report them ----
    let total_cases = {
        let mut c = cumsum(&new_cases);
        // a data revision subtracted retroactively, breaking Eq.-style consistency
        for v in c.iter_mut().skip(900) {
            *v = v.map(|x| x - 15_000.0);
        }
        c
    };
    let total_deaths = freeze_tail(&cumsum(&new_deaths), STALE_DERIVED_FROM);
    let total_tests = cumsum(&new_tests);
    let total_vaccinations = cumsum(&new_vaccinations);

    let new_cases_smoothed = centered_smooth(&new_cases);
    let new_deaths_smoothed = freeze_tail(&centered_smooth(&new_deaths), STALE_DERIVED_FROM);
    let new_tests_smoothed = centered_smooth(&new_tests);
    let new_vaccinations_smoothed = centered_smooth(&new_vaccinations);
    // the source never ships new_people_vaccinated itself, only a smoothed trace
    let new_people_vaccinated_smoothed = {
        let daily: Col = (0..n)
            .map(|i| {
                if i == 0 {
                    people_vaccinated[0]
                } else {
                    match (people_vaccinated[i], people_vaccinated[i - 1]) {
                        (Some(a), Some(b)) => Some(a - b),
                        _ => None,
                    }
                }
            })
            .collect();
        centered_smooth(&daily)
    };

    // positive rate with a stale constant tail from day 1400 on
    let positive_rate: Col = {
        let ratio: Col = (0..n)
            .map(|i| match (new_cases[i], new_tests[i]) {
                (Some(c), Some(t)) if t > 0.0 => Some(c / t),
                _ => None,
            })
            .collect();
        let smooth = centered_smooth(&ratio);
        let frozen = smooth[1399];
        (0..n)
            .map(|i| {
                let v = if i >= 1400 { frozen } else { smooth[i] };
                v.map(|x| (x * 10_000.0).round() / 10_000.0)
            })
            .collect()
    };
    let tests_per_case: Col = positive_rate
        .iter()
        .map(|v| match v {
            Some(r) if *r > 0.0 => Some((1.0 / r * 10.0).round() / 10.0),
            _ => None,
        })
        .collect();

    let mut cols: IndexMap<String, Col> = IndexMap::new();
    let mut put = |name: &str, col: Col| {
        cols.insert(name.to_string(), col);
    };
    put("new_cases", new_cases.clone());
    put("new_deaths", new_deaths.clone());
    put("new_tests", new_tests.clone());
    put("new_vaccinations", new_vaccinations.clone());
    put("reproduction_rate", reproduction_rate);
    put("people_vaccinated", people_vaccinated.clone());
    put("people_fully_vaccinated", people_fully_vaccinated.clone());
    put("total_boosters", total_boosters.clone());
    put("stringency_index", stringency_index);

    put("total_cases", total_cases.clone());
    put("total_deaths", total_deaths.clone());
    put("total_tests", total_tests.clone());
    put("total_vaccinations", total_vaccinations.clone());
    put("new_cases_smoothed", new_cases_smoothed.clone());
    put("new_deaths_smoothed", new_deaths_smoothed.clone());
    put("new_tests_smoothed", new_tests_smoothed.clone());
    put("new_vaccinations_smoothed", new_vaccinations_smoothed.clone());
    put("new_people_vaccinated_smoothed", new_people_vaccinated_smoothed.clone());
    put("new_cases_per_million", per_capita(&new_cases, 1e6));
    put(
        "new_deaths_per_million",
        freeze_tail(&per_capita(&new_deaths, 1e6), STALE_DERIVED_FROM),
    );
    put("total_cases_per_million", per_capita(&total_cases, 1e6));
    put("total_deaths_per_million", per_capita(&total_deaths, 1e6));
    put("new_cases_smoothed_per_million", per_capita(&new_cases_smoothed, 1e6));
    put("new_deaths_smoothed_per_million", per_capita(&new_deaths_smoothed, 1e6));
    put(
        "new_vaccinations_smoothed_per_million",
        per_capita(&new_vaccinations_smoothed, 1e6),
    );
    put("total_tests_per_thousand", per_capita(&total_tests, 1e3));
    put("new_tests_per_thousand", per_capita(&new_tests, 1e3));
    put("new_tests_smoothed_per_thousand", per_capita(&new_tests_smoothed, 1e3));
    put("total_vaccinations_per_hundred", per_capita(&total_vaccinations, 1e2));
    put("people_vaccinated_per_hundred", per_capita(&people_vaccinated, 1e2));
    put(
        "people_fully_vaccinated_per_hundred",
        per_capita(&people_fully_vaccinated, 1e2),
    );
    put("total_boosters_per_hundred", per_capita(&total_boosters, 1e2));
    put(
        "new_people_vaccinated_smoothed_per_hundred",
        per_capita(&new_people_vaccinated_smoothed, 1e2),
    );
    put("positive_rate", positive_rate);
    put("tests_per_case", tests_per_case);

    put("population", vec![Some(FIXTURE_POPULATION); n]);
    for (name, value) in CONSTANT_COLUMNS {
        put(name, vec![Some(*value); n]);
    }
    for name in EMPTY_COLUMNS {
        put(name, vec![None; n]);
    }
    cols
}

/// Write the fixture CSV. Identical (path-independent) bytes for identical
/// seeds.
pub fn generate_owid_fixture(path: &Path, seed: u64) -> Result<()> {
    let cols = build_columns(seed);
    let start = fixture_start_date();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);

    let names: Vec<&String> = cols.keys().collect();
    let mut header = String::from("iso_code,continent,location,date,tests_units");
    for name in &names {
        header.push(',');
        header.push_str(name);
    }
    writeln!(out, "{header}")?;

    for i in 0..FIXTURE_DAYS {
        let date = start + chrono::Days::new(i as u64);
        let tests_units = if i >= 60 { "tests performed" } else { "" };
        let mut line = format!("{FIXTURE_ISO},Asia,{FIXTURE_LOCATION},{date},{tests_units}");
        for name in &names {
            line.push(',');
            if let Some(v) = cols[*name][i] {
                line.push_str(&format!("{v}"));
            }
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}
