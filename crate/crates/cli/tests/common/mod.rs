//! Helpers shared by the CLI integration and acceptance tests.
#![allow(dead_code)] // each test target uses its own subset

pub mod oracles;

use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Path to the compiled `tegad` binary under test.
pub const BIN: &str = env!("CARGO_BIN_EXE_tegad");

/// Runs `tegad` with `args` and returns (exit code, stdout, stderr).
pub fn tegad<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let Output {
        status,
        stdout,
        stderr,
    } = Command::new(BIN).args(args).output().expect("spawn tegad");
    (
        status.code().unwrap_or(-1),
        String::from_utf8(stdout).expect("stdout is UTF-8"),
        String::from_utf8(stderr).expect("stderr is UTF-8"),
    )
}

/// Writes a two-column `DT,Usage` CSV, one row per value, timestamps
/// numbered from 0.
pub fn write_series(path: &Path, values: &[f64]) {
    let mut text = String::from("DT,Usage\n");
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{i},{v}\n"));
    }
    std::fs::write(path, text).expect("write series");
}

/// `epochs` repetitions of `pattern`; epochs listed in `reversed` are
/// played backwards (an easily detectable shape change).
pub fn patterned(pattern: &[f64], epochs: usize, reversed: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(pattern.len() * epochs);
    for e in 0..epochs {
        if reversed.contains(&e) {
            out.extend(pattern.iter().rev());
        } else {
            out.extend_from_slice(pattern);
        }
    }
    out
}

/// Observations per week at half-hour resolution: 48 per day × 7.
pub const OBS_PER_WEEK: usize = 336;

/// A synthetic half-hourly consumption series: `weeks` × 336 observations
/// with daily/weekly structure plus seeded noise. Weeks listed in
/// `tamper_weeks` get their daytime usage shifted into the night — the
/// kind of profile swap a tampered meter produces.
pub fn synthetic_energy(weeks: usize, seed: u64, tamper_weeks: &[usize]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(weeks * OBS_PER_WEEK);
    for week in 0..weeks {
        let offset = if tamper_weeks.contains(&week) {
            std::f64::consts::PI
        } else {
            0.0
        };
        for i in 0..OBS_PER_WEEK {
            let day_phase = (i % 48) as f64 / 48.0 * tau + offset;
            let week_phase = i as f64 / OBS_PER_WEEK as f64 * tau;
            let value = 1.2
                + 0.8 * (day_phase - 1.0).sin().max(0.0)
                + 0.3 * (2.0 * week_phase).sin().abs()
                + rng.gen_range(0.0..0.15);
            values.push(value);
        }
    }
    values
}
