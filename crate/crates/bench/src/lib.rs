//! Input generators shared by the benchmarks: deterministic synthetic
//! series shaped like the half-hourly consumption data the detector is
//! typically run on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tegad_core::TimeSeries;

/// Observations per week at half-hour resolution: 48 per day × 7.
pub const OBS_PER_WEEK: usize = 336;

/// A synthetic consumption series of `weeks` × 336 observations with
/// daily and weekly structure plus seeded noise. The same (weeks, seed)
/// always produces the same series.
pub fn weekly_series(weeks: usize, seed: u64) -> TimeSeries {
    let tau = std::f64::consts::TAU;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut timestamps = Vec::with_capacity(weeks * OBS_PER_WEEK);
    let mut values = Vec::with_capacity(weeks * OBS_PER_WEEK);
    for week in 0..weeks {
        for i in 0..OBS_PER_WEEK {
            let day_phase = (i % 48) as f64 / 48.0 * tau;
            let week_phase = i as f64 / OBS_PER_WEEK as f64 * tau;
            timestamps.push(format!("{week}-{i}"));
            values.push(
                1.2 + 0.8 * (day_phase - 1.0).sin().max(0.0)
                    + 0.3 * (2.0 * week_phase).sin().abs()
                    + rng.gen_range(0.0..0.15),
            );
        }
    }
    TimeSeries::new(timestamps, values).expect("generated series is valid")
}
