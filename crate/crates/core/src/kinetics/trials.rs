//! Independent runs fanned out over a thread pool, with per-seed rows and
//! summary statistics.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::engine::{Caps, Engine, Options, Termination};
use crate::model::InsertionSystem;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialRow {
    pub seed: u64,
    pub steps: u64,
    /// Time of the last insertion for terminal runs; clock at the cap
    /// otherwise.
    pub completion_time: f64,
    pub termination: Termination,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    /// Sorted by seed.
    pub rows: Vec<TrialRow>,
    pub mean: f64,
    pub variance: f64,
    /// Seeds of runs stopped by a cap.
    pub non_terminal: Vec<u64>,
}

impl TrialStats {
    pub fn from_rows(mut rows: Vec<TrialRow>) -> TrialStats {
        rows.sort_by_key(|r| r.seed);
        let n = rows.len() as f64;
        let mean = rows.iter().map(|r| r.completion_time).sum::<f64>() / n;
        let variance = if rows.len() > 1 {
            rows.iter().map(|r| (r.completion_time - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let non_terminal = rows
            .iter()
            .filter(|r| r.termination != Termination::Terminal)
            .map(|r| r.seed)
            .collect();
        TrialStats {
            rows,
            mean,
            variance,
            non_terminal,
        }
    }

    pub fn all_terminal(&self) -> bool {
        self.non_terminal.is_empty()
    }

    pub fn std_error(&self) -> f64 {
        (self.variance / self.rows.len() as f64).sqrt()
    }

    /// Empirical quantile by linear interpolation between order statistics.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut times: Vec<f64> = self.rows.iter().map(|r| r.completion_time).collect();
        times.sort_by(f64::total_cmp);
        quantile_sorted(&times, q)
    }

    /// Fraction of runs slower than `factor` times the mean.
    pub fn tail_fraction(&self, factor: f64) -> f64 {
        let cut = factor * self.mean;
        let slow = self.rows.iter().filter(|r| r.completion_time > cut).count();
        slow as f64 / self.rows.len() as f64
    }

    /// Trial CSV; `r` is the counter bound, left empty for other systems.
    pub fn to_csv(&self, r: Option<usize>) -> String {
        let mut out = String::from("r,seed,steps,completion_time,terminated\n");
        let r = r.map(|r| r.to_string()).unwrap_or_default();
        for row in &self.rows {
            writeln!(
                out,
                "{r},{},{},{},{}",
                row.seed,
                row.steps,
                row.completion_time,
                row.termination == Termination::Terminal
            )
            .unwrap();
        }
        out
    }
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn run_row(system: &InsertionSystem, seed: u64, caps: Caps) -> TrialRow {
    run_observed(system, seed, caps, Options::default(), |_, _| ()).0
}

/// One run; `observe` inspects the finished engine before it is dropped.
pub fn run_observed<T>(
    system: &InsertionSystem,
    seed: u64,
    caps: Caps,
    options: Options,
    observe: impl FnOnce(&Engine<'_>, Termination) -> T,
) -> (TrialRow, T) {
    let mut engine = Engine::new(system, seed, options);
    let termination = engine.run(caps);
    let completion_time = match termination {
        Termination::Terminal => engine.last_event_time().unwrap_or(0.0).max(0.0),
        _ => engine.time(),
    };
    let row = TrialRow {
        seed,
        steps: engine.steps(),
        completion_time,
        termination,
    };
    let extra = observe(&engine, termination);
    (row, extra)
}

pub fn trials(system: &InsertionSystem, seeds: &[u64], caps: Caps) -> TrialStats {
    trials_observed(system, seeds, caps, Options::default(), |_, _| ()).0
}

/// Runs every seed in parallel. Results come back in seed order whatever
/// the scheduling.
pub fn trials_observed<T: Send>(
    system: &InsertionSystem,
    seeds: &[u64],
    caps: Caps,
    options: Options,
    observe: impl Fn(&Engine<'_>, Termination) -> T + Sync,
) -> (TrialStats, Vec<T>) {
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let results: Vec<(TrialRow, T)> = sorted
        .par_iter()
        .map(|&seed| {
            // times are only needed for the completion clock
            let opts = Options {
                record_times: true,
                ..options
            };
            run_observed(system, seed, caps, opts, &observe)
        })
        .collect();
    let (rows, extras): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    (TrialStats::from_rows(rows), extras)
}

/// `count` consecutive seeds starting at `first`.
pub fn seed_range(first: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| first + i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::Counter;
    use crate::kinetics::trace;

    #[test]
    fn single_trial_reproduces_run() {
        let c = Counter::generate(1).unwrap();
        let stats = trials(&c.system, &[17], Caps::none());
        let t = trace::run(&c.system, 17, Caps::none());
        assert_eq!(stats.rows.len(), 1);
        assert_eq!(stats.rows[0].steps, t.events.len() as u64);
        assert_eq!(stats.rows[0].completion_time, t.events.last().unwrap().time);
        assert_eq!(stats.mean, stats.rows[0].completion_time);
    }

    #[test]
    fn rows_sorted_and_capped_runs_flagged() {
        let c = Counter::generate(1).unwrap();
        let stats = trials(&c.system, &[5, 3, 4, 3], Caps::steps(100));
        let seeds: Vec<u64> = stats.rows.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![3, 4, 5]);
        assert_eq!(stats.non_terminal, vec![3, 4, 5]);
        let csv = stats.to_csv(Some(1));
        assert_eq!(csv.lines().next().unwrap(), "r,seed,steps,completion_time,terminated");
        assert!(csv.lines().nth(1).unwrap().starts_with("1,3,100,"));
        assert!(csv.lines().nth(1).unwrap().ends_with(",false"));
    }

    #[test]
    fn statistics_recompute_from_rows() {
        let c = Counter::generate(1).unwrap();
        let stats = trials(&c.system, &seed_range(0, 20), Caps::none());
        assert!(stats.all_terminal());
        let again = TrialStats::from_rows(stats.rows.iter().rev().copied().collect());
        assert_eq!(again, stats);
        assert!(stats.quantile(0.0) <= stats.quantile(0.5));
        assert!(stats.quantile(0.5) <= stats.quantile(1.0));
    }

    #[test]
    fn quantile_interpolates() {
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile_sorted(&[7.0], 0.9), 7.0);
    }
}
