//! One direct-method step by full rescan. Slow and obviously correct; the
//! incremental engine is tested against it.

use rand::Rng;
use rand_distr::Exp1;

use crate::model::{InsertionSystem, MonomerId, Polymer};

#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub polymer: Polymer,
    pub elapsed: f64,
    pub steps: u64,
}

impl SimState {
    pub fn initial(system: &InsertionSystem) -> Self {
        SimState {
            polymer: Polymer::initial(system),
            elapsed: 0.0,
            steps: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Inserted {
        state: SimState,
        gap: usize,
        monomer: MonomerId,
        wait: f64,
    },
    Terminal,
}

pub fn step(state: &SimState, system: &InsertionSystem, rng: &mut impl Rng) -> StepOutcome {
    let pairs = state.polymer.admissible_pairs(system);
    if pairs.is_empty() {
        return StepOutcome::Terminal;
    }
    let rates: Vec<f64> = pairs.iter().map(|&(_, m)| system.monomer(m).rate()).collect();
    let total: f64 = rates.iter().sum();
    let wait = rng.sample::<f64, _>(Exp1) / total;
    let mut target = rng.random::<f64>() * total;
    let mut pick = pairs.len() - 1;
    for (i, r) in rates.iter().enumerate() {
        if target < *r {
            pick = i;
            break;
        }
        target -= r;
    }
    let (gap, monomer) = pairs[pick];
    let polymer = state
        .polymer
        .insert(system, gap, monomer)
        .expect("admissible pair inserts");
    StepOutcome::Inserted {
        state: SimState {
            polymer,
            elapsed: state.elapsed + wait,
            steps: state.steps + 1,
        },
        gap,
        monomer,
        wait,
    }
}
