//! Stochastic growth under the standard kinetic model: every admissible
//! (site, monomer type) pair fires after an exponential time whose rate is
//! the monomer's concentration.

pub mod engine;
pub mod law;
pub mod step;
pub mod trace;
pub mod trials;

pub use engine::{Audit, Caps, Engine, MultiCandidate, Options, Termination, Weights, RNG_NAME};
pub use law::{CompletionLaw, LawError, LawOptions};
pub use step::{step, SimState, StepOutcome};
pub use trace::{run, Trace, TraceError, TraceEvent};
pub use trials::{seed_range, trials, trials_observed, TrialRow, TrialStats};
