pub mod grammars;
pub mod model;
pub mod counter;
pub mod kinetics;
pub mod explorer;
pub mod format;
pub mod cli;
