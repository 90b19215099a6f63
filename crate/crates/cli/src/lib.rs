//! Command-line front end for `densprob-core`: scenario files, the qmsets
//! demonstration and report rendering.

mod error;
pub mod report;
mod run;
pub mod scenario;

pub use error::CliError;
pub use report::{Output, RunReport, StepOutput};
pub use run::{bases_output, run_qmsets_demo, run_scenario, validate_scenario, Model, RunOptions};
pub use scenario::ScenarioFile;

pub mod bundled {
    pub const CARDS: &str = include_str!("../scenarios/cards.toml");
    pub const COIN: &str = include_str!("../scenarios/coin.toml");

    pub const NAMES: [&str; 2] = ["cards", "coin"];

    pub fn get(name: &str) -> Option<&'static str> {
        match name {
            "cards" => Some(CARDS),
            "coin" => Some(COIN),
            _ => None,
        }
    }
}
