//! File formats, configuration, synthetic motion generators, scenario
//! providers and the command implementations behind the `occu` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod genmotion;
pub mod report;
pub mod scene;

/// Exit codes of the `occu` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Some items of a batch failed; the rest completed and were written.
    Partial,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Partial => 2,
        }
    }
}
