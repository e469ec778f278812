//! Command line front ends for the engine: an HTTP service holding one
//! session per analyst, a line-oriented console and a parse inspector.

use std::path::Path;

use anyhow::Context;
use cnl_core::chronos::Timestamp;
use cnl_core::lexicon::LexicalResources;

pub mod api;
pub mod console;
pub mod inspect;

/// Where utterance times come from.
#[derive(Debug, Clone, Copy, Default)]
pub enum Clock {
    #[default]
    System,
    /// Every command happens at this instant. Used for golden transcripts.
    Fixed(Timestamp),
}

impl Clock {
    pub fn now(self) -> Timestamp {
        match self {
            Clock::System => Timestamp::now(),
            Clock::Fixed(t) => t,
        }
    }
}

/// Loads the lexical tables from `dir`, or the built-in seed lexicon.
pub fn load_resources(dir: Option<&Path>) -> anyhow::Result<LexicalResources> {
    match dir {
        Some(d) => LexicalResources::load_dir(d)
            .with_context(|| format!("loading lexicon from {}", d.display())),
        None => Ok(LexicalResources::seed()),
    }
}
