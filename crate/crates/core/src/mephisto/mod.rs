//! Deep graphs to functor-argument terms, and the sensor envelope around them.

mod alpha;
mod term;
mod translate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chronos::{Interval, UtcOffset};
use crate::graph::NodeId;
use crate::lexicon::{Animacy, Gender, Number};

pub use alpha::{alpha_equal, normalize_printed, subsumes};
pub use term::{print_form, read_form, read_term, var_kind, ReadError, Term, VarKind};
pub use translate::{role_predicate, translate};

/// Per-session symbol counters. Numbers are never reused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbols {
    skc: u32,
    t: u32,
    s: u32,
}

impl Default for Symbols {
    fn default() -> Self {
        Symbols { skc: 1, t: 1, s: 1 }
    }
}

impl Symbols {
    pub fn new() -> Symbols {
        Symbols::default()
    }

    pub fn skolem(&mut self) -> String {
        let n = self.skc;
        self.skc += 1;
        format!("skc{n}")
    }

    pub fn time(&mut self) -> u32 {
        let n = self.t;
        self.t += 1;
        n
    }

    pub fn space(&mut self) -> String {
        let n = self.s;
        self.s += 1;
        format!("s_{n}")
    }
}

/// When and where (in clock terms) a sentence was entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    /// UTC.
    pub interval: Interval,
    pub offset: UtcOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramRole {
    Subject,
    Object,
    Other,
}

/// An entity introduced or mentioned by a sentence, as later sentences
/// may refer back to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Referent {
    pub node: NodeId,
    pub label: String,
    pub functor: String,
    pub features: Vec<String>,
    pub number: Number,
    pub gender: Option<Gender>,
    pub animacy: Animacy,
    pub role: GramRole,
}

/// The main event of a sentence, kept for `do` anaphora.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub functor: String,
    pub objects: Vec<Referent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Act {
    Assert,
    Query,
    Direct,
}

impl Act {
    pub fn name(self) -> &'static str {
        match self {
            Act::Assert => "assert",
            Act::Query => "query",
            Act::Direct => "direct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Translation {
    pub act: Act,
    pub form: Vec<Term>,
    /// Skolem, time and space symbols first introduced by this sentence.
    pub fresh: Vec<String>,
    /// Label of the entity a question asks for.
    pub queried: Option<String>,
    /// The time variable of the main clause.
    pub time: Option<String>,
    pub referents: Vec<Referent>,
    pub event: Option<EventRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("no antecedent for `{0}`")]
    UnresolvedAnaphor(String),
    #[error("`{0}` has no verb phrase to stand for")]
    UnresolvedEvent(String),
    #[error("temporal phrase `{0}` could not be grounded")]
    Temporal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("teller name is empty")]
    EmptyTeller,
}

/// A CNL interaction as perceived by the cognition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub teller: String,
    pub teller_label: String,
    pub space: String,
    pub act: Act,
    pub utterance: Interval,
    pub payload: Vec<Term>,
}

impl Envelope {
    /// Wraps a payload; the teller gets its own skolem constant and space.
    pub fn new(
        teller: &str,
        act: Act,
        utterance: Interval,
        payload: Vec<Term>,
        symbols: &mut Symbols,
    ) -> Result<Envelope, EnvelopeError> {
        let name = teller.trim();
        if name.is_empty() {
            return Err(EnvelopeError::EmptyTeller);
        }
        Ok(Envelope {
            teller: name.split_whitespace().collect::<Vec<_>>().join("_"),
            teller_label: symbols.skolem(),
            space: symbols.space(),
            act,
            utterance,
            payload,
        })
    }

    pub fn to_term(&self) -> Term {
        let who = Term::at(
            Term::var(&self.teller_label),
            Term::interval(self.utterance),
            Term::var(&self.space),
        );
        let teller = Term::app("teller", vec![who, Term::atom(&self.teller)]);
        Term::app(
            "perceive",
            vec![
                Term::atom("cnl_sensor"),
                Term::app(
                    "tells",
                    vec![
                        teller,
                        Term::atom(self.act.name()),
                        Term::List(self.payload.clone()),
                    ],
                ),
            ],
        )
    }

    pub fn print(&self) -> String {
        self.to_term().to_string()
    }
}

#[cfg(test)]
mod tests;
