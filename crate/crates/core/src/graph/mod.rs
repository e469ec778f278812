//! Deep graphs: parse trees reduced to predicates, entities and labelled
//! grammatical-function arcs, plus interpretation ranking and selection.

mod build;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::{AdjClass, Animacy, Gender, Number, PronKind};
use crate::parser::SentenceType;

pub use build::to_graph;

/// Nodes are keyed by the index of their head token.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Subject,
    Object,
    IndirectObject,
    Addressee,
    Complement,
    /// Prepositional adjunct of a verb phrase.
    Oblique(String),
    /// Prepositional postmodifier of a noun.
    Modifier(String),
    Possessor,
    Member,
    Temporal,
    Direction,
    Frequency,
    Antecedent,
    Consequent,
    Predicative,
    Class,
    Target,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Oblique(p) => write!(f, "oblique({p})"),
            Role::Modifier(p) => write!(f, "modifier({p})"),
            other => write!(f, "{}", format!("{other:?}").to_lowercase()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: NodeId,
    pub label: Role,
    pub to: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Common,
    Proper,
    Pronoun(PronKind),
    /// Queried argument; `lemma` is the restricting noun if there is one.
    Wh,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Determiner {
    None,
    Definite,
    Indefinite,
    Universal,
    Demonstrative,
    Negative,
    Possessive,
    Quantity(String),
    Cardinal(u32),
    Bare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModRole {
    Attributive,
    Complement,
    Adjunct,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Premodifier {
    pub lemma: String,
    pub class: Option<AdjClass>,
    pub role: ModRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Entity {
    pub kind: EntityKind,
    pub det: Determiner,
    pub number: Number,
    pub person: u8,
    pub gender: Option<Gender>,
    pub animacy: Animacy,
    pub mass: bool,
    pub taxon: Option<String>,
    pub mods: Vec<Premodifier>,
    pub title: Option<String>,
    pub post_title: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventTense {
    Past,
    Present,
    Future,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Event {
    pub tense: EventTense,
    pub negated: bool,
    pub always: bool,
    pub modal: Option<String>,
    pub copula: bool,
    /// `do` standing in for the previous verb phrase ("Kerry did too").
    pub anaphor: bool,
    /// `What did X do?`: the predicate itself is asked for.
    pub generic: bool,
    pub motion: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Entity(Entity),
    Event(Event),
    /// Temporal adjunct; the words are re-grounded at translation time.
    Time(Vec<String>),
    Direction,
    Frequency(u32),
    Property,
    Coordination,
    Conditional,
    Directive,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GraphNode {
    pub id: NodeId,
    pub lemma: String,
    /// Surface words of the node without postmodifiers.
    pub phrase: String,
    pub kind: NodeKind,
}

impl GraphNode {
    pub fn entity(&self) -> Option<&Entity> {
        match &self.kind {
            NodeKind::Entity(e) => Some(e),
            _ => None,
        }
    }

    pub fn event(&self) -> Option<&Event> {
        match &self.kind {
            NodeKind::Event(e) => Some(e),
            _ => None,
        }
    }
}

/// An antecedent chosen by the context resolver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Binding {
    pub label: String,
    pub functor: String,
    pub features: Vec<String>,
}

/// Verb phrase recovered for a `do` anaphor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EventBinding {
    pub functor: String,
    pub objects: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeepGraph {
    pub sentence: SentenceType,
    pub root: NodeId,
    pub nodes: BTreeMap<NodeId, GraphNode>,
    pub edges: Vec<Edge>,
    pub bindings: BTreeMap<NodeId, Binding>,
    pub event_bindings: BTreeMap<NodeId, EventBinding>,
}

impl DeepGraph {
    pub fn node(&self, id: NodeId) -> &GraphNode {
        &self.nodes[&id]
    }

    pub fn out(&self, id: NodeId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == id)
    }

    pub fn target(&self, id: NodeId, label: &Role) -> Option<NodeId> {
        self.out(id).find(|e| &e.label == label).map(|e| e.to)
    }

    pub fn entities(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.values().filter(|n| n.entity().is_some())
    }

    pub fn reachable_from_root(&self) -> Vec<NodeId> {
        let mut seen = vec![self.root];
        let mut i = 0;
        while i < seen.len() {
            let id = seen[i];
            for e in self.out(id) {
                if !seen.contains(&e.to) {
                    seen.push(e.to);
                }
            }
            i += 1;
        }
        seen.sort_unstable();
        seen
    }

    /// Short stable fingerprint of the edge set, for the wire format.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |s: &str| {
            for b in s.bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for e in &self.edges {
            let from = &self.nodes[&e.from].lemma;
            let to = &self.nodes[&e.to].lemma;
            eat(&format!("{}:{from}-{}-{}:{to};", e.from, e.label, e.to));
        }
        format!("{h:016x}")
    }

    /// One phrase per prepositional attachment and pronoun binding, used to
    /// tell readings apart.
    pub fn attachment_phrases(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.edges {
            let to = &self.nodes[&e.to].phrase;
            match &e.label {
                Role::Modifier(p) => {
                    let head = &self.nodes[&e.from];
                    let rel = match head.entity().map(|x| x.animacy) {
                        Some(Animacy::Animate) => "who",
                        _ => "which",
                    };
                    let copula = match head.entity().map(|x| x.number) {
                        Some(Number::Plural) => "are",
                        _ => "is",
                    };
                    out.push(format!("{}, {rel} {copula} {p} {to}", head.phrase));
                }
                Role::Oblique(p) => {
                    let verb = &self.nodes[&e.from].phrase;
                    out.push(format!("{verb} {p} {to}"));
                }
                _ => {}
            }
        }
        for (id, b) in &self.bindings {
            let n = &self.nodes[id];
            if matches!(n.entity().map(|e| e.kind), Some(EntityKind::Pronoun(_))) {
                out.push(format!(
                    "{} = the {}",
                    n.phrase,
                    b.functor.replace('_', " ")
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    VerbPhrase,
    NounPhrase,
}

/// One scoring rule: attachments at `site`, optionally only for `prep`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Preference {
    pub site: Site,
    pub prep: Option<String>,
    pub score: i32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PreferenceProfile {
    pub rules: Vec<Preference>,
}

impl PreferenceProfile {
    pub fn prefer(mut self, site: Site, prep: Option<&str>, score: i32) -> PreferenceProfile {
        self.rules.push(Preference {
            site,
            prep: prep.map(str::to_string),
            score,
        });
        self
    }

    pub fn score(&self, g: &DeepGraph) -> i32 {
        let mut total = 0;
        for e in &g.edges {
            let (site, prep) = match &e.label {
                Role::Oblique(p) => (Site::VerbPhrase, p),
                Role::Modifier(p) => (Site::NounPhrase, p),
                _ => continue,
            };
            for r in &self.rules {
                if r.site == site && r.prep.as_ref().is_none_or(|rp| rp == prep) {
                    total += r.score;
                }
            }
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    AwaitingSelection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationSet {
    pub origin: String,
    pub status: Status,
    pub candidates: Vec<DeepGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no candidate interpretations")]
    NoCandidates,
    #[error("interpretation already unique")]
    AlreadyUnique,
    #[error("candidate {index} out of range (have {len})")]
    OutOfRange { index: usize, len: usize },
}

impl InterpretationSet {
    /// The chosen graph once the set is unique.
    pub fn top(&self) -> Option<&DeepGraph> {
        match self.status {
            Status::Unique => self.candidates.first(),
            Status::AwaitingSelection => None,
        }
    }

    /// Paraphrases that distinguish the candidates: attachment phrases
    /// shared by every candidate are left out.
    pub fn paraphrases(&self) -> Vec<String> {
        let all: Vec<Vec<String>> = self
            .candidates
            .iter()
            .map(DeepGraph::attachment_phrases)
            .collect();
        all.iter()
            .map(|mine| {
                let own: Vec<&str> = mine
                    .iter()
                    .filter(|p| !all.iter().all(|other| other.contains(p)))
                    .map(String::as_str)
                    .collect();
                if own.is_empty() {
                    mine.join("; ")
                } else {
                    own.join("; ")
                }
            })
            .collect()
    }
}

/// Stable sort by preference score. Tied maxima are all kept and the set
/// waits for the user to pick one.
pub fn rank(
    origin: &str,
    candidates: Vec<DeepGraph>,
    prefs: &PreferenceProfile,
) -> Result<InterpretationSet, GraphError> {
    if candidates.is_empty() {
        return Err(GraphError::NoCandidates);
    }
    let mut scored: Vec<(i32, DeepGraph)> = candidates
        .into_iter()
        .map(|g| (prefs.score(&g), g))
        .collect();
    scored.sort_by_key(|s| std::cmp::Reverse(s.0));
    let best = scored[0].0;
    let tied = scored.iter().filter(|(s, _)| *s == best).count();
    let (status, candidates) = if tied == 1 {
        (Status::Unique, scored.into_iter().map(|(_, g)| g).collect())
    } else {
        (
            Status::AwaitingSelection,
            scored
                .into_iter()
                .filter(|(s, _)| *s == best)
                .map(|(_, g)| g)
                .collect(),
        )
    };
    Ok(InterpretationSet {
        origin: origin.to_string(),
        status,
        candidates,
    })
}

/// Picks one of several equally ranked readings.
pub fn select(set: &mut InterpretationSet, index: usize) -> Result<DeepGraph, GraphError> {
    if set.status == Status::Unique {
        return Err(GraphError::AlreadyUnique);
    }
    if index >= set.candidates.len() {
        return Err(GraphError::OutOfRange {
            index,
            len: set.candidates.len(),
        });
    }
    let chosen = set.candidates.swap_remove(index);
    set.candidates = vec![chosen.clone()];
    set.status = Status::Unique;
    Ok(chosen)
}
