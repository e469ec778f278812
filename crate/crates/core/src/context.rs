//! Anaphora resolution within a paragraph.
//!
//! Pronouns bind to the best compatible referent: subjects outrank
//! objects, objects outrank everything else, and among equals the most
//! recent sentence wins. Candidates still tied after that are returned as
//! separate readings. Reflexives and reciprocals are bound to their clause
//! subject during translation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    Binding, DeepGraph, Determiner, Entity, EntityKind, EventBinding, NodeId, NodeKind,
};
use crate::lexicon::{Animacy, Gender, Number, PronKind};
use crate::mephisto::{EventRecord, GramRole, Referent, Translation};

/// How far back (in sentences) a demonstrative may reach.
const DEMONSTRATIVE_REACH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnaphorKind {
    Personal,
    Reflexive,
    Reciprocal,
    Indefinite,
    Demonstrative,
    VpDo,
}

impl From<PronKind> for AnaphorKind {
    fn from(k: PronKind) -> Self {
        match k {
            PronKind::Personal => AnaphorKind::Personal,
            PronKind::Reflexive => AnaphorKind::Reflexive,
            PronKind::Reciprocal => AnaphorKind::Reciprocal,
            PronKind::Indefinite => AnaphorKind::Indefinite,
            PronKind::Demonstrative => AnaphorKind::Demonstrative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("no antecedent for `{0}`")]
    Unresolved(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextEntry {
    pub referent: Referent,
    pub sentence: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseContext {
    pub paragraph: usize,
    sentence: usize,
    entries: Vec<ContextEntry>,
    event: Option<EventRecord>,
}

/// Whether a pronoun can stand for something with these features.
pub fn agrees(pron: &Entity, gender: Option<Gender>, animacy: Animacy, number: Number) -> bool {
    if pron.number != number
        && !(pron.kind == EntityKind::Pronoun(PronKind::Reciprocal) && number == Number::Plural)
    {
        return false;
    }
    if number == Number::Plural && pron.gender.is_none() {
        return true;
    }
    match pron.gender {
        Some(Gender::Female) | Some(Gender::Male) => {
            animacy == Animacy::Animate
                && matches!(gender, Some(g) if g == Gender::Common || Some(g) == pron.gender)
        }
        Some(Gender::Neuter) => animacy == Animacy::Inanimate,
        _ => true,
    }
}

fn role_rank(r: GramRole) -> u8 {
    match r {
        GramRole::Subject => 0,
        GramRole::Object => 1,
        GramRole::Other => 2,
    }
}

impl DiscourseContext {
    pub fn new() -> DiscourseContext {
        DiscourseContext::default()
    }

    pub fn referents(&self) -> impl Iterator<Item = &Referent> {
        self.entries.iter().map(|e| &e.referent)
    }

    pub fn entries(&self) -> &[ContextEntry] {
        &self.entries
    }

    pub fn last_event(&self) -> Option<&EventRecord> {
        self.event.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.event.is_none()
    }

    /// A blank line: later sentences start a new discourse.
    pub fn new_paragraph(&mut self) {
        self.paragraph += 1;
        self.entries.clear();
        self.event = None;
    }

    fn binding(r: &Referent) -> Binding {
        Binding {
            label: r.label.clone(),
            functor: r.functor.clone(),
            features: r.features.clone(),
        }
    }

    /// Best-ranked candidates for a pronoun; more than one means a tie.
    fn pronoun_candidates(&self, e: &Entity) -> Vec<&Referent> {
        let mut best: Option<(u8, usize)> = None;
        let mut out = Vec::new();
        for c in &self.entries {
            let r = &c.referent;
            if !agrees(e, r.gender, r.animacy, r.number) {
                continue;
            }
            let key = (role_rank(r.role), usize::MAX - c.sentence);
            match best {
                Some(b) if key > b => {}
                Some(b) if key == b => out.push(r),
                _ => {
                    best = Some(key);
                    out = vec![r];
                }
            }
        }
        out
    }

    /// Most recent referent with the same typing functor and number.
    fn definite_candidate(
        &self,
        node_functor: &str,
        e: &Entity,
        reach: usize,
    ) -> Option<&Referent> {
        self.entries
            .iter()
            .rev()
            .filter(|c| self.sentence - c.sentence <= reach)
            .map(|c| &c.referent)
            .find(|r| r.functor == node_functor && r.number == e.number)
    }

    /// Binds anaphors in `g`. Ties between equally ranked antecedents give
    /// one graph per choice.
    pub fn resolve(&self, g: &DeepGraph) -> Result<Vec<DeepGraph>, ResolveError> {
        let mut out = vec![g.clone()];
        for (id, node) in &g.nodes {
            match &node.kind {
                NodeKind::Entity(e) => match e.kind {
                    EntityKind::Pronoun(PronKind::Personal) if e.person == 3 => {
                        let cands = self.pronoun_candidates(e);
                        if cands.is_empty() {
                            return Err(ResolveError::Unresolved(node.phrase.clone()));
                        }
                        out = fan_out(out, *id, cands.iter().map(|r| Self::binding(r)).collect());
                    }
                    EntityKind::Common | EntityKind::Proper => {
                        let reach = match e.det {
                            Determiner::Definite => usize::MAX,
                            Determiner::Demonstrative => DEMONSTRATIVE_REACH,
                            Determiner::None if e.kind == EntityKind::Proper => usize::MAX,
                            _ => continue,
                        };
                        let functor = node.lemma.split_whitespace().collect::<Vec<_>>().join("_");
                        if let Some(r) = self.definite_candidate(&functor, e, reach) {
                            out = fan_out(out, *id, vec![Self::binding(r)]);
                        }
                    }
                    _ => {}
                },
                NodeKind::Event(ev) if ev.anaphor => {
                    let Some(last) = &self.event else {
                        return Err(ResolveError::Unresolved(node.phrase.clone()));
                    };
                    let eb = EventBinding {
                        functor: last.functor.clone(),
                        objects: last.objects.iter().map(Self::binding).collect(),
                    };
                    for graph in &mut out {
                        graph.event_bindings.insert(*id, eb.clone());
                    }
                }
                _ => {}
            }
        }
        Ok(out)
    }

    /// Records what a translated sentence mentioned.
    pub fn advance(&mut self, t: &Translation) {
        self.sentence += 1;
        for r in &t.referents {
            let repeat = self.entries.iter().any(|c| {
                c.referent.label == r.label
                    && c.sentence == self.sentence
                    && role_rank(c.referent.role) <= role_rank(r.role)
            });
            if repeat {
                continue;
            }
            self.entries.retain(|c| c.referent.label != r.label);
            self.entries.push(ContextEntry {
                referent: r.clone(),
                sentence: self.sentence,
            });
        }
        if let Some(ev) = &t.event {
            self.event = Some(ev.clone());
        }
    }

    /// Sentence counter, starting at 0 before anything is said.
    pub fn sentence(&self) -> usize {
        self.sentence
    }
}

fn fan_out(graphs: Vec<DeepGraph>, id: NodeId, choices: Vec<Binding>) -> Vec<DeepGraph> {
    let mut out = Vec::with_capacity(graphs.len() * choices.len());
    for g in graphs {
        for b in &choices {
            let mut g2 = g.clone();
            g2.bindings.insert(id, b.clone());
            out.push(g2);
        }
    }
    out
}
