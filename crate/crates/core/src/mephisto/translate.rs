use std::collections::HashMap;

use crate::chronos::{anchor_tense, parse_temporal_adjunct, TenseAnchor, TenseKind, TimeRef};
use crate::context::agrees;
use crate::graph::{
    DeepGraph, Determiner, Entity, EntityKind, Event, EventTense, GraphNode, ModRole, NodeId,
    NodeKind, Role,
};
use crate::lexicon::{inflect, Animacy, Gender, Number, PronKind};
use crate::parser::SentenceType;

use super::{
    read_term, Act, EventRecord, GramRole, Referent, Symbols, Term, TranslateError, Translation,
    Utterance,
};

const LOCATIONAL: &[&str] = &[
    "in", "on", "at", "near", "under", "inside", "behind", "beside", "above", "below", "across",
    "along", "through", "into", "onto", "over", "towards", "by",
];

/// Name of the binary predicate a prepositional phrase becomes.
pub fn role_predicate(prep: &str) -> String {
    match prep {
        "from" => "source".to_string(),
        "to" => "goal".to_string(),
        p if LOCATIONAL.contains(&p) => format!("location_{p}"),
        p => format!("relation_{p}"),
    }
}

/// One clause's worth of output before quantifier assembly.
#[derive(Default)]
struct Parts {
    vars: Vec<String>,
    /// Typing and other clauses describing the entities.
    descr: Vec<Term>,
    /// The event clause and its adjuncts.
    body: Vec<Term>,
    /// Unary animacy and gender clauses of existential entities.
    extras: Vec<Term>,
    /// A `no` determiner flips the polarity of the event.
    negate: bool,
}

struct Tx<'a> {
    g: &'a DeepGraph,
    sym: &'a mut Symbols,
    utt: &'a Utterance,
    question: bool,
    fresh: Vec<String>,
    /// Universally quantified nouns share a variable within a sentence.
    universals: HashMap<String, (String, String)>,
    /// (label, time) to the @-term and typing functor already emitted.
    seen: HashMap<(String, String), (Term, String)>,
    referents: Vec<Referent>,
    queried: Option<String>,
    extras: Vec<Term>,
    top: Vec<Term>,
    event: Option<EventRecord>,
    /// Subjects of the clauses being translated, innermost last.
    subjects: Vec<(Term, NodeId)>,
}

pub fn translate(
    g: &DeepGraph,
    sym: &mut Symbols,
    utt: &Utterance,
) -> Result<Translation, TranslateError> {
    let act = match g.sentence {
        SentenceType::Interrogative(_) => Act::Query,
        SentenceType::Directive => Act::Direct,
        _ => Act::Assert,
    };
    let mut tx = Tx {
        g,
        sym,
        utt,
        question: act == Act::Query,
        fresh: Vec::new(),
        universals: HashMap::new(),
        seen: HashMap::new(),
        referents: Vec::new(),
        queried: None,
        extras: Vec::new(),
        top: Vec::new(),
        event: None,
        subjects: Vec::new(),
    };
    let root = g.node(g.root);
    let (main, time) = match root.kind {
        NodeKind::Directive => {
            let class = g
                .target(g.root, &Role::Class)
                .map(|c| g.node(c).lemma.clone())
                .unwrap_or_default();
            let track = g
                .target(g.root, &Role::Target)
                .map(|c| g.node(c).lemma.clone())
                .unwrap_or_default();
            (
                vec![Term::app(
                    "show",
                    vec![Term::atom(&class), Term::atom(&track)],
                )],
                None,
            )
        }
        NodeKind::Conditional => {
            let t = tx.fresh_time();
            let a = g.target(g.root, &Role::Antecedent).expect("antecedent");
            let c = g.target(g.root, &Role::Consequent).expect("consequent");
            let pa = tx.clause(a, &t)?;
            let pc = tx.clause(c, &t)?;
            let ante = Term::and(tx.assemble(pa));
            let cons = Term::and(tx.assemble(pc));
            (vec![Term::imp(ante, cons)], Some(t))
        }
        _ => {
            let t = tx.fresh_time();
            let p = tx.clause(g.root, &t)?;
            (tx.assemble(p), Some(t))
        }
    };
    let mut form = Vec::new();
    for c in tx.extras.drain(..).chain(tx.top.drain(..)).chain(main) {
        if !form.contains(&c) {
            form.push(c);
        }
    }
    Ok(Translation {
        act,
        form,
        fresh: tx.fresh,
        queried: tx.queried,
        time,
        referents: tx.referents,
        event: tx.event,
    })
}

fn feature(s: &str) -> Term {
    read_term(s).unwrap_or_else(|_| Term::atom(s))
}

fn typing(functor: &str, at: &Term, features: &[String]) -> Term {
    Term::app(
        functor,
        vec![
            at.clone(),
            Term::List(features.iter().map(|f| feature(f)).collect()),
        ],
    )
}

fn functor_of(node: &GraphNode) -> String {
    node.lemma.split_whitespace().collect::<Vec<_>>().join("_")
}

fn universal(e: &Entity) -> bool {
    match e.det {
        Determiner::Universal | Determiner::Negative => true,
        Determiner::Bare => {
            e.kind == EntityKind::Common
                && e.number == Number::Plural
                && !e.mods.iter().any(|m| m.role == ModRole::Complement)
        }
        _ => false,
    }
}

/// Linguistic features carried on a typing clause.
fn features(e: &Entity, prep: Option<&str>) -> Vec<String> {
    let mut f = Vec::new();
    if e.animacy == Animacy::Animate {
        f.push("animate".to_string());
    }
    match e.gender {
        Some(Gender::Female) => f.push("female".into()),
        Some(Gender::Male) => f.push("male".into()),
        _ => {}
    }
    if e.kind == EntityKind::Proper {
        f.push("proper".into());
    }
    match &e.det {
        Determiner::Definite | Determiner::Possessive => f.push("definite".into()),
        Determiner::Demonstrative => {
            f.push("definite".into());
            f.push("demonstrative".into());
        }
        Determiner::Indefinite | Determiner::Cardinal(_) | Determiner::Quantity(_) => {
            f.push("indefinite".into())
        }
        Determiner::Bare if !universal(e) && e.kind == EntityKind::Common => {
            f.push("indefinite".into())
        }
        _ => {}
    }
    f.push(e.number.to_string());
    if let Some(t) = &e.title {
        f.push(format!("title({t})"));
    }
    if let Some(t) = &e.post_title {
        f.push(format!("post_title({t})"));
    }
    if let Some(p) = prep {
        f.push(format!("prep({p})"));
    }
    f
}

fn with_prep(mut f: Vec<String>, prep: Option<&str>) -> Vec<String> {
    f.retain(|x| !x.starts_with("prep("));
    if let Some(p) = prep {
        f.push(format!("prep({p})"));
    }
    f
}

impl Tx<'_> {
    fn fresh_skolem(&mut self) -> String {
        let s = self.sym.skolem();
        self.fresh.push(s.clone());
        s
    }

    fn fresh_space(&mut self) -> String {
        let s = self.sym.space();
        self.fresh.push(s.clone());
        s
    }

    fn fresh_time(&mut self) -> String {
        let s = format!("t_{}", self.sym.time());
        self.fresh.push(s.clone());
        s
    }

    /// Moves unary clauses out and wraps a quantified clause in `all`.
    fn assemble(&mut self, p: Parts) -> Vec<Term> {
        self.extras.extend(p.extras);
        if p.vars.is_empty() {
            return p.descr.into_iter().chain(p.body).collect();
        }
        let vars = Term::List(p.vars.iter().map(|v| Term::var(v)).collect());
        let body = Term::and(p.body);
        let inner = if p.descr.is_empty() {
            body
        } else {
            Term::imp(Term::and(p.descr), body)
        };
        vec![Term::app("all", vec![vars, inner])]
    }

    fn anchor(&mut self, tense: EventTense, t: &str) {
        let kind = match tense {
            EventTense::Past => TenseKind::Past,
            EventTense::Future => TenseKind::Future,
            EventTense::Present => TenseKind::PresentHabitual,
        };
        let n: u32 = t.trim_start_matches("t_").parse().unwrap_or(0);
        if let TenseAnchor::Constraint(c) = anchor_tense(kind, n, self.utt.interval) {
            let (rel, i) = match c {
                TimeRef::Before(_, i) => ("before", i),
                TimeRef::After(_, i) => ("after", i),
                _ => return,
            };
            let c = Term::app(rel, vec![Term::var(t), Term::interval(i)]);
            if !self.top.contains(&c) {
                self.top.push(c);
            }
        }
    }

    fn record(
        &mut self,
        id: NodeId,
        label: &str,
        functor: &str,
        feats: &[String],
        e: &Entity,
        role: GramRole,
    ) {
        self.referents.push(Referent {
            node: id,
            label: label.to_string(),
            functor: functor.to_string(),
            features: feats.to_vec(),
            number: e.number,
            gender: e.gender,
            animacy: e.animacy,
            role,
        });
    }

    fn entity(
        &mut self,
        id: NodeId,
        t: &str,
        role: GramRole,
        prep: Option<&str>,
        p: &mut Parts,
    ) -> Result<Term, TranslateError> {
        let g = self.g;
        let node = g.node(id);
        let e = match &node.kind {
            NodeKind::Entity(e) => e,
            NodeKind::Coordination => {
                let members: Vec<NodeId> = g
                    .out(id)
                    .filter(|x| x.label == Role::Member)
                    .map(|x| x.to)
                    .collect();
                let mut items = Vec::new();
                for m in members {
                    items.push(self.entity(m, t, role, prep, p)?);
                }
                return Ok(Term::List(items));
            }
            _ => return Ok(Term::atom(&node.lemma)),
        };
        let tv = Term::var(t);

        if let Some(b) = g.bindings.get(&id) {
            if let Some((at, _)) = self.seen.get(&(b.label.clone(), t.to_string())) {
                return Ok(at.clone());
            }
            let s = self.fresh_space();
            let at = Term::at(Term::var(&b.label), tv, Term::var(&s));
            let (functor, feats) = if matches!(e.kind, EntityKind::Pronoun(_)) {
                (b.functor.clone(), with_prep(b.features.clone(), prep))
            } else {
                (functor_of(node), features(e, prep))
            };
            p.descr.push(typing(&functor, &at, &feats));
            if !matches!(e.kind, EntityKind::Pronoun(_)) {
                self.unary(&at, e, p);
            }
            self.seen.insert(
                (b.label.clone(), t.to_string()),
                (at.clone(), functor.clone()),
            );
            self.record(id, &b.label, &functor, &feats, e, role);
            self.modifiers(id, e, &b.label, &at, t, p)?;
            return Ok(at);
        }

        match e.kind {
            EntityKind::Wh => {
                let label = self.fresh_skolem();
                let s = self.fresh_space();
                let at = Term::at(Term::var(&label), tv, Term::var(&s));
                if !matches!(node.lemma.as_str(), "what" | "who" | "whom" | "which") {
                    let f = with_prep(vec![e.number.to_string()], prep);
                    p.descr.push(typing(&functor_of(node), &at, &f));
                }
                self.queried = Some(label);
                return Ok(at);
            }
            EntityKind::Pronoun(PronKind::Indefinite) => {
                let label = self.fresh_skolem();
                let s = self.fresh_space();
                let at = Term::at(Term::var(&label), tv, Term::var(&s));
                if self.question {
                    self.queried.get_or_insert(label);
                } else {
                    let mut f = Vec::new();
                    if e.animacy == Animacy::Animate {
                        f.push("animate".to_string());
                    }
                    f.push("indefinite".into());
                    f.push(e.number.to_string());
                    let f = with_prep(f, prep);
                    p.descr.push(typing(&node.lemma, &at, &f));
                    self.record(id, &label, &node.lemma, &f, e, role);
                }
                return Ok(at);
            }
            EntityKind::Pronoun(_) if e.person < 3 => {
                let functor = if e.person == 1 {
                    "speaker"
                } else {
                    "addressee"
                };
                let label = self.fresh_skolem();
                let s = self.fresh_space();
                let at = Term::at(Term::var(&label), tv, Term::var(&s));
                let f = with_prep(
                    vec!["animate".into(), "definite".into(), e.number.to_string()],
                    prep,
                );
                p.descr.push(typing(functor, &at, &f));
                self.seen.insert(
                    (label.clone(), t.to_string()),
                    (at.clone(), functor.to_string()),
                );
                return Ok(at);
            }
            EntityKind::Pronoun(PronKind::Reflexive | PronKind::Reciprocal) => {
                // bound to the subject of its own clause
                let found = self.subjects.last().and_then(|(at, sid)| {
                    let s = g.node(*sid);
                    let ok = match &s.kind {
                        NodeKind::Entity(se) => agrees(e, se.gender, se.animacy, se.number),
                        NodeKind::Coordination => e.number == Number::Plural,
                        _ => false,
                    };
                    ok.then(|| at.clone())
                });
                return found.ok_or_else(|| TranslateError::UnresolvedAnaphor(node.phrase.clone()));
            }
            EntityKind::Pronoun(_) => {
                return Err(TranslateError::UnresolvedAnaphor(node.phrase.clone()))
            }
            _ => {}
        }

        let quantified = universal(e);
        let (label, s) = if quantified {
            match self.universals.get(&node.lemma) {
                Some(x) => x.clone(),
                None => {
                    let x = (self.fresh_skolem(), self.fresh_space());
                    self.universals.insert(node.lemma.clone(), x.clone());
                    x
                }
            }
        } else {
            (self.fresh_skolem(), self.fresh_space())
        };
        if quantified {
            if !p.vars.contains(&label) {
                p.vars.push(label.clone());
            }
            if e.det == Determiner::Negative {
                p.negate = !p.negate;
            }
        }
        let at = Term::at(Term::var(&label), tv, Term::var(&s));
        let functor = functor_of(node);
        let feats = features(e, prep);
        p.descr.push(typing(&functor, &at, &feats));
        if let Determiner::Cardinal(n) = e.det {
            p.descr.push(Term::app(
                "card",
                vec![Term::var(&label), Term::Int(n.into())],
            ));
        }
        self.seen.insert(
            (label.clone(), t.to_string()),
            (at.clone(), functor.clone()),
        );
        if !quantified {
            self.unary(&at, e, p);
            self.record(id, &label, &functor, &feats, e, role);
        }
        self.modifiers(id, e, &label, &at, t, p)?;
        Ok(at)
    }

    fn unary(&mut self, at: &Term, e: &Entity, p: &mut Parts) {
        if e.animacy == Animacy::Animate {
            p.extras.push(Term::app("animate", vec![at.clone()]));
        }
        match e.gender {
            Some(Gender::Female) => p.extras.push(Term::app("female", vec![at.clone()])),
            Some(Gender::Male) => p.extras.push(Term::app("male", vec![at.clone()])),
            _ => {}
        }
    }

    /// Premodifiers, prepositional postmodifiers and possessors of a noun.
    fn modifiers(
        &mut self,
        id: NodeId,
        e: &Entity,
        label: &str,
        at: &Term,
        t: &str,
        p: &mut Parts,
    ) -> Result<(), TranslateError> {
        for m in &e.mods {
            match m.role {
                ModRole::Complement => p.descr.push(Term::app(
                    "quantity",
                    vec![Term::var(label), Term::atom(&m.lemma)],
                )),
                _ => p.descr.push(Term::app(&m.lemma, vec![at.clone()])),
            }
        }
        let g = self.g;
        let functor = functor_of(g.node(id));
        for edge in g.out(id) {
            match &edge.label {
                Role::Modifier(prep) => {
                    let r = self.entity(edge.to, t, GramRole::Other, Some(prep), p)?;
                    let head = Term::app(&functor, vec![at.clone()]);
                    p.descr.push(Term::app(
                        &role_predicate(prep),
                        vec![Term::List(vec![head]), r],
                    ));
                }
                Role::Possessor => {
                    let owner = self.entity(edge.to, t, GramRole::Other, None, p)?;
                    p.descr
                        .push(Term::app("possession", vec![owner, at.clone()]));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn clause(&mut self, id: NodeId, t: &str) -> Result<Parts, TranslateError> {
        let g = self.g;
        let node = g.node(id);
        let ev = node.event().expect("clause root is an event").clone();
        let mut p = Parts::default();
        let subj_id = g.target(id, &Role::Subject);
        let subj = match subj_id {
            Some(s) => Some(self.entity(s, t, GramRole::Subject, None, &mut p)?),
            None => None,
        };
        if let (Some(at), Some(sid)) = (&subj, subj_id) {
            self.subjects.push((at.clone(), sid));
        }
        let result = self.clause_rest(id, t, &ev, subj, p);
        if subj_id.is_some() {
            self.subjects.pop();
        }
        result
    }

    fn clause_rest(
        &mut self,
        id: NodeId,
        t: &str,
        ev: &Event,
        subj: Option<Term>,
        mut p: Parts,
    ) -> Result<Parts, TranslateError> {
        let g = self.g;
        let node = g.node(id);
        let mut feats = vec![Term::atom(match ev.tense {
            EventTense::Past => "past",
            EventTense::Future => "future",
            EventTense::Present => "general_habitual",
        })];
        if let Some(m) = ev
            .modal
            .as_deref()
            .filter(|m| !matches!(*m, "will" | "shall"))
        {
            feats.push(Term::app("modal", vec![Term::atom(m)]));
        }

        let core;
        let mut main = None;
        if ev.copula {
            let subj = subj.clone().unwrap_or(Term::atom("nothing"));
            let subj_functor = self.functor_for(&subj);
            core = Term::app(&subj_functor, vec![subj.clone()]);
            if let Some(pid) = g.target(id, &Role::Predicative) {
                if let NodeKind::Property = g.node(pid).kind {
                    main = Some(Term::app(
                        &g.node(pid).lemma,
                        vec![subj, Term::List(feats.clone())],
                    ));
                } else {
                    let other = self.entity(pid, t, GramRole::Other, None, &mut p)?;
                    main = Some(Term::Identical(vec![subj, other]));
                }
            }
        } else {
            let functor = if ev.anaphor {
                match g.event_bindings.get(&id) {
                    Some(b) => b.functor.clone(),
                    None => return Err(TranslateError::UnresolvedEvent(node.phrase.clone())),
                }
            } else if ev.generic {
                "does".to_string()
            } else {
                inflect::third_singular(&node.lemma)
            };
            let mut args: Vec<Term> = subj.into_iter().collect();
            let mut objects = Vec::new();
            if let Some(b) = g.event_bindings.get(&id) {
                for o in &b.objects {
                    let key = (o.label.clone(), t.to_string());
                    let at = match self.seen.get(&key) {
                        Some((at, _)) => at.clone(),
                        None => {
                            let s = self.fresh_space();
                            let at = Term::at(Term::var(&o.label), Term::var(t), Term::var(&s));
                            p.descr.push(typing(&o.functor, &at, &o.features));
                            self.seen.insert(key, (at.clone(), o.functor.clone()));
                            at
                        }
                    };
                    args.push(at);
                }
            }
            for role in [Role::Addressee, Role::Object, Role::IndirectObject] {
                if let Some(x) = g.target(id, &role) {
                    let gram = if role == Role::Object {
                        GramRole::Object
                    } else {
                        GramRole::Other
                    };
                    let before = self.referents.len();
                    args.push(self.entity(x, t, gram, None, &mut p)?);
                    objects.extend(
                        self.referents[before..]
                            .iter()
                            .filter(|r| r.node == x)
                            .cloned(),
                    );
                }
            }
            if let Some(c) = g.target(id, &Role::Complement) {
                let inner_t = self.fresh_time();
                let inner = self.clause(c, &inner_t)?;
                let content = self.assemble(inner);
                args.push(Term::List(content));
            }
            core = Term::app(&functor, args.clone());
            args.push(Term::List(feats.clone()));
            main = Some(Term::app(&functor, args));
            if !ev.generic && !ev.anaphor {
                self.event = Some(EventRecord { functor, objects });
            } else if ev.anaphor {
                let b = &g.event_bindings[&id];
                let objects = b
                    .objects
                    .iter()
                    .filter_map(|o| {
                        self.referents
                            .iter()
                            .rev()
                            .find(|r| r.label == o.label)
                            .cloned()
                    })
                    .collect();
                self.event = Some(EventRecord { functor, objects });
            }
        }
        if let Some(m) = main {
            p.body.push(if ev.negated != p.negate {
                Term::neg(m)
            } else {
                m
            });
        }

        for edge in g.out(id) {
            match &edge.label {
                Role::Oblique(prep) => {
                    let r = self.entity(edge.to, t, GramRole::Other, Some(prep), &mut p)?;
                    p.body.push(Term::app(
                        &role_predicate(prep),
                        vec![Term::List(vec![core.clone()]), r],
                    ));
                }
                Role::Temporal => {
                    let to = g.node(edge.to);
                    let NodeKind::Time(words) = &to.kind else {
                        continue;
                    };
                    let words: Vec<&str> = words.iter().map(String::as_str).collect();
                    let adj =
                        parse_temporal_adjunct(&words, self.utt.interval.start, self.utt.offset)
                            .map_err(|_| TranslateError::Temporal(to.phrase.clone()))?;
                    let c = Term::app(
                        adj.relation.name(),
                        vec![Term::var(t), Term::interval(adj.reference)],
                    );
                    if !self.top.contains(&c) {
                        self.top.push(c);
                    }
                }
                Role::Frequency => {
                    if let NodeKind::Frequency(n) = g.node(edge.to).kind {
                        p.body.push(Term::app(
                            "card",
                            vec![Term::List(vec![core.clone()]), Term::Int(n.into())],
                        ));
                    }
                }
                Role::Direction => {
                    let d = Term::atom(&g.node(edge.to).lemma);
                    p.body.push(Term::app(
                        "direction",
                        vec![Term::List(vec![core.clone()]), d],
                    ));
                }
                _ => {}
            }
        }
        if ev.always {
            p.vars.push(t.to_string());
        } else {
            self.anchor(ev.tense, t);
        }
        Ok(p)
    }

    fn functor_for(&self, at: &Term) -> String {
        self.seen
            .values()
            .find(|(a, _)| a == at)
            .map(|(_, f)| f.clone())
            .unwrap_or_else(|| "entity".to_string())
    }
}
