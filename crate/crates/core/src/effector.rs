//! Surface English from logical forms, checked by parsing it again.

use std::collections::HashMap;

use thiserror::Error;

use crate::chronos::{format_date_phrase, utc_denormalize, Interval, UtcOffset};
use crate::context::DiscourseContext;
use crate::graph::to_graph;
use crate::kb::{Answer, FactStore, Match, SituationReport};
use crate::lexicon::{inflect, LexicalResources, Pos, VerbForm};
use crate::mephisto::{alpha_equal, print_form, translate, Symbols, Term, Utterance};
use crate::parser::parse;
use crate::parser::Queried;
use crate::surface::{precheck, prepare, split_sentences};

const TENSES: [&str; 3] = ["past", "general_habitual", "future"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("`{0}` has no typing clause")]
    Unhoused(String),
    #[error("no word for `{0}`")]
    UnknownFunctor(String),
    #[error("cannot realise `{0}`")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, GenerateError>;

#[derive(Debug, Clone, Default)]
struct Desc {
    functor: String,
    feats: Vec<String>,
    adjs: Vec<String>,
    card: Option<i64>,
    quantity: Option<String>,
    owner: Option<Term>,
    /// Prepositional postmodifiers: predicate name and the @-term referred to.
    mods: Vec<(String, Term)>,
}

impl Desc {
    fn has(&self, f: &str) -> bool {
        self.feats.iter().any(|x| x == f)
    }

    fn plural(&self) -> bool {
        self.has("plural")
    }
}

/// Quantifier context of the clause being realised.
#[derive(Debug, Clone, Default)]
struct Quant {
    vars: Vec<String>,
    always: bool,
    /// The restrictor is a single typing clause, so a bare plural will do.
    bare_ok: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Case {
    Subject,
    Object,
}

struct Gen<'a> {
    res: &'a LexicalResources,
    offset: UtcOffset,
    ents: HashMap<String, Desc>,
    constraints: Vec<Term>,
}

fn label_name(at: &Term) -> Option<&str> {
    match at.label() {
        Some(Term::Var(v)) | Some(Term::Atom(v)) => Some(v),
        _ => None,
    }
}

fn feature_names(list: &Term) -> Vec<String> {
    list.args()
        .iter()
        .filter(|t| **t != Term::Elision)
        .map(Term::to_string)
        .collect()
}

fn is_typing(t: &Term) -> bool {
    match t {
        Term::Compound(_, a) => {
            a.len() == 2
                && matches!(a[0], Term::At(_))
                && a[1].is_feature_list()
                && a[1]
                    .args()
                    .iter()
                    .any(|f| matches!(f, Term::Atom(x) if x == "singular" || x == "plural"))
        }
        _ => false,
    }
}

fn tense_of(list: &Term) -> Option<&'static str> {
    TENSES.into_iter().find(|t| {
        list.args()
            .iter()
            .any(|f| matches!(f, Term::Atom(x) if x == t))
    })
}

fn is_event(t: &Term) -> bool {
    match t {
        Term::Neg(x) => is_event(x),
        Term::Identical(_) => true,
        Term::Compound(_, a) => {
            a.len() >= 2
                && matches!(a[0], Term::At(_) | Term::List(_))
                && a.last()
                    .is_some_and(|l| l.is_feature_list() && tense_of(l).is_some())
        }
        _ => false,
    }
}

/// `name([core(...)], ref)`: a role predicate over a wrapped core.
fn role_parts(t: &Term) -> Option<(&str, &Term, &Term)> {
    match t {
        Term::Compound(f, a) if a.len() == 2 => match &a[0] {
            Term::List(items) if items.len() == 1 && matches!(items[0], Term::Compound(..)) => {
                Some((f, &items[0], &a[1]))
            }
            _ => None,
        },
        _ => None,
    }
}

fn is_constraint(t: &Term) -> bool {
    matches!(t, Term::Compound(f, a) if matches!(f.as_str(), "before" | "after" | "during") && a.len() == 2 && matches!(a[0], Term::Var(_)))
}

fn is_unary_extra(t: &Term) -> bool {
    matches!(t, Term::Compound(f, a) if a.len() == 1 && matches!(f.as_str(), "animate" | "female" | "male"))
}

fn conjuncts(t: &Term) -> Vec<Term> {
    match t {
        Term::And(a) => a.iter().flat_map(conjuncts).collect(),
        other => vec![other.clone()],
    }
}

/// Preposition a role predicate was formed from.
fn preposition(pred: &str) -> Option<&str> {
    match pred {
        "source" => Some("from"),
        "goal" => Some("to"),
        p => p
            .strip_prefix("location_")
            .or_else(|| p.strip_prefix("relation_")),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Renders a form as controlled English: one sentence per event.
pub fn generate(form: &[Term], res: &LexicalResources, offset: UtcOffset) -> Result<String> {
    let mut g = Gen {
        res,
        offset,
        ents: HashMap::new(),
        constraints: Vec::new(),
    };
    for c in form {
        g.collect(c);
    }
    g.constraints = form.iter().filter(|c| is_constraint(c)).cloned().collect();
    let ground: Vec<Term> = form
        .iter()
        .filter(|c| !is_constraint(c) && !is_unary_extra(c))
        .cloned()
        .collect();
    let mut sentences = Vec::new();
    let plain: Vec<Term> = ground
        .iter()
        .filter(|c| !matches!(c, Term::Imp(..)) && c.functor() != Some("all"))
        .cloned()
        .collect();
    for c in &ground {
        match c {
            Term::Imp(a, b) => {
                let ante = g.side(a, false)?;
                let cons = g.side(b, true)?;
                sentences.push(format!("If {ante} then {cons}."));
            }
            t if t.functor() == Some("all") => {
                sentences.push(format!("{}.", capitalize(&g.side(t, true)?)))
            }
            _ => {}
        }
    }
    let events: Vec<&Term> = plain.iter().filter(|c| is_event(c)).collect();
    if events.is_empty() && !plain.is_empty() && sentences.is_empty() {
        sentences.push(format!(
            "{}.",
            capitalize(&g.clause(&plain, None, &Quant::default(), true)?)
        ));
    }
    for ev in events {
        sentences.push(format!(
            "{}.",
            capitalize(&g.clause(&plain, Some(ev), &Quant::default(), true)?)
        ));
    }
    if sentences.is_empty() {
        return Err(GenerateError::Unsupported(print_form(form)));
    }
    Ok(sentences.join(" "))
}

impl Gen<'_> {
    /// Gathers what every clause says about each entity.
    fn collect(&mut self, t: &Term) {
        t.visit(&mut |c| {
            if is_typing(c) {
                let a = c.args();
                if let Some(l) = label_name(&a[0]) {
                    let d = self.ents.entry(l.to_string()).or_default();
                    d.functor = c.functor().unwrap_or_default().to_string();
                    d.feats = feature_names(&a[1]);
                }
            }
        });
        t.visit(&mut |c| {
            let (Some(f), a) = (c.functor(), c.args()) else {
                return;
            };
            match (f, a) {
                ("card", [Term::Var(l), Term::Int(n)]) => {
                    if let Some(d) = self.ents.get_mut(l) {
                        d.card = Some(*n);
                    }
                }
                ("quantity", [Term::Var(l), Term::Atom(q)]) => {
                    if let Some(d) = self.ents.get_mut(l) {
                        d.quantity = Some(q.clone());
                    }
                }
                ("possession", [owner @ Term::At(_), owned @ Term::At(_)]) => {
                    if let Some(d) = label_name(owned).and_then(|l| self.ents.get_mut(l)) {
                        d.owner = Some(owner.clone());
                    }
                }
                (adj, [at @ Term::At(_)]) if self.res.lexicon.adjective(adj).is_some() => {
                    if let Some(d) = label_name(at).and_then(|l| self.ents.get_mut(l)) {
                        if !d.adjs.iter().any(|x| x == adj) {
                            d.adjs.push(adj.to_string());
                        }
                    }
                }
                _ => {}
            }
        });
    }

    fn desc(&self, at: &Term) -> Result<&Desc> {
        let l = label_name(at).ok_or_else(|| GenerateError::Unsupported(at.to_string()))?;
        self.ents
            .get(l)
            .ok_or_else(|| GenerateError::Unhoused(l.to_string()))
    }

    /// A conjunct of a conditional, or a universally quantified clause.
    fn side(&mut self, t: &Term, with_time: bool) -> Result<String> {
        if t.functor() == Some("all") {
            let a = t.args();
            let vars: Vec<String> = a[0].args().iter().map(Term::to_string).collect();
            let always = vars.iter().any(|v| v.starts_with("t_"));
            let (restrictor, body) = match &a[1] {
                Term::Imp(r, b) => (conjuncts(r), conjuncts(b)),
                other => (Vec::new(), conjuncts(other)),
            };
            let typings = restrictor.iter().filter(|c| is_typing(c)).count();
            let negated = body.iter().any(|c| matches!(c, Term::Neg(_)));
            let q = Quant {
                vars,
                always,
                bare_ok: typings == 1 && !negated && !always,
            };
            let clauses: Vec<Term> = restrictor.into_iter().chain(body).collect();
            let ev = clauses.iter().find(|c| is_event(c)).cloned();
            return self.clause(&clauses, ev.as_ref(), &q, with_time);
        }
        let clauses = conjuncts(t);
        let ev = clauses.iter().find(|c| is_event(c)).cloned();
        self.clause(&clauses, ev.as_ref(), &Quant::default(), with_time)
    }

    fn noun_form(&self, functor: &str, plural: bool) -> Result<String> {
        let lex = &self.res.lexicon;
        let entry = lex
            .noun(functor)
            .ok_or_else(|| GenerateError::UnknownFunctor(functor.to_string()))?;
        if entry.pos == Pos::ProperNoun || !plural {
            if let Some(words) = self.res.aliases.unfold(functor) {
                return Ok(words.join(" "));
            }
            return Ok(functor.to_string());
        }
        let form = lex
            .forms_of(functor, Pos::CommonNoun)
            .find(|e| e.noun().and_then(|n| n.number) == Some(crate::lexicon::Number::Plural))
            .map(|e| e.surface.clone())
            .unwrap_or_else(|| inflect::plural(functor));
        Ok(form)
    }

    fn np(&self, t: &Term, case: Case, q: &Quant, negative_subject: bool) -> Result<String> {
        if let Term::List(items) = t {
            let parts: Result<Vec<String>> =
                items.iter().map(|i| self.np(i, case, q, false)).collect();
            return Ok(parts?.join(" and "));
        }
        let d = self.desc(t)?;
        let plural = d.plural();
        match d.functor.as_str() {
            "speaker" => {
                return Ok(match (plural, case) {
                    (false, Case::Subject) => "I",
                    (false, Case::Object) => "me",
                    (true, Case::Subject) => "we",
                    (true, Case::Object) => "us",
                }
                .to_string())
            }
            "addressee" => return Ok("you".to_string()),
            f if self
                .res
                .lexicon
                .lookup(f)
                .iter()
                .any(|e| e.pos == Pos::Pronoun) =>
            {
                return Ok(f.to_string())
            }
            _ => {}
        }
        let label = label_name(t).unwrap_or_default();
        let mut words: Vec<String> = Vec::new();
        let proper = d.has("proper");
        if proper {
            for f in &d.feats {
                if let Some(title) = f.strip_prefix("title(").and_then(|x| x.strip_suffix(')')) {
                    words.push(capitalize(title));
                }
            }
        } else if q.vars.iter().any(|v| v == label) {
            if negative_subject {
                words.push("no".into());
            } else if !plural {
                words.push("every".into());
            } else if !q.bare_ok {
                words.push("all".into());
            }
        } else if let Some(owner) = &d.owner {
            words.push(format!("{}'s", self.np(owner, Case::Object, q, false)?));
        } else if d.has("demonstrative") {
            words.push(if plural { "those" } else { "that" }.into());
        } else if d.has("definite") {
            words.push("the".into());
        } else if let Some(n) = d.card {
            words.push(self.cardinal(n)?);
        } else if let Some(qw) = &d.quantity {
            words.push(qw.clone());
        } else if d.has("indefinite") && !plural {
            let mass = self
                .res
                .lexicon
                .noun(&d.functor)
                .and_then(|e| e.noun())
                .is_some_and(|n| n.is_mass());
            if !mass {
                words.push("a".into());
            }
        }
        let mut adjs: Vec<(usize, &str)> = d
            .adjs
            .iter()
            .map(|a| {
                let rank = self
                    .res
                    .lexicon
                    .adjective(a)
                    .and_then(|e| e.adjective())
                    .map(|x| x.order_class.rank())
                    .unwrap_or(usize::MAX);
                (rank, a.as_str())
            })
            .collect();
        adjs.sort();
        words.extend(adjs.iter().map(|(_, a)| a.to_string()));
        words.push(self.noun_form(&d.functor, plural)?);
        if let Some(post) = d.feats.iter().find_map(|f| {
            f.strip_prefix("post_title(")
                .and_then(|x| x.strip_suffix(')'))
        }) {
            words.push(capitalize(post));
        }
        if words.first().map(String::as_str) == Some("a")
            && words
                .get(1)
                .is_some_and(|w| w.starts_with(['a', 'e', 'i', 'o', 'u']))
            {
                words[0] = "an".into();
            }
        for (pred, r) in &d.mods {
            let prep = preposition(pred).ok_or_else(|| GenerateError::Unsupported(pred.clone()))?;
            words.push(format!("{prep} {}", self.np(r, Case::Object, q, false)?));
        }
        Ok(words.join(" "))
    }

    fn cardinal(&self, n: i64) -> Result<String> {
        self.res
            .lexicon
            .entries()
            .iter()
            .find(|e| {
                e.pos == Pos::Cardinal && e.features.misc("value") == Some(n.to_string().as_str())
            })
            .map(|e| e.surface.clone())
            .ok_or_else(|| GenerateError::Unsupported(format!("card {n}")))
    }

    fn frequency(&self, n: i64) -> Result<String> {
        let word = self.res.lexicon.entries().iter().find(|e| {
            e.features.misc("adv_kind") == Some("frequency")
                && e.features.misc("value") == Some(n.to_string().as_str())
        });
        match word {
            Some(e) => Ok(e.surface.clone()),
            None => Ok(format!("{} times", self.cardinal(n)?)),
        }
    }

    fn verb_form(&self, lemma: &str, form: VerbForm) -> String {
        self.res
            .lexicon
            .forms_of(lemma, Pos::MainVerb)
            .find(|e| e.verb().and_then(|v| v.form) == Some(form))
            .map(|e| e.surface.clone())
            .unwrap_or_else(|| match form {
                VerbForm::Past => inflect::past(lemma),
                VerbForm::ThirdSingular => inflect::third_singular(lemma),
                _ => lemma.to_string(),
            })
    }

    /// Whether the subject takes third-singular agreement, and its person.
    fn agreement(&self, subj: &Term) -> (bool, u8) {
        match subj {
            Term::List(_) => (false, 3),
            t => match self.desc(t) {
                Ok(d) if d.functor == "speaker" => (false, 1),
                Ok(d) if d.functor == "addressee" => (false, 2),
                Ok(d) => (!d.plural(), 3),
                Err(_) => (true, 3),
            },
        }
    }

    fn be(&self, tense: &str, sg3: bool, person: u8, neg: bool) -> String {
        let base = match tense {
            "future" => "will",
            "past" if sg3 || person == 1 => "was",
            "past" => "were",
            _ if person == 1 && !sg3 => "am",
            _ if sg3 => "is",
            _ => "are",
        };
        match (neg, base) {
            (false, "will") => "will be".to_string(),
            (true, "will") => "will not be".to_string(),
            (false, b) => b.to_string(),
            (true, b) => format!("{b} not"),
        }
    }

    fn time_var(t: &Term) -> Option<String> {
        let mut found = None;
        t.visit(&mut |x| {
            if found.is_none() {
                if let Term::At(a) = x {
                    if let Some(Term::Var(v)) = a.get(1) {
                        found = Some(v.clone());
                    }
                }
            }
        });
        found
    }

    /// One clause: subject, verb group, complements and adjuncts.
    fn clause(
        &mut self,
        clauses: &[Term],
        ev: Option<&Term>,
        q: &Quant,
        with_time: bool,
    ) -> Result<String> {
        // role predicates over a noun are postmodifiers, except the one
        // serving as a copular predicate when there is no other event
        let mut copular_pp = None;
        if ev.is_none() {
            copular_pp = clauses.iter().rev().find(|c| {
                role_parts(c).is_some_and(|(_, core, _)| {
                    core.args()
                        .first()
                        .and_then(label_name)
                        .and_then(|l| self.ents.get(l))
                        .is_some_and(|d| Some(d.functor.as_str()) == core.functor())
                })
            });
        }
        for c in clauses {
            if Some(c) == copular_pp {
                continue;
            }
            if let Some((pred, core, r)) = role_parts(c) {
                let Some(l) = core.args().first().and_then(label_name) else {
                    continue;
                };
                if let Some(d) = self.ents.get_mut(l) {
                    if Some(d.functor.as_str()) == core.functor()
                        && !d.mods.iter().any(|(p, x)| p == pred && x == r)
                    {
                        d.mods.push((pred.to_string(), r.clone()));
                    }
                }
            }
        }

        let (neg, inner) = match ev {
            Some(Term::Neg(x)) => (true, Some(x.as_ref())),
            Some(x) => (false, Some(x)),
            None => (false, None),
        };
        let subj_term = match (inner, copular_pp) {
            (Some(Term::Identical(a)), _) => a[0].clone(),
            (Some(x), _) => x.args()[0].clone(),
            (None, Some(pp)) => role_parts(pp)
                .map(|(_, core, _)| core.args()[0].clone())
                .expect("role clause"),
            (None, None) => return Err(GenerateError::Unsupported(print_form(clauses))),
        };
        let t = Gen::time_var(&subj_term);
        let past_or_future = self
            .constraints
            .iter()
            .filter(|c| Some(c.args()[0].to_string()) == t)
            .find_map(|c| match c.functor() {
                Some("before") => Some("past"),
                Some("after") => Some("future"),
                _ => None,
            });
        let (sg3, person) = self.agreement(&subj_term);
        let subj_label = label_name(&subj_term).unwrap_or_default().to_string();
        let negative_subject = neg
            && q.vars.contains(&subj_label)
            && self.ents.get(&subj_label).is_some_and(|d| !d.plural())
            && !q.always;
        let neg = neg && !negative_subject;
        let subject = self.np(&subj_term, Case::Subject, q, negative_subject)?;

        let mut words = vec![subject];
        let mut verb_functor = None;
        match (inner, copular_pp) {
            (Some(Term::Identical(a)), _) => {
                words.push(self.be(past_or_future.unwrap_or("present"), sg3, person, neg));
                words.push(self.np(&a[1], Case::Object, q, false)?);
            }
            (Some(Term::Compound(f, args)), _) => {
                let feats = args.last().expect("feature list");
                let tense = tense_of(feats).unwrap_or("general_habitual");
                let modal = feats.args().iter().find_map(|x| match x {
                    Term::Compound(m, a) if m == "modal" => a.first().map(Term::to_string),
                    _ => None,
                });
                if self.res.lexicon.adjective(f).is_some() && args.len() == 2 {
                    words.push(self.be(tense, sg3, person, neg));
                    words.push(f.clone());
                } else {
                    let lemma = match self.res.lexicon.verb_for_functor(f) {
                        Some(e) => e.lemma.clone(),
                        None => return Err(GenerateError::UnknownFunctor(f.clone())),
                    };
                    verb_functor = Some(f.clone());
                    if q.always {
                        if neg {
                            return Err(GenerateError::Unsupported("negated always".into()));
                        }
                        words.push("always".into());
                    }
                    let base = self.verb_form(&lemma, VerbForm::Base);
                    let group = match (modal, tense, neg) {
                        (Some(m), _, false) => format!("{m} {base}"),
                        (Some(m), _, true) => format!("{m} not {base}"),
                        (None, "future", false) => format!("will {base}"),
                        (None, "future", true) => format!("will not {base}"),
                        (None, "past", false) => self.verb_form(&lemma, VerbForm::Past),
                        (None, "past", true) => format!("did not {base}"),
                        (None, _, false) if sg3 => self.verb_form(&lemma, VerbForm::ThirdSingular),
                        (None, _, false) => base,
                        (None, _, true) => {
                            format!("{} not {base}", if sg3 { "does" } else { "do" })
                        }
                    };
                    words.push(group);
                    let rest = &args[1..args.len() - 1];
                    let nps: Vec<&Term> = rest
                        .iter()
                        .filter(|a| !matches!(a, Term::List(x) if x.iter().any(is_clause_like)))
                        .collect();
                    let content = rest
                        .iter()
                        .find(|a| matches!(a, Term::List(x) if x.iter().any(is_clause_like)));
                    match nps.as_slice() {
                        [o, io] if content.is_none() => {
                            words.push(self.np(io, Case::Object, q, false)?);
                            words.push(self.np(o, Case::Object, q, false)?);
                        }
                        more => {
                            for o in more {
                                words.push(self.np(o, Case::Object, q, false)?);
                            }
                        }
                    }
                    if let Some(Term::List(inner)) = content {
                        let text = if inner.len() == 1 && inner[0].functor() == Some("all") {
                            self.side(&inner[0], true)?
                        } else {
                            let ev = inner.iter().find(|c| is_event(c)).cloned();
                            self.clause(inner, ev.as_ref(), &Quant::default(), true)?
                        };
                        words.push(format!("that {text}"));
                    }
                }
            }
            (None, Some(pp)) => {
                let (pred, _, r) = role_parts(pp).expect("role clause");
                let prep = preposition(pred)
                    .ok_or_else(|| GenerateError::Unsupported(pred.to_string()))?;
                words.push(self.be(past_or_future.unwrap_or("present"), sg3, person, neg));
                words.push(format!("{prep} {}", self.np(r, Case::Object, q, false)?));
            }
            _ => return Err(GenerateError::Unsupported(print_form(clauses))),
        }

        if let Some(vf) = &verb_functor {
            let mut freq = None;
            for c in clauses {
                let Some((pred, core, r)) = role_parts(c) else {
                    continue;
                };
                if core.functor() != Some(vf.as_str()) {
                    continue;
                }
                match (pred, r) {
                    ("card", Term::Int(n)) => freq = Some(self.frequency(*n)?),
                    ("direction", Term::Atom(d)) => words.push(d.clone()),
                    (p, r @ (Term::At(_) | Term::List(_))) => {
                        let prep = preposition(p)
                            .ok_or_else(|| GenerateError::Unsupported(p.to_string()))?;
                        words.push(format!("{prep} {}", self.np(r, Case::Object, q, false)?));
                    }
                    _ => return Err(GenerateError::Unsupported(c.to_string())),
                }
            }
            words.extend(freq);
        }
        if with_time {
            let mut mine: Vec<Term> = self
                .constraints
                .iter()
                .filter(|c| Some(c.args()[0].to_string()) == t)
                .cloned()
                .collect();
            // A stated day says more than the tense bound that comes with it.
            if mine.iter().any(|c| c.functor() == Some("during")) {
                mine.retain(|c| c.functor() == Some("during"));
            }
            for c in mine {
                words.push(time_phrase(&c, self.offset)?);
            }
        }
        Ok(words.join(" "))
    }
}

/// "before Monday the 2nd of June 2014 at 10:33:48 AM" for a constraint.
pub fn time_phrase(constraint: &Term, offset: UtcOffset) -> Result<String> {
    let a = constraint.args();
    let rel = constraint.functor().unwrap_or_default();
    let iv: Interval = a
        .get(1)
        .and_then(Term::as_interval)
        .ok_or_else(|| GenerateError::Unsupported(constraint.to_string()))?;
    if iv.is_point() {
        let word = if rel == "during" { "at" } else { rel };
        return Ok(format!("{word} {}", format_date_phrase(iv.start, offset)));
    }
    let (s, e) = (
        utc_denormalize(iv.start, offset),
        utc_denormalize(iv.end, offset),
    );
    let whole_day = (s.year, s.month, s.day) == (e.year, e.month, e.day)
        && (s.hour, s.minute, s.second) == (0, 0, 0)
        && (e.hour, e.minute, e.second) == (23, 59, 59);
    if whole_day {
        let phrase = format_date_phrase(iv.start, offset);
        let day = phrase.split(" at ").next().unwrap_or(&phrase);
        let word = if rel == "during" { "on" } else { rel };
        return Ok(format!("{word} {day}"));
    }
    Err(GenerateError::Unsupported(constraint.to_string()))
}

/// The clauses needed to say what a match found: the matched facts, what
/// the store knows about the entities in them, and the event's time.
fn match_form(m: &Match, store: &FactStore) -> Vec<Term> {
    let mut form: Vec<Term> = Vec::new();
    let push = |c: &Term, form: &mut Vec<Term>| {
        if !form.contains(c) {
            form.push(c.clone());
        }
    };
    let mut ats = Vec::new();
    let collect = |c: &Term, ats: &mut Vec<Term>| {
        c.visit(&mut |x| {
            if matches!(x, Term::At(_)) && !ats.contains(x) {
                ats.push(x.clone());
            }
        });
    };
    for c in m.support.iter().chain(&m.places) {
        collect(c, &mut ats);
    }
    for c in m.constraints.iter().chain(&m.support).chain(&m.places) {
        push(c, &mut form);
    }
    // Role clauses can name further entities, which then need their own typing.
    loop {
        let known = ats.len();
        for c in store.facts() {
            let describes = match c.args().first() {
                Some(at @ Term::At(_)) => ats.contains(at) && !is_event(c),
                Some(Term::Var(l)) => {
                    matches!(c.functor(), Some("card" | "quantity"))
                        && ats.iter().any(|a| label_name(a) == Some(l))
                }
                Some(Term::List(core)) => {
                    core.len() == 1
                        && is_typing_core(&core[0], store)
                        && core[0].args().first().is_some_and(|a| ats.contains(a))
                }
                _ => false,
            };
            if describes && !form.contains(c) {
                collect(c, &mut ats);
                push(c, &mut form);
            }
        }
        if ats.len() == known {
            break;
        }
    }
    form
}

/// `man(@x)` inside a role clause when `man` types `@x`.
fn is_typing_core(core: &Term, store: &FactStore) -> bool {
    let Some(at) = core.args().first() else {
        return false;
    };
    store
        .facts()
        .iter()
        .any(|c| is_typing(c) && c.args()[0] == *at && c.functor() == core.functor())
}

/// Sentences answering a question.
pub fn answer_sentences(
    a: &Answer,
    store: &FactStore,
    res: &LexicalResources,
    offset: UtcOffset,
) -> Vec<String> {
    if a.focus == Queried::YesNo {
        return vec![if a.yes() { "Yes." } else { "No." }.to_string()];
    }
    if a.matches.is_empty() {
        return vec!["No answer.".to_string()];
    }
    let mut out: Vec<String> = Vec::new();
    for m in &a.matches {
        let line = match a.focus {
            Queried::Temporal if m.constraints.is_empty() => "No time is known.".to_string(),
            Queried::Temporal => {
                let phrases: Vec<String> = m
                    .constraints
                    .iter()
                    .filter_map(|c| time_phrase(c, offset).ok())
                    .collect();
                format!("{}.", capitalize(&phrases.join(" and ")))
            }
            _ => match generate(&match_form(m, store), res, offset) {
                Ok(s) => s,
                Err(e) => format!("An answer was found but could not be phrased: {e}."),
            },
        };
        if !out.contains(&line) {
            out.push(line);
        }
    }
    out
}

fn with_article(noun: &str) -> String {
    let article = if noun.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    };
    format!("{article} {noun}")
}

fn degrees(v: f64, pos: char, neg: char) -> String {
    format!("{:.4} {}", v.abs(), if v < 0.0 { neg } else { pos })
}

/// A situation report as sentences: identity, latest position and time,
/// motion, affiliation, source, then asserted sentences naming the track.
pub fn report_sentences(
    rep: &SituationReport,
    res: &LexicalResources,
    offset: UtcOffset,
) -> Vec<String> {
    let r = &rep.latest;
    let id = &rep.track_id;
    let words = |a: &str| a.replace('_', " ");
    let mut out = vec![
        format!(
            "{id} is {} of type {}.",
            with_article(&words(&r.class)),
            words(&r.kind)
        ),
        format!(
            "{id} was at {} {} at {}.",
            degrees(r.lat, 'N', 'S'),
            degrees(r.lon, 'E', 'W'),
            format_date_phrase(r.time, offset)
        ),
        format!(
            "{id} was heading {:03.0} degrees at {} knots.",
            r.direction, r.speed
        ),
        format!(
            "{id} has {} allegiance and {} nationality.",
            words(&r.allegiance),
            r.nationality
        ),
        format!("{id} was reported by {}.", r.source),
    ];
    for m in &rep.mentions {
        if let Ok(s) = generate(m, res, offset) {
            out.push(s);
        }
    }
    out
}

fn is_clause_like(t: &Term) -> bool {
    matches!(t, Term::Neg(_) | Term::Identical(_) | Term::Imp(..))
        || t.functor() == Some("all")
        || is_typing(t)
}

/// Generates `form`, parses the sentence again and checks that some
/// reading translates back to the same form up to renaming.
pub fn validate_roundtrip(form: &[Term], res: &LexicalResources, utt: &Utterance) -> Result<bool> {
    let text = generate(form, res, utt.offset)?;
    let tokens = prepare(&text, res);
    if !precheck(&tokens, &res.lexicon).is_empty() {
        return Ok(false);
    }
    let sentences = split_sentences(&tokens);
    if sentences.len() == 1 {
        let ctx = DiscourseContext::new();
        for tree in parse(&tokens, &res.lexicon) {
            for g in ctx.resolve(&to_graph(&tree)).unwrap_or_default() {
                if let Ok(t) = translate(&g, &mut Symbols::new(), utt) {
                    if alpha_equal(&t.form, form) {
                        return Ok(true);
                    }
                }
            }
        }
        return Ok(false);
    }
    let mut ctx = DiscourseContext::new();
    let mut sym = Symbols::new();
    let mut all = Vec::new();
    for s in sentences {
        let Some(tree) = parse(&s, &res.lexicon).into_iter().next() else {
            return Ok(false);
        };
        let Some(g) = ctx
            .resolve(&to_graph(&tree))
            .ok()
            .and_then(|mut v| v.drain(..).next())
        else {
            return Ok(false);
        };
        let Ok(t) = translate(&g, &mut sym, utt) else {
            return Ok(false);
        };
        ctx.advance(&t);
        all.extend(t.form);
    }
    Ok(alpha_equal(&all, form))
}
