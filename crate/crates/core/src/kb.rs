//! Session knowledge base: asserted clauses, universal rules, query
//! answering by unification, and ingested sensor tracks.
//!
//! Rules are applied one step only: a rule's consequent is derived from
//! ground facts, never from other derived facts.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chronos::{AllenRelation, Interval, Timestamp};
use crate::mephisto::{var_kind, Act, Envelope, Symbols, Term, Translation, VarKind};
use crate::parser::{Queried, QueryFocus};

/// Functors a query uses for "any entity" and "any event".
const ANY_ENTITY: &str = "entity";
const ANY_EVENT: &str = "does";

const TENSES: [&str; 3] = ["past", "general_habitual", "future"];

pub type Subst = BTreeMap<String, Term>;

fn has_tense(list: &Term) -> bool {
    list.args()
        .iter()
        .any(|f| matches!(f, Term::Atom(x) if TENSES.contains(&x.as_str())))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("no such track `{0}`")]
    NoSuchTrack(String),
    #[error("track `{id}` is a {found}, not a {wanted}")]
    ClassMismatch {
        id: String,
        wanted: String,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct TrackError {
    pub line: u64,
    pub reason: String,
}

/// One sensor report. `time` is UTC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackRecord {
    pub source: String,
    pub temporal_offset: i64,
    pub track_id: String,
    pub time: Timestamp,
    pub lat: f64,
    pub lon: f64,
    pub direction: f64,
    pub speed: f64,
    pub class: String,
    pub kind: String,
    pub allegiance: String,
    pub nationality: String,
}

#[derive(Debug, Deserialize)]
struct RawTrack {
    source: String,
    temporal_offset: i64,
    track_id: String,
    time: String,
    lat: f64,
    lon: f64,
    direction: f64,
    speed: f64,
    class: String,
    kind: String,
    allegiance: String,
    nationality: String,
}

fn atomize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

impl TryFrom<RawTrack> for TrackRecord {
    type Error = String;

    fn try_from(r: RawTrack) -> Result<Self, String> {
        if r.track_id.is_empty() {
            return Err("empty track id".into());
        }
        if !(-90.0..=90.0).contains(&r.lat) || !(-180.0..=180.0).contains(&r.lon) {
            return Err(format!("position {},{} out of range", r.lat, r.lon));
        }
        let local = Timestamp::parse_iso(&r.time).map_err(|e| e.to_string())?;
        Ok(TrackRecord {
            source: r.source,
            temporal_offset: r.temporal_offset,
            track_id: r.track_id,
            time: local.add_seconds(-r.temporal_offset),
            lat: r.lat,
            lon: r.lon,
            direction: r.direction.rem_euclid(360.0),
            speed: r.speed,
            class: atomize(&r.class),
            kind: atomize(&r.kind),
            allegiance: atomize(&r.allegiance),
            nationality: r.nationality,
        })
    }
}

impl FromStr for TrackRecord {
    type Err = TrackError;

    fn from_str(line: &str) -> Result<Self, TrackError> {
        let (mut ok, mut bad) = parse_tracks(line);
        match (ok.pop(), bad.pop()) {
            (Some(r), None) if ok.is_empty() => Ok(r),
            (_, Some(e)) => Err(e),
            _ => Err(TrackError {
                line: 1,
                reason: "expected one record".into(),
            }),
        }
    }
}

/// Parses comma-separated track lines. Bad lines are reported and skipped;
/// lines starting with `#` are comments.
pub fn parse_tracks(text: &str) -> (Vec<TrackRecord>, Vec<TrackError>) {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for row in rdr.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                bad.push(TrackError {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != 12 {
            bad.push(TrackError {
                line,
                reason: format!("expected 12 fields, found {}", row.len()),
            });
            continue;
        }
        match row
            .deserialize::<RawTrack>(None)
            .map_err(|e| e.to_string())
            .and_then(TrackRecord::try_from)
        {
            Ok(r) => ok.push(r),
            Err(reason) => bad.push(TrackError { line, reason }),
        }
    }
    (ok, bad)
}

#[derive(Debug, Clone, PartialEq)]
struct Track {
    label: String,
    latest: TrackRecord,
    clauses: Vec<Term>,
}

/// What a directive shows about one track.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SituationReport {
    pub track_id: String,
    pub latest: TrackRecord,
    /// Clauses ingested from the latest record.
    pub clauses: Vec<Term>,
    /// Asserted payloads that name the track.
    pub mentions: Vec<Vec<Term>>,
}

/// One way the query holds in the store.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Match {
    pub subst: Subst,
    /// Facts (stored or derived) the query clauses matched, in query order.
    pub support: Vec<Term>,
    /// Binding of the queried entity, if the query has one.
    pub value: Option<Term>,
    /// Temporal constraints stored for the matched event.
    pub constraints: Vec<Term>,
    /// Role clauses on the matched event (for "where" questions).
    pub places: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Answer {
    pub focus: Queried,
    pub matches: Vec<Match>,
}

impl Answer {
    pub fn yes(&self) -> bool {
        !self.matches.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct FactStore {
    facts: Vec<Term>,
    seen: HashSet<Term>,
    by_functor: HashMap<String, Vec<usize>>,
    rules: Vec<Term>,
    log: Vec<Envelope>,
    tracks: HashMap<String, Track>,
}

fn is_rule(c: &Term) -> bool {
    matches!(c, Term::Imp(..)) || c.functor() == Some("all")
}

/// Feature values that exclude one another.
const EXCLUSIVE: [&[&str]; 3] = [
    &["singular", "plural"],
    &["female", "male"],
    &["past", "general_habitual", "future"],
];

/// Two feature lists may describe the same thing. Determiners and
/// prepositions are ignored; number is ignored when `loose`.
pub fn features_compatible(a: &Term, b: &Term, loose: bool) -> bool {
    let has = |l: &Term, f: &str| {
        l.args()
            .iter()
            .any(|x| matches!(x, Term::Atom(y) if y == f))
    };
    EXCLUSIVE.iter().enumerate().all(|(i, group)| {
        if loose && i == 0 {
            return true;
        }
        let pa: Vec<_> = group.iter().filter(|f| has(a, f)).collect();
        let pb: Vec<_> = group.iter().filter(|f| has(b, f)).collect();
        pa.is_empty() || pb.is_empty() || pa == pb
    })
}

/// Variables a pattern may bind.
struct Pattern<'a> {
    vars: &'a HashSet<String>,
    /// Matching rule restrictors: time and space slots are left free and
    /// number is not compared.
    loose: bool,
}

impl Pattern<'_> {
    fn unify(&self, p: &Term, f: &Term, s: &mut Subst, ats: &mut HashMap<String, Term>) -> bool {
        match (p, f) {
            (Term::Var(v), _) if self.vars.contains(v) => match s.get(v) {
                Some(b) => b == f,
                None => {
                    s.insert(v.clone(), f.clone());
                    true
                }
            },
            (Term::At(pa), Term::At(fa)) if pa.len() == 3 && fa.len() == 3 => {
                if !self.unify(&pa[0], &fa[0], s, ats) {
                    return false;
                }
                if let Term::Var(l) = &pa[0] {
                    if self.vars.contains(l) {
                        ats.entry(l.clone()).or_insert_with(|| f.clone());
                    }
                }
                self.loose
                    || (self.unify(&pa[1], &fa[1], s, ats) && self.unify(&pa[2], &fa[2], s, ats))
            }
            (Term::List(_), Term::List(_)) if p.is_feature_list() && f.is_feature_list() => {
                features_compatible(p, f, self.loose)
            }
            (Term::Compound(pf, pa), Term::Compound(ff, fa)) => {
                if pf == ANY_EVENT && pf != ff {
                    let event = fa.len() >= 2
                        && fa
                            .last()
                            .is_some_and(|l| l.is_feature_list() && has_tense(l));
                    return event
                        && pa.len() == 2
                        && self.unify(&pa[0], &fa[0], s, ats)
                        && self.unify(&pa[1], &fa[fa.len() - 1], s, ats);
                }
                (pf == ff || pf == ANY_ENTITY) && self.all(pa, fa, s, ats)
            }
            (Term::List(pa), Term::List(fa))
            | (Term::And(pa), Term::And(fa))
            | (Term::Identical(pa), Term::Identical(fa)) => self.all(pa, fa, s, ats),
            (Term::Neg(a), Term::Neg(b)) => self.unify(a, b, s, ats),
            (Term::Imp(a1, b1), Term::Imp(a2, b2)) => {
                self.unify(a1, a2, s, ats) && self.unify(b1, b2, s, ats)
            }
            _ => p == f,
        }
    }

    fn all(
        &self,
        pa: &[Term],
        fa: &[Term],
        s: &mut Subst,
        ats: &mut HashMap<String, Term>,
    ) -> bool {
        pa.len() == fa.len() && pa.iter().zip(fa).all(|(x, y)| self.unify(x, y, s, ats))
    }
}

fn temporal_constraint(c: &Term) -> Option<(&str, &str, Interval)> {
    match c {
        Term::Compound(f, a)
            if matches!(f.as_str(), "before" | "after" | "during") && a.len() == 2 =>
        {
            match &a[0] {
                Term::Var(t) => Some((f.as_str(), t.as_str(), a[1].as_interval()?)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Whether a stored constraint on an event's time implies a queried one.
pub fn entails(stored: (&str, Interval), query: (&str, Interval)) -> bool {
    use AllenRelation::*;
    let rel = stored.1.relation_to(&query.1);
    match (stored.0, query.0) {
        ("before", "before") => matches!(
            rel,
            Before | Meets | Overlaps | FinishedBy | Contains | Starts | StartedBy | Equals
        ),
        ("during", "before") => rel == Before,
        ("after", "after") => matches!(
            rel,
            After | MetBy | OverlappedBy | Finishes | FinishedBy | StartedBy | Contains | Equals
        ),
        ("during", "after") => rel == After,
        ("during", "during") => matches!(rel, During | Starts | Finishes | Equals),
        _ => false,
    }
}

impl FactStore {
    pub fn new() -> FactStore {
        FactStore::default()
    }

    pub fn facts(&self) -> &[Term] {
        &self.facts
    }

    pub fn rules(&self) -> &[Term] {
        &self.rules
    }

    pub fn log(&self) -> &[Envelope] {
        &self.log
    }

    pub fn track_count(&self) -> usize {
        self.tracks.len()
    }

    fn add_fact(&mut self, c: Term) {
        if self.seen.insert(c.clone()) {
            let key = c.functor().unwrap_or_default().to_string();
            self.by_functor
                .entry(key)
                .or_default()
                .push(self.facts.len());
            self.facts.push(c);
        }
    }

    /// Stores an asserted payload and logs its envelope. Envelopes of other
    /// acts are only logged.
    pub fn assert_form(&mut self, env: Envelope) {
        if env.act == Act::Assert {
            for c in &env.payload {
                if is_rule(c) {
                    if !self.rules.contains(c) {
                        self.rules.push(c.clone());
                    }
                } else {
                    self.add_fact(c.clone());
                }
            }
        }
        self.log.push(env);
    }

    /// Consequents of every rule whose restrictor matches ground facts.
    pub fn derived(&self) -> Vec<Term> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for rule in &self.rules {
            for c in self.apply(rule) {
                if !self.seen.contains(&c) && seen.insert(c.clone()) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn apply(&self, rule: &Term) -> Vec<Term> {
        let (vars, restrictor, body): (HashSet<String>, Vec<Term>, Vec<Term>) = match rule {
            Term::Compound(f, a) if f == "all" && a.len() == 2 => {
                let Term::Imp(r, b) = &a[1] else {
                    return Vec::new();
                };
                let mut vars: HashSet<String> = a[0].args().iter().map(Term::to_string).collect();
                vars.extend(
                    a[1].vars()
                        .into_iter()
                        .filter(|v| var_kind(v) != Some(VarKind::Skolem)),
                );
                (vars, flatten(r), flatten(b))
            }
            // conditionals over ground antecedents
            Term::Imp(a, b) if a.functor() != Some("all") => {
                (a.vars().into_iter().collect(), flatten(a), flatten(b))
            }
            _ => return Vec::new(),
        };
        let pat = Pattern {
            vars: &vars,
            loose: true,
        };
        let mut out = Vec::new();
        let facts: Vec<&Term> = self.facts.iter().collect();
        self.search(
            &pat,
            &restrictor,
            &facts,
            Subst::new(),
            HashMap::new(),
            &mut |s, ats| {
                out.extend(body.iter().filter_map(|c| instantiate(c, s, ats, &vars)));
            },
        );
        out
    }

    /// Backtracking conjunctive match of `goals` against `facts`.
    fn search(
        &self,
        pat: &Pattern,
        goals: &[Term],
        facts: &[&Term],
        s: Subst,
        ats: HashMap<String, Term>,
        found: &mut dyn FnMut(&Subst, &HashMap<String, Term>),
    ) {
        self.search_with(
            pat,
            goals,
            facts,
            s,
            ats,
            &mut Vec::new(),
            &mut |s, ats, _| found(s, ats),
        );
    }

    fn search_with(
        &self,
        pat: &Pattern,
        goals: &[Term],
        facts: &[&Term],
        s: Subst,
        ats: HashMap<String, Term>,
        support: &mut Vec<Term>,
        found: &mut dyn FnMut(&Subst, &HashMap<String, Term>, &[Term]),
    ) {
        let Some((goal, rest)) = goals.split_first() else {
            found(&s, &ats, support);
            return;
        };
        for f in facts {
            let mut s2 = s.clone();
            let mut ats2 = ats.clone();
            if pat.unify(goal, f, &mut s2, &mut ats2) {
                support.push((*f).clone());
                self.search_with(pat, rest, facts, s2, ats2, support, found);
                support.pop();
            }
        }
    }

    fn constraints_on(&self, t: &Term) -> Vec<Term> {
        let Term::Var(t) = t else { return Vec::new() };
        self.by_functor_any(&["before", "after", "during"])
            .filter(|c| temporal_constraint(c).is_some_and(|(_, v, _)| v == t))
            .cloned()
            .collect()
    }

    fn by_functor_any<'a>(&'a self, names: &'a [&str]) -> impl Iterator<Item = &'a Term> + 'a {
        names
            .iter()
            .flat_map(|n| self.by_functor.get(*n).into_iter().flatten())
            .map(|&i| &self.facts[i])
    }

    /// Answers a translated question. Pattern variables are the symbols the
    /// question introduced; labels bound by anaphora stay fixed.
    pub fn answer(&self, q: &Translation, focus: &QueryFocus) -> Answer {
        let vars: HashSet<String> = q.fresh.iter().cloned().collect();
        let (filters, goals): (Vec<Term>, Vec<Term>) = q
            .form
            .iter()
            .cloned()
            .partition(|c| temporal_constraint(c).is_some_and(|(_, v, _)| vars.contains(v)));
        let derived = self.derived();
        let facts: Vec<&Term> = self.facts.iter().chain(&derived).collect();
        let pat = Pattern {
            vars: &vars,
            loose: false,
        };
        let mut matches: Vec<Match> = Vec::new();
        let event_time = q.time.clone();
        self.search_with(
            &pat,
            &goals,
            &facts,
            Subst::new(),
            HashMap::new(),
            &mut Vec::new(),
            &mut |s, _, support| {
                let bound_time = event_time.as_ref().and_then(|t| s.get(t)).cloned();
                let stored = bound_time
                    .as_ref()
                    .map(|t| self.constraints_on(t))
                    .unwrap_or_default();
                let ok = filters.iter().all(|f| {
                    let (rel, _, iv) = temporal_constraint(f).expect("filter");
                    stored.iter().any(|c| {
                        let (r, _, i) = temporal_constraint(c).expect("constraint");
                        entails((r, i), (rel, iv))
                    })
                });
                if !ok {
                    return;
                }
                let value = q.queried.as_ref().and_then(|v| s.get(v)).cloned();
                let places = match focus.queried {
                    Queried::Locational => self.places_of(support),
                    _ => Vec::new(),
                };
                let m = Match {
                    subst: s.clone(),
                    support: support.to_vec(),
                    value,
                    constraints: stored,
                    places,
                };
                if !matches.iter().any(|x| x.support == m.support) {
                    matches.push(m);
                }
            },
        );
        Answer {
            focus: focus.queried,
            matches,
        }
    }

    /// Role clauses stored on the events among `support`.
    fn places_of(&self, support: &[Term]) -> Vec<Term> {
        let cores: Vec<Term> = support
            .iter()
            .filter_map(|c| match c {
                Term::Compound(f, a)
                    if a.len() >= 2 && a.last().is_some_and(Term::is_feature_list) =>
                {
                    Some(Term::Compound(f.clone(), a[..a.len() - 1].to_vec()))
                }
                _ => None,
            })
            .collect();
        self.facts
            .iter()
            .filter(|c| match c {
                Term::Compound(f, a)
                    if a.len() == 2
                        && (f.starts_with("location_") || f == "source" || f == "goal") =>
                {
                    matches!(&a[0], Term::List(x) if x.len() == 1 && cores.contains(&x[0]))
                }
                _ => false,
            })
            .cloned()
            .collect()
    }

    /// Adds track records as ground clauses. Each track id keeps one skolem
    /// constant across records.
    pub fn ingest_tracks(
        &mut self,
        records: impl IntoIterator<Item = TrackRecord>,
        sym: &mut Symbols,
    ) -> usize {
        let mut n = 0;
        for r in records {
            let label = match self.tracks.get(&r.track_id) {
                Some(t) => t.label.clone(),
                None => sym.skolem(),
            };
            let t = format!("t_{}", sym.time());
            let at = Term::at(Term::var(&label), Term::var(&t), Term::var(&sym.space()));
            let num = |x: f64| Term::atom(&format!("{x}"));
            let clauses = vec![
                Term::app(
                    &r.class,
                    vec![
                        at.clone(),
                        Term::List(vec![
                            Term::atom("singular"),
                            Term::app("type", vec![Term::atom(&r.kind)]),
                        ]),
                    ],
                ),
                Term::app("track_id", vec![at.clone(), Term::atom(&r.track_id)]),
                Term::app("position", vec![at.clone(), num(r.lat), num(r.lon)]),
                Term::app(
                    "during",
                    vec![Term::var(&t), Term::interval(Interval::point(r.time))],
                ),
                Term::app("heading", vec![at.clone(), num(r.direction)]),
                Term::app("speed", vec![at.clone(), num(r.speed)]),
                Term::app("allegiance", vec![at.clone(), Term::atom(&r.allegiance)]),
                Term::app("nationality", vec![at.clone(), Term::atom(&r.nationality)]),
                Term::app("reported_by", vec![at, Term::atom(&r.source)]),
            ];
            for c in &clauses {
                self.add_fact(c.clone());
            }
            let newer = self
                .tracks
                .get(&r.track_id)
                .is_none_or(|t| r.time >= t.latest.time);
            if newer {
                self.tracks.insert(
                    r.track_id.clone(),
                    Track {
                        label,
                        latest: r,
                        clauses,
                    },
                );
            }
            n += 1;
        }
        n
    }

    /// The latest state of a track plus asserted sentences naming it.
    pub fn situation_report(
        &self,
        class: &str,
        track_id: &str,
    ) -> Result<SituationReport, KbError> {
        let t = self
            .tracks
            .get(track_id)
            .ok_or_else(|| KbError::NoSuchTrack(track_id.to_string()))?;
        if !class.is_empty() && class != t.latest.class && class != t.latest.kind {
            return Err(KbError::ClassMismatch {
                id: track_id.into(),
                wanted: class.into(),
                found: t.latest.class.clone(),
            });
        }
        let names = |c: &Term| {
            let mut hit = false;
            c.visit(&mut |x| {
                hit |=
                    x.functor() == Some(track_id) && matches!(x.args().first(), Some(Term::At(_)))
            });
            hit
        };
        let mentions = self
            .log
            .iter()
            .filter(|e| e.act == Act::Assert && e.payload.iter().any(&names))
            .map(|e| e.payload.clone())
            .collect();
        Ok(SituationReport {
            track_id: track_id.into(),
            latest: t.latest.clone(),
            clauses: t.clauses.clone(),
            mentions,
        })
    }
}

/// Replaces bound @-terms and variables; `None` if a pattern variable is
/// left unbound.
fn instantiate(
    c: &Term,
    s: &Subst,
    ats: &HashMap<String, Term>,
    vars: &HashSet<String>,
) -> Option<Term> {
    let unbound = std::cell::Cell::new(false);
    let out = c.map(&|x| match x {
        Term::At(a) => match a.first() {
            Some(Term::Var(v)) if ats.contains_key(v) => ats.get(v).cloned(),
            _ => None,
        },
        Term::Var(v) if vars.contains(v) => {
            let b = s.get(v).cloned();
            unbound.set(unbound.get() || b.is_none());
            b
        }
        _ => None,
    });
    (!unbound.get()).then_some(out)
}

fn flatten(t: &Term) -> Vec<Term> {
    match t {
        Term::And(a) => a.iter().flat_map(flatten).collect(),
        other => vec![other.clone()],
    }
}

#[cfg(test)]
mod tests;
