//! One analyst's conversation with the system: submitted text runs through
//! the whole pipeline against a private discourse context and fact store.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chronos::{Interval, Timestamp, UtcOffset};
use crate::context::DiscourseContext;
use crate::effector::{answer_sentences, generate, report_sentences};
use crate::graph::{
    rank, select, DeepGraph, GraphError, InterpretationSet, PreferenceProfile, Status,
};
use crate::kb::{parse_tracks, FactStore, TrackError};
use crate::lexicon::LexicalResources;
use crate::mephisto::{print_form, read_form, translate, Act, Envelope, Symbols, Term, Utterance};
use crate::parser::{parse, Queried, QueryFocus, SentenceType};
use crate::surface::{
    precheck, prepare, split_paragraphs, split_sentences, InputDiagnostic, Token,
};

/// Reported for the reserved speech input flag.
pub const SPEECH: &str = "unsupported";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Auto,
    Assert,
    Query,
    Directive,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "assert" => Ok(Mode::Assert),
            "query" => Ok(Mode::Query),
            "directive" | "direct" => Ok(Mode::Directive),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("teller name is empty")]
    EmptyTeller,
    #[error("sentence {0} is not awaiting a choice")]
    StaleReference(usize),
    #[error(transparent)]
    Choice(#[from] GraphError),
    #[error("cannot read term: {0}")]
    BadTerm(String),
    #[error("{0}")]
    Generate(String),
}

/// What happened to one sentence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Item {
    Diagnostics {
        text: String,
        diagnostics: Vec<InputDiagnostic>,
    },
    Pending {
        sentence_ref: usize,
        text: String,
        paraphrases: Vec<String>,
    },
    Ok {
        text: String,
        act: Act,
        mephisto: String,
        answers: Vec<String>,
    },
    Error {
        text: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Response {
    /// UTC time used as the utterance time of every sentence in the request.
    pub timestamp: String,
    pub speech: &'static str,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Submit { text: String, mode: Mode },
    Choose { sentence_ref: usize, index: usize },
    Tracks { lines: String },
    Paragraph,
    Generate { term: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogEntry {
    pub seq: usize,
    pub timestamp: String,
    #[serde(skip)]
    pub utc: Timestamp,
    pub teller: String,
    #[serde(flatten)]
    pub command: Command,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone)]
struct Queued {
    new_paragraph: bool,
    text: String,
    tokens: Vec<Token>,
}

#[derive(Debug, Clone)]
struct Pending {
    text: String,
    mode: Mode,
    sentence_type: SentenceType,
    set: InterpretationSet,
    utc: Timestamp,
    rest: Vec<Queued>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackResult {
    pub timestamp: String,
    pub ingested: usize,
    pub rejected: Vec<String>,
}

pub struct Session {
    teller: String,
    offset: UtcOffset,
    res: Arc<LexicalResources>,
    prefs: PreferenceProfile,
    ctx: DiscourseContext,
    store: FactStore,
    sym: Symbols,
    pending: BTreeMap<usize, Pending>,
    next_ref: usize,
    log: Vec<LogEntry>,
}

fn sentence_text(text: &str, tokens: &[Token]) -> String {
    match (tokens.first(), tokens.last()) {
        (Some(a), Some(b)) => text[a.span.0..b.span.1].to_string(),
        _ => String::new(),
    }
}

impl Item {
    /// Transcript lines: a status mark and the sentence, then details.
    pub fn lines(&self) -> Vec<String> {
        item_line(self)
    }
}

fn item_line(item: &Item) -> Vec<String> {
    match item {
        Item::Diagnostics { text, diagnostics } => {
            let mut v = vec![format!("? {text}")];
            v.extend(diagnostics.iter().map(|d| format!("  {}", d.message)));
            v
        }
        Item::Pending {
            sentence_ref,
            text,
            paraphrases,
        } => {
            let mut v = vec![format!("#{sentence_ref} {text}")];
            v.extend(
                paraphrases
                    .iter()
                    .enumerate()
                    .map(|(i, p)| format!("  [{i}] {p}")),
            );
            v
        }
        Item::Ok {
            text,
            mephisto,
            answers,
            ..
        } => {
            let mut v = vec![format!("> {text}"), format!("  {mephisto}")];
            v.extend(answers.iter().map(|a| format!("  {a}")));
            v
        }
        Item::Error { text, message } => vec![format!("! {text}"), format!("  {message}")],
    }
}

impl Session {
    pub fn new(
        teller: &str,
        offset: UtcOffset,
        res: Arc<LexicalResources>,
    ) -> Result<Session, SessionError> {
        let teller = teller.split_whitespace().collect::<Vec<_>>().join("_");
        if teller.is_empty() {
            return Err(SessionError::EmptyTeller);
        }
        Ok(Session {
            teller,
            offset,
            res,
            prefs: PreferenceProfile::default(),
            ctx: DiscourseContext::new(),
            store: FactStore::new(),
            sym: Symbols::new(),
            pending: BTreeMap::new(),
            next_ref: 0,
            log: Vec::new(),
        })
    }

    pub fn teller(&self) -> &str {
        &self.teller
    }

    pub fn offset(&self) -> UtcOffset {
        self.offset
    }

    pub fn store(&self) -> &FactStore {
        &self.store
    }

    pub fn context(&self) -> &DiscourseContext {
        &self.ctx
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Now, but never earlier than the last log entry.
    fn clock(&self) -> Timestamp {
        let now = Timestamp::now();
        match self.log.last() {
            Some(e) if e.utc > now => e.utc,
            _ => now,
        }
    }

    fn record(&mut self, utc: Timestamp, command: Command, lines: Vec<String>) {
        let utc = match self.log.last() {
            Some(e) if e.utc > utc => e.utc,
            _ => utc,
        };
        self.log.push(LogEntry {
            seq: self.log.len(),
            timestamp: utc.iso(),
            utc,
            teller: self.teller.clone(),
            command,
            lines,
        });
    }

    pub fn submit(&mut self, text: &str, mode: Mode) -> Response {
        let utc = self.clock();
        self.submit_at(text, mode, utc)
    }

    /// Runs every sentence of `text` with utterance time `utc`. Blank lines
    /// start a new paragraph. An ambiguous sentence holds back the sentences
    /// after it until a reading is chosen.
    pub fn submit_at(&mut self, text: &str, mode: Mode, utc: Timestamp) -> Response {
        let mut queue = Vec::new();
        for (i, (_, para)) in split_paragraphs(text).into_iter().enumerate() {
            let tokens = prepare(para, &self.res);
            for (j, s) in split_sentences(&tokens).into_iter().enumerate() {
                queue.push(Queued {
                    new_paragraph: i > 0 && j == 0,
                    text: sentence_text(para, &s),
                    tokens: s,
                });
            }
        }
        let items = self.run(queue, mode, utc);
        let lines = items.iter().flat_map(item_line).collect();
        self.record(
            utc,
            Command::Submit {
                text: text.to_string(),
                mode,
            },
            lines,
        );
        Response {
            timestamp: utc.iso(),
            speech: SPEECH,
            items,
        }
    }

    fn run(&mut self, queue: Vec<Queued>, mode: Mode, utc: Timestamp) -> Vec<Item> {
        let mut items = Vec::new();
        let mut queue = queue.into_iter();
        while let Some(q) = queue.next() {
            if q.new_paragraph {
                self.ctx.new_paragraph();
            }
            match self.sentence(&q, mode, utc) {
                Step::Done(item) => items.push(item),
                Step::Ambiguous(sentence_type, set) => {
                    let sentence_ref = self.next_ref;
                    self.next_ref += 1;
                    items.push(Item::Pending {
                        sentence_ref,
                        text: q.text.clone(),
                        paraphrases: set.paraphrases(),
                    });
                    self.pending.insert(
                        sentence_ref,
                        Pending {
                            text: q.text,
                            mode,
                            sentence_type,
                            set,
                            utc,
                            rest: queue.collect(),
                        },
                    );
                    break;
                }
            }
        }
        items
    }

    fn sentence(&mut self, q: &Queued, mode: Mode, utc: Timestamp) -> Step {
        let text = q.text.clone();
        let diagnostics = precheck(&q.tokens, &self.res.lexicon);
        if !diagnostics.is_empty() {
            return Step::Done(Item::Diagnostics { text, diagnostics });
        }
        let trees = parse(&q.tokens, &self.res.lexicon);
        let Some(first) = trees.first() else {
            return Step::Done(Item::Error {
                text,
                message: "sentence is outside the grammar".into(),
            });
        };
        let sentence_type = first.sentence_type();
        let mut graphs: Vec<DeepGraph> = Vec::new();
        let mut failure = None;
        for tree in &trees {
            match self.ctx.resolve(&crate::graph::to_graph(tree)) {
                Ok(gs) => {
                    for g in gs {
                        if !graphs
                            .iter()
                            .any(|x| x.digest() == g.digest() && x.bindings == g.bindings)
                        {
                            graphs.push(g);
                        }
                    }
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
        let set = match rank(&text, graphs, &self.prefs) {
            Ok(set) => set,
            Err(_) => {
                return Step::Done(Item::Error {
                    text,
                    message: failure.unwrap_or_default(),
                })
            }
        };
        if set.status == Status::AwaitingSelection {
            return Step::Ambiguous(sentence_type, set);
        }
        let g = set.top().expect("unique").clone();
        Step::Done(self.complete(&text, &g, &sentence_type, mode, utc))
    }

    fn complete(
        &mut self,
        text: &str,
        g: &DeepGraph,
        st: &SentenceType,
        mode: Mode,
        utc: Timestamp,
    ) -> Item {
        let text = text.to_string();
        let utt = Utterance {
            interval: Interval::point(utc),
            offset: self.offset,
        };
        let t = match translate(g, &mut self.sym, &utt) {
            Ok(t) => t,
            Err(e) => {
                return Item::Error {
                    text,
                    message: e.to_string(),
                }
            }
        };
        let (act, focus) = match (mode, t.act) {
            (Mode::Auto, act) => (act, focus_of(st)),
            (Mode::Assert, Act::Assert) => (Act::Assert, None),
            (Mode::Query, Act::Query) => (Act::Query, focus_of(st)),
            (Mode::Query, Act::Assert) => (
                Act::Query,
                Some(QueryFocus {
                    queried: Queried::YesNo,
                    binder: None,
                }),
            ),
            (Mode::Directive, Act::Direct) => (Act::Direct, None),
            (m, act) => {
                let message =
                    format!("sentence is a {} but mode is {m:?}", act.name()).to_lowercase();
                return Item::Error { text, message };
            }
        };
        let env = match Envelope::new(
            &self.teller,
            act,
            utt.interval,
            t.form.clone(),
            &mut self.sym,
        ) {
            Ok(e) => e,
            Err(e) => {
                return Item::Error {
                    text,
                    message: e.to_string(),
                }
            }
        };
        let mephisto = env.print();
        let answers = match act {
            Act::Assert => {
                self.ctx.advance(&t);
                self.store.assert_form(env);
                Vec::new()
            }
            Act::Query => {
                let answer = self.store.answer(&t, &focus.expect("question focus"));
                self.store.assert_form(env);
                answer_sentences(&answer, &self.store, &self.res, self.offset)
            }
            Act::Direct => {
                self.store.assert_form(env);
                let (class, id) = match t.form.first().map(Term::args) {
                    Some([c, i]) => (atom_text(c), atom_text(i)),
                    _ => {
                        return Item::Error {
                            text,
                            message: "malformed directive".into(),
                        }
                    }
                };
                match self.store.situation_report(&class, &id) {
                    Ok(rep) => report_sentences(&rep, &self.res, self.offset),
                    Err(e) => {
                        return Item::Error {
                            text,
                            message: e.to_string(),
                        }
                    }
                }
            }
        };
        Item::Ok {
            text,
            act,
            mephisto,
            answers,
        }
    }

    /// Completes a sentence that was waiting for a reading, then carries on
    /// with any sentences held back behind it.
    pub fn choose(&mut self, sentence_ref: usize, index: usize) -> Result<Response, SessionError> {
        let utc = self.clock();
        self.choose_at(sentence_ref, index, utc)
    }

    pub fn choose_at(
        &mut self,
        sentence_ref: usize,
        index: usize,
        utc: Timestamp,
    ) -> Result<Response, SessionError> {
        let p = self
            .pending
            .get_mut(&sentence_ref)
            .ok_or(SessionError::StaleReference(sentence_ref))?;
        let g = select(&mut p.set, index)?;
        let p = self.pending.remove(&sentence_ref).expect("pending");
        let mut items = vec![self.complete(&p.text, &g, &p.sentence_type, p.mode, p.utc)];
        items.extend(self.run(p.rest, p.mode, p.utc));
        let lines = items.iter().flat_map(item_line).collect();
        self.record(
            utc,
            Command::Choose {
                sentence_ref,
                index,
            },
            lines,
        );
        Ok(Response {
            timestamp: p.utc.iso(),
            speech: SPEECH,
            items,
        })
    }

    pub fn paragraph(&mut self) {
        let utc = self.clock();
        self.paragraph_at(utc);
    }

    pub fn paragraph_at(&mut self, utc: Timestamp) {
        self.ctx.new_paragraph();
        self.record(utc, Command::Paragraph, vec!["-- new paragraph".into()]);
    }

    pub fn tracks(&mut self, lines: &str) -> TrackResult {
        let utc = self.clock();
        self.tracks_at(lines, utc)
    }

    pub fn tracks_at(&mut self, lines: &str, utc: Timestamp) -> TrackResult {
        let (ok, bad) = parse_tracks(lines);
        let ingested = self.store.ingest_tracks(ok, &mut self.sym);
        let rejected: Vec<String> = bad.iter().map(TrackError::to_string).collect();
        let mut log = vec![format!("ingested {ingested} track records")];
        log.extend(rejected.iter().map(|r| format!("  rejected {r}")));
        self.record(
            utc,
            Command::Tracks {
                lines: lines.to_string(),
            },
            log,
        );
        TrackResult {
            timestamp: utc.iso(),
            ingested,
            rejected,
        }
    }

    /// Renders a printed term (or comma-separated clauses) as English.
    pub fn generate(&mut self, term: &str) -> Result<String, SessionError> {
        let utc = self.clock();
        self.generate_at(term, utc)
    }

    pub fn generate_at(&mut self, term: &str, utc: Timestamp) -> Result<String, SessionError> {
        let form = read_form(term).map_err(|e| SessionError::BadTerm(e.to_string()))?;
        let out = generate(&form, &self.res, self.offset)
            .map_err(|e| SessionError::Generate(e.to_string()));
        let line = match &out {
            Ok(s) => s.clone(),
            Err(e) => format!("! {e}"),
        };
        self.record(
            utc,
            Command::Generate {
                term: print_form(&form),
            },
            vec![line],
        );
        out
    }

    /// Rebuilds a session by running a log again with its original times.
    pub fn replay(
        teller: &str,
        offset: UtcOffset,
        res: Arc<LexicalResources>,
        log: &[LogEntry],
    ) -> Result<Session, SessionError> {
        let mut s = Session::new(teller, offset, res)?;
        for e in log {
            match &e.command {
                Command::Submit { text, mode } => {
                    s.submit_at(text, *mode, e.utc);
                }
                Command::Choose {
                    sentence_ref,
                    index,
                } => {
                    s.choose_at(*sentence_ref, *index, e.utc)?;
                }
                Command::Tracks { lines } => {
                    s.tracks_at(lines, e.utc);
                }
                Command::Paragraph => s.paragraph_at(e.utc),
                Command::Generate { term } => {
                    let _ = s.generate_at(term, e.utc);
                }
            }
        }
        Ok(s)
    }
}

enum Step {
    Done(Item),
    Ambiguous(SentenceType, InterpretationSet),
}

fn focus_of(st: &SentenceType) -> Option<QueryFocus> {
    match st {
        SentenceType::Interrogative(f) => Some(f.clone()),
        _ => None,
    }
}

fn atom_text(t: &Term) -> String {
    match t {
        Term::Atom(a) => a.clone(),
        other => other.to_string(),
    }
}
