//! Hand-written grammar for the controlled English, parsed exhaustively
//! with a chart so that every licensed tree is returned.

mod chart;
mod grammar;

use std::fmt::{self, Write as _};
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::{AcronymPosition, Case, Gender, LexEntry, Lexicon, Number, Tense, VerbForm};
use crate::surface::Token;

pub use grammar::temporal_spans;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Cat {
    S,
    Decl,
    Cond,
    Question,
    Directive,
    DirClass,
    VP,
    VCore,
    /// Verb phrase with its object extracted (object questions).
    VCoreGap,
    Pred,
    NP,
    CNP,
    NPC,
    ENP,
    GenNP,
    GenDet,
    NP2,
    Mod,
    Comp,
    Adjunct,
    PP,
    Det,
    PossDet,
    Card,
    N,
    PN,
    Title,
    PostTitle,
    Pro,
    Adj,
    V,
    Do,
    Be,
    Modal,
    Not,
    Always,
    Freq,
    P,
    Conj,
    Wh,
    Dir,
    Temp,
    Lit(&'static str),
}

impl Cat {
    pub fn label(self) -> &'static str {
        match self {
            Cat::S => "S",
            Cat::Decl => "DECL",
            Cat::Cond => "COND",
            Cat::Question => "QUESTION",
            Cat::Directive => "DIRECTIVE",
            Cat::DirClass => "CLASS",
            Cat::VP => "VP",
            Cat::VCore => "VCORE",
            Cat::VCoreGap => "VCORE-GAP",
            Cat::Pred => "PRED",
            Cat::NP => "NP",
            Cat::CNP => "CNP",
            Cat::NPC => "NPC",
            Cat::ENP => "ENP",
            Cat::GenNP => "GEN-NP",
            Cat::GenDet => "GEN-DET",
            Cat::NP2 => "NP2",
            Cat::Mod => "MOD",
            Cat::Comp => "COMP",
            Cat::Adjunct => "ADJUNCT",
            Cat::PP => "PP",
            Cat::Det => "DET",
            Cat::PossDet => "POSS",
            Cat::Card => "CARD",
            Cat::N => "N",
            Cat::PN => "PROP-N",
            Cat::Title => "TITLE",
            Cat::PostTitle => "POST-TITLE",
            Cat::Pro => "PRO",
            Cat::Adj => "ADJ",
            Cat::V => "V",
            Cat::Do => "AUX",
            Cat::Be => "BE",
            Cat::Modal => "MODAL",
            Cat::Not => "NEG",
            Cat::Always => "ADV",
            Cat::Freq => "FREQ",
            Cat::P => "P",
            Cat::Conj => "CONJ",
            Cat::Wh => "WH",
            Cat::Dir => "DIR",
            Cat::Temp => "TEMP",
            Cat::Lit("'s") => "GEN",
            Cat::Lit("." | "?" | "!" | ",") => "PUNCT",
            Cat::Lit("that") => "C",
            Cat::Lit("to" | "on") => "P",
            Cat::Lit("if") => "IF",
            Cat::Lit("then") => "THEN",
            Cat::Lit("situation" | "report") => "N",
            Cat::Lit("show" | "do") => "V",
            Cat::Lit(_) => "ADV",
        }
    }
}

/// Subject agreement demanded by a finite verb form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Agr {
    Sg3,
    Non3Sg,
    Any,
    Am,
    Are,
    Was,
    Were,
}

impl Agr {
    pub fn accepts(self, person: u8, number: Option<Number>) -> bool {
        let sg = number != Some(Number::Plural) && person != 2;
        let third_sg = person == 3 && sg;
        match self {
            Agr::Any => true,
            Agr::Sg3 => third_sg,
            Agr::Non3Sg => !third_sg,
            Agr::Am => person == 1 && sg,
            Agr::Are => !sg,
            Agr::Was => sg,
            Agr::Were => !sg,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Feats {
    pub number: Option<Number>,
    pub person: Option<u8>,
    pub case: Option<Case>,
    pub gender: Option<Gender>,
    pub pronoun: bool,
    pub mass: bool,
    pub has_mod: bool,
    pub first_class: Option<crate::lexicon::AdjClass>,
    pub form: Option<VerbForm>,
    pub tense: Option<Tense>,
    pub agr: Option<Agr>,
    pub homograph: bool,
    pub motion: bool,
    pub prep: Option<String>,
    pub wh: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leaf {
    /// Index of the (first) token.
    pub index: usize,
    pub text: String,
    #[serde(skip)]
    pub entry: Option<LexEntry>,
    pub constraint: Option<AcronymPosition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub cat: Cat,
    /// Token range `start..end`.
    pub start: usize,
    pub end: usize,
    pub feats: Feats,
    pub kids: Vec<Arc<Node>>,
    pub leaf: Option<Leaf>,
}

impl Node {
    pub fn entry(&self) -> Option<&LexEntry> {
        self.leaf.as_ref().and_then(|l| l.entry.as_ref())
    }

    pub fn text(&self) -> &str {
        self.leaf.as_ref().map(|l| l.text.as_str()).unwrap_or("")
    }

    pub fn lemma(&self) -> &str {
        self.entry()
            .map(|e| e.lemma.as_str())
            .unwrap_or_else(|| self.text())
    }

    pub fn kid(&self, cat: Cat) -> Option<&Arc<Node>> {
        self.kids.iter().find(|k| k.cat == cat)
    }

    pub fn kids_of(&self, cat: Cat) -> impl Iterator<Item = &Arc<Node>> {
        self.kids.iter().filter(move |k| k.cat == cat)
    }

    /// Depth-first search for the first descendant (or self) of `cat`.
    pub fn find(&self, cat: Cat) -> Option<&Node> {
        if self.cat == cat {
            return Some(self);
        }
        self.kids.iter().find_map(|k| k.find(cat))
    }

    fn write_bracketed(&self, out: &mut String) {
        match &self.leaf {
            Some(l) => {
                let _ = write!(out, "({} {})", self.cat.label(), l.text);
            }
            None => {
                let _ = write!(out, "({}", self.cat.label());
                for k in &self.kids {
                    out.push(' ');
                    k.write_bracketed(out);
                }
                out.push(')');
            }
        }
    }

    fn write_indented(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match &self.leaf {
            Some(l) => {
                let _ = writeln!(out, "{pad}({} {})", self.cat.label(), l.text);
            }
            None => {
                let _ = writeln!(out, "{pad}({}", self.cat.label());
                for k in &self.kids {
                    k.write_indented(depth + 1, out);
                }
                let _ = writeln!(out, "{pad})");
            }
        }
    }
}

/// One complete analysis of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseTree {
    pub root: Arc<Node>,
}

impl ParseTree {
    /// Single-line bracketed form: `(S (DECL (NP ...) ...))`.
    pub fn bracketed(&self) -> String {
        let mut s = String::new();
        self.root.write_bracketed(&mut s);
        s
    }

    pub fn indented(&self) -> String {
        let mut s = String::new();
        self.root.write_indented(0, &mut s);
        s
    }

    pub fn sentence(&self) -> &Node {
        &self.root.kids[0]
    }

    pub fn sentence_type(&self) -> SentenceType {
        let s = self.sentence();
        match s.cat {
            Cat::Question => SentenceType::Interrogative(query_focus_of(s)),
            Cat::Directive => SentenceType::Directive,
            Cat::Decl => match speech_verb(s) {
                Some(act) => SentenceType::Indirect(act),
                None => SentenceType::Declarative,
            },
            _ => SentenceType::Declarative,
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bracketed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Queried {
    Subject,
    Object,
    Predicate,
    Temporal,
    Locational,
    YesNo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryFocus {
    pub queried: Queried,
    /// The wh-word, or an indefinite pronoun for yes/no questions, if any.
    pub binder: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeechAct {
    Say,
    Tell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceType {
    Declarative,
    Interrogative(QueryFocus),
    Directive,
    Indirect(SpeechAct),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not an interrogative")]
    NotInterrogative,
}

fn query_focus_of(q: &Node) -> QueryFocus {
    let wh = q.kid(Cat::Wh).map(|w| w.text().to_lowercase());
    let queried = match (wh.as_deref(), q.kids.get(1).map(|k| k.cat)) {
        (Some("when"), _) => Queried::Temporal,
        (Some("where"), _) => Queried::Locational,
        (Some(_), Some(Cat::VP)) => Queried::Subject,
        (Some(_), Some(Cat::N)) => Queried::Locational,
        (Some(_), _) if q.kids.last().is_some_and(|k| k.cat == Cat::Lit("do")) => {
            Queried::Predicate
        }
        (Some(_), _) => Queried::Object,
        (None, _) => Queried::YesNo,
    };
    let binder = wh.or_else(|| {
        // yes/no questions bind an indefinite pronoun if one appears
        fn indefinite(n: &Node) -> Option<String> {
            if n.cat == Cat::Pro
                && n.entry().and_then(|e| e.pronoun()).map(|p| p.kind)
                    == Some(crate::lexicon::PronKind::Indefinite)
            {
                return Some(n.text().to_lowercase());
            }
            n.kids.iter().find_map(|k| indefinite(k))
        }
        indefinite(q)
    });
    QueryFocus { queried, binder }
}

fn speech_verb(decl: &Node) -> Option<SpeechAct> {
    let vp = decl.kid(Cat::VP)?;
    let mut core = vp.kid(Cat::VCore)?;
    while let Some(inner) = core.kid(Cat::VCore) {
        core = inner;
    }
    core.kid(Cat::Lit("that"))?;
    match core.kid(Cat::V)?.lemma() {
        "say" => Some(SpeechAct::Say),
        "tell" => Some(SpeechAct::Tell),
        _ => None,
    }
}

/// Which element an interrogative tree asks about.
pub fn parse_query_focus(tree: &ParseTree) -> Result<QueryFocus, ParseError> {
    match tree.sentence_type() {
        SentenceType::Interrogative(f) => Ok(f),
        _ => Err(ParseError::NotInterrogative),
    }
}

fn rules() -> &'static [chart::Rule] {
    static RULES: OnceLock<Vec<chart::Rule>> = OnceLock::new();
    RULES.get_or_init(grammar::rules)
}

/// All trees the grammar licenses for one sentence, in a stable order.
pub fn parse(tokens: &[Token], lex: &Lexicon) -> Vec<ParseTree> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let mut chart = chart::Chart::new(rules(), tokens.len());
    for node in grammar::lexical_nodes(tokens, lex) {
        chart.seed(node);
    }
    let mut trees: Vec<ParseTree> = chart
        .run(Cat::S, 0, tokens.len())
        .into_iter()
        .map(|root| ParseTree { root })
        .collect();
    trees.sort_by_cached_key(|t| t.bracketed());
    trees.dedup_by(|a, b| a.bracketed() == b.bracketed());
    trees
}
