//! Lexical database: word forms with part of speech and feature bundles,
//! plus the acronym and alias sub-lexicons.
//!
//! Lexicon files hold one lemma per line; regular and irregular inflected
//! forms are generated at load time from the tables in [`inflect`], so a
//! lookup of "stood" finds the `stand` entry with past tense.

mod adjclass;
mod features;
pub mod inflect;
mod sublex;

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adjclass::{adjective_order_valid, AdjClass};
pub use features::{
    AdjectiveFeatures, Agreement, Aktionsart, Alienability, Animacy, Case, FeatureBundle, Frame,
    Gender, MassCount, NounFeatures, Number, Pos, PronKind, PronounFeatures, Tense, TitlePosition,
    Usage, VerbFeatures, VerbForm,
};
pub use sublex::{AcronymEntry, AcronymPosition, AcronymTable, AliasEntry, AliasTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate entry `{surface}` ({pos})")]
    Duplicate {
        line: usize,
        surface: String,
        pos: String,
    },
    #[error("{table} entry `{entry}` uses `{word}`, which is not in the lexicon")]
    Unresident {
        table: &'static str,
        entry: String,
        word: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl LoadError {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> LoadError {
        LoadError::Malformed {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexEntry {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub features: FeatureBundle,
}

impl LexEntry {
    pub fn noun(&self) -> Option<&NounFeatures> {
        self.features.noun.as_ref()
    }

    pub fn verb(&self) -> Option<&VerbFeatures> {
        self.features.verb.as_ref()
    }

    pub fn pronoun(&self) -> Option<&PronounFeatures> {
        self.features.pronoun.as_ref()
    }

    pub fn adjective(&self) -> Option<&AdjectiveFeatures> {
        self.features.adjective.as_ref()
    }

    /// The form the inflection tables produce for this entry's lemma and
    /// features. Equal to `surface` for every entry the lexicon hands out.
    pub fn reinflect(&self) -> String {
        match self.pos {
            Pos::CommonNoun => match self.noun().and_then(|n| n.number) {
                Some(Number::Plural)
                    if self.surface != self.lemma || !is_invariant(&self.lemma) =>
                {
                    inflect::plural(&self.lemma)
                }
                _ => self.surface.clone(),
            },
            Pos::MainVerb => match self.verb().and_then(|v| v.form) {
                Some(VerbForm::Base) => self.lemma.clone(),
                Some(VerbForm::ThirdSingular) => inflect::third_singular(&self.lemma),
                Some(VerbForm::Past) => inflect::past(&self.lemma),
                Some(VerbForm::PresentParticiple) => inflect::present_participle(&self.lemma),
                None => self.surface.clone(),
            },
            _ => self.surface.clone(),
        }
    }
}

fn is_invariant(noun: &str) -> bool {
    inflect::plural(noun) == noun
}

/// Immutable word-form database.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    source: Vec<LexEntry>,
    forms: Vec<LexEntry>,
    by_surface: HashMap<String, Vec<usize>>,
    by_lower: HashMap<String, Vec<usize>>,
    by_lemma: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    /// Parses lexicon file content (`surface<TAB>lemma<TAB>pos<TAB>features`).
    pub fn parse(src: &str) -> Result<Lexicon, LoadError> {
        let mut source: Vec<LexEntry> = Vec::new();
        let mut seen: HashSet<(String, Pos)> = HashSet::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() < 3 || cols.len() > 4 {
                return Err(LoadError::malformed(
                    line,
                    "expected 3 or 4 tab-separated columns",
                ));
            }
            let surface = cols[0].trim();
            let lemma = cols[1].trim();
            if surface.is_empty() || surface.contains(char::is_whitespace) {
                return Err(LoadError::malformed(
                    line,
                    "surface must be a single non-empty token",
                ));
            }
            if lemma.is_empty() {
                return Err(LoadError::malformed(line, "empty lemma"));
            }
            let pos: Pos = cols[2]
                .trim()
                .parse()
                .map_err(|e: String| LoadError::malformed(line, e))?;
            let features = FeatureBundle::parse(pos, cols.get(3).copied().unwrap_or(""))
                .map_err(|e| LoadError::malformed(line, e))?;
            if !seen.insert((surface.to_string(), pos)) {
                return Err(LoadError::Duplicate {
                    line,
                    surface: surface.to_string(),
                    pos: pos.to_string(),
                });
            }
            source.push(LexEntry {
                surface: surface.to_string(),
                lemma: lemma.to_string(),
                pos,
                features,
            });
        }
        Ok(Lexicon::from_entries(source))
    }

    pub fn from_entries(source: Vec<LexEntry>) -> Lexicon {
        let mut lex = Lexicon {
            source,
            ..Lexicon::default()
        };
        let expanded: Vec<LexEntry> = lex.source.iter().flat_map(expand).collect();
        for entry in expanded {
            let i = lex.forms.len();
            lex.by_surface
                .entry(entry.surface.clone())
                .or_default()
                .push(i);
            if entry.pos != Pos::ProperNoun {
                lex.by_lower
                    .entry(entry.surface.to_lowercase())
                    .or_default()
                    .push(i);
            }
            lex.by_lemma.entry(entry.lemma.clone()).or_default().push(i);
            lex.forms.push(entry);
        }
        lex
    }

    pub fn load(path: &Path) -> Result<Lexicon, LoadError> {
        Lexicon::parse(&read(path)?)
    }

    /// Entries as they appear in the source file.
    pub fn entries(&self) -> &[LexEntry] {
        &self.source
    }

    /// Every word form, including generated inflections.
    pub fn forms(&self) -> &[LexEntry] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// All entries for a token in non-initial position (exact case).
    pub fn lookup(&self, token: &str) -> Vec<LexEntry> {
        let mut out: Vec<LexEntry> = self
            .by_surface
            .get(token)
            .into_iter()
            .flatten()
            .map(|&i| self.forms[i].clone())
            .collect();
        out.extend(synthetic(token));
        out
    }

    /// Lookup at sentence-initial position: non-proper entries also match
    /// case-insensitively.
    pub fn lookup_initial(&self, token: &str) -> Vec<LexEntry> {
        let mut out = self.lookup(token);
        let lower = token.to_lowercase();
        for &i in self.by_lower.get(&lower).into_iter().flatten() {
            let e = &self.forms[i];
            if !out.contains(e) {
                out.push(e.clone());
            }
        }
        out
    }

    pub fn lookup_at(&self, token: &str, sentence_initial: bool) -> Vec<LexEntry> {
        if sentence_initial {
            self.lookup_initial(token)
        } else {
            self.lookup(token)
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.by_surface.contains_key(token) || !synthetic(token).is_empty()
    }

    /// Forms sharing a lemma and part of speech.
    pub fn forms_of<'a>(
        &'a self,
        lemma: &str,
        pos: Pos,
    ) -> impl Iterator<Item = &'a LexEntry> + 'a {
        self.by_lemma
            .get(lemma)
            .into_iter()
            .flatten()
            .map(move |&i| &self.forms[i])
            .filter(move |e| e.pos == pos)
    }

    /// The base-form main verb whose third person singular is `functor`
    /// ("stands" for stand). Event predicates are named this way.
    pub fn verb_for_functor(&self, functor: &str) -> Option<&LexEntry> {
        self.by_surface
            .get(functor)
            .into_iter()
            .flatten()
            .map(|&i| &self.forms[i])
            .find(|e| {
                e.pos == Pos::MainVerb
                    && e.verb().and_then(|v| v.form) == Some(VerbForm::ThirdSingular)
            })
            .and_then(|third| self.base_verb(&third.lemma))
    }

    pub fn base_verb(&self, lemma: &str) -> Option<&LexEntry> {
        self.forms_of(lemma, Pos::MainVerb)
            .find(|e| e.verb().and_then(|v| v.form) == Some(VerbForm::Base))
    }

    /// The citation (singular) entry of a noun lemma, common or proper.
    pub fn noun(&self, lemma: &str) -> Option<&LexEntry> {
        self.forms_of(lemma, Pos::CommonNoun)
            .find(|e| e.surface == lemma)
            .or_else(|| self.forms_of(lemma, Pos::ProperNoun).next())
    }

    pub fn adjective(&self, lemma: &str) -> Option<&LexEntry> {
        self.forms_of(lemma, Pos::Adjective).next()
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn with_verb(entry: &LexEntry, surface: String, f: impl FnOnce(&mut VerbFeatures)) -> LexEntry {
    let mut e = entry.clone();
    e.surface = surface;
    if let Some(v) = e.features.verb.as_mut() {
        f(v);
    }
    e
}

/// Inflected forms generated from one source line.
fn expand(entry: &LexEntry) -> Vec<LexEntry> {
    match entry.pos {
        Pos::CommonNoun if entry.surface == entry.lemma => {
            let noun = entry.noun().cloned().unwrap_or_default();
            let mut singular = entry.clone();
            let n = singular
                .features
                .noun
                .get_or_insert_with(NounFeatures::default);
            if n.number == Some(Number::Plural) {
                // plurale tantum: listed as is
                return vec![entry.clone()];
            }
            n.number = Some(Number::Singular);
            if noun.is_mass() {
                return vec![singular];
            }
            let mut plural = singular.clone();
            plural.surface = inflect::plural(&entry.lemma);
            plural.features.noun.as_mut().unwrap().number = Some(Number::Plural);
            vec![singular, plural]
        }
        Pos::MainVerb
            if entry.surface == entry.lemma && entry.verb().and_then(|v| v.form).is_none() =>
        {
            let lemma = &entry.lemma;
            vec![
                with_verb(entry, lemma.clone(), |v| {
                    v.form = Some(VerbForm::Base);
                    v.tense = Some(Tense::Present);
                    v.agreement = Some(Agreement::NonThirdSingular);
                }),
                with_verb(entry, inflect::third_singular(lemma), |v| {
                    v.form = Some(VerbForm::ThirdSingular);
                    v.tense = Some(Tense::Present);
                    v.agreement = Some(Agreement::ThirdSingular);
                }),
                with_verb(entry, inflect::past(lemma), |v| {
                    v.form = Some(VerbForm::Past);
                    v.tense = Some(Tense::Past);
                    v.agreement = Some(Agreement::Any);
                }),
                with_verb(entry, inflect::present_participle(lemma), |v| {
                    v.form = Some(VerbForm::PresentParticiple);
                }),
            ]
        }
        _ => vec![entry.clone()],
    }
}

fn misc_entry(surface: &str, pos: Pos, misc: &[(&str, &str)]) -> LexEntry {
    let mut features = FeatureBundle::default();
    for (k, v) in misc {
        features.misc.insert(k.to_string(), v.to_string());
    }
    LexEntry {
        surface: surface.to_string(),
        lemma: surface.to_string(),
        pos,
        features,
    }
}

/// Track identifiers such as `MR41_PAN-EAV`: capitals, digits, an
/// underscore, then capitals, digits and hyphens.
pub fn is_track_id(token: &str) -> bool {
    let Some((head, tail)) = token.split_once('_') else {
        return false;
    };
    let letters = head.chars().take_while(|c| c.is_ascii_uppercase()).count();
    letters >= 2
        && head.len() > letters
        && head[letters..].chars().all(|c| c.is_ascii_digit())
        && !tail.is_empty()
        && tail
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '-')
}

/// Entries for open numeric and identifier patterns that no file lists.
fn synthetic(token: &str) -> Vec<LexEntry> {
    if !token.is_empty() && token.chars().all(|c| c.is_ascii_digit()) {
        let number = if token == "1" { "singular" } else { "plural" };
        return vec![misc_entry(
            token,
            Pos::Cardinal,
            &[("value", token), ("number", number)],
        )];
    }
    for suffix in ["st", "nd", "rd", "th"] {
        if let Some(digits) = token.strip_suffix(suffix) {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                return vec![misc_entry(token, Pos::Ordinal, &[("value", digits)])];
            }
        }
    }
    if let Some(digits) = token.strip_suffix('s') {
        if digits.len() == 4 && digits.ends_with('0') && digits.chars().all(|c| c.is_ascii_digit())
        {
            return vec![misc_entry(
                token,
                Pos::Cardinal,
                &[("semantic_type", "decade"), ("value", digits)],
            )];
        }
    }
    if is_track_id(token) {
        let features = FeatureBundle {
            noun: Some(NounFeatures {
                number: Some(Number::Singular),
                animacy: Some(Animacy::Inanimate),
                taxon: Some("track".into()),
                semantic_type: Some("track_id".into()),
                ..NounFeatures::default()
            }),
            ..FeatureBundle::default()
        };
        return vec![LexEntry {
            surface: token.into(),
            lemma: token.into(),
            pos: Pos::ProperNoun,
            features,
        }];
    }
    Vec::new()
}

/// A lexicon with its acronym and alias sub-lexicons, cross-validated.
#[derive(Debug, Clone)]
pub struct LexicalResources {
    pub lexicon: Lexicon,
    pub acronyms: AcronymTable,
    pub aliases: AliasTable,
}

const SEED_LEXICON: &str = include_str!("../../data/lexicon.tsv");
const SEED_ACRONYMS: &str = include_str!("../../data/acronyms.tsv");
const SEED_ALIASES: &str = include_str!("../../data/aliases.tsv");

impl LexicalResources {
    pub fn from_sources(
        lexicon: &str,
        acronyms: &str,
        aliases: &str,
    ) -> Result<LexicalResources, LoadError> {
        let res = LexicalResources {
            lexicon: Lexicon::parse(lexicon)?,
            acronyms: AcronymTable::parse(acronyms)?,
            aliases: AliasTable::parse(aliases)?,
        };
        res.validate()?;
        Ok(res)
    }

    /// The lexicon shipped with the crate.
    pub fn seed() -> LexicalResources {
        LexicalResources::from_sources(SEED_LEXICON, SEED_ACRONYMS, SEED_ALIASES)
            .expect("seed lexicon is valid")
    }

    /// Loads `lexicon.tsv`, `acronyms.tsv` and `aliases.tsv` from a directory.
    pub fn load_dir(dir: &Path) -> Result<LexicalResources, LoadError> {
        LexicalResources::from_sources(
            &read(&dir.join("lexicon.tsv"))?,
            &read(&dir.join("acronyms.tsv"))?,
            &read(&dir.join("aliases.tsv"))?,
        )
    }

    fn validate(&self) -> Result<(), LoadError> {
        for alias in self.aliases.iter() {
            if !self.lexicon.contains(&alias.atom) {
                return Err(LoadError::Unresident {
                    table: "alias",
                    entry: alias.surface_sequence.join(" "),
                    word: alias.atom.clone(),
                });
            }
        }
        for acr in self.acronyms.iter() {
            for word in &acr.expansion {
                if !self.lexicon.contains(word) && self.lexicon.lookup_initial(word).is_empty() {
                    return Err(LoadError::Unresident {
                        table: "acronym",
                        entry: acr.acronym.clone(),
                        word: word.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}
