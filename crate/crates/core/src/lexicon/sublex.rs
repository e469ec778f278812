use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LoadError;

/// Where an expanded acronym or title may stand relative to a nominal head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcronymPosition {
    PreNominal,
    PostNominal,
    Free,
}

impl FromStr for AcronymPosition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pre_nominal" => Ok(AcronymPosition::PreNominal),
            "post_nominal" => Ok(AcronymPosition::PostNominal),
            "free" => Ok(AcronymPosition::Free),
            _ => Err(format!("unknown acronym position `{s}`")),
        }
    }
}

impl fmt::Display for AcronymPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcronymPosition::PreNominal => "pre_nominal",
            AcronymPosition::PostNominal => "post_nominal",
            AcronymPosition::Free => "free",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcronymEntry {
    pub acronym: String,
    pub expansion: Vec<String>,
    pub position: AcronymPosition,
}

#[derive(Debug, Clone, Default)]
pub struct AcronymTable {
    entries: HashMap<String, AcronymEntry>,
}

impl AcronymTable {
    /// Parses `acronym<TAB>expansion words<TAB>position` lines.
    pub fn parse(src: &str) -> Result<AcronymTable, LoadError> {
        let mut entries = HashMap::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            if skip(raw) {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 3 {
                return Err(LoadError::malformed(
                    line,
                    "expected 3 tab-separated columns",
                ));
            }
            let acronym = cols[0].trim();
            if acronym.is_empty() || acronym.contains(char::is_whitespace) {
                return Err(LoadError::malformed(line, "acronym must be a single token"));
            }
            let expansion: Vec<String> = cols[1].split_whitespace().map(str::to_string).collect();
            if expansion.is_empty() {
                return Err(LoadError::malformed(line, "empty expansion"));
            }
            let position = cols[2]
                .trim()
                .parse()
                .map_err(|e: String| LoadError::malformed(line, e))?;
            if entries.contains_key(acronym) {
                return Err(LoadError::Duplicate {
                    line,
                    surface: acronym.to_string(),
                    pos: "acronym".into(),
                });
            }
            entries.insert(
                acronym.to_string(),
                AcronymEntry {
                    acronym: acronym.to_string(),
                    expansion,
                    position,
                },
            );
        }
        Ok(AcronymTable { entries })
    }

    pub fn get(&self, token: &str) -> Option<&AcronymEntry> {
        self.entries.get(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AcronymEntry> {
        self.entries.values()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliasEntry {
    pub surface_sequence: Vec<String>,
    pub atom: String,
}

#[derive(Debug, Clone, Default)]
pub struct AliasTable {
    entries: Vec<AliasEntry>,
    by_first: HashMap<String, Vec<usize>>,
    by_atom: HashMap<String, usize>,
}

impl AliasTable {
    /// Parses `word word ...<TAB>atom` lines.
    pub fn parse(src: &str) -> Result<AliasTable, LoadError> {
        let mut table = AliasTable::default();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            if skip(raw) {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 2 {
                return Err(LoadError::malformed(
                    line,
                    "expected 2 tab-separated columns",
                ));
            }
            let seq: Vec<String> = cols[0].split_whitespace().map(str::to_string).collect();
            let atom = cols[1].trim();
            if seq.is_empty() {
                return Err(LoadError::malformed(line, "empty alias sequence"));
            }
            if atom.is_empty() || atom.contains(char::is_whitespace) {
                return Err(LoadError::malformed(
                    line,
                    "alias atom must be a single token",
                ));
            }
            if table.entries.iter().any(|e| e.surface_sequence == seq) {
                return Err(LoadError::Duplicate {
                    line,
                    surface: cols[0].to_string(),
                    pos: "alias".into(),
                });
            }
            table.push(AliasEntry {
                surface_sequence: seq,
                atom: atom.to_string(),
            });
        }
        Ok(table)
    }

    fn push(&mut self, entry: AliasEntry) {
        let i = self.entries.len();
        self.by_first
            .entry(entry.surface_sequence[0].clone())
            .or_default()
            .push(i);
        self.by_atom.entry(entry.atom.clone()).or_insert(i);
        self.entries.push(entry);
    }

    /// Aliases whose first word is `word`.
    pub fn starting_with(&self, word: &str) -> impl Iterator<Item = &AliasEntry> {
        self.by_first
            .get(word)
            .into_iter()
            .flatten()
            .map(move |&i| &self.entries[i])
    }

    /// Surface words for an atom, used when generating text.
    pub fn unfold(&self, atom: &str) -> Option<&[String]> {
        self.by_atom
            .get(atom)
            .map(|&i| self.entries[i].surface_sequence.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = &AliasEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn skip(raw: &str) -> bool {
    let t = raw.trim();
    t.is_empty() || t.starts_with('#')
}
