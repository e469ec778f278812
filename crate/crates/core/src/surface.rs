//! Raw text to parser-ready tokens: tokenization, alias and contraction
//! folding, acronym expansion, sentence/paragraph segmentation and the
//! lexical-coverage precheck.

use serde::{Deserialize, Serialize};

use crate::chronos::is_clock_literal;
use crate::lexicon::{AcronymPosition, AcronymTable, AliasTable, LexicalResources, Lexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Numeral,
    TimeLiteral,
    Punctuation,
    FoldedAtom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    /// Byte offsets into the source text.
    pub span: (usize, usize),
    pub kind: TokenKind,
    /// Set on words produced by expanding a positional acronym ("Dr").
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constraint: Option<AcronymPosition>,
}

impl Token {
    fn new(text: &str, start: usize, kind: TokenKind) -> Token {
        Token {
            text: text.to_string(),
            span: (start, start + text.len()),
            kind,
            constraint: None,
        }
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuation && self.text == p
    }
}

pub type TokenStream = Vec<Token>;

const PUNCT: &[char] = &['.', ',', '?', '!', ';', ':', '(', ')', '"'];

fn classify(core: &str) -> TokenKind {
    if is_clock_literal(core) {
        TokenKind::TimeLiteral
    } else if core.chars().all(|c| c.is_ascii_digit()) {
        TokenKind::Numeral
    } else {
        TokenKind::Word
    }
}

fn push_core(out: &mut TokenStream, core: &str, start: usize) {
    if core.is_empty() {
        return;
    }
    if is_clock_literal(core) {
        out.push(Token::new(core, start, TokenKind::TimeLiteral));
        return;
    }
    // a colon inside a non-clock word splits it
    if let Some(i) = core.find(':') {
        push_core(out, &core[..i], start);
        out.push(Token::new(":", start + i, TokenKind::Punctuation));
        push_core(out, &core[i + 1..], start + i + 1);
        return;
    }
    if let Some(i) = core.find([',', ';', '(', ')', '"', '?', '!']) {
        push_core(out, &core[..i], start);
        out.push(Token::new(
            &core[i..i + 1],
            start + i,
            TokenKind::Punctuation,
        ));
        push_core(out, &core[i + 1..], start + i + 1);
        return;
    }
    for genitive in ["'s", "\u{2019}s"] {
        if core.len() > genitive.len() && core.ends_with(genitive) {
            let cut = core.len() - genitive.len();
            out.push(Token::new(&core[..cut], start, classify(&core[..cut])));
            out.push(Token::new("'s", start + cut, TokenKind::Word));
            out.last_mut().unwrap().span.1 = start + core.len();
            return;
        }
    }
    out.push(Token::new(core, start, classify(core)));
}

/// Splits on whitespace and punctuation. Clock times stay whole and the
/// genitive `'s` becomes its own token.
pub fn tokenize(text: &str) -> TokenStream {
    let mut out = Vec::new();
    let mut chunk_start = None;
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    for (k, &(i, c)) in bytes.iter().enumerate() {
        if !c.is_whitespace() && chunk_start.is_none() {
            chunk_start = Some(i);
        }
        let at_end = k + 1 == bytes.len();
        if (c.is_whitespace() || at_end) && chunk_start.is_some() {
            let s = chunk_start.take().unwrap();
            let e = if c.is_whitespace() {
                i
            } else {
                i + c.len_utf8()
            };
            chunk(&mut out, &text[s..e], s);
        }
    }
    out
}

fn chunk(out: &mut TokenStream, chunk: &str, start: usize) {
    let mut lead = 0;
    while let Some(c) = chunk[lead..].chars().next() {
        if matches!(c, '(' | '"') {
            out.push(Token::new(
                &chunk[lead..lead + 1],
                start + lead,
                TokenKind::Punctuation,
            ));
            lead += 1;
        } else {
            break;
        }
    }
    let mut trail = chunk.len();
    let mut tail = Vec::new();
    while trail > lead {
        let c = chunk[..trail].chars().last().unwrap();
        if PUNCT.contains(&c) && !is_clock_literal(&chunk[lead..trail]) {
            trail -= c.len_utf8();
            tail.push(Token::new(
                &chunk[trail..trail + c.len_utf8()],
                start + trail,
                TokenKind::Punctuation,
            ));
        } else {
            break;
        }
    }
    push_core(out, &chunk[lead..trail], start + lead);
    out.extend(tail.into_iter().rev());
}

/// Longest match, leftmost first. Folded tokens span the words they replace.
pub fn fold_aliases(ts: &[Token], aliases: &AliasTable) -> TokenStream {
    let mut out = Vec::with_capacity(ts.len());
    let mut i = 0;
    while i < ts.len() {
        let mut best: Option<(usize, &str)> = None;
        if ts[i].kind != TokenKind::Punctuation {
            for alias in aliases.starting_with(&ts[i].text) {
                let n = alias.surface_sequence.len();
                if i + n <= ts.len()
                    && ts[i..i + n]
                        .iter()
                        .zip(&alias.surface_sequence)
                        .all(|(t, w)| t.kind != TokenKind::Punctuation && &t.text == w)
                    && best.is_none_or(|(m, _)| n > m)
                {
                    best = Some((n, &alias.atom));
                }
            }
        }
        match best {
            Some((n, atom)) if !(n == 1 && ts[i].text == atom) => {
                out.push(Token {
                    text: atom.to_string(),
                    span: (ts[i].span.0, ts[i + n - 1].span.1),
                    kind: TokenKind::FoldedAtom,
                    constraint: None,
                });
                i += n;
            }
            _ => {
                out.push(ts[i].clone());
                i += 1;
            }
        }
    }
    out
}

/// Replaces acronym tokens by their expansions. A full stop written
/// directly after an acronym ("Dr.") is absorbed unless it ends the input.
pub fn expand_acronyms(ts: &[Token], acronyms: &AcronymTable) -> TokenStream {
    let mut out = Vec::with_capacity(ts.len());
    let mut i = 0;
    while i < ts.len() {
        let t = &ts[i];
        match (t.kind, acronyms.get(&t.text)) {
            (TokenKind::Word, Some(entry)) => {
                let constraint = match entry.position {
                    AcronymPosition::Free => None,
                    p => Some(p),
                };
                for word in &entry.expansion {
                    out.push(Token {
                        text: word.clone(),
                        span: t.span,
                        kind: TokenKind::Word,
                        constraint,
                    });
                }
                let dot = ts
                    .get(i + 1)
                    .is_some_and(|d| d.is_punct(".") && d.span.0 == t.span.1);
                i += if dot && i + 2 < ts.len() { 2 } else { 1 };
            }
            _ => {
                out.push(t.clone());
                i += 1;
            }
        }
    }
    out
}

/// Tokenize, fold aliases, expand acronyms, then fold again so that
/// aliases written with an acronym inside them still match.
pub fn prepare(text: &str, res: &LexicalResources) -> TokenStream {
    let folded = fold_aliases(&tokenize(text), &res.aliases);
    let expanded = expand_acronyms(&folded, &res.acronyms);
    fold_aliases(&expanded, &res.aliases)
}

/// Splits a token stream after each `.`, `?` or `!`.
pub fn split_sentences(ts: &[Token]) -> Vec<TokenStream> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for t in ts {
        cur.push(t.clone());
        if t.kind == TokenKind::Punctuation && matches!(t.text.as_str(), "." | "?" | "!") {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Splits text into paragraphs at blank lines, returning each with its
/// byte offset.
pub fn split_paragraphs(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..end]));
            }
        } else {
            if start.is_none() {
                start = Some(offset);
            }
            end = offset + line.len();
        }
        offset += line.len();
    }
    if let Some(s) = start {
        out.push((s, &text[s..end]));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    UnknownWord,
    OutOfGrammar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDiagnostic {
    pub severity: Severity,
    pub span: (usize, usize),
    pub message: String,
    pub suggestions: Vec<String>,
}

/// Whether the token is the first word of its sentence.
pub fn sentence_initial(ts: &[Token], i: usize) -> bool {
    ts[..i]
        .iter()
        .all(|t| t.kind == TokenKind::Punctuation && matches!(t.text.as_str(), "(" | "\""))
}

/// One unknown-word diagnostic per out-of-vocabulary token.
pub fn unknown_words(ts: &[Token], lex: &Lexicon) -> Vec<InputDiagnostic> {
    let mut out = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        if matches!(t.kind, TokenKind::Punctuation | TokenKind::TimeLiteral) || t.text == "'s" {
            continue;
        }
        if lex.lookup_at(&t.text, sentence_initial(ts, i)).is_empty() {
            out.push(InputDiagnostic {
                severity: Severity::UnknownWord,
                span: t.span,
                message: format!("unknown word `{}`", t.text),
                suggestions: suggest(&t.text, lex),
            });
        }
    }
    out
}

/// Lexical precheck followed by a parse attempt: unknown words, or a single
/// out-of-grammar diagnostic when every word is known but nothing parses.
pub fn precheck(ts: &[Token], lex: &Lexicon) -> Vec<InputDiagnostic> {
    let unknown = unknown_words(ts, lex);
    if !unknown.is_empty() {
        return unknown;
    }
    if crate::parser::parse(ts, lex).is_empty() {
        let span = match (ts.first(), ts.last()) {
            (Some(a), Some(b)) => (a.span.0, b.span.1),
            _ => (0, 0),
        };
        return vec![InputDiagnostic {
            severity: Severity::OutOfGrammar,
            span,
            message: "sentence is outside the controlled grammar".into(),
            suggestions: Vec::new(),
        }];
    }
    Vec::new()
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            cur.push(
                (prev[j] + usize::from(ca != *cb))
                    .min(prev[j + 1] + 1)
                    .min(cur[j] + 1),
            );
        }
        prev = cur;
    }
    prev[b.len()]
}

fn suggest(word: &str, lex: &Lexicon) -> Vec<String> {
    let lower = word.to_lowercase();
    let mut scored: Vec<(usize, &str)> = lex
        .forms()
        .iter()
        .map(|e| {
            (
                edit_distance(&lower, &e.surface.to_lowercase()),
                e.surface.as_str(),
            )
        })
        .filter(|(d, _)| *d <= 2)
        .collect();
    scored.sort();
    scored.dedup_by(|a, b| a.1 == b.1);
    scored
        .into_iter()
        .take(3)
        .map(|(_, s)| s.to_string())
        .collect()
}
