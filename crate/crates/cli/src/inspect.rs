//! `cnl parse`: every stage of the pipeline for a piece of text, without
//! touching any fact store.

use cnl_core::chronos::{Interval, Timestamp, UtcOffset};
use cnl_core::context::DiscourseContext;
use cnl_core::graph::{rank, to_graph, DeepGraph, PreferenceProfile};
use cnl_core::lexicon::LexicalResources;
use cnl_core::mephisto::{print_form, translate, Act, Symbols, Utterance};
use cnl_core::parser::{parse, SentenceType};
use cnl_core::surface::{precheck, prepare, split_paragraphs, split_sentences, InputDiagnostic};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Reading {
    pub paraphrase: String,
    pub mephisto: Result<String, String>,
}

#[derive(Debug, Serialize)]
pub struct SentenceReport {
    pub text: String,
    pub tokens: Vec<String>,
    pub diagnostics: Vec<InputDiagnostic>,
    pub sentence_type: Option<SentenceType>,
    pub trees: Vec<String>,
    pub readings: Vec<Reading>,
    pub error: Option<String>,
}

/// Runs text through tokenizing, parsing, reference resolution and
/// translation. Later sentences see referents from the first reading of
/// earlier assertions.
pub fn inspect(
    text: &str,
    res: &LexicalResources,
    utc: Timestamp,
    offset: UtcOffset,
) -> Vec<SentenceReport> {
    let utt = Utterance {
        interval: Interval::point(utc),
        offset,
    };
    let mut ctx = DiscourseContext::new();
    let mut sym = Symbols::new();
    let mut out = Vec::new();
    for (i, (_, para)) in split_paragraphs(text).into_iter().enumerate() {
        if i > 0 {
            ctx.new_paragraph();
        }
        let tokens = prepare(para, res);
        for s in split_sentences(&tokens) {
            let text = match (s.first(), s.last()) {
                (Some(a), Some(b)) => para[a.span.0..b.span.1].to_string(),
                _ => continue,
            };
            let mut rep = SentenceReport {
                text,
                tokens: s.iter().map(|t| t.text.clone()).collect(),
                diagnostics: precheck(&s, &res.lexicon),
                sentence_type: None,
                trees: Vec::new(),
                readings: Vec::new(),
                error: None,
            };
            let trees = parse(&s, &res.lexicon);
            rep.sentence_type = trees.first().map(|t| t.sentence_type());
            rep.trees = trees.iter().map(|t| t.bracketed()).collect();
            let mut graphs: Vec<DeepGraph> = Vec::new();
            for tree in &trees {
                match ctx.resolve(&to_graph(tree)) {
                    Ok(gs) => graphs.extend(gs),
                    Err(e) => rep.error = Some(e.to_string()),
                }
            }
            graphs.dedup_by_key(|g| g.digest());
            if let Ok(set) = rank(&rep.text, graphs, &PreferenceProfile::default()) {
                let paraphrases = set.paraphrases();
                let mut first = None;
                for (g, paraphrase) in set.candidates.iter().zip(paraphrases) {
                    let mut local = sym.clone();
                    let t = translate(g, &mut local, &utt);
                    if first.is_none() {
                        if let Ok(t) = &t {
                            first = Some((t.clone(), local));
                        }
                    }
                    rep.readings.push(Reading {
                        paraphrase,
                        mephisto: t.map(|t| print_form(&t.form)).map_err(|e| e.to_string()),
                    });
                }
                if let Some((t, local)) = first {
                    sym = local;
                    if t.act == Act::Assert {
                        ctx.advance(&t);
                    }
                }
            }
            out.push(rep);
        }
    }
    out
}

/// Plain text rendering of [`inspect`] output.
pub fn render(reports: &[SentenceReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{}\n", r.text));
        for d in &r.diagnostics {
            out.push_str(&format!("  ? {}\n", d.message));
        }
        if let Some(e) = &r.error {
            out.push_str(&format!("  ! {e}\n"));
        }
        for t in &r.trees {
            out.push_str(&format!("  {t}\n"));
        }
        for (i, reading) in r.readings.iter().enumerate() {
            out.push_str(&format!("  [{i}] {}\n", reading.paraphrase));
            match &reading.mephisto {
                Ok(m) => out.push_str(&format!("      {m}\n")),
                Err(e) => out.push_str(&format!("      ! {e}\n")),
            }
        }
    }
    out
}
