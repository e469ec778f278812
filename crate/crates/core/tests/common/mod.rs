//! Shared fixtures for the integration and acceptance tests.
#![allow(dead_code)]

pub mod anaphora;
pub mod golden;
pub mod oracle;
pub mod query;
pub mod templates;

use std::sync::OnceLock;

use cnl_core::chronos::{utc_normalize, Interval, Timestamp, UtcOffset};
use cnl_core::context::DiscourseContext;
use cnl_core::graph::{to_graph, DeepGraph};
use cnl_core::kb::{Answer, FactStore};
use cnl_core::lexicon::LexicalResources;
use cnl_core::mephisto::{translate, Act, Envelope, Symbols, Translation, Utterance};
use cnl_core::parser::{parse, parse_query_focus, QueryFocus};
use cnl_core::surface::prepare;

pub const TELLER: &str = "Jane_Analyst";

pub fn res() -> &'static LexicalResources {
    static RES: OnceLock<LexicalResources> = OnceLock::new();
    RES.get_or_init(LexicalResources::seed)
}

pub fn offset() -> UtcOffset {
    "+09:30".parse().unwrap()
}

/// Mon Jun 02 10:33:48 2014 on the analyst's clock.
pub fn utterance() -> Utterance {
    let local = Timestamp::new(2014, 6, 2, 10, 33, 48).unwrap();
    let utc = utc_normalize(local, offset()).unwrap();
    Utterance {
        interval: Interval::point(utc),
        offset: offset(),
    }
}

/// Every reading of a sentence after reference resolution, deduplicated.
pub fn readings(ctx: &DiscourseContext, text: &str) -> Vec<DeepGraph> {
    let r = res();
    let mut graphs: Vec<DeepGraph> = Vec::new();
    for tree in parse(&prepare(text, r), &r.lexicon) {
        if let Ok(gs) = ctx.resolve(&to_graph(&tree)) {
            for g in gs {
                if !graphs
                    .iter()
                    .any(|x| x.digest() == g.digest() && x.bindings == g.bindings)
                {
                    graphs.push(g);
                }
            }
        }
    }
    graphs
}

/// A discourse and a fact store driven sentence by sentence.
pub struct Run {
    pub store: FactStore,
    pub ctx: DiscourseContext,
    pub sym: Symbols,
}

impl Run {
    pub fn new() -> Run {
        Run {
            store: FactStore::new(),
            ctx: DiscourseContext::new(),
            sym: Symbols::new(),
        }
    }

    pub fn translate(&mut self, text: &str, reading: usize) -> (Translation, Option<QueryFocus>) {
        let r = res();
        let trees = parse(&prepare(text, r), &r.lexicon);
        assert!(!trees.is_empty(), "no parse for {text}");
        let graphs = readings(&self.ctx, text);
        assert!(reading < graphs.len(), "{text}: no reading {reading}");
        let t = translate(&graphs[reading], &mut self.sym, &utterance()).unwrap();
        if t.act == Act::Assert {
            self.ctx.advance(&t);
        }
        (t, parse_query_focus(&trees[0]).ok())
    }

    pub fn tell(&mut self, text: &str) -> Translation {
        self.tell_reading(text, 0)
    }

    pub fn tell_reading(&mut self, text: &str, reading: usize) -> Translation {
        let (t, _) = self.translate(text, reading);
        let env = Envelope::new(
            TELLER,
            t.act,
            utterance().interval,
            t.form.clone(),
            &mut self.sym,
        )
        .unwrap();
        self.store.assert_form(env);
        t
    }

    pub fn ask(&mut self, text: &str) -> (Translation, QueryFocus, Answer) {
        let (t, focus) = self.translate(text, 0);
        let focus = focus.unwrap_or_else(|| panic!("{text} is not a question"));
        let a = self.store.answer(&t, &focus);
        (t, focus, a)
    }
}
