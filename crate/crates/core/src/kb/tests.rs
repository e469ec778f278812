use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::context::DiscourseContext;
use crate::graph::to_graph;
use crate::lexicon::LexicalResources;
use crate::mephisto::{print_form, read_form, translate, Utterance};
use crate::parser::{parse, parse_query_focus};
use crate::surface::prepare;

fn res() -> &'static LexicalResources {
    static RES: OnceLock<LexicalResources> = OnceLock::new();
    RES.get_or_init(LexicalResources::seed)
}

fn utterance() -> Utterance {
    let t = Timestamp::new(2014, 6, 2, 1, 3, 48).unwrap();
    Utterance {
        interval: Interval::point(t),
        offset: "+09:30".parse().unwrap(),
    }
}

struct Run {
    store: FactStore,
    ctx: DiscourseContext,
    sym: Symbols,
}

impl Run {
    fn new() -> Run {
        Run {
            store: FactStore::new(),
            ctx: DiscourseContext::new(),
            sym: Symbols::new(),
        }
    }

    fn translate(&mut self, text: &str, reading: usize) -> (Translation, Option<QueryFocus>) {
        let r = res();
        let trees = parse(&prepare(text, r), &r.lexicon);
        assert!(!trees.is_empty(), "no parse for {text}");
        let mut graphs = Vec::new();
        for tree in &trees {
            graphs.extend(self.ctx.resolve(&to_graph(tree)).unwrap());
        }
        graphs.dedup_by_key(|g| g.digest());
        let t = translate(&graphs[reading], &mut self.sym, &utterance()).unwrap();
        if t.act == Act::Assert {
            self.ctx.advance(&t);
        }
        (t, parse_query_focus(&trees[0]).ok())
    }

    fn tell(&mut self, text: &str) -> Translation {
        self.tell_reading(text, 0)
    }

    fn tell_reading(&mut self, text: &str, reading: usize) -> Translation {
        let (t, _) = self.translate(text, reading);
        let env = Envelope::new(
            "Jane_Analyst",
            t.act,
            utterance().interval,
            t.form.clone(),
            &mut self.sym,
        )
        .unwrap();
        self.store.assert_form(env);
        t
    }

    fn ask(&mut self, text: &str) -> (Translation, Answer) {
        let (t, focus) = self.translate(text, 0);
        let a = self.store.answer(&t, &focus.unwrap());
        (t, a)
    }
}

#[test]
fn assertion_is_idempotent() {
    let mut run = Run::new();
    let t = run.tell("The woman stood in the house.");
    assert_eq!(run.store.facts().len(), 7);
    let env = Envelope::new(
        "Jane_Analyst",
        Act::Assert,
        utterance().interval,
        t.form,
        &mut run.sym,
    )
    .unwrap();
    run.store.assert_form(env);
    assert_eq!(run.store.facts().len(), 7);
    assert_eq!(run.store.log().len(), 2);
}

#[test]
fn who_stood_in_the_house() {
    let mut run = Run::new();
    let told = run.tell("The woman stood in the house.");
    run.ctx.new_paragraph();
    let (_, a) = run.ask("Who stood in the house?");
    assert_eq!(a.matches.len(), 1);
    let woman = told
        .referents
        .iter()
        .find(|r| r.functor == "woman")
        .unwrap();
    assert_eq!(a.matches[0].value, Some(Term::var(&woman.label)));
}

#[test]
fn nobody_saw_the_woman() {
    let mut run = Run::new();
    run.tell("The woman stood in the house.");
    run.ctx.new_paragraph();
    let (_, a) = run.ask("Did anyone see the woman?");
    assert!(!a.yes());
    let (_, a) = run.ask("Did the woman stand?");
    assert!(a.yes());
}

#[test]
fn when_did_she_read_it() {
    let mut run = Run::new();
    run.tell_reading("The woman in the car read the message on the sign.", 0);
    let (_, a) = run.ask("When did she read it?");
    assert_eq!(a.focus, Queried::Temporal);
    assert_eq!(a.matches.len(), 1);
    let c = print_form(&a.matches[0].constraints);
    assert_eq!(
        c,
        "before(t_1,invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48)))"
    );
}

#[test]
fn where_question_returns_role_clauses() {
    let mut run = Run::new();
    run.tell("The woman stood in the house.");
    let (_, a) = run.ask("Where did the woman stand?");
    assert_eq!(a.matches.len(), 1);
    assert_eq!(a.matches[0].places.len(), 1);
    assert_eq!(a.matches[0].places[0].functor(), Some("location_in"));
}

#[test]
fn universal_rule_applies_one_step() {
    let mut run = Run::new();
    run.tell("All women always read all documents.");
    assert_eq!(run.store.rules().len(), 1);
    run.tell("The woman stood near the document.");
    let derived = print_form(&run.store.derived());
    assert!(derived.starts_with("reads(@(skc"), "{derived}");
    run.ctx.new_paragraph();
    let (_, a) = run.ask("Who reads the document?");
    assert_eq!(a.matches.len(), 1, "{derived}");
}

#[test]
fn temporal_filter_excludes_future_events() {
    let mut run = Run::new();
    run.tell("The woman will read the document.");
    run.ctx.new_paragraph();
    let (_, a) = run.ask("Who read the document?");
    assert!(!a.yes());
}

#[test]
fn wildcards_match_entities_and_events() {
    let mut run = Run::new();
    run.tell_reading("The woman in the car read the message on the sign.", 0);
    run.ctx.new_paragraph();
    let (_, a) = run.ask("What is on the sign?");
    assert_eq!(a.matches.len(), 1);
    let (_, a) = run.ask("What did the woman do?");
    assert!(a.yes());
}

const TRACK: &str = "AIS,0,MR41_PAN-EAV,2014-06-02T01:00:00,-12.4634,130.8456,45,12.5,merchant ship,tanker,neutral,Panama";

#[test]
fn track_lines_parse() {
    let r: TrackRecord = TRACK.parse().unwrap();
    assert_eq!(r.track_id, "MR41_PAN-EAV");
    assert_eq!(r.class, "merchant_ship");
    assert_eq!(r.time, Timestamp::new(2014, 6, 2, 1, 0, 0).unwrap());
    let shifted: TrackRecord = TRACK.replacen(",0,", ",3600,", 1).parse().unwrap();
    assert_eq!(shifted.time, Timestamp::new(2014, 6, 2, 0, 0, 0).unwrap());
    let (ok, bad) = parse_tracks(&format!(
        "{TRACK}\nAIS,0,X,not-a-time,0,0,0,0,a,b,c,d\nAIS,0,Y\n# note\n{TRACK}"
    ));
    assert_eq!(ok.len(), 2);
    assert_eq!(bad.iter().map(|e| e.line).collect::<Vec<_>>(), vec![2, 3]);
    let (ok, bad) = parse_tracks("AIS,0,Z,2014-06-02T01:00:00,95,0,0,0,a,b,c,d");
    assert!(ok.is_empty() && bad[0].reason.contains("out of range"));
}

#[test]
fn latest_record_wins() {
    let mut store = FactStore::new();
    let mut sym = Symbols::new();
    let later = TRACK
        .replace("01:00:00", "02:00:00")
        .replace("-12.4634", "-12.0");
    let (recs, _) = parse_tracks(&format!("{later}\n{TRACK}"));
    assert_eq!(store.ingest_tracks(recs, &mut sym), 2);
    assert_eq!(store.track_count(), 1);
    let rep = store
        .situation_report("merchant_ship", "MR41_PAN-EAV")
        .unwrap();
    assert_eq!(rep.latest.lat, -12.0);
    let labels: HashSet<String> = store
        .facts()
        .iter()
        .filter(|c| c.functor() == Some("track_id"))
        .map(|c| c.args()[0].label().unwrap().to_string())
        .collect();
    assert_eq!(labels.len(), 1);
}

#[test]
fn report_errors() {
    let mut store = FactStore::new();
    store.ingest_tracks(parse_tracks(TRACK).0, &mut Symbols::new());
    assert_eq!(
        store.situation_report("merchant_ship", "ZZ9"),
        Err(KbError::NoSuchTrack("ZZ9".into()))
    );
    assert!(KbError::NoSuchTrack("ZZ9".into())
        .to_string()
        .starts_with("no such track"));
    assert!(matches!(
        store.situation_report("submarine", "MR41_PAN-EAV"),
        Err(KbError::ClassMismatch { .. })
    ));
    let before = store.facts().len();
    store.ingest_tracks(Vec::new(), &mut Symbols::new());
    assert_eq!(store.facts().len(), before);
}

#[test]
fn report_collects_mentions() {
    let mut run = Run::new();
    run.store.ingest_tracks(parse_tracks(TRACK).0, &mut run.sym);
    run.tell("MR41_PAN-EAV sailed north.");
    run.tell("The woman slept.");
    let rep = run
        .store
        .situation_report("merchant_ship", "MR41_PAN-EAV")
        .unwrap();
    assert_eq!(rep.mentions.len(), 1);
}

#[test]
fn feature_compatibility() {
    let l = |s: &str| read_form(s).unwrap().remove(0);
    assert!(features_compatible(
        &l("[definite,singular]"),
        &l("[indefinite,singular,prep(in)]"),
        false
    ));
    assert!(!features_compatible(
        &l("[singular]"),
        &l("[plural]"),
        false
    ));
    assert!(features_compatible(&l("[singular]"), &l("[plural]"), true));
    assert!(!features_compatible(&l("[past]"), &l("[future]"), true));
}

/// Seconds-bound model of what a constraint says about an event.
fn bounds(rel: &str, i: (i64, i64)) -> (i64, i64) {
    match rel {
        "before" => (i64::MIN, i.0 - 1),
        "after" => (i.1 + 1, i64::MAX),
        _ => i,
    }
}

fn interval(a: i64, b: i64) -> Interval {
    let base = Timestamp::new(2014, 1, 1, 0, 0, 0).unwrap();
    Interval::new(base.add_seconds(a), base.add_seconds(b)).unwrap()
}

proptest! {
    #[test]
    fn entailment_matches_bounds(r1 in 0usize..3, r2 in 0usize..3, a in 0i64..6, la in 0i64..3, b in 0i64..6, lb in 0i64..3) {
        let names = ["before", "after", "during"];
        let (s, q) = ((a, a + la), (b, b + lb));
        let (lo, hi) = bounds(names[r1], s);
        let (qlo, qhi) = bounds(names[r2], q);
        let oracle = lo >= qlo && hi <= qhi;
        prop_assert_eq!(entails((names[r1], interval(s.0, s.1)), (names[r2], interval(q.0, q.1))), oracle);
    }
}

#[test]
fn event_wildcard_skips_typing_clauses() {
    let mut run = Run::new();
    run.tell("The boy slept on Monday.");
    let (_, a) = run.ask("What did the boy do?");
    assert_eq!(a.matches.len(), 1);
    assert!(a.matches[0]
        .support
        .iter()
        .any(|c| c.functor() == Some("sleeps")));
}
