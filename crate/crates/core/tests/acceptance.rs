//! One line per acceptance criterion. Exits nonzero when any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cnl_core::chronos::{allen_relation, utc_normalize, AllenRelation, Timestamp};
use cnl_core::context::DiscourseContext;
use cnl_core::effector::{generate, validate_roundtrip};
use cnl_core::graph::{rank, PreferenceProfile};
use cnl_core::lexicon::LexicalResources;
use cnl_core::mephisto::{
    normalize_printed, read_form, subsumes, translate, Act, Envelope, Symbols, Term, Translation,
};
use cnl_core::parser::parse;
use cnl_core::session::{Item, Mode, Session};
use cnl_core::surface::{precheck, prepare};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::query::{compare, random_scenario};
use common::{anaphora, golden, readings, res, templates, utterance, Run, TELLER};

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(30);
const ROUNDTRIP_MIN: usize = 200;
const TRACK_BUDGET: Duration = Duration::from_secs(1);
const TRACK_RECORDS: usize = 1000;
const RANDOM_STORES: u64 = 40;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn golden_form(src: &str) -> Result<Vec<Term>, String> {
    read_form(&normalize_printed(src)).map_err(|e| e.to_string())
}

fn golden_input_to_form() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (text, printed) in golden::PAIRS {
        let g = match golden_form(printed) {
            Ok(g) => g,
            Err(e) => {
                bad.push(format!("{text} golden unreadable: {e}"));
                continue;
            }
        };
        let Some(graph) = readings(&DiscourseContext::new(), text).into_iter().next() else {
            bad.push(format!("{text} has no reading"));
            continue;
        };
        match translate(&graph, &mut Symbols::new(), &utterance()) {
            Ok(t) if subsumes(&g, &t.form) => {}
            Ok(_) => bad.push(format!("{text} does not match")),
            Err(e) => bad.push(format!("{text}: {e}")),
        }
    }
    let took = start.elapsed();
    let pass = bad.is_empty() && took < GOLDEN_BUDGET;
    outcome(
        pass,
        format!(
            "{}/{} forms in {took:.2?} (budget {GOLDEN_BUDGET:?}) {}",
            golden::PAIRS.len() - bad.len(),
            golden::PAIRS.len(),
            bad.join("; ")
        ),
    )
}

fn golden_form_to_output() -> Outcome {
    let got = golden_form(golden::STOOD_C)
        .and_then(|g| generate(&g, res(), utterance().offset).map_err(|e| e.to_string()));
    match got {
        Ok(s) if s == golden::STOOD_O => outcome(true, s),
        Ok(s) => outcome(false, format!("got {s:?}")),
        Err(e) => outcome(false, e),
    }
}

fn corpus_coverage() -> Outcome {
    let r = res();
    let mut bad = Vec::new();
    for text in golden::CORPUS {
        let tokens = prepare(text, r);
        let diags = precheck(&tokens, &r.lexicon);
        if !diags.is_empty() {
            bad.push(format!("{text}: {}", diags[0].message));
        } else if parse(&tokens, &r.lexicon).is_empty() {
            bad.push(format!("{text}: no parse"));
        }
    }
    let candidates = rank(
        golden::AMBIGUOUS,
        readings(&DiscourseContext::new(), golden::AMBIGUOUS),
        &PreferenceProfile::default(),
    )
    .map(|s| s.candidates.len())
    .unwrap_or(0);
    if candidates != 2 {
        bad.push(format!(
            "ambiguous sentence ranks to {candidates} candidates"
        ));
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} sentences, ambiguous one has {candidates} readings {}",
            golden::CORPUS.len(),
            bad.join("; ")
        ),
    )
}

fn utc_anchor() -> Outcome {
    let local = Timestamp::new(2014, 6, 2, 10, 33, 48).unwrap();
    let utc = utc_normalize(local, common::offset()).unwrap();
    let mut run = Run::new();
    let t = run.translate(golden::STOOD_I, 0).0;
    let env = Envelope::new(
        TELLER,
        Act::Assert,
        utterance().interval,
        t.form,
        &mut run.sym,
    )
    .unwrap()
    .print();
    let want = "invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48))";
    let pass = utc.iso() == "2014-06-02T01:03:48Z" && env.contains(want) && env.contains(TELLER);
    outcome(pass, format!("local 10:33:48 +09:30 is {}", utc.iso()))
}

/// Allen's relations read directly off endpoint comparisons.
fn allen_oracle(a: (i32, i32), b: (i32, i32)) -> AllenRelation {
    use AllenRelation::*;
    let ((as_, ae), (bs, be)) = (a, b);
    if ae < bs {
        Before
    } else if be < as_ {
        After
    } else if ae == bs {
        Meets
    } else if be == as_ {
        MetBy
    } else if as_ == bs && ae == be {
        Equals
    } else if as_ == bs {
        if ae < be {
            Starts
        } else {
            StartedBy
        }
    } else if ae == be {
        if as_ > bs {
            Finishes
        } else {
            FinishedBy
        }
    } else if as_ > bs && ae < be {
        During
    } else if as_ < bs && ae > be {
        Contains
    } else if as_ < bs {
        Overlaps
    } else {
        OverlappedBy
    }
}

fn allen_relations() -> Outcome {
    let proper: Vec<(i32, i32)> = (0..=4)
        .flat_map(|s| (s + 1..=4).map(move |e| (s, e)))
        .collect();
    let mut pairs = 0;
    let mut bad = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &a in &proper {
        for &b in &proper {
            pairs += 1;
            let got = allen_relation(a, b);
            seen.insert(got);
            if got != allen_oracle(a, b) || allen_relation(b, a) != got.converse() {
                bad.push(format!("{a:?} {b:?}: {got:?}"));
            }
        }
    }
    let involution = AllenRelation::ALL
        .iter()
        .all(|r| r.converse().converse() == *r);
    let pass = bad.is_empty() && involution && seen.len() == 13;
    outcome(
        pass,
        format!(
            "{pairs} interval pairs, {} relations seen, converse involutive: {involution} {}",
            seen.len(),
            bad.join("; ")
        ),
    )
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let corpus = templates::corpus(res(), 2014, 250);
    let mut ok = 0;
    for text in &corpus {
        let Some(g) = readings(&DiscourseContext::new(), text).into_iter().next() else {
            continue;
        };
        let Ok(t) = translate(&g, &mut Symbols::new(), &utterance()) else {
            continue;
        };
        if validate_roundtrip(&t.form, res(), &utterance()) == Ok(true) {
            ok += 1;
        }
    }
    let took = start.elapsed();
    let pass = corpus.len() >= ROUNDTRIP_MIN && ok == corpus.len() && took < ROUNDTRIP_BUDGET;
    outcome(
        pass,
        format!(
            "{ok}/{} template forms in {took:.2?} (budget {ROUNDTRIP_BUDGET:?})",
            corpus.len()
        ),
    )
}

fn label_of(t: &Translation, functor: &str) -> String {
    t.referents
        .iter()
        .find(|r| r.functor == functor)
        .map(|r| r.label.clone())
        .unwrap_or_default()
}

fn query_oracle() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    let mut run = Run::new();
    let woman = label_of(&run.tell(golden::STOOD_I), "woman");
    run.tell("The man slept in the car.");
    run.ctx.new_paragraph();
    for q in [
        "Who stood in the house?",
        "Did anyone see the woman?",
        "Who slept?",
    ] {
        checks += 1;
        let c = compare(&mut run, q);
        let bound = q != "Who stood in the house?" || c.store.iter().eq([&woman]);
        if !c.agrees() || !bound || c.clauses > 50 {
            bad.push(format!("{c:?}"));
        }
    }
    let mut run = Run::new();
    let told = run.tell_reading(golden::AMBIGUOUS, 0);
    let (woman, message) = (label_of(&told, "woman"), label_of(&told, "message"));
    let (t, _) = run.translate("When did she read it?", 0);
    let reads = t.form.iter().find(|c| c.functor() == Some("reads"));
    let args: Vec<_> = reads
        .map(|c| {
            c.args()
                .iter()
                .filter_map(|a| a.label().map(|l| l.to_string()))
                .collect()
        })
        .unwrap_or_default();
    checks += 1;
    if args != [woman, message] {
        bad.push(format!("she/it resolve to {args:?}"));
    }
    checks += 1;
    let c = compare(&mut run, "When did she read it?");
    if !c.agrees() || c.store.len() != 1 || !c.store.iter().all(|s| s.starts_with("before(")) {
        bad.push(format!("{c:?}"));
    }
    for seed in 0..RANDOM_STORES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut run, questions) = random_scenario(&mut rng, 50);
        for q in questions {
            checks += 1;
            let c = compare(&mut run, &q);
            if !c.agrees() {
                bad.push(format!("{c:?}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{checks} answers agree {}",
            checks - bad.len(),
            bad.join("; ")
        ),
    )
}

fn anaphora_cases() -> Outcome {
    let bad: Vec<String> = anaphora::CASES
        .iter()
        .filter_map(|c| anaphora::run(c).err().map(|e| format!("{}: {e}", c.name)))
        .collect();
    outcome(
        bad.is_empty(),
        format!(
            "{}/{} cases {}",
            anaphora::CASES.len() - bad.len(),
            anaphora::CASES.len(),
            bad.join("; ")
        ),
    )
}

fn synthetic_tracks(n: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let mut out = String::from(
        "AIS,0,MR41_PAN-EAV,2014-06-02T00:30:00,-12.4634,130.8456,45,12.5,merchant ship,tanker,neutral,Panama\n",
    );
    for i in 1..n {
        let id = format!("TR{}_X", rng.gen_range(0..200));
        let (h, m) = (i / 60 % 24, i % 60);
        let lat: f64 = rng.gen_range(-60.0..60.0);
        let lon: f64 = rng.gen_range(-170.0..170.0);
        out.push_str(&format!(
            "AIS,0,{id},2014-06-01T{h:02}:{m:02}:00,{lat:.4},{lon:.4},{},{:.1},merchant ship,cargo,neutral,Liberia\n",
            rng.gen_range(0..360),
            rng.gen_range(0.0..25.0)
        ));
    }
    out
}

fn track_ingest() -> Outcome {
    let lines = synthetic_tracks(TRACK_RECORDS);
    let mut s = Session::new(TELLER, common::offset(), Arc::new(LexicalResources::seed())).unwrap();
    let at = utterance().interval.start;
    let start = Instant::now();
    let t = s.tracks_at(&lines, at);
    let took = start.elapsed();
    let r = s.submit_at(
        "Show merchant ship situation report on MR41_PAN-EAV",
        Mode::Auto,
        at,
    );
    let report = match r.items.last() {
        Some(Item::Ok { answers, .. }) => answers.join(" "),
        other => format!("{other:?}"),
    };
    let names = [
        "MR41_PAN-EAV",
        "merchant ship",
        "12.4634 S 130.8456 E",
        "10:00:00 AM",
    ]
    .iter()
    .all(|w| report.contains(w));
    let pass = t.ingested == TRACK_RECORDS && t.rejected.is_empty() && took < TRACK_BUDGET && names;
    outcome(
        pass,
        format!(
            "{}/{TRACK_RECORDS} records in {took:.2?} (budget {TRACK_BUDGET:?}); report: {report}",
            t.ingested
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden sentence to logical form", golden_input_to_form),
        ("golden logical form to sentence", golden_form_to_output),
        ("corpus coverage", corpus_coverage),
        ("utterance time in UTC", utc_anchor),
        ("Allen relations", allen_relations),
        ("template round trip", round_trip),
        ("query answers against oracle", query_oracle),
        ("anaphora cases", anaphora_cases),
        ("track ingest and report", track_ingest),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail.trim_end()
        );
    }
    println!("{} of {} criteria pass", 9 - failed, 9);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
