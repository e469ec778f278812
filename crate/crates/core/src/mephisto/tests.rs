use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::chronos::Timestamp;
use crate::graph::to_graph;
use crate::lexicon::LexicalResources;
use crate::parser::parse;
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

fn translate_text(text: &str) -> Translation {
    let r = res();
    let trees = parse(&prepare(text, r), &r.lexicon);
    assert!(!trees.is_empty(), "no parse for {text}");
    translate(&to_graph(&trees[0]), &mut Symbols::new(), &utterance()).unwrap()
}

fn golden(src: &str) -> Vec<Term> {
    read_form(&normalize_printed(src)).unwrap_or_else(|e| panic!("{e}: {}", normalize_printed(src)))
}

const STOOD: &str = r"animate(@(skc2,t\_4,s\_2)),female(@(skc2,t\_4,s\_2)),
before(t\_4,invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48))),
location\_in([stands(@(skc2,t\_4,s\_2))],@(skc3,t\_4,s\_3)),
woman(@(skc2,t\_4,s\_2),[animate,definite,singular,...]),
house(@(skc3,t\_4,s\_3),[definite,singular,prep(in)]),
stands[@(skc2,t\_4,s\_2)],[past,...])).";

#[test]
fn printed_slips_are_repaired() {
    let g = golden(STOOD);
    assert_eq!(g.len(), 7);
    assert_eq!(g[6].to_string(), "stands(@(skc2,t_4,s_2),[past,...])");
}

#[test]
fn stood_in_the_house() {
    let t = translate_text("The woman stood in the house.");
    assert_eq!(t.form.len(), 7, "{}", print_form(&t.form));
    assert!(subsumes(&golden(STOOD), &t.form), "{}", print_form(&t.form));
}

#[test]
fn bare_plural_is_universal() {
    let t = translate_text("Women stand.");
    let g = golden(
        r"all([skc2],woman(@(skc2,t\_3,s\_2),[female,plural,...]) => stands(@(skc2,t\_3,s\_2),[general\_habitual,...])).",
    );
    assert!(subsumes(&g, &t.form), "{}", print_form(&t.form));
}

#[test]
fn always_quantifies_time() {
    let t = translate_text("All women always read all documents.");
    let g = golden(
        r"all([skc81,skc82,t\_81],((woman(@(skc81,t\_81,s\_81),[...]) & document(@(skc82,t\_81,s\_82),[...])) => reads(@(skc81,t\_81,s\_81),@(skc82,t\_81,s\_82),[...]))).",
    );
    assert!(subsumes(&g, &t.form), "{}", print_form(&t.form));
}

#[test]
fn conditional_with_universals() {
    let t =
        translate_text("If all women did not see the car then all women did not see the driver.");
    let g = golden(
        r"all([skc81],((woman(@(skc81,t\_81,s\_81),[...]) & car(@(skc82,t\_81,s\_82),[...])) => ~sees(@(skc81,t\_81,s\_81),@(skc82,t\_81,s\_82)))) => all([skc81], ((woman(@(skc81,t\_81,s\_81),[...]) & driver(@(skc84,t\_81,s\_84),[...])) => ~sees(@(skc81,t\_81,s\_81),@(skc84,t\_81,s\_84),[...]))).",
    );
    assert!(subsumes(&g, &t.form), "{}", print_form(&t.form));
}

#[test]
fn negation_prefixes_event() {
    let t = translate_text("The woman did not read the document.");
    let g = golden(
        r"woman(@(skc81,t\_22,s\_81),[definite,...]), document(@(skc07,t\_22,s\_07),[definite,...]), ~reads(@(skc81,t\_22,s\_81),@(skc07,t\_22,s\_07),[past,...]).",
    );
    assert!(subsumes(&g, &t.form), "{}", print_form(&t.form));
}

#[test]
fn copular_identity() {
    let t = translate_text("Andrew White is the Prime Minister.");
    let g = golden(
        r"Andrew\_White(@(skc6,t\_10,s\_6),[...]), prime\_minister(@(skc7,t\_10,s\_7),[...]), identical[@(skc6,t\_10,s\_6),@(skc7,t\_10,s\_7)].",
    );
    assert!(subsumes(&g, &t.form), "{}", print_form(&t.form));
}

#[test]
fn subsumption_rejects_unexplained_clauses() {
    let t = translate_text("The woman stood in the house.");
    let mut g = golden(STOOD);
    g.retain(|c| c.functor() != Some("location_in"));
    assert!(!subsumes(&g, &t.form));
    let wrong = golden(&STOOD.replace("stands", "sits"));
    assert!(!subsumes(&wrong, &t.form));
}

#[test]
fn envelope_print() {
    let mut sym = Symbols::new();
    let u = utterance();
    let env = Envelope::new(
        "Jane Analyst",
        Act::Assert,
        u.interval,
        vec![Term::atom("x")],
        &mut sym,
    )
    .unwrap();
    assert!(env.print().starts_with(
        "perceive(cnl_sensor,tells(teller(@(skc1,invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48)),s_1),Jane_Analyst),"
    ));
    let g = read_form(
        "perceive(cnl_sensor,tells(teller(@(skc1,invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48)),s_5),Jane_Analyst),...))",
    )
    .unwrap();
    assert!(subsumes(&g, &[env.to_term()]));
    assert_eq!(
        Envelope::new("  ", Act::Assert, u.interval, vec![], &mut sym),
        Err(EnvelopeError::EmptyTeller)
    );
}

#[test]
fn ditransitive_and_speech() {
    let t = translate_text("Michael told Kerry that the woman read the document.");
    let s = print_form(&t.form);
    assert!(
        s.contains("tells(@(skc1,t_1,s_1),@(skc2,t_1,s_2),[woman("),
        "{s}"
    );
    assert!(s.contains("before(t_2,"), "{s}");
    let t = translate_text("The woman gave the man the document.");
    let gives = t
        .form
        .iter()
        .find(|c| c.functor() == Some("gives"))
        .unwrap();
    assert_eq!(gives.args().len(), 4);
}

#[test]
fn numerals_quantities_and_frequency() {
    let s = print_form(&translate_text("Three men read four documents twice.").form);
    assert!(
        s.contains("card(skc1,3)") && s.contains("card(skc2,4)"),
        "{s}"
    );
    assert!(
        s.contains("card([reads(@(skc1,t_1,s_1),@(skc2,t_1,s_2))],2)"),
        "{s}"
    );
    let s = print_form(&translate_text("Several friendly men slept.").form);
    assert!(
        s.contains("quantity(skc1,several)") && s.contains("friendly(@(skc1,t_1,s_1))"),
        "{s}"
    );
}

#[test]
fn temporal_adjunct_is_grounded() {
    let s = print_form(&translate_text("The woman stood in the house on Monday.").form);
    // Monday 2 June 2014 local, 09:30 ahead of UTC
    assert!(
        s.contains("during(t_1,invl(timestamp(2014,6,1,14,30,0),timestamp(2014,6,2,14,29,59)))"),
        "{s}"
    );
}

#[test]
fn questions_mark_their_target() {
    let t = translate_text("What did the woman read?");
    assert_eq!(t.act, Act::Query);
    let q = t.queried.clone().unwrap();
    let reads = t
        .form
        .iter()
        .find(|c| c.functor() == Some("reads"))
        .unwrap();
    assert_eq!(reads.args()[1].label(), Some(&Term::var(&q)));
    assert!(t.fresh.contains(&q));
}

#[test]
fn unbound_pronoun_is_an_error() {
    let r = res();
    let trees = parse(&prepare("She stood.", r), &r.lexicon);
    let err = translate(&to_graph(&trees[0]), &mut Symbols::new(), &utterance()).unwrap_err();
    assert_eq!(err, TranslateError::UnresolvedAnaphor("she".into()));
}

#[test]
fn directive_form() {
    let t = translate_text("Show merchant ship situation report on MR41_PAN-EAV");
    assert_eq!(t.act, Act::Direct);
    assert_eq!(print_form(&t.form), "show(merchant_ship,'MR41_PAN-EAV')");
}

#[test]
fn symbols_are_monotone_across_sentences() {
    let r = res();
    let mut sym = Symbols::new();
    let mut seen = Vec::new();
    for text in ["The woman stood.", "The man slept.", "Women stand."] {
        let trees = parse(&prepare(text, r), &r.lexicon);
        let t = translate(&to_graph(&trees[0]), &mut sym, &utterance()).unwrap();
        for f in t.fresh {
            assert!(!seen.contains(&f), "{f} reused");
            seen.push(f);
        }
    }
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        "[a-z][a-z0-9_]{0,6}".prop_map(Term::Atom),
        "[A-Z][a-z]{0,4}".prop_map(Term::Atom),
        "[a-z ']{1,5}".prop_map(Term::Atom),
        (0i64..100).prop_map(Term::Int),
        (1u32..50).prop_map(|n| Term::Var(format!("skc{n}"))),
        (1u32..50).prop_map(|n| Term::Var(format!("t_{n}"))),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (
                "[a-z][a-z_]{0,5}",
                prop::collection::vec(inner.clone(), 1..4)
            )
                .prop_map(|(f, a)| Term::Compound(f, a)),
            prop::collection::vec(inner.clone(), 0..4).prop_map(Term::List),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, b, c)| Term::at(a, b, c)),
            inner.clone().prop_map(Term::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::imp(a, b)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Term::And),
            prop::collection::vec(inner, 2..3).prop_map(Term::Identical),
        ]
    })
}

proptest! {
    #[test]
    fn print_read_round_trip(t in arb_term()) {
        let printed = t.to_string();
        prop_assert_eq!(read_term(&printed).unwrap(), t);
    }

    #[test]
    fn renaming_is_alpha_equal(shift in 1u32..40, n in 1u32..6) {
        let clause = |k: u32| format!("woman(@(skc{k},t_{k},s_{k}),[female,plural])");
        let a: Vec<Term> = (1..=n).map(|k| read_term(&clause(k)).unwrap()).collect();
        let mut b: Vec<Term> = (1..=n).map(|k| read_term(&clause(k + shift)).unwrap()).collect();
        b.reverse();
        prop_assert!(alpha_equal(&a, &b));
        prop_assert!(alpha_equal(&b, &a));
    }
}

#[test]
fn alpha_equal_rejects_merged_symbols() {
    let a = read_form("p(skc1),q(skc2)").unwrap();
    let b = read_form("p(skc3),q(skc3)").unwrap();
    assert!(!alpha_equal(&a, &b));
    assert!(!alpha_equal(&b, &a));
    let c = read_form("p(t_1)").unwrap();
    let d = read_form("p(skc1)").unwrap();
    assert!(!alpha_equal(&c, &d));
}

#[test]
fn reader_errors() {
    assert!(read_term("woman(@(skc2,t_4,s_2),[definite])").is_ok());
    let e = read_term("woman(@(skc2,t_4)").unwrap_err();
    assert_eq!(e.pos, 17);
    assert!(read_term("identical[@(skc6,t_10,s_6),@(skc7,t_10,s_7)]")
        .unwrap()
        .to_string()
        .starts_with("identical["));
}
