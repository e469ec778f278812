//! Pronoun cases: who each pronoun should pick, or that it must find nothing.

use std::collections::HashSet;

use cnl_core::context::DiscourseContext;
use cnl_core::graph::{to_graph, EntityKind};
use cnl_core::mephisto::{translate, Act, Symbols};
use cnl_core::parser::parse;
use cnl_core::surface::prepare;

use super::{readings, res, utterance};

pub enum Expect {
    /// (pronoun, antecedent functor) for every pronoun in the probe.
    Bind(&'static [(&'static str, &'static str)]),
    Unresolved,
}

pub struct Case {
    pub name: &'static str,
    /// Sentences before the probe; "" is a paragraph break.
    pub context: &'static [&'static str],
    pub probe: &'static str,
    pub expect: Expect,
}

pub const CASES: [Case; 20] = [
    Case {
        name: "she after a woman",
        context: &["The woman stood in the house."],
        probe: "She slept.",
        expect: Expect::Bind(&[("she", "woman")]),
    },
    Case {
        name: "he and it",
        context: &["The man read the document."],
        probe: "He read it.",
        expect: Expect::Bind(&[("he", "man"), ("it", "document")]),
    },
    Case {
        name: "gender picks the object",
        context: &["The woman saw the man."],
        probe: "He slept.",
        expect: Expect::Bind(&[("he", "man")]),
    },
    Case {
        name: "gender picks the object again",
        context: &["The man saw the woman."],
        probe: "She slept.",
        expect: Expect::Bind(&[("she", "woman")]),
    },
    Case {
        name: "it skips animates",
        context: &["The woman read the document."],
        probe: "It fell.",
        expect: Expect::Bind(&[("it", "document")]),
    },
    Case {
        name: "they for a plural",
        context: &["The women read the document."],
        probe: "They slept.",
        expect: Expect::Bind(&[("they", "woman")]),
    },
    Case {
        name: "paragraph break",
        context: &["The woman slept.", ""],
        probe: "She stood.",
        expect: Expect::Unresolved,
    },
    Case {
        name: "paragraph break with a distractor",
        context: &["The woman slept.", "", "The man slept."],
        probe: "She stood.",
        expect: Expect::Unresolved,
    },
    Case {
        name: "paragraph break hides the man",
        context: &["The man read the document.", "", "The woman stood."],
        probe: "He slept.",
        expect: Expect::Unresolved,
    },
    Case {
        name: "subject outranks object",
        context: &["The woman saw the girl."],
        probe: "She slept.",
        expect: Expect::Bind(&[("she", "woman")]),
    },
    Case {
        name: "latest subject wins",
        context: &["The woman slept.", "The girl stood."],
        probe: "She read the document.",
        expect: Expect::Bind(&[("she", "girl")]),
    },
    Case {
        name: "proper name",
        context: &["Mary slept."],
        probe: "She read the document.",
        expect: Expect::Bind(&[("she", "Mary")]),
    },
    Case {
        name: "name and vehicle",
        context: &["Michael saw the car."],
        probe: "He drove it.",
        expect: Expect::Bind(&[("he", "Michael"), ("it", "car")]),
    },
    Case {
        name: "them for plural objects",
        context: &["The man read the documents."],
        probe: "He read them.",
        expect: Expect::Bind(&[("he", "man"), ("them", "document")]),
    },
    Case {
        name: "it for an inanimate subject",
        context: &["The document fell."],
        probe: "It fell.",
        expect: Expect::Bind(&[("it", "document")]),
    },
    Case {
        name: "number blocks a plural",
        context: &["The men slept."],
        probe: "He stood.",
        expect: Expect::Unresolved,
    },
    Case {
        name: "animacy blocks a vehicle",
        context: &["The car stopped."],
        probe: "She slept.",
        expect: Expect::Unresolved,
    },
    Case {
        name: "only the current paragraph",
        context: &["The man slept.", "", "The woman slept."],
        probe: "She stood.",
        expect: Expect::Bind(&[("she", "woman")]),
    },
    Case {
        name: "role hierarchy in a question",
        context: &["The woman in the car read the message on the sign."],
        probe: "When did she read it?",
        expect: Expect::Bind(&[("she", "woman"), ("it", "message")]),
    },
    Case {
        name: "subject and object pronouns",
        context: &["The man saw the woman."],
        probe: "She saw him.",
        expect: Expect::Bind(&[("she", "woman"), ("him", "man")]),
    },
];

/// Features an antecedent must carry for a pronoun, as (required, forbidden).
fn demands(pronoun: &str) -> (&'static [&'static str], &'static [&'static str]) {
    match pronoun {
        "she" | "her" => (&["animate", "singular"], &["male"]),
        "he" | "him" => (&["animate", "singular"], &["female"]),
        "it" => (&["singular"], &["animate"]),
        "they" | "them" => (&["plural"], &[]),
        other => panic!("no agreement row for {other}"),
    }
}

/// Runs one case. Returns the number of pronoun bindings checked.
pub fn run(case: &Case) -> Result<usize, String> {
    let mut ctx = DiscourseContext::new();
    let mut sym = Symbols::new();
    let mut paragraph: HashSet<String> = HashSet::new();
    for s in case.context {
        if s.is_empty() {
            ctx.new_paragraph();
            paragraph.clear();
            continue;
        }
        let g = readings(&ctx, s)
            .into_iter()
            .next()
            .ok_or(format!("no reading for {s}"))?;
        let t = translate(&g, &mut sym, &utterance()).map_err(|e| e.to_string())?;
        assert_eq!(t.act, Act::Assert);
        paragraph.extend(t.referents.iter().map(|r| r.label.clone()));
        ctx.advance(&t);
    }
    let r = res();
    let trees = parse(&prepare(case.probe, r), &r.lexicon);
    if trees.is_empty() {
        return Err(format!("no parse for {}", case.probe));
    }
    let resolved: Vec<_> = trees.iter().map(|t| ctx.resolve(&to_graph(t))).collect();
    let expect = match case.expect {
        Expect::Unresolved => {
            return match resolved.iter().find_map(|r| r.as_ref().ok()) {
                None => Ok(0),
                Some(gs) => Err(format!(
                    "expected no antecedent, got {:?}",
                    gs.first().map(|g| &g.bindings)
                )),
            };
        }
        Expect::Bind(e) => e,
    };
    let mut checked = 0;
    for gs in resolved {
        let gs = gs.map_err(|e| e.to_string())?;
        for g in gs {
            for (id, b) in &g.bindings {
                let node = g.node(*id);
                if !matches!(node.entity().map(|e| e.kind), Some(EntityKind::Pronoun(_))) {
                    continue;
                }
                let pron = node.phrase.to_lowercase();
                if !paragraph.contains(&b.label) {
                    return Err(format!("{pron} reached {} outside the paragraph", b.label));
                }
                let (need, forbid) = demands(&pron);
                let has = |f: &str| b.features.iter().any(|x| x == f);
                if !need.iter().all(|f| has(f)) || forbid.iter().any(|f| has(f)) {
                    return Err(format!(
                        "{pron} bound to {} with features {:?}",
                        b.functor, b.features
                    ));
                }
                match expect.iter().find(|(p, _)| *p == pron) {
                    Some((_, want)) if *want == b.functor => checked += 1,
                    Some((_, want)) => {
                        return Err(format!("{pron} bound to {}, wanted {want}", b.functor))
                    }
                    None => return Err(format!("unexpected pronoun {pron}")),
                }
            }
        }
    }
    if checked == 0 {
        return Err("no pronoun was bound".into());
    }
    Ok(checked)
}
