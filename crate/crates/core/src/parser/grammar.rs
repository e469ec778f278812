//! Productions and lexical preterminals.

use std::sync::Arc;

use crate::chronos::{parse_temporal_adjunct, Timestamp, UtcOffset};
use crate::lexicon::{
    AcronymPosition, AdjClass, Case, Frame, Lexicon, Number, Pos, PronKind, Tense, TitlePosition,
    VerbForm,
};
use crate::surface::{sentence_initial, Token, TokenKind};

use super::chart::{Check, Rule};
use super::{Agr, Cat, Feats, Leaf, Node};

const LITERALS: &[&str] = &[
    ".",
    "?",
    "!",
    ",",
    "'s",
    "to",
    "that",
    "if",
    "then",
    "too",
    "some",
    "situation",
    "report",
    "on",
    "show",
    "do",
];

/// Longest temporal phrase the span detector will try.
const MAX_TEMP_SPAN: usize = 12;

fn leaf(
    cat: Cat,
    i: usize,
    tok: &Token,
    entry: Option<crate::lexicon::LexEntry>,
    feats: Feats,
) -> Node {
    Node {
        cat,
        start: i,
        end: i + 1,
        feats,
        kids: Vec::new(),
        leaf: Some(Leaf {
            index: i,
            text: tok.text.clone(),
            entry,
            constraint: tok.constraint,
        }),
    }
}

/// Maximal token spans that read as a temporal adjunct, as `start..end`.
pub fn temporal_spans(tokens: &[Token]) -> Vec<(usize, usize)> {
    let reference = Timestamp::new(2000, 1, 1, 0, 0, 0).expect("valid reference");
    let offset = UtcOffset::default();
    let mut found = Vec::new();
    for i in 0..tokens.len() {
        let limit = (i + MAX_TEMP_SPAN).min(tokens.len());
        for j in i + 1..=limit {
            if tokens[j - 1].kind == TokenKind::Punctuation || tokens[j - 1].text == "'s" {
                break;
            }
            let words: Vec<&str> = tokens[i..j].iter().map(|t| t.text.as_str()).collect();
            if parse_temporal_adjunct(&words, reference, offset).is_ok() {
                found.push((i, j));
            }
        }
    }
    let maximal: Vec<(usize, usize)> = found
        .iter()
        .copied()
        .filter(|&(s, e)| {
            !found
                .iter()
                .any(|&(s2, e2)| (s2, e2) != (s, e) && s2 <= s && e <= e2)
        })
        .collect();
    maximal
}

fn np_feats(number: Option<Number>, gender: Option<crate::lexicon::Gender>) -> Feats {
    Feats {
        number: number.or(Some(Number::Singular)),
        person: Some(3),
        gender,
        ..Feats::default()
    }
}

/// Every preterminal edge the tokens support.
pub fn lexical_nodes(tokens: &[Token], lex: &Lexicon) -> Vec<Node> {
    let mut out = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let lower = tok.text.to_lowercase();
        if let Some(&lit) = LITERALS.iter().find(|&&l| l == lower) {
            out.push(leaf(Cat::Lit(lit), i, tok, None, Feats::default()));
        }
        if matches!(tok.kind, TokenKind::Punctuation | TokenKind::TimeLiteral) || tok.text == "'s" {
            continue;
        }
        let entries = lex.lookup_at(&tok.text, sentence_initial(tokens, i));
        let homograph = entries
            .iter()
            .any(|e| e.verb().and_then(|v| v.form) == Some(VerbForm::Past))
            && entries
                .iter()
                .any(|e| e.verb().and_then(|v| v.form) == Some(VerbForm::Base));
        for e in entries {
            let mut nodes: Vec<(Cat, Feats)> = Vec::new();
            match e.pos {
                Pos::CommonNoun => {
                    let n = e.noun().cloned().unwrap_or_default();
                    if n.is_temporal() {
                        continue;
                    }
                    let mut f = np_feats(n.number, n.gender);
                    f.mass = n.is_mass();
                    match tok.constraint {
                        Some(AcronymPosition::PreNominal) => nodes.push((Cat::Title, f)),
                        Some(AcronymPosition::PostNominal) => nodes.push((Cat::PostTitle, f)),
                        _ => {
                            match n.title {
                                Some(TitlePosition::PreNominal) => {
                                    nodes.push((Cat::Title, f.clone()))
                                }
                                Some(TitlePosition::PostNominal) => {
                                    nodes.push((Cat::PostTitle, f.clone()))
                                }
                                None => {}
                            }
                            nodes.push((Cat::N, f));
                        }
                    }
                }
                Pos::ProperNoun => {
                    let n = e.noun().cloned().unwrap_or_default();
                    if !n.is_temporal() {
                        nodes.push((Cat::PN, np_feats(Some(Number::Singular), n.gender)));
                    }
                }
                Pos::Pronoun => {
                    if let Some(p) = e.pronoun() {
                        nodes.push((
                            Cat::Pro,
                            Feats {
                                number: p.number,
                                person: Some(p.person),
                                case: p.case,
                                gender: p.gender,
                                pronoun: true,
                                ..Feats::default()
                            },
                        ));
                    }
                }
                Pos::Article => {
                    let number = e.features.misc("number").and_then(|n| n.parse().ok());
                    let cat = match e.features.misc("det_kind") {
                        Some("possessive") => Cat::PossDet,
                        Some("comp") => Cat::Comp,
                        _ => Cat::Det,
                    };
                    nodes.push((
                        cat,
                        Feats {
                            number,
                            ..Feats::default()
                        },
                    ));
                }
                Pos::Cardinal => {
                    if e.features.misc("semantic_type").is_none() {
                        let number = e.features.misc("number").and_then(|n| n.parse().ok());
                        nodes.push((
                            Cat::Card,
                            Feats {
                                number,
                                ..Feats::default()
                            },
                        ));
                    }
                }
                Pos::Ordinal => nodes.push((
                    Cat::Adj,
                    Feats {
                        first_class: Some(AdjClass::Ordinal),
                        ..Feats::default()
                    },
                )),
                Pos::Adjective => {
                    let class = e.adjective().map(|a| a.order_class);
                    nodes.push((
                        Cat::Adj,
                        Feats {
                            first_class: class,
                            ..Feats::default()
                        },
                    ));
                }
                Pos::MainVerb => {
                    if let Some(v) = e.verb() {
                        let agr = match v.form {
                            Some(VerbForm::ThirdSingular) => Some(Agr::Sg3),
                            Some(VerbForm::Base) => Some(Agr::Non3Sg),
                            Some(VerbForm::Past) => Some(Agr::Any),
                            _ => None,
                        };
                        nodes.push((
                            Cat::V,
                            Feats {
                                form: v.form,
                                tense: v.tense,
                                agr,
                                homograph,
                                motion: v.motion,
                                ..Feats::default()
                            },
                        ));
                    }
                }
                Pos::Auxiliary => {
                    let v = e.verb();
                    let tense = v.and_then(|v| v.tense);
                    match e.lemma.as_str() {
                        "do" => {
                            let agr = match lower.as_str() {
                                "does" => Agr::Sg3,
                                "do" => Agr::Non3Sg,
                                _ => Agr::Any,
                            };
                            nodes.push((
                                Cat::Do,
                                Feats {
                                    agr: Some(agr),
                                    tense,
                                    ..Feats::default()
                                },
                            ));
                        }
                        "be" => {
                            let agr = match lower.as_str() {
                                "is" => Agr::Sg3,
                                "am" => Agr::Am,
                                "are" => Agr::Are,
                                "was" => Agr::Was,
                                _ => Agr::Were,
                            };
                            nodes.push((
                                Cat::Be,
                                Feats {
                                    agr: Some(agr),
                                    tense,
                                    ..Feats::default()
                                },
                            ));
                        }
                        _ => {}
                    }
                }
                Pos::Modal => nodes.push((
                    Cat::Modal,
                    Feats {
                        agr: Some(Agr::Any),
                        ..Feats::default()
                    },
                )),
                Pos::Preposition => {
                    if e.features.misc("role") != Some("temporal") {
                        nodes.push((
                            Cat::P,
                            Feats {
                                prep: Some(e.lemma.clone()),
                                ..Feats::default()
                            },
                        ));
                    }
                }
                Pos::Conjunction => {
                    if e.features.misc("conj_kind") == Some("coordinating") {
                        nodes.push((Cat::Conj, Feats::default()));
                    }
                }
                Pos::WhWord => nodes.push((
                    Cat::Wh,
                    Feats {
                        wh: Some(e.lemma.clone()),
                        ..Feats::default()
                    },
                )),
                Pos::Directional => nodes.push((Cat::Dir, Feats::default())),
                Pos::Adverb => match e.features.misc("adv_kind") {
                    Some("negation") => nodes.push((Cat::Not, Feats::default())),
                    Some("always") => nodes.push((Cat::Always, Feats::default())),
                    Some("frequency") => nodes.push((Cat::Freq, Feats::default())),
                    _ => {}
                },
            }
            for (cat, feats) in nodes {
                out.push(leaf(cat, i, tok, Some(e.clone()), feats));
            }
        }
    }
    for (s, e) in temporal_spans(tokens) {
        let text = tokens[s..e]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        out.push(Node {
            cat: Cat::Temp,
            start: s,
            end: e,
            feats: Feats::default(),
            kids: Vec::new(),
            leaf: Some(Leaf {
                index: s,
                text,
                entry: None,
                constraint: None,
            }),
        });
    }
    out
}

fn rule(lhs: Cat, rhs: &[Cat], check: Check) -> Rule {
    Rule {
        lhs,
        rhs: rhs.to_vec(),
        check,
    }
}

fn pass(k: &[Arc<Node>]) -> Option<Feats> {
    Some(k[0].feats.clone())
}

fn pass_last(k: &[Arc<Node>]) -> Option<Feats> {
    Some(k[k.len() - 1].feats.clone())
}

fn nothing(_: &[Arc<Node>]) -> Option<Feats> {
    Some(Feats::default())
}

fn lemma_of(n: &Node) -> &str {
    n.lemma()
}

fn has_frame(v: &Node, frame: Frame) -> bool {
    v.entry()
        .and_then(|e| e.verb())
        .is_some_and(|f| f.has_frame(frame))
}

fn agrees(agr: Option<Agr>, np: &Feats) -> bool {
    agr.unwrap_or(Agr::Any)
        .accepts(np.person.unwrap_or(3), np.number)
}

fn subject_ok(np: &Feats) -> bool {
    np.case != Some(Case::Accusative) && np.case != Some(Case::Genitive)
}

fn object_ok(np: &Feats) -> bool {
    np.case != Some(Case::Nominative) && np.case != Some(Case::Genitive)
}

fn base(f: &Feats) -> bool {
    f.form == Some(VerbForm::Base)
}

/// Finite VCORE to VP: the verb form fixes tense and subject agreement.
/// A present/past homograph reads as past unless `always` precedes it.
fn finite(core: &Feats, habitual: bool) -> Option<Feats> {
    let (agr, tense) = match core.form? {
        VerbForm::ThirdSingular => (Agr::Sg3, Tense::Present),
        VerbForm::Base if !(core.homograph && !habitual) => (Agr::Non3Sg, Tense::Present),
        VerbForm::Past if !(core.homograph && habitual) => (Agr::Any, Tense::Past),
        _ => return None,
    };
    Some(Feats {
        agr: Some(agr),
        tense: Some(tense),
        form: core.form,
        ..Feats::default()
    })
}

fn vp_pp_ok(core: &Node, pp: &Node) -> bool {
    match pp.feats.prep.as_deref() {
        Some("to") => core.feats.motion,
        Some("of") => false,
        _ => true,
    }
}

fn np_pp_ok(pp: &Node) -> bool {
    !matches!(pp.feats.prep.as_deref(), Some("to"))
}

fn coordinated(a: &Feats, b: &Feats) -> Feats {
    Feats {
        number: Some(Number::Plural),
        person: Some(a.person.unwrap_or(3).min(b.person.unwrap_or(3))),
        case: if a.case == b.case { a.case } else { None },
        ..Feats::default()
    }
}

fn is_pronoun_kind(n: &Node, kind: PronKind) -> bool {
    n.entry()
        .and_then(|e| e.pronoun())
        .is_some_and(|p| p.kind == kind)
}

pub fn rules() -> Vec<Rule> {
    use Cat::*;
    vec![
        // sentences
        rule(S, &[Decl], nothing),
        rule(S, &[Decl, Lit(".")], nothing),
        rule(S, &[Decl, Lit("!")], nothing),
        rule(S, &[Cond], nothing),
        rule(S, &[Cond, Lit(".")], nothing),
        rule(S, &[Question], nothing),
        rule(S, &[Question, Lit("?")], nothing),
        rule(S, &[Directive], nothing),
        rule(S, &[Directive, Lit(".")], nothing),
        rule(S, &[Directive, Lit("!")], nothing),
        rule(Decl, &[NP, VP], |k| {
            (subject_ok(&k[0].feats) && agrees(k[1].feats.agr, &k[0].feats))
                .then(|| k[1].feats.clone())
        }),
        rule(Decl, &[NP, Do, Lit("too")], |k| {
            (subject_ok(&k[0].feats) && agrees(k[1].feats.agr, &k[0].feats))
                .then(|| k[1].feats.clone())
        }),
        rule(Cond, &[Lit("if"), Decl, Lit("then"), Decl], nothing),
        rule(
            Cond,
            &[Lit("if"), Decl, Lit(","), Lit("then"), Decl],
            nothing,
        ),
        // verb phrases
        rule(VP, &[VCore], |k| finite(&k[0].feats, false)),
        rule(VP, &[Always, VCore], |k| finite(&k[1].feats, true)),
        rule(VP, &[Do, Not, VCore], |k| {
            base(&k[2].feats).then(|| k[0].feats.clone())
        }),
        rule(VP, &[Modal, VCore], |k| {
            base(&k[1].feats).then(|| k[0].feats.clone())
        }),
        rule(VP, &[Modal, Not, VCore], |k| {
            base(&k[2].feats).then(|| k[0].feats.clone())
        }),
        rule(VP, &[Be, Pred], pass),
        rule(VP, &[Be, Not, Pred], pass),
        rule(Pred, &[NP], |k| {
            (k[0].feats.case != Some(Case::Genitive)).then(Feats::default)
        }),
        rule(Pred, &[Adj], nothing),
        rule(Pred, &[PP], nothing),
        rule(Pred, &[Pred, Temp], nothing),
        rule(VCore, &[V], |k| {
            has_frame(&k[0], Frame::Intransitive).then(|| k[0].feats.clone())
        }),
        rule(VCore, &[V, NP], |k| {
            (has_frame(&k[0], Frame::Transitive) && object_ok(&k[1].feats))
                .then(|| k[0].feats.clone())
        }),
        rule(VCore, &[V, NP, NP], |k| {
            (has_frame(&k[0], Frame::Ditransitive)
                && object_ok(&k[1].feats)
                && object_ok(&k[2].feats))
            .then(|| k[0].feats.clone())
        }),
        rule(VCore, &[V, NP, Lit("to"), NP], |k| {
            (has_frame(&k[0], Frame::Ditransitive)
                && object_ok(&k[1].feats)
                && object_ok(&k[3].feats))
            .then(|| k[0].feats.clone())
        }),
        rule(VCore, &[V, Lit("that"), Decl], |k| {
            has_frame(&k[0], Frame::Speech).then(|| k[0].feats.clone())
        }),
        rule(VCore, &[V, NP, Lit("that"), Decl], |k| {
            (has_frame(&k[0], Frame::SpeechAddressee) && object_ok(&k[1].feats))
                .then(|| k[0].feats.clone())
        }),
        rule(VCore, &[VCore, PP], |k| {
            vp_pp_ok(&k[0], &k[1]).then(|| k[0].feats.clone())
        }),
        rule(VCore, &[VCore, Temp], pass),
        rule(VCore, &[VCore, Freq], pass),
        rule(VCore, &[VCore, Dir], pass),
        rule(VCoreGap, &[V], |k| {
            (has_frame(&k[0], Frame::Transitive) && lemma_of(&k[0]) != "do")
                .then(|| k[0].feats.clone())
        }),
        rule(VCoreGap, &[V, NP], |k| {
            (has_frame(&k[0], Frame::Ditransitive) && object_ok(&k[1].feats))
                .then(|| k[0].feats.clone())
        }),
        rule(VCoreGap, &[V, Lit("to"), NP], |k| {
            (has_frame(&k[0], Frame::Ditransitive) && object_ok(&k[2].feats))
                .then(|| k[0].feats.clone())
        }),
        rule(VCoreGap, &[VCoreGap, PP], |k| {
            vp_pp_ok(&k[0], &k[1]).then(|| k[0].feats.clone())
        }),
        rule(VCoreGap, &[VCoreGap, Temp], pass),
        rule(VCoreGap, &[VCoreGap, Freq], pass),
        rule(VCoreGap, &[VCoreGap, Dir], pass),
        // questions
        rule(Question, &[Wh, VP], |k| {
            let who = matches!(k[0].feats.wh.as_deref(), Some("who" | "what"));
            (who && agrees(k[1].feats.agr, &np_feats(None, None))).then(Feats::default)
        }),
        rule(Question, &[Wh, Do, NP, VCoreGap], |k| {
            let wh = matches!(k[0].feats.wh.as_deref(), Some("who" | "whom" | "what"));
            (wh && subject_ok(&k[2].feats)
                && agrees(k[1].feats.agr, &k[2].feats)
                && base(&k[3].feats))
            .then(Feats::default)
        }),
        rule(Question, &[Wh, Do, NP, Lit("do")], |k| {
            (k[0].feats.wh.as_deref() == Some("what")
                && subject_ok(&k[2].feats)
                && agrees(k[1].feats.agr, &k[2].feats))
            .then(Feats::default)
        }),
        rule(Question, &[Wh, Do, NP, VCore], |k| {
            let wh = matches!(k[0].feats.wh.as_deref(), Some("when" | "where"));
            (wh && subject_ok(&k[2].feats)
                && agrees(k[1].feats.agr, &k[2].feats)
                && base(&k[3].feats))
            .then(Feats::default)
        }),
        rule(Question, &[Wh, Be, NP], |k| {
            let wh = matches!(k[0].feats.wh.as_deref(), Some("where"));
            (wh && subject_ok(&k[2].feats) && agrees(k[1].feats.agr, &k[2].feats))
                .then(Feats::default)
        }),
        rule(Question, &[Wh, N, Be, NP, P], |k| {
            let wh = matches!(k[0].feats.wh.as_deref(), Some("what" | "which"));
            (wh && k[1].feats.number == Some(Number::Singular)
                && subject_ok(&k[3].feats)
                && agrees(k[2].feats.agr, &k[3].feats)
                && k[4].feats.prep.as_deref() != Some("to"))
            .then(Feats::default)
        }),
        rule(Question, &[Do, NP, VCore], |k| {
            (subject_ok(&k[1].feats) && agrees(k[0].feats.agr, &k[1].feats) && base(&k[2].feats))
                .then(Feats::default)
        }),
        rule(Question, &[Modal, NP, VCore], |k| {
            (subject_ok(&k[1].feats) && base(&k[2].feats)).then(Feats::default)
        }),
        rule(Question, &[Be, NP, Pred], |k| {
            (subject_ok(&k[1].feats) && agrees(k[0].feats.agr, &k[1].feats)).then(Feats::default)
        }),
        // directives
        rule(
            Directive,
            &[
                Lit("show"),
                DirClass,
                Lit("situation"),
                Lit("report"),
                Lit("on"),
                PN,
            ],
            |k| is_track(&k[5]).then(Feats::default),
        ),
        rule(DirClass, &[N], pass),
        rule(DirClass, &[Mod, N], pass_last),
        // noun phrases
        rule(NP, &[CNP], pass),
        rule(NP, &[NPC], pass),
        rule(CNP, &[ENP], pass),
        rule(CNP, &[GenNP], pass),
        rule(NPC, &[CNP, Conj, CNP], |k| {
            Some(coordinated(&k[0].feats, &k[2].feats))
        }),
        rule(NPC, &[CNP, Conj, NPC], |k| {
            Some(coordinated(&k[0].feats, &k[2].feats))
        }),
        rule(ENP, &[Det, NP2], |k| {
            let ok = k[0].feats.number.is_none() || k[0].feats.number == k[1].feats.number;
            ok.then(|| k[1].feats.clone())
        }),
        rule(ENP, &[Card, NP2], |k| {
            (k[0].feats.number == k[1].feats.number).then(|| k[1].feats.clone())
        }),
        rule(ENP, &[Comp, NP2], |k| {
            (!k[1].feats.has_mod && k[1].feats.number == Some(Number::Plural))
                .then(|| k[1].feats.clone())
        }),
        rule(ENP, &[NP2], |k| {
            (k[0].feats.number == Some(Number::Plural) || k[0].feats.mass)
                .then(|| k[0].feats.clone())
        }),
        rule(ENP, &[PN], pass),
        rule(ENP, &[Title, PN], pass_last),
        rule(ENP, &[PN, PostTitle], pass),
        rule(ENP, &[Title, PN, PostTitle], |k| Some(k[1].feats.clone())),
        rule(ENP, &[Pro], |k| {
            let wh_like = is_pronoun_kind(&k[0], PronKind::Demonstrative);
            (!wh_like).then(|| k[0].feats.clone())
        }),
        rule(GenNP, &[GenDet, NP2], |k| {
            Some(Feats {
                case: None,
                ..k[1].feats.clone()
            })
        }),
        rule(GenDet, &[CNP, Lit("'s")], |k| {
            (!k[0].feats.pronoun).then(Feats::default)
        }),
        rule(GenDet, &[PossDet], nothing),
        rule(NP2, &[N], pass),
        rule(NP2, &[Mod, N], |k| {
            Some(Feats {
                has_mod: true,
                ..k[1].feats.clone()
            })
        }),
        rule(NP2, &[NP2, PP], |k| {
            np_pp_ok(&k[1]).then(|| k[0].feats.clone())
        }),
        rule(Mod, &[Adj], pass),
        rule(Mod, &[Adj, Mod], |k| {
            ordered(&k[0].feats, &k[1].feats).then(|| k[0].feats.clone())
        }),
        rule(Mod, &[Comp, Mod], pass_last),
        rule(Mod, &[Adjunct, Mod], |k| {
            ordered(&k[0].feats, &k[1].feats).then(|| k[0].feats.clone())
        }),
        rule(Adjunct, &[Lit("some"), Adj], pass_last),
        rule(PP, &[P, NP], |k| {
            object_ok(&k[1].feats).then(|| Feats {
                prep: k[0].feats.prep.clone(),
                ..Feats::default()
            })
        }),
    ]
}

fn ordered(first: &Feats, rest: &Feats) -> bool {
    match (first.first_class, rest.first_class) {
        (Some(a), Some(b)) => a <= b,
        _ => true,
    }
}

fn is_track(pn: &Node) -> bool {
    crate::lexicon::is_track_id(pn.text())
}
