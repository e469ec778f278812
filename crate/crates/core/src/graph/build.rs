use std::collections::BTreeMap;
use std::sync::Arc;

use crate::lexicon::{Animacy, Gender, Number, PronKind};
use crate::parser::{Cat, Node, ParseTree};

use super::{
    DeepGraph, Determiner, Edge, Entity, EntityKind, Event, EventTense, GraphNode, ModRole, NodeId,
    NodeKind, Premodifier, Role,
};

struct Builder {
    nodes: BTreeMap<NodeId, GraphNode>,
    edges: Vec<Edge>,
}

/// Deterministic reduction of a parse tree to its deep graph.
pub fn to_graph(tree: &ParseTree) -> DeepGraph {
    let mut b = Builder {
        nodes: BTreeMap::new(),
        edges: Vec::new(),
    };
    let s = tree.sentence();
    let root = match s.cat {
        Cat::Decl => b.decl(s),
        Cat::Cond => b.cond(s),
        Cat::Question => b.question(s),
        _ => b.directive(s),
    };
    DeepGraph {
        sentence: tree.sentence_type(),
        root,
        nodes: b.nodes,
        edges: b.edges,
        bindings: BTreeMap::new(),
        event_bindings: BTreeMap::new(),
    }
}

fn leaf_id(n: &Node) -> NodeId {
    n.leaf.as_ref().map(|l| l.index).unwrap_or(n.start)
}

/// Surface words under `n`, leaving out prepositional postmodifiers.
fn phrase(n: &Node) -> String {
    fn walk(n: &Node, out: &mut Vec<String>) {
        if n.cat == Cat::PP {
            return;
        }
        match &n.leaf {
            Some(l) => out.push(l.text.clone()),
            None => n.kids.iter().for_each(|k| walk(k, out)),
        }
    }
    let mut words = Vec::new();
    walk(n, &mut words);
    let mut s = words.join(" ").replace(" 's", "'s");
    if let Some(first) = s.get(..1) {
        if n.start == 0
            && words
                .first()
                .is_some_and(|w| w.chars().next().is_some_and(char::is_uppercase))
        {
            // sentence-initial capitals are orthographic, not lexical
            let is_name = matches!(n.find(Cat::PN), Some(pn) if pn.start == 0)
                || matches!(n.find(Cat::Title), Some(t) if t.start == 0);
            if !is_name {
                s = first.to_lowercase() + &s[1..];
            }
        }
    }
    s
}

fn det_of(det: &Node) -> Determiner {
    match det.entry().and_then(|e| e.features.misc("det_kind")) {
        Some("definite") => Determiner::Definite,
        Some("indefinite") => Determiner::Indefinite,
        Some("universal") => Determiner::Universal,
        Some("demonstrative") => Determiner::Demonstrative,
        Some("negative") => Determiner::Negative,
        Some("possessive") => Determiner::Possessive,
        _ => Determiner::Definite,
    }
}

fn value_of(n: &Node) -> u32 {
    n.entry()
        .and_then(|e| e.features.misc("value"))
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn noun_entity(n: &Node, kind: EntityKind, det: Determiner) -> Entity {
    let nf = n
        .entry()
        .and_then(|e| e.noun())
        .cloned()
        .unwrap_or_default();
    Entity {
        kind,
        det,
        number: n.feats.number.unwrap_or(Number::Singular),
        person: 3,
        gender: nf.gender,
        animacy: nf.animacy(),
        mass: nf.is_mass(),
        taxon: nf.taxon.clone(),
        mods: Vec::new(),
        title: None,
        post_title: None,
    }
}

fn premodifiers(m: &Node, out: &mut Vec<Premodifier>) {
    for k in &m.kids {
        match k.cat {
            Cat::Adj => out.push(Premodifier {
                lemma: k.lemma().to_lowercase(),
                class: k.feats.first_class,
                role: ModRole::Attributive,
            }),
            Cat::Comp => out.push(Premodifier {
                lemma: k.lemma().to_lowercase(),
                class: None,
                role: ModRole::Complement,
            }),
            Cat::Adjunct => {
                let adj = &k.kids[1];
                out.push(Premodifier {
                    lemma: adj.lemma().to_lowercase(),
                    class: adj.feats.first_class,
                    role: ModRole::Adjunct,
                })
            }
            Cat::Mod => premodifiers(k, out),
            _ => {}
        }
    }
}

/// Person, number and gender carried by a possessive determiner's role tag.
fn possessive_person(det: &Node) -> (u8, Number, Option<Gender>) {
    let role = det
        .entry()
        .and_then(|e| e.features.misc("role"))
        .unwrap_or("3sg");
    let person = role[..1].parse().unwrap_or(3);
    let number = if role.contains("pl") {
        Number::Plural
    } else {
        Number::Singular
    };
    let gender = if role.ends_with("female") {
        Some(Gender::Female)
    } else if role.ends_with("male") {
        Some(Gender::Male)
    } else if role.ends_with("neuter") {
        Some(Gender::Neuter)
    } else {
        None
    };
    (person, number, gender)
}

impl Builder {
    fn add(&mut self, id: NodeId, lemma: &str, phrase: String, kind: NodeKind) -> NodeId {
        self.nodes.insert(
            id,
            GraphNode {
                id,
                lemma: lemma.to_string(),
                phrase,
                kind,
            },
        );
        id
    }

    fn edge(&mut self, from: NodeId, label: Role, to: NodeId) {
        self.edges.push(Edge { from, label, to });
    }

    fn cond(&mut self, c: &Node) -> NodeId {
        let id = self.add(
            leaf_id(&c.kids[0]),
            "if",
            "if".into(),
            NodeKind::Conditional,
        );
        let ante = self.decl(&c.kids[1]);
        let cons = self.decl(c.kids.last().expect("consequent"));
        self.edge(id, Role::Antecedent, ante);
        self.edge(id, Role::Consequent, cons);
        id
    }

    fn decl(&mut self, d: &Node) -> NodeId {
        let subj = self.np(&d.kids[0]);
        let ev = if d.kids[1].cat == Cat::VP {
            self.vp(&d.kids[1])
        } else {
            let aux = &d.kids[1];
            let tense = if aux.feats.tense == Some(crate::lexicon::Tense::Past) {
                EventTense::Past
            } else {
                EventTense::Present
            };
            let event = Event {
                tense,
                anaphor: true,
                ..plain_event(tense)
            };
            self.add(
                leaf_id(aux),
                "do",
                aux.text().to_lowercase(),
                NodeKind::Event(event),
            )
        };
        self.edge(ev, Role::Subject, subj);
        ev
    }

    fn vp(&mut self, vp: &Node) -> NodeId {
        let k = &vp.kids;
        match k[0].cat {
            Cat::VCore => {
                let tense = tense_of(vp);
                self.vcore(&k[0], plain_event(tense))
            }
            Cat::Always => {
                let ev = Event {
                    always: true,
                    ..plain_event(EventTense::Present)
                };
                self.vcore(&k[1], ev)
            }
            Cat::Do => {
                let ev = Event {
                    negated: true,
                    ..plain_event(aux_tense(&k[0]))
                };
                self.vcore(&k[2], ev)
            }
            Cat::Modal => {
                let modal = &k[0];
                let lemma = modal.lemma().to_lowercase();
                let negated = k[1].cat == Cat::Not
                    || modal
                        .entry()
                        .and_then(|e| e.verb())
                        .is_some_and(|v| v.negated);
                let tense = if matches!(lemma.as_str(), "will" | "shall") {
                    EventTense::Future
                } else {
                    EventTense::Present
                };
                let ev = Event {
                    negated,
                    modal: Some(lemma),
                    ..plain_event(tense)
                };
                self.vcore(k.last().expect("core"), ev)
            }
            _ => {
                // copula
                let be = &k[0];
                let ev = Event {
                    negated: k[1].cat == Cat::Not,
                    copula: true,
                    ..plain_event(aux_tense(be))
                };
                let id = self.add(
                    leaf_id(be),
                    "be",
                    be.text().to_lowercase(),
                    NodeKind::Event(ev),
                );
                self.pred(id, k.last().expect("pred"));
                id
            }
        }
    }

    fn pred(&mut self, ev: NodeId, pred: &Node) {
        if pred.kids.len() == 2 {
            self.pred(ev, &pred.kids[0]);
            self.adjunct(ev, &pred.kids[1]);
            return;
        }
        let p = &pred.kids[0];
        match p.cat {
            Cat::NP => {
                let target = self.np(p);
                self.edge(ev, Role::Predicative, target);
            }
            Cat::Adj => {
                let id = self.add(
                    leaf_id(p),
                    &p.lemma().to_lowercase(),
                    p.text().to_lowercase(),
                    NodeKind::Property,
                );
                self.edge(ev, Role::Predicative, id);
            }
            _ => self.pp(ev, p, true),
        }
    }

    fn pp(&mut self, from: NodeId, pp: &Node, verbal: bool) {
        let prep = pp.kids[0].lemma().to_lowercase();
        let target = self.np(&pp.kids[1]);
        let label = if verbal {
            Role::Oblique(prep)
        } else {
            Role::Modifier(prep)
        };
        self.edge(from, label, target);
    }

    /// Verb core: collects stacked adjuncts, then the verb and its frame.
    fn vcore(&mut self, core: &Node, mut ev: Event) -> NodeId {
        let mut adjuncts = Vec::new();
        let mut c = core;
        while matches!(c.kids[0].cat, Cat::VCore | Cat::VCoreGap) {
            adjuncts.push(c.kids[1].clone());
            c = &c.kids[0];
        }
        let v = &c.kids[0];
        ev.motion = v.feats.motion;
        let id = self.add(
            leaf_id(v),
            &v.lemma().to_lowercase(),
            v.text().to_lowercase(),
            NodeKind::Event(ev),
        );
        let k = &c.kids;
        match k.len() {
            2 => {
                let o = self.np(&k[1]);
                let label = if c.cat == Cat::VCoreGap {
                    Role::IndirectObject
                } else {
                    Role::Object
                };
                self.edge(id, label, o);
            }
            3 if k[1].cat == Cat::Lit("that") => {
                let sub = self.decl(&k[2]);
                self.edge(id, Role::Complement, sub);
            }
            3 if k[1].cat == Cat::Lit("to") => {
                let o = self.np(&k[2]);
                self.edge(id, Role::IndirectObject, o);
            }
            3 => {
                let io = self.np(&k[1]);
                let o = self.np(&k[2]);
                self.edge(id, Role::IndirectObject, io);
                self.edge(id, Role::Object, o);
            }
            4 if k[2].cat == Cat::Lit("that") => {
                let a = self.np(&k[1]);
                let sub = self.decl(&k[3]);
                self.edge(id, Role::Addressee, a);
                self.edge(id, Role::Complement, sub);
            }
            4 => {
                let o = self.np(&k[1]);
                let io = self.np(&k[3]);
                self.edge(id, Role::Object, o);
                self.edge(id, Role::IndirectObject, io);
            }
            _ => {}
        }
        for adj in adjuncts.iter().rev() {
            self.adjunct(id, adj);
        }
        id
    }

    fn adjunct(&mut self, ev: NodeId, a: &Arc<Node>) {
        match a.cat {
            Cat::PP => self.pp(ev, a, true),
            Cat::Temp => {
                let words: Vec<String> = a.text().split(' ').map(str::to_string).collect();
                let id = self.add(a.start, "time", a.text().to_string(), NodeKind::Time(words));
                self.edge(ev, Role::Temporal, id);
            }
            Cat::Freq => {
                let id = self.add(
                    leaf_id(a),
                    &a.lemma().to_lowercase(),
                    a.text().to_lowercase(),
                    NodeKind::Frequency(value_of(a)),
                );
                self.edge(ev, Role::Frequency, id);
            }
            _ => {
                let id = self.add(
                    leaf_id(a),
                    &a.lemma().to_lowercase(),
                    a.text().to_lowercase(),
                    NodeKind::Direction,
                );
                self.edge(ev, Role::Direction, id);
            }
        }
    }

    fn np(&mut self, np: &Node) -> NodeId {
        let inner = &np.kids[0];
        match inner.cat {
            Cat::NPC => self.npc(inner),
            _ => self.cnp(inner),
        }
    }

    fn npc(&mut self, npc: &Node) -> NodeId {
        let id = self.add(
            leaf_id(&npc.kids[1]),
            &npc.kids[1].lemma().to_lowercase(),
            phrase(npc),
            NodeKind::Coordination,
        );
        let mut cur = npc;
        loop {
            let m = self.cnp(&cur.kids[0]);
            self.edge(id, Role::Member, m);
            let rest = &cur.kids[2];
            if rest.cat == Cat::NPC {
                cur = rest;
            } else {
                let m = self.cnp(rest);
                self.edge(id, Role::Member, m);
                break;
            }
        }
        id
    }

    fn cnp(&mut self, cnp: &Node) -> NodeId {
        let inner = &cnp.kids[0];
        if inner.cat == Cat::GenNP {
            let gendet = &inner.kids[0];
            let owner = if gendet.kids[0].cat == Cat::PossDet {
                let det = &gendet.kids[0];
                let (person, number, gender) = possessive_person(det);
                let animacy = if gender == Some(Gender::Neuter) {
                    Animacy::Inanimate
                } else {
                    Animacy::Animate
                };
                let e = Entity {
                    kind: EntityKind::Pronoun(PronKind::Personal),
                    det: Determiner::None,
                    number,
                    person,
                    gender,
                    animacy,
                    mass: false,
                    taxon: None,
                    mods: Vec::new(),
                    title: None,
                    post_title: None,
                };
                let text = det.text().to_lowercase();
                self.add(leaf_id(det), &text, text.clone(), NodeKind::Entity(e))
            } else {
                self.cnp(&gendet.kids[0])
            };
            let id = self.np2(&inner.kids[1], Determiner::Possessive, phrase(inner));
            self.edge(id, Role::Possessor, owner);
            return id;
        }
        self.enp(inner)
    }

    fn enp(&mut self, enp: &Node) -> NodeId {
        let k = &enp.kids;
        let text = phrase(enp);
        match k[0].cat {
            Cat::Det => self.np2(&k[1], det_of(&k[0]), text),
            Cat::Card => self.np2(&k[1], Determiner::Cardinal(value_of(&k[0])), text),
            Cat::Comp => self.np2(
                &k[1],
                Determiner::Quantity(k[0].lemma().to_lowercase()),
                text,
            ),
            Cat::NP2 => self.np2(&k[0], Determiner::Bare, text),
            Cat::Pro => {
                let p = &k[0];
                let pf = p
                    .entry()
                    .and_then(|e| e.pronoun())
                    .cloned()
                    .expect("pronoun entry");
                let animacy = pf.animacy.unwrap_or(match pf.gender {
                    Some(Gender::Neuter) => Animacy::Inanimate,
                    _ => Animacy::Animate,
                });
                let e = Entity {
                    kind: EntityKind::Pronoun(pf.kind),
                    det: Determiner::None,
                    number: pf.number.unwrap_or(Number::Singular),
                    person: pf.person,
                    gender: pf.gender,
                    animacy,
                    mass: false,
                    taxon: None,
                    mods: Vec::new(),
                    title: None,
                    post_title: None,
                };
                let lemma = p.lemma().to_lowercase();
                self.add(leaf_id(p), &lemma, text, NodeKind::Entity(e))
            }
            _ => {
                let pn = enp.kid(Cat::PN).expect("proper noun");
                let mut e = noun_entity(pn, EntityKind::Proper, Determiner::None);
                e.title = enp.kid(Cat::Title).map(|t| t.lemma().to_lowercase());
                e.post_title = enp.kid(Cat::PostTitle).map(|t| t.lemma().to_lowercase());
                self.add(leaf_id(pn), pn.lemma(), text, NodeKind::Entity(e))
            }
        }
    }

    fn np2(&mut self, np2: &Node, det: Determiner, text: String) -> NodeId {
        let mut pps = Vec::new();
        let mut cur = np2;
        while cur.kids[0].cat == Cat::NP2 {
            pps.push(cur.kids[1].clone());
            cur = &cur.kids[0];
        }
        let n = cur.kids.last().expect("head noun");
        let mut e = noun_entity(n, EntityKind::Common, det);
        e.number = np2.feats.number.unwrap_or(Number::Singular);
        if let Some(m) = cur.kid(Cat::Mod) {
            premodifiers(m, &mut e.mods);
        }
        let id = self.add(
            leaf_id(n),
            &n.lemma().to_lowercase(),
            text,
            NodeKind::Entity(e),
        );
        for pp in pps.iter().rev() {
            self.pp(id, pp, false);
        }
        id
    }

    fn wh_entity(&mut self, wh: &Node, noun: Option<&Node>) -> NodeId {
        let word = wh.lemma().to_lowercase();
        let (lemma, mut e) = match noun {
            Some(n) => (
                n.lemma().to_lowercase(),
                noun_entity(n, EntityKind::Wh, Determiner::None),
            ),
            None => {
                let animacy = if matches!(word.as_str(), "who" | "whom") {
                    Animacy::Animate
                } else {
                    Animacy::Inanimate
                };
                let e = Entity {
                    kind: EntityKind::Wh,
                    det: Determiner::None,
                    number: Number::Singular,
                    person: 3,
                    gender: None,
                    animacy,
                    mass: false,
                    taxon: None,
                    mods: Vec::new(),
                    title: None,
                    post_title: None,
                };
                (word.clone(), e)
            }
        };
        e.kind = EntityKind::Wh;
        let text = match noun {
            Some(n) => format!("{word} {}", n.text()),
            None => word,
        };
        self.add(leaf_id(wh), &lemma, text, NodeKind::Entity(e))
    }

    fn question(&mut self, q: &Node) -> NodeId {
        let k = &q.kids;
        match (k[0].cat, k.len()) {
            (Cat::Wh, 2) => {
                let wh = self.wh_entity(&k[0], None);
                let ev = self.vp(&k[1]);
                self.edge(ev, Role::Subject, wh);
                ev
            }
            (Cat::Wh, 3) => {
                // where BE NP
                let subj = self.np(&k[2]);
                let ev = Event {
                    copula: true,
                    ..plain_event(aux_tense(&k[1]))
                };
                let id = self.add(
                    leaf_id(&k[1]),
                    "be",
                    k[1].text().to_lowercase(),
                    NodeKind::Event(ev),
                );
                self.edge(id, Role::Subject, subj);
                id
            }
            (Cat::Wh, 5) => {
                let wh = self.wh_entity(&k[0], Some(&k[1]));
                let subj = self.np(&k[3]);
                let ev = Event {
                    copula: true,
                    ..plain_event(aux_tense(&k[2]))
                };
                let id = self.add(
                    leaf_id(&k[2]),
                    "be",
                    k[2].text().to_lowercase(),
                    NodeKind::Event(ev),
                );
                self.edge(id, Role::Subject, subj);
                self.edge(id, Role::Oblique(k[4].lemma().to_lowercase()), wh);
                id
            }
            (Cat::Wh, _) => {
                let subj = self.np(&k[2]);
                let tense = aux_tense(&k[1]);
                let ev = match k[3].cat {
                    Cat::Lit(_) => {
                        let e = Event {
                            generic: true,
                            ..plain_event(tense)
                        };
                        self.add(leaf_id(&k[3]), "do", "do".into(), NodeKind::Event(e))
                    }
                    Cat::VCoreGap => {
                        let id = self.vcore(&k[3], plain_event(tense));
                        let wh = self.wh_entity(&k[0], None);
                        self.edge(id, Role::Object, wh);
                        id
                    }
                    _ => self.vcore(&k[3], plain_event(tense)),
                };
                self.edge(ev, Role::Subject, subj);
                ev
            }
            (Cat::Be, _) => {
                let subj = self.np(&k[1]);
                let ev = Event {
                    copula: true,
                    ..plain_event(aux_tense(&k[0]))
                };
                let id = self.add(
                    leaf_id(&k[0]),
                    "be",
                    k[0].text().to_lowercase(),
                    NodeKind::Event(ev),
                );
                self.edge(id, Role::Subject, subj);
                self.pred(id, &k[2]);
                id
            }
            (Cat::Modal, _) => {
                let subj = self.np(&k[1]);
                let lemma = k[0].lemma().to_lowercase();
                let tense = if matches!(lemma.as_str(), "will" | "shall") {
                    EventTense::Future
                } else {
                    EventTense::Present
                };
                let ev = self.vcore(
                    &k[2],
                    Event {
                        modal: Some(lemma),
                        ..plain_event(tense)
                    },
                );
                self.edge(ev, Role::Subject, subj);
                ev
            }
            _ => {
                let subj = self.np(&k[1]);
                let ev = self.vcore(&k[2], plain_event(aux_tense(&k[0])));
                self.edge(ev, Role::Subject, subj);
                ev
            }
        }
    }

    fn directive(&mut self, d: &Node) -> NodeId {
        let show = &d.kids[0];
        let id = self.add(leaf_id(show), "show", "show".into(), NodeKind::Directive);
        let class = &d.kids[1];
        let head = class.kids.last().expect("class noun");
        let mut mods = Vec::new();
        if let Some(m) = class.kid(Cat::Mod) {
            premodifiers(m, &mut mods);
        }
        let lemma = mods
            .iter()
            .map(|m| m.lemma.as_str())
            .chain(std::iter::once(head.lemma()))
            .collect::<Vec<_>>()
            .join("_")
            .to_lowercase();
        let mut e = noun_entity(head, EntityKind::Common, Determiner::Bare);
        e.mods = mods;
        let cid = self.add(leaf_id(head), &lemma, phrase(class), NodeKind::Entity(e));
        let pn = d.kids.last().expect("track id");
        let te = noun_entity(pn, EntityKind::Proper, Determiner::None);
        let tid = self.add(
            leaf_id(pn),
            pn.lemma(),
            pn.text().to_string(),
            NodeKind::Entity(te),
        );
        self.edge(id, Role::Class, cid);
        self.edge(id, Role::Target, tid);
        id
    }
}

fn plain_event(tense: EventTense) -> Event {
    Event {
        tense,
        negated: false,
        always: false,
        modal: None,
        copula: false,
        anaphor: false,
        generic: false,
        motion: false,
    }
}

fn tense_of(vp: &Node) -> EventTense {
    match vp.feats.tense {
        Some(crate::lexicon::Tense::Past) => EventTense::Past,
        _ => EventTense::Present,
    }
}

fn aux_tense(aux: &Node) -> EventTense {
    match aux.feats.tense {
        Some(crate::lexicon::Tense::Past) => EventTense::Past,
        _ => EventTense::Present,
    }
}
