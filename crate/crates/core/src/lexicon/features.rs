use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::adjclass::AdjClass;

macro_rules! keyword_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!("unknown {} `{}`", stringify!($name), s)),
                }
            }
        }
    };
}

keyword_enum!(
    /// Part of speech.
    Pos {
        CommonNoun => "common_noun",
        ProperNoun => "proper_noun",
        Pronoun => "pronoun",
        MainVerb => "main_verb",
        Auxiliary => "auxiliary",
        Modal => "modal",
        Adjective => "adjective",
        Article => "article",
        Cardinal => "cardinal",
        Ordinal => "ordinal",
        Preposition => "preposition",
        Conjunction => "conjunction",
        WhWord => "wh_word",
        Directional => "directional",
        Adverb => "adverb",
    }
);

keyword_enum!(MassCount { Mass => "mass", Count => "count" });
keyword_enum!(Number { Singular => "singular", Plural => "plural" });
keyword_enum!(Gender { Female => "female", Male => "male", Neuter => "neuter", Common => "common" });
keyword_enum!(Animacy { Animate => "animate", Inanimate => "inanimate" });
keyword_enum!(Alienability { Alienable => "alienable", Inalienable => "inalienable" });
keyword_enum!(Case { Nominative => "nominative", Accusative => "accusative", Genitive => "genitive" });
keyword_enum!(PronKind {
    Personal => "personal",
    Reflexive => "reflexive",
    Reciprocal => "reciprocal",
    Indefinite => "indefinite",
    Demonstrative => "demonstrative",
});
keyword_enum!(Aktionsart {
    State => "state",
    Activity => "activity",
    Accomplishment => "accomplishment",
    Achievement => "achievement",
});
keyword_enum!(Tense { Present => "present", Past => "past" });
keyword_enum!(Agreement { ThirdSingular => "3sg", NonThirdSingular => "non3sg", Any => "any" });
keyword_enum!(VerbForm {
    Base => "base",
    ThirdSingular => "third_singular",
    Past => "past",
    PresentParticiple => "present_participle",
});
keyword_enum!(Frame {
    Intransitive => "intransitive",
    Transitive => "transitive",
    Ditransitive => "ditransitive",
    Speech => "speech",
    SpeechAddressee => "speech_addressee",
});
keyword_enum!(Usage {
    Attributive => "attributive",
    Predicative => "predicative",
    Comparative => "comparative",
    Superlative => "superlative",
});
keyword_enum!(TitlePosition { PreNominal => "pre", PostNominal => "post" });

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NounFeatures {
    pub mass_count: Option<MassCount>,
    pub number: Option<Number>,
    pub gender: Option<Gender>,
    pub alienability: Option<Alienability>,
    /// Stored as given; no grammar rule reads them.
    pub syntactic_dependencies: Vec<String>,
    pub animacy: Option<Animacy>,
    pub taxon: Option<String>,
    pub semantic_type: Option<String>,
    pub title: Option<TitlePosition>,
}

impl NounFeatures {
    pub fn animacy(&self) -> Animacy {
        match (self.animacy, self.gender) {
            (Some(a), _) => a,
            (None, Some(Gender::Female | Gender::Male | Gender::Common)) => Animacy::Animate,
            _ => Animacy::Inanimate,
        }
    }

    pub fn is_mass(&self) -> bool {
        self.mass_count == Some(MassCount::Mass)
    }

    pub fn is_temporal(&self) -> bool {
        self.semantic_type.as_deref() == Some("temporal")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PronounFeatures {
    pub person: u8,
    pub number: Option<Number>,
    pub gender: Option<Gender>,
    pub animacy: Option<Animacy>,
    /// `None` means the form is used in any case position ("it", "anyone").
    pub case: Option<Case>,
    pub kind: PronKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerbFeatures {
    pub semantic_type: Option<String>,
    pub agreement: Option<Agreement>,
    pub tense: Option<Tense>,
    pub aspect: Option<String>,
    pub mood: Option<String>,
    pub syntactic_frames: Vec<Frame>,
    pub semantic_frame: Option<String>,
    pub aktionsart: Option<Aktionsart>,
    pub form: Option<VerbForm>,
    pub motion: bool,
    /// Set on fused negative modals such as "cannot".
    pub negated: bool,
}

impl VerbFeatures {
    pub fn has_frame(&self, frame: Frame) -> bool {
        self.syntactic_frames.contains(&frame)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjectiveFeatures {
    pub usage: Vec<Usage>,
    pub order_class: AdjClass,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureBundle {
    pub noun: Option<NounFeatures>,
    pub pronoun: Option<PronounFeatures>,
    pub verb: Option<VerbFeatures>,
    pub adjective: Option<AdjectiveFeatures>,
    /// Closed-class attributes (determiner kind, numeric value, wh type...).
    pub misc: BTreeMap<String, String>,
}

impl FeatureBundle {
    pub fn misc(&self, key: &str) -> Option<&str> {
        self.misc.get(key).map(String::as_str)
    }
}

const NOUN_KEYS: &[&str] = &[
    "mass_count",
    "number",
    "gender",
    "alienability",
    "deps",
    "animacy",
    "taxon",
    "semantic_type",
    "title",
];
const PRONOUN_KEYS: &[&str] = &["person", "number", "gender", "animacy", "case", "pron_kind"];
const VERB_KEYS: &[&str] = &[
    "semantic_type",
    "agreement",
    "tense",
    "aspect",
    "mood",
    "frames",
    "semantic_frame",
    "aktionsart",
    "form",
    "motion",
    "negated",
];
const ADJ_KEYS: &[&str] = &["usage", "class"];
const MISC_KEYS: &[&str] = &[
    "det_kind",
    "number",
    "value",
    "wh",
    "adv_kind",
    "conj_kind",
    "semantic_type",
    "role",
];

fn pairs(spec: &str) -> Result<Vec<(&str, &str)>, String> {
    let mut out = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("feature `{part}` is not key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(format!("feature `{part}` has an empty key or value"));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn list<T: FromStr<Err = String>>(v: &str) -> Result<Vec<T>, String> {
    v.split(',').map(|s| s.trim().parse()).collect()
}

fn flag(v: &str) -> Result<bool, String> {
    match v {
        "yes" | "true" => Ok(true),
        "no" | "false" => Ok(false),
        _ => Err(format!("expected yes/no, found `{v}`")),
    }
}

fn check_keys(pos: Pos, allowed: &[&str], kv: &[(&str, &str)]) -> Result<(), String> {
    for (k, _) in kv {
        if !allowed.contains(k) {
            return Err(format!("feature `{k}` is not applicable to {pos}"));
        }
    }
    Ok(())
}

impl FeatureBundle {
    /// Parses the `key=value;key=value` column of a lexicon line for the
    /// given part of speech, rejecting keys that do not belong to it.
    pub fn parse(pos: Pos, spec: &str) -> Result<FeatureBundle, String> {
        let kv = pairs(spec)?;
        let mut bundle = FeatureBundle::default();
        match pos {
            Pos::CommonNoun | Pos::ProperNoun => {
                check_keys(pos, NOUN_KEYS, &kv)?;
                let mut n = NounFeatures::default();
                for (k, v) in kv {
                    match k {
                        "mass_count" => n.mass_count = Some(v.parse()?),
                        "number" => n.number = Some(v.parse()?),
                        "gender" => n.gender = Some(v.parse()?),
                        "alienability" => n.alienability = Some(v.parse()?),
                        "deps" => {
                            n.syntactic_dependencies =
                                v.split(',').map(|s| s.trim().to_string()).collect()
                        }
                        "animacy" => n.animacy = Some(v.parse()?),
                        "taxon" => n.taxon = Some(v.to_string()),
                        "semantic_type" => n.semantic_type = Some(v.to_string()),
                        "title" => n.title = Some(v.parse()?),
                        _ => unreachable!(),
                    }
                }
                bundle.noun = Some(n);
            }
            Pos::Pronoun => {
                check_keys(pos, PRONOUN_KEYS, &kv)?;
                let mut person = 3;
                let mut number = None;
                let mut gender = None;
                let mut animacy = None;
                let mut case = None;
                let mut kind = None;
                for (k, v) in kv {
                    match k {
                        "person" => {
                            person = v.parse::<u8>().map_err(|_| format!("bad person `{v}`"))?;
                            if !(1..=3).contains(&person) {
                                return Err(format!("bad person `{v}`"));
                            }
                        }
                        "number" => number = Some(v.parse()?),
                        "gender" => gender = Some(v.parse()?),
                        "animacy" => animacy = Some(v.parse()?),
                        "case" => case = if v == "any" { None } else { Some(v.parse()?) },
                        "pron_kind" => kind = Some(v.parse()?),
                        _ => unreachable!(),
                    }
                }
                bundle.pronoun = Some(PronounFeatures {
                    person,
                    number,
                    gender,
                    animacy,
                    case,
                    kind: kind.ok_or("pronoun needs pron_kind")?,
                });
            }
            Pos::MainVerb | Pos::Auxiliary | Pos::Modal => {
                check_keys(pos, VERB_KEYS, &kv)?;
                let mut v = VerbFeatures::default();
                for (k, val) in kv {
                    match k {
                        "semantic_type" => v.semantic_type = Some(val.to_string()),
                        "agreement" => v.agreement = Some(val.parse()?),
                        "tense" => v.tense = Some(val.parse()?),
                        "aspect" => v.aspect = Some(val.to_string()),
                        "mood" => v.mood = Some(val.to_string()),
                        "frames" => v.syntactic_frames = list(val)?,
                        "semantic_frame" => v.semantic_frame = Some(val.to_string()),
                        "aktionsart" => v.aktionsart = Some(val.parse()?),
                        "form" => v.form = Some(val.parse()?),
                        "motion" => v.motion = flag(val)?,
                        "negated" => v.negated = flag(val)?,
                        _ => unreachable!(),
                    }
                }
                if pos == Pos::MainVerb {
                    if v.aktionsart.is_none() {
                        return Err("main verb needs an aktionsart".into());
                    }
                    if v.syntactic_frames.is_empty() {
                        return Err("main verb needs at least one frame".into());
                    }
                }
                bundle.verb = Some(v);
            }
            Pos::Adjective => {
                check_keys(pos, ADJ_KEYS, &kv)?;
                let mut usage = vec![Usage::Attributive, Usage::Predicative];
                let mut class = None;
                for (k, v) in kv {
                    match k {
                        "usage" => usage = list(v)?,
                        "class" => class = Some(v.parse()?),
                        _ => unreachable!(),
                    }
                }
                bundle.adjective = Some(AdjectiveFeatures {
                    usage,
                    order_class: class.ok_or("adjective needs exactly one class")?,
                });
            }
            _ => {
                check_keys(pos, MISC_KEYS, &kv)?;
                for (k, v) in kv {
                    bundle.misc.insert(k.to_string(), v.to_string());
                }
            }
        }
        Ok(bundle)
    }

    /// Inverse of [`FeatureBundle::parse`], used when writing lexicon files.
    pub fn render(&self) -> String {
        let mut out: Vec<String> = Vec::new();
        if let Some(n) = &self.noun {
            push(&mut out, "mass_count", n.mass_count);
            push(&mut out, "number", n.number);
            push(&mut out, "gender", n.gender);
            push(&mut out, "alienability", n.alienability);
            if !n.syntactic_dependencies.is_empty() {
                out.push(format!("deps={}", n.syntactic_dependencies.join(",")));
            }
            push(&mut out, "animacy", n.animacy);
            push(&mut out, "taxon", n.taxon.as_deref());
            push(&mut out, "semantic_type", n.semantic_type.as_deref());
            push(&mut out, "title", n.title);
        }
        if let Some(p) = &self.pronoun {
            out.push(format!("person={}", p.person));
            push(&mut out, "number", p.number);
            push(&mut out, "gender", p.gender);
            push(&mut out, "animacy", p.animacy);
            out.push(format!(
                "case={}",
                p.case.map(|c| c.as_str()).unwrap_or("any")
            ));
            out.push(format!("pron_kind={}", p.kind));
        }
        if let Some(v) = &self.verb {
            push(&mut out, "semantic_type", v.semantic_type.as_deref());
            push(&mut out, "agreement", v.agreement);
            push(&mut out, "tense", v.tense);
            push(&mut out, "aspect", v.aspect.as_deref());
            push(&mut out, "mood", v.mood.as_deref());
            if !v.syntactic_frames.is_empty() {
                let f: Vec<&str> = v.syntactic_frames.iter().map(|f| f.as_str()).collect();
                out.push(format!("frames={}", f.join(",")));
            }
            push(&mut out, "semantic_frame", v.semantic_frame.as_deref());
            push(&mut out, "aktionsart", v.aktionsart);
            push(&mut out, "form", v.form);
            if v.motion {
                out.push("motion=yes".into());
            }
            if v.negated {
                out.push("negated=yes".into());
            }
        }
        if let Some(a) = &self.adjective {
            let u: Vec<&str> = a.usage.iter().map(|u| u.as_str()).collect();
            out.push(format!("usage={}", u.join(",")));
            out.push(format!("class={}", a.order_class));
        }
        for (k, v) in &self.misc {
            out.push(format!("{k}={v}"));
        }
        out.join(";")
    }
}

fn push<T: fmt::Display>(out: &mut Vec<String>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        out.push(format!("{key}={v}"));
    }
}
