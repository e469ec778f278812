//! Random sentences built from a few grammar templates and the seed lexicon.

use cnl_core::lexicon::{
    AdjClass, Frame, LexicalResources, MassCount, Pos, TitlePosition, VerbForm,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Vocab {
    nouns: Vec<String>,
    intransitive: Vec<String>,
    transitive: Vec<String>,
    ditransitive: Vec<String>,
    adjectives: Vec<(String, AdjClass)>,
    places: Vec<String>,
    names: Vec<String>,
    days: Vec<String>,
}

impl Vocab {
    pub fn new(res: &LexicalResources) -> Vocab {
        let lex = &res.lexicon;
        let mut v = Vocab {
            nouns: Vec::new(),
            intransitive: Vec::new(),
            transitive: Vec::new(),
            ditransitive: Vec::new(),
            adjectives: Vec::new(),
            places: Vec::new(),
            names: Vec::new(),
            days: ["Monday", "Tuesday", "Friday", "Sunday"]
                .map(String::from)
                .to_vec(),
        };
        let plain = |s: &str| s.chars().all(|c| c.is_ascii_lowercase());
        for e in lex.entries() {
            // Words with a second reading make the chosen reading a coin toss.
            let single = lex
                .entries()
                .iter()
                .filter(|o| o.surface == e.surface)
                .count()
                == 1;
            match e.pos {
                Pos::CommonNoun => {
                    let n = e.noun().unwrap();
                    if single
                        && plain(&e.surface)
                        && n.mass_count == Some(MassCount::Count)
                        && n.title.is_none()
                        && !n.is_temporal()
                    {
                        v.nouns.push(e.lemma.clone());
                    }
                }
                Pos::ProperNoun => {
                    let n = e.noun().unwrap();
                    if n.taxon.as_deref() == Some("person")
                        && plain(&e.surface.to_lowercase())
                        && n.title != Some(TitlePosition::PostNominal)
                    {
                        v.names.push(e.surface.clone());
                    }
                }
                Pos::MainVerb => {
                    let f = e.verb().unwrap();
                    if f.has_frame(Frame::Ditransitive) {
                        v.ditransitive.push(e.lemma.clone());
                    } else if f.has_frame(Frame::Transitive) {
                        v.transitive.push(e.lemma.clone());
                    } else if f.has_frame(Frame::Intransitive) {
                        v.intransitive.push(e.lemma.clone());
                    }
                }
                Pos::Adjective => {
                    let class = e.adjective().unwrap().order_class;
                    if single && plain(&e.surface) && class.name() != "noun" {
                        v.adjectives.push((e.surface.clone(), class));
                    }
                }
                Pos::Preposition if e.features.misc("role") == Some("locational") => {
                    v.places.push(e.surface.clone())
                }
                _ => {}
            }
        }
        v
    }

    fn past(&self, res: &LexicalResources, lemma: &str) -> String {
        res.lexicon
            .forms_of(lemma, Pos::MainVerb)
            .find(|e| e.verb().and_then(|f| f.form) == Some(VerbForm::Past))
            .map(|e| e.surface.clone())
            .unwrap_or_else(|| panic!("no past form for {lemma}"))
    }

    fn plural(&self, res: &LexicalResources, lemma: &str) -> String {
        res.lexicon
            .forms_of(lemma, Pos::CommonNoun)
            .find(|e| e.noun().and_then(|n| n.number) == Some(cnl_core::lexicon::Number::Plural))
            .map(|e| e.surface.clone())
            .unwrap_or_else(|| cnl_core::lexicon::inflect::plural(lemma))
    }
}

struct Gen<'a> {
    v: &'a Vocab,
    res: &'a LexicalResources,
    rng: ChaCha8Rng,
}

impl Gen<'_> {
    fn pick<'b>(&mut self, xs: &'b [String]) -> &'b str {
        xs.choose(&mut self.rng).unwrap()
    }

    fn adjectives(&mut self) -> Vec<String> {
        let n = [0, 0, 1, 1, 2].choose(&mut self.rng).copied().unwrap();
        let mut chosen: Vec<(String, AdjClass)> = self
            .v
            .adjectives
            .choose_multiple(&mut self.rng, n)
            .cloned()
            .collect();
        chosen.sort_by_key(|(_, c)| c.rank());
        chosen.dedup_by_key(|(_, c)| c.rank());
        chosen.into_iter().map(|(a, _)| a).collect()
    }

    /// A singular noun phrase with a definite, indefinite or demonstrative
    /// determiner.
    fn np(&mut self) -> String {
        let mut words = self.adjectives();
        words.push(self.pick(&self.v.nouns).to_string());
        let body = words.join(" ");
        let det = match self.rng.gen_range(0..4) {
            0 if body.starts_with(['a', 'e', 'i', 'o', 'u']) => "an",
            0 => "a",
            1 => "that",
            _ => "the",
        };
        format!("{det} {body}")
    }

    fn subject(&mut self) -> String {
        if self.rng.gen_bool(0.2) {
            return self.pick(&self.v.names).to_string();
        }
        let np = self.np();
        let mut c = np.chars();
        c.next()
            .map(|f| f.to_uppercase().chain(c).collect())
            .unwrap_or_default()
    }

    fn place(&mut self) -> String {
        let p = self.pick(&self.v.places).to_string();
        format!("{p} {}", self.np())
    }

    fn sentence(&mut self) -> String {
        let s = match self.rng.gen_range(0..9) {
            0 => {
                let v = self.pick(&self.v.intransitive).to_string();
                format!("{} {}", self.subject(), self.v.past(self.res, &v))
            }
            1 => {
                let v = self.pick(&self.v.intransitive).to_string();
                format!(
                    "{} {} {}",
                    self.subject(),
                    self.v.past(self.res, &v),
                    self.place()
                )
            }
            2 => {
                let v = self.pick(&self.v.transitive).to_string();
                format!(
                    "{} {} {}",
                    self.subject(),
                    self.v.past(self.res, &v),
                    self.np()
                )
            }
            3 => {
                let v = self.pick(&self.v.transitive).to_string();
                format!("{} did not {v} {}", self.subject(), self.np())
            }
            4 => {
                let v = self.pick(&self.v.intransitive).to_string();
                let modal = ["will", "can", "must"].choose(&mut self.rng).unwrap();
                format!("{} {modal} {v}", self.subject())
            }
            5 => {
                let v = self.pick(&self.v.ditransitive).to_string();
                format!(
                    "{} {} {} {}",
                    self.subject(),
                    self.v.past(self.res, &v),
                    self.np(),
                    self.np()
                )
            }
            6 => {
                let (n, v) = (
                    self.pick(&self.v.nouns).to_string(),
                    self.pick(&self.v.intransitive).to_string(),
                );
                let p = self.v.plural(self.res, &n);
                let mut c = p.chars();
                let p: String = c.next().unwrap().to_uppercase().chain(c).collect();
                format!("{p} {v}")
            }
            7 => {
                let (a, b) = (
                    self.pick(&self.v.nouns).to_string(),
                    self.pick(&self.v.nouns).to_string(),
                );
                let v = self.pick(&self.v.transitive).to_string();
                format!(
                    "All {} always {v} all {}",
                    self.v.plural(self.res, &a),
                    self.v.plural(self.res, &b)
                )
            }
            _ => {
                let v = self.pick(&self.v.intransitive).to_string();
                let day = self.pick(&self.v.days).to_string();
                format!("{} {} on {day}", self.subject(), self.v.past(self.res, &v))
            }
        };
        format!("{s}.")
    }
}

/// `n` sentences from a fixed seed.
pub fn corpus(res: &LexicalResources, seed: u64, n: usize) -> Vec<String> {
    let v = Vocab::new(res);
    let mut g = Gen {
        v: &v,
        res,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    (0..n).map(|_| g.sentence()).collect()
}
