//! Table-driven English inflection for the closed vocabulary: regular
//! suffix rules plus explicit irregular lists.

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("aircraft", "aircraft"),
    ("analysis", "analyses"),
    ("businessman", "businessmen"),
    ("chairman", "chairmen"),
    ("child", "children"),
    ("craft", "craft"),
    ("crisis", "crises"),
    ("criterion", "criteria"),
    ("deer", "deer"),
    ("echo", "echoes"),
    ("fireman", "firemen"),
    ("fish", "fish"),
    ("foot", "feet"),
    ("gentleman", "gentlemen"),
    ("goose", "geese"),
    ("half", "halves"),
    ("hero", "heroes"),
    ("knife", "knives"),
    ("leaf", "leaves"),
    ("life", "lives"),
    ("man", "men"),
    ("mouse", "mice"),
    ("ox", "oxen"),
    ("person", "people"),
    ("phenomenon", "phenomena"),
    ("policeman", "policemen"),
    ("potato", "potatoes"),
    ("salesman", "salesmen"),
    ("seaman", "seamen"),
    ("series", "series"),
    ("sheep", "sheep"),
    ("shelf", "shelves"),
    ("spacecraft", "spacecraft"),
    ("species", "species"),
    ("spokesman", "spokesmen"),
    ("thief", "thieves"),
    ("tomato", "tomatoes"),
    ("tooth", "teeth"),
    ("wife", "wives"),
    ("wolf", "wolves"),
    ("woman", "women"),
];

const IRREGULAR_PAST: &[(&str, &str)] = &[
    ("arise", "arose"),
    ("bear", "bore"),
    ("beat", "beat"),
    ("become", "became"),
    ("begin", "began"),
    ("bend", "bent"),
    ("bet", "bet"),
    ("bind", "bound"),
    ("bite", "bit"),
    ("bleed", "bled"),
    ("blow", "blew"),
    ("break", "broke"),
    ("bring", "brought"),
    ("build", "built"),
    ("buy", "bought"),
    ("catch", "caught"),
    ("choose", "chose"),
    ("come", "came"),
    ("cost", "cost"),
    ("cut", "cut"),
    ("deal", "dealt"),
    ("dig", "dug"),
    ("do", "did"),
    ("draw", "drew"),
    ("drink", "drank"),
    ("drive", "drove"),
    ("eat", "ate"),
    ("fall", "fell"),
    ("feed", "fed"),
    ("feel", "felt"),
    ("fight", "fought"),
    ("find", "found"),
    ("flee", "fled"),
    ("fly", "flew"),
    ("forbid", "forbade"),
    ("forget", "forgot"),
    ("forgive", "forgave"),
    ("freeze", "froze"),
    ("get", "got"),
    ("give", "gave"),
    ("go", "went"),
    ("grow", "grew"),
    ("hang", "hung"),
    ("have", "had"),
    ("hear", "heard"),
    ("hide", "hid"),
    ("hit", "hit"),
    ("hold", "held"),
    ("hurt", "hurt"),
    ("keep", "kept"),
    ("know", "knew"),
    ("lay", "laid"),
    ("lead", "led"),
    ("leave", "left"),
    ("lend", "lent"),
    ("let", "let"),
    ("lie", "lay"),
    ("light", "lit"),
    ("lose", "lost"),
    ("make", "made"),
    ("mean", "meant"),
    ("meet", "met"),
    ("pay", "paid"),
    ("put", "put"),
    ("quit", "quit"),
    ("read", "read"),
    ("ride", "rode"),
    ("ring", "rang"),
    ("rise", "rose"),
    ("run", "ran"),
    ("say", "said"),
    ("see", "saw"),
    ("seek", "sought"),
    ("sell", "sold"),
    ("send", "sent"),
    ("set", "set"),
    ("shake", "shook"),
    ("shine", "shone"),
    ("shoot", "shot"),
    ("shut", "shut"),
    ("sing", "sang"),
    ("sink", "sank"),
    ("sit", "sat"),
    ("sleep", "slept"),
    ("slide", "slid"),
    ("speak", "spoke"),
    ("spend", "spent"),
    ("spin", "spun"),
    ("stand", "stood"),
    ("steal", "stole"),
    ("stick", "stuck"),
    ("strike", "struck"),
    ("swear", "swore"),
    ("sweep", "swept"),
    ("swim", "swam"),
    ("swing", "swung"),
    ("take", "took"),
    ("teach", "taught"),
    ("tear", "tore"),
    ("tell", "told"),
    ("think", "thought"),
    ("throw", "threw"),
    ("understand", "understood"),
    ("wake", "woke"),
    ("wear", "wore"),
    ("win", "won"),
    ("write", "wrote"),
];

const IRREGULAR_THIRD: &[(&str, &str)] = &[
    ("be", "is"),
    ("do", "does"),
    ("go", "goes"),
    ("have", "has"),
];

/// Verbs whose final consonant doubles before -ed/-ing.
const DOUBLING: &[&str] = &[
    "admit", "begin", "chat", "commit", "control", "cut", "dig", "drop", "forget", "get", "grab",
    "hit", "hug", "jog", "let", "nod", "occur", "patrol", "permit", "plan", "prefer", "put",
    "refer", "rob", "rub", "run", "set", "ship", "shut", "sit", "spin", "stop", "swim", "tap",
    "transmit", "trap", "win",
];

fn lookup(table: &'static [(&'static str, &'static str)], key: &str) -> Option<&'static str> {
    table
        .binary_search_by(|(k, _)| (*k).cmp(key))
        .ok()
        .map(|i| table[i].1)
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ends_consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    matches!((rev.next(), rev.next()), (Some('y'), Some(c)) if !is_vowel(c))
}

fn sibilant(word: &str) -> bool {
    ["s", "x", "z", "ch", "sh"]
        .iter()
        .any(|s| word.ends_with(s))
}

pub fn plural(noun: &str) -> String {
    if let Some(p) = lookup(IRREGULAR_PLURALS, noun) {
        return p.to_string();
    }
    if sibilant(noun) {
        format!("{noun}es")
    } else if ends_consonant_y(noun) {
        format!("{}ies", &noun[..noun.len() - 1])
    } else {
        format!("{noun}s")
    }
}

pub fn third_singular(verb: &str) -> String {
    if let Some(p) = lookup(IRREGULAR_THIRD, verb) {
        return p.to_string();
    }
    if sibilant(verb) || verb.ends_with('o') {
        format!("{verb}es")
    } else if ends_consonant_y(verb) {
        format!("{}ies", &verb[..verb.len() - 1])
    } else {
        format!("{verb}s")
    }
}

fn doubled(verb: &str) -> String {
    let last = verb.chars().last().unwrap_or_default();
    format!("{verb}{last}")
}

pub fn past(verb: &str) -> String {
    if let Some(p) = lookup(IRREGULAR_PAST, verb) {
        return p.to_string();
    }
    if DOUBLING.contains(&verb) {
        format!("{}ed", doubled(verb))
    } else if verb.ends_with('e') {
        format!("{verb}d")
    } else if ends_consonant_y(verb) {
        format!("{}ied", &verb[..verb.len() - 1])
    } else {
        format!("{verb}ed")
    }
}

pub fn present_participle(verb: &str) -> String {
    if DOUBLING.contains(&verb) {
        format!("{}ing", doubled(verb))
    } else if let Some(stem) = verb.strip_suffix("ie") {
        format!("{stem}ying")
    } else if verb.ends_with('e') && !verb.ends_with("ee") && verb != "be" {
        format!("{}ing", &verb[..verb.len() - 1])
    } else {
        format!("{verb}ing")
    }
}

/// Recovers the base form of a verb from its third person singular form
/// by trying every candidate the regular rules could have produced.
pub fn base_candidates_from_third(form: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (base, third) in IRREGULAR_THIRD {
        if *third == form {
            out.push(base.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = form.strip_suffix("es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = form.strip_suffix('s') {
        out.push(stem.to_string());
    }
    out.retain(|b| third_singular(b) == form);
    out
}
