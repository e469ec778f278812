//! Store answers side by side with the brute-force oracle.

use std::collections::BTreeSet;

use cnl_core::parser::Queried;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{oracle, Run};

#[derive(Debug)]
pub struct Check {
    pub question: String,
    pub clauses: usize,
    pub store: BTreeSet<String>,
    pub oracle: BTreeSet<String>,
}

impl Check {
    pub fn agrees(&self) -> bool {
        self.store == self.oracle
    }
}

/// Asks `question` of the run's store and of the oracle over the same facts.
pub fn compare(run: &mut Run, question: &str) -> Check {
    let (t, focus, a) = run.ask(question);
    let facts: Vec<_> = run.store.facts().to_vec();
    let solutions = oracle::answer(&facts, &t);
    let (store, oracle): (BTreeSet<String>, BTreeSet<String>) = match focus.queried {
        Queried::YesNo => (
            a.yes().then(|| "yes".to_string()).into_iter().collect(),
            (!solutions.is_empty())
                .then(|| "yes".to_string())
                .into_iter()
                .collect(),
        ),
        Queried::Temporal => {
            let time = t.time.clone().expect("event time");
            (
                a.matches
                    .iter()
                    .flat_map(|m| m.constraints.iter().map(|c| c.to_string()))
                    .collect(),
                solutions
                    .iter()
                    .filter_map(|b| b.get(&time))
                    .flat_map(|t| oracle::stored_on(&facts, t))
                    .map(|c| c.to_string())
                    .collect(),
            )
        }
        _ => {
            let q = t.queried.clone().expect("queried entity");
            (
                a.matches
                    .iter()
                    .filter_map(|m| m.value.as_ref())
                    .map(|v| v.to_string())
                    .collect(),
                solutions
                    .iter()
                    .filter_map(|b| b.get(&q))
                    .map(|v| v.to_string())
                    .collect(),
            )
        }
    };
    Check {
        question: question.to_string(),
        clauses: facts.len(),
        store,
        oracle,
    }
}

const PEOPLE: [&str; 4] = ["woman", "man", "boy", "girl"];
const THINGS: [&str; 3] = ["document", "car", "message"];
const TRANSITIVE: [(&str, &str); 3] = [("read", "read"), ("see", "saw"), ("carry", "carried")];
const INTRANSITIVE: [(&str, &str); 2] = [("sleep", "slept"), ("stand", "stood")];

/// A random store of at most `max_clauses` facts and questions about it.
pub fn random_scenario(rng: &mut impl Rng, max_clauses: usize) -> (Run, Vec<String>) {
    let mut run = Run::new();
    loop {
        let before = (
            run.store.facts().len(),
            run.ctx.clone(),
            run.store.clone(),
            run.sym.clone(),
        );
        let who = PEOPLE.choose(rng).unwrap();
        let det = if rng.gen_bool(0.5) { "The" } else { "A" };
        let sentence = if rng.gen_bool(0.7) {
            let (_, past) = TRANSITIVE.choose(rng).unwrap();
            let what = if rng.gen_bool(0.7) {
                THINGS.choose(rng).unwrap()
            } else {
                PEOPLE.choose(rng).unwrap()
            };
            format!("{det} {who} {past} the {what}.")
        } else {
            let (_, past) = INTRANSITIVE.choose(rng).unwrap();
            format!("{det} {who} {past}.")
        };
        run.tell(&sentence);
        if run.store.facts().len() > max_clauses {
            (_, run.ctx, run.store, run.sym) = before;
            break;
        }
        if rng.gen_bool(0.3) {
            run.ctx.new_paragraph();
        }
    }
    run.ctx.new_paragraph();
    let mut questions = Vec::new();
    for _ in 0..6 {
        let who = PEOPLE.choose(rng).unwrap();
        let what = if rng.gen_bool(0.7) {
            THINGS.choose(rng).unwrap()
        } else {
            PEOPLE.choose(rng).unwrap()
        };
        let (verb, past) = TRANSITIVE.choose(rng).unwrap();
        let (iverb, ipast) = INTRANSITIVE.choose(rng).unwrap();
        questions.push(match rng.gen_range(0..6) {
            0 => format!("Who {past} the {what}?"),
            1 => format!("What did the {who} {verb}?"),
            2 => format!("Did the {who} {verb} the {what}?"),
            3 => format!("Did anyone {verb} the {what}?"),
            4 => format!("Who {ipast}?"),
            _ => format!("Did the {who} {iverb}?"),
        });
    }
    (run, questions)
}
