//! Brute-force reference answers, written without the store's matcher.

use std::collections::{BTreeMap, BTreeSet};

use cnl_core::mephisto::{Term, Translation};

pub type Binding = BTreeMap<String, Term>;

const CONSTRAINTS: [&str; 3] = ["before", "after", "during"];
/// Features a question may leave out or state differently.
fn ignorable(f: &Term) -> bool {
    matches!(f, Term::Atom(a) if a == "definite" || a == "indefinite")
        || f.functor() == Some("prep")
}

fn features_fit(pattern: &[Term], fact: &[Term]) -> bool {
    pattern.iter().all(|f| ignorable(f) || fact.contains(f))
}

fn unify(p: &Term, f: &Term, vars: &BTreeSet<String>, b: &mut Binding) -> bool {
    match (p, f) {
        (Term::Var(x), _) if vars.contains(x) => match b.get(x) {
            Some(v) => v == f,
            None => {
                b.insert(x.clone(), f.clone());
                true
            }
        },
        (Term::List(ps), Term::List(fs)) if p.is_feature_list() && f.is_feature_list() => {
            features_fit(ps, fs)
        }
        (Term::Compound(pf, pa), Term::Compound(ff, fa)) => {
            pf == ff && pa.len() == fa.len() && pa.iter().zip(fa).all(|(x, y)| unify(x, y, vars, b))
        }
        (Term::At(pa), Term::At(fa)) => {
            pa.len() == fa.len() && pa.iter().zip(fa.iter()).all(|(x, y)| unify(x, y, vars, b))
        }
        (Term::List(ps), Term::List(fs))
        | (Term::And(ps), Term::And(fs))
        | (Term::Identical(ps), Term::Identical(fs)) => {
            ps.len() == fs.len() && ps.iter().zip(fs).all(|(x, y)| unify(x, y, vars, b))
        }
        (Term::Neg(x), Term::Neg(y)) => unify(x, y, vars, b),
        _ => p == f,
    }
}

/// Every substitution under which each goal equals some fact. Tries every
/// fact for every goal.
pub fn solutions(facts: &[Term], goals: &[Term], vars: &BTreeSet<String>) -> Vec<Binding> {
    let mut out = Vec::new();
    fn go(
        facts: &[Term],
        goals: &[Term],
        vars: &BTreeSet<String>,
        b: Binding,
        out: &mut Vec<Binding>,
    ) {
        let Some((g, rest)) = goals.split_first() else {
            if !out.contains(&b) {
                out.push(b);
            }
            return;
        };
        for f in facts {
            let mut next = b.clone();
            if unify(g, f, vars, &mut next) {
                go(facts, rest, vars, next, out);
            }
        }
    }
    go(facts, goals, vars, Binding::new(), &mut out);
    out
}

/// (relation, first second, last second) of a constraint clause on `var`.
fn constraint(c: &Term) -> Option<(&str, &str, i64, i64)> {
    let f = c.functor()?;
    if !CONSTRAINTS.contains(&f) {
        return None;
    }
    let [Term::Var(v), iv] = c.args() else {
        return None;
    };
    let i = iv.as_interval()?;
    Some((
        f,
        v.as_str(),
        i.start.epoch_seconds(),
        i.end.epoch_seconds(),
    ))
}

/// The seconds an event may occupy given one constraint.
fn window(rel: &str, lo: i64, hi: i64) -> (i64, i64) {
    match rel {
        "before" => (i64::MIN, lo - 1),
        "after" => (hi + 1, i64::MAX),
        _ => (lo, hi),
    }
}

fn within(stored: &Term, query: &Term) -> bool {
    let (Some((r1, _, a1, b1)), Some((r2, _, a2, b2))) = (constraint(stored), constraint(query))
    else {
        return false;
    };
    let (lo, hi) = window(r1, a1, b1);
    let (qlo, qhi) = window(r2, a2, b2);
    lo >= qlo && hi <= qhi
}

/// Constraints stored on the time variable `t`.
pub fn stored_on<'a>(facts: &'a [Term], t: &Term) -> Vec<&'a Term> {
    facts
        .iter()
        .filter(|c| constraint(c).is_some() && c.args().first() == Some(t))
        .collect()
}

/// Substitutions satisfying a question: goals matched exhaustively, then
/// temporal constraints on question variables checked against what is
/// stored for their binding.
pub fn answer(facts: &[Term], q: &Translation) -> Vec<Binding> {
    let vars: BTreeSet<String> = q.fresh.iter().cloned().collect();
    let (filters, goals): (Vec<Term>, Vec<Term>) = q
        .form
        .iter()
        .cloned()
        .partition(|c| constraint(c).is_some_and(|(_, v, _, _)| vars.contains(v)));
    solutions(facts, &goals, &vars)
        .into_iter()
        .filter(|b| {
            filters.iter().all(|f| {
                let t = &f.args()[0];
                let bound = match t {
                    Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| t.clone()),
                    _ => t.clone(),
                };
                stored_on(facts, &bound).iter().any(|s| within(s, f))
            })
        })
        .collect()
}
