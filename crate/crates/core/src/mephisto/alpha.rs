//! Equality of forms up to renaming of skolem, time and space symbols.

use std::collections::{BTreeSet, HashMap};

use super::term::{var_kind, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Both sides must correspond clause for clause.
    Exact,
    /// The left side is a printed golden form; the right may say more.
    Subsume,
}

#[derive(Debug, Clone, Default)]
struct Renaming {
    fwd: HashMap<String, String>,
    bwd: HashMap<String, String>,
}

impl Renaming {
    fn bind(&mut self, a: &str, b: &str) -> bool {
        if var_kind(a) != var_kind(b) {
            return false;
        }
        match (self.fwd.get(a), self.bwd.get(b)) {
            (Some(x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(a.to_string(), b.to_string());
                self.bwd.insert(b.to_string(), a.to_string());
                true
            }
        }
    }
}

fn feature_set(items: &[Term]) -> BTreeSet<String> {
    items
        .iter()
        .filter(|t| **t != Term::Elision)
        .map(Term::to_string)
        .collect()
}

fn match_seq(a: &[Term], b: &[Term], r: &mut Renaming, mode: Mode) -> bool {
    if mode == Mode::Subsume && a.last() == Some(&Term::Elision) && a.len() - 1 <= b.len() {
        // `f(x,...)`: the remaining arguments were left out
        let n = a.len() - 1;
        return a[..n].iter().zip(b).all(|(x, y)| match_term(x, y, r, mode));
    }
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| match_term(x, y, r, mode))
}

fn match_term(a: &Term, b: &Term, r: &mut Renaming, mode: Mode) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => r.bind(x, y),
        (Term::List(x), Term::List(y)) if a.is_feature_list() && b.is_feature_list() => {
            let (fx, fy) = (feature_set(x), feature_set(y));
            match mode {
                Mode::Exact => fx == fy,
                Mode::Subsume => fx.is_subset(&fy),
            }
        }
        (Term::Compound(f, x), Term::Compound(g, y)) => {
            if f != g {
                return false;
            }
            if mode == Mode::Subsume
                && x.len() + 1 == y.len()
                && y.last().is_some_and(Term::is_feature_list)
            {
                // a printed form may leave the feature list out entirely
                return match_seq(x, &y[..x.len()], r, mode);
            }
            match_seq(x, y, r, mode)
        }
        (Term::At(x), Term::At(y))
        | (Term::List(x), Term::List(y))
        | (Term::And(x), Term::And(y))
        | (Term::Identical(x), Term::Identical(y)) => match_seq(x, y, r, mode),
        (Term::Neg(x), Term::Neg(y)) => match_term(x, y, r, mode),
        (Term::Imp(a1, b1), Term::Imp(a2, b2)) => {
            match_term(a1, a2, r, mode) && match_term(b1, b2, r, mode)
        }
        _ => a == b,
    }
}

/// Extra clauses a printed form is allowed to have elided.
fn elidable(t: &Term) -> bool {
    match t {
        Term::Compound(f, a) => {
            matches!(f.as_str(), "before" | "after" | "during")
                || (a.len() == 1 && matches!(f.as_str(), "animate" | "female" | "male"))
        }
        _ => false,
    }
}

fn match_clauses(a: &[Term], b: &[Term], used: &mut Vec<bool>, r: &Renaming, mode: Mode) -> bool {
    let Some((first, rest)) = a.split_first() else {
        return match mode {
            Mode::Exact => used.iter().all(|u| *u),
            Mode::Subsume => b.iter().zip(used.iter()).all(|(t, u)| *u || elidable(t)),
        };
    };
    for j in 0..b.len() {
        if used[j] || first.functor() != b[j].functor() {
            continue;
        }
        let mut r2 = r.clone();
        if match_term(first, &b[j], &mut r2, mode) {
            used[j] = true;
            if match_clauses(rest, b, used, &r2, mode) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// True iff a consistent bijective renaming of `skcN`/`t_N`/`s_N` maps
/// `a` onto `b`. Clause order does not matter; feature lists compare as sets.
pub fn alpha_equal(a: &[Term], b: &[Term]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match_clauses(
        a,
        b,
        &mut vec![false; b.len()],
        &Renaming::default(),
        Mode::Exact,
    )
}

/// Checks a printed golden form against a produced one: every golden
/// clause must be matched under one injective renaming, golden feature
/// lists may be subsets (or absent), and the produced form may add only
/// temporal constraints and unary animacy/gender clauses.
pub fn subsumes(golden: &[Term], ours: &[Term]) -> bool {
    if golden.len() > ours.len() {
        return false;
    }
    match_clauses(
        golden,
        ours,
        &mut vec![false; ours.len()],
        &Renaming::default(),
        Mode::Subsume,
    )
}

/// Repairs typesetting slips in forms copied from print: TeX underscore
/// escapes, a functor followed by `[` where `(` was meant, and unmatched
/// closing parentheses.
pub fn normalize_printed(src: &str) -> String {
    let s = src.replace("\\_", "_").replace('\n', " ");
    let mut out = String::with_capacity(s.len());
    let bytes: Vec<char> = s.chars().collect();
    let mut stack: Vec<char> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            '[' => {
                let prev_word: String = out
                    .chars()
                    .rev()
                    .take_while(|c: &char| c.is_alphanumeric() || *c == '_')
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .collect();
                if !prev_word.is_empty() && prev_word != "identical" {
                    // `f[...]` used for `f(...)`
                    stack.push(')');
                    out.push('(');
                } else {
                    stack.push(']');
                    out.push('[');
                }
            }
            '(' => {
                stack.push(')');
                out.push('(');
            }
            ']' | ')' => if let Some(close) = stack.pop() {
                out.push(close);
                if close == ')' && c == ']' {
                    // the slip also swallowed the closing paren: `f[x],[y])`
                    // becomes `f(x,[y])`, so drop the next `)` that would close it
                    if let Some(j) = bytes[i + 1..].iter().position(|&b| b == ')') {
                        let j = i + 1 + j;
                        let between: String = bytes[i + 1..j].iter().collect();
                        if between.starts_with(',') {
                            out.pop();
                            out.push_str(&between);
                            out.push(')');
                            i = j + 1;
                            continue;
                        }
                    }
                }
            },
            _ => out.push(c),
        }
        i += 1;
    }
    out
}
