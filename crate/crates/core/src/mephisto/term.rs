//! Functor-argument terms with a bit-exact printer and a reader.

use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::chronos::{Interval, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(String),
    Int(i64),
    /// `skcN`, `t_N` or `s_N`.
    Var(String),
    /// `?name`, a query variable.
    Query(String),
    Compound(String, Vec<Term>),
    At(Vec<Term>),
    List(Vec<Term>),
    Neg(Box<Term>),
    Imp(Box<Term>, Box<Term>),
    And(Vec<Term>),
    Identical(Vec<Term>),
    /// `...` in printed forms whose remainder was left out.
    Elision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Skolem,
    Time,
    Space,
}

pub fn var_kind(name: &str) -> Option<VarKind> {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if name.strip_prefix("skc").is_some_and(digits) {
        Some(VarKind::Skolem)
    } else if name.strip_prefix("t_").is_some_and(digits) {
        Some(VarKind::Time)
    } else if name.strip_prefix("s_").is_some_and(digits) {
        Some(VarKind::Space)
    } else {
        None
    }
}

impl Term {
    pub fn atom(s: &str) -> Term {
        Term::Atom(s.to_string())
    }

    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::Compound(f.to_string(), args)
    }

    pub fn at(label: Term, time: Term, space: Term) -> Term {
        Term::At(vec![label, time, space])
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    /// Conjunction; a single conjunct stands alone.
    pub fn and(mut ts: Vec<Term>) -> Term {
        if ts.len() == 1 {
            ts.pop().expect("one conjunct")
        } else {
            Term::And(ts)
        }
    }

    pub fn timestamp(t: Timestamp) -> Term {
        let n = |v: i64| Term::Int(v);
        Term::app(
            "timestamp",
            vec![
                n(t.year.into()),
                n(t.month.into()),
                n(t.day.into()),
                n(t.hour.into()),
                n(t.minute.into()),
                n(t.second.into()),
            ],
        )
    }

    pub fn interval(i: Interval) -> Term {
        Term::app(
            "invl",
            vec![Term::timestamp(i.start), Term::timestamp(i.end)],
        )
    }

    pub fn as_timestamp(&self) -> Option<Timestamp> {
        match self {
            Term::Compound(f, a) if f == "timestamp" && a.len() == 6 => {
                let mut v = [0i64; 6];
                for (slot, t) in v.iter_mut().zip(a) {
                    *slot = match t {
                        Term::Int(n) => *n,
                        _ => return None,
                    };
                }
                let u = |x: i64| u32::try_from(x).ok();
                Timestamp::new(
                    i32::try_from(v[0]).ok()?,
                    u(v[1])?,
                    u(v[2])?,
                    u(v[3])?,
                    u(v[4])?,
                    u(v[5])?,
                )
                .ok()
            }
            _ => None,
        }
    }

    pub fn as_interval(&self) -> Option<Interval> {
        match self {
            Term::Compound(f, a) if f == "invl" && a.len() == 2 => {
                Interval::new(a[0].as_timestamp()?, a[1].as_timestamp()?).ok()
            }
            _ => None,
        }
    }

    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::Compound(f, _) => Some(f),
            Term::Atom(a) => Some(a),
            Term::Identical(_) => Some("identical"),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, a)
            | Term::At(a)
            | Term::List(a)
            | Term::And(a)
            | Term::Identical(a) => a,
            _ => &[],
        }
    }

    /// The label of an @-term.
    pub fn label(&self) -> Option<&Term> {
        match self {
            Term::At(a) => a.first(),
            _ => None,
        }
    }

    /// A bracketed list of ground atoms such as `[definite,singular]`.
    pub fn is_feature_list(&self) -> bool {
        match self {
            Term::List(items) => items.iter().all(|t| t.is_ground_feature()),
            _ => false,
        }
    }

    fn is_ground_feature(&self) -> bool {
        match self {
            Term::Atom(_) | Term::Int(_) | Term::Elision => true,
            Term::Compound(_, a) => a.iter().all(Term::is_ground_feature),
            _ => false,
        }
    }

    /// Every variable name in the term, in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Compound(_, a)
            | Term::At(a)
            | Term::List(a)
            | Term::And(a)
            | Term::Identical(a) => a.iter().for_each(|t| t.visit(f)),
            Term::Neg(t) => t.visit(f),
            Term::Imp(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Rebuilds the term bottom-up through `f`.
    pub fn map(&self, f: &dyn Fn(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        let m = |a: &[Term]| a.iter().map(|t| t.map(f)).collect::<Vec<_>>();
        match self {
            Term::Compound(n, a) => Term::Compound(n.clone(), m(a)),
            Term::At(a) => Term::At(m(a)),
            Term::List(a) => Term::List(m(a)),
            Term::And(a) => Term::And(m(a)),
            Term::Identical(a) => Term::Identical(m(a)),
            Term::Neg(t) => Term::Neg(Box::new(t.map(f))),
            Term::Imp(a, b) => Term::Imp(Box::new(a.map(f)), Box::new(b.map(f))),
            other => other.clone(),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Term::Atom(a) => write_atom(a, out),
            Term::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Term::Var(v) => out.push_str(v),
            Term::Query(v) => {
                out.push('?');
                out.push_str(v);
            }
            Term::Compound(f, a) => {
                write_atom(f, out);
                write_args('(', a, ')', out);
            }
            Term::At(a) => {
                out.push('@');
                write_args('(', a, ')', out);
            }
            Term::List(a) => write_args('[', a, ']', out),
            Term::Identical(a) => {
                out.push_str("identical");
                write_args('[', a, ']', out);
            }
            Term::Neg(t) => {
                out.push('~');
                match **t {
                    Term::Imp(..) => {
                        out.push('(');
                        t.write(out);
                        out.push(')');
                    }
                    _ => t.write(out),
                }
            }
            Term::Imp(a, b) => {
                if matches!(**a, Term::Imp(..)) {
                    out.push('(');
                    a.write(out);
                    out.push(')');
                } else {
                    a.write(out);
                }
                out.push_str(" => ");
                b.write(out);
            }
            Term::And(a) => {
                out.push('(');
                for (i, t) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" & ");
                    }
                    if matches!(t, Term::Imp(..)) {
                        out.push('(');
                        t.write(out);
                        out.push(')');
                    } else {
                        t.write(out);
                    }
                }
                out.push(')');
            }
            Term::Elision => out.push_str("..."),
        }
    }
}

fn write_args(open: char, args: &[Term], close: char, out: &mut String) {
    out.push(open);
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        t.write(out);
    }
    out.push(close);
}

fn plain_atom(a: &str) -> bool {
    let mut chars = a.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && var_kind(a).is_none()
        && a != "identical"
}

fn write_atom(a: &str, out: &mut String) {
    if plain_atom(a) {
        out.push_str(a);
    } else {
        out.push('\'');
        for c in a.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Prints a conjunction of clauses the way forms are displayed.
pub fn print_form(clauses: &[Term]) -> String {
    clauses
        .iter()
        .map(Term::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ReadError {
    pub pos: usize,
    pub message: String,
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ReadError> {
        Err(ReadError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ReadError> {
        if self.eat(s) {
            Ok(())
        } else {
            match self.peek() {
                Some(c) => self.err(format!("expected `{s}`, found `{c}`")),
                None => self.err(format!("expected `{s}`, found end of input")),
            }
        }
    }

    fn expr(&mut self) -> Result<Term, ReadError> {
        let lhs = self.conj()?;
        if self.eat("=>") {
            let rhs = self.expr()?;
            return Ok(Term::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Term, ReadError> {
        let first = self.unary()?;
        let mut items = vec![first];
        while self.eat("&") {
            items.push(self.unary()?);
        }
        Ok(Term::and(items))
    }

    fn unary(&mut self) -> Result<Term, ReadError> {
        if self.eat("~") {
            return Ok(Term::neg(self.unary()?));
        }
        self.primary()
    }

    fn args(&mut self, close: &str) -> Result<Vec<Term>, ReadError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn primary(&mut self) -> Result<Term, ReadError> {
        let Some(c) = self.peek() else {
            return self.err("unexpected end of input");
        };
        match c {
            '(' => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(")")?;
                Ok(t)
            }
            '[' => {
                self.pos += 1;
                Ok(Term::List(self.args("]")?))
            }
            '@' => {
                self.pos += 1;
                self.expect("(")?;
                let a = self.args(")")?;
                if a.len() != 3 {
                    return self.err(format!("@-term needs 3 arguments, found {}", a.len()));
                }
                Ok(Term::At(a))
            }
            '.' if self.src[self.pos..].starts_with("...") => {
                self.pos += 3;
                Ok(Term::Elision)
            }
            '?' => {
                self.pos += 1;
                let name = self.word();
                if name.is_empty() {
                    return self.err("empty query variable");
                }
                Ok(Term::Query(name))
            }
            '\'' => {
                let name = self.quoted()?;
                self.after_name(name, true)
            }
            c if c == '-' || c.is_ascii_digit() => {
                let start = self.pos;
                self.pos += 1;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                self.src[start..self.pos]
                    .parse()
                    .map(Term::Int)
                    .or_else(|_| self.err("bad integer"))
            }
            c if c.is_alphabetic() || c == '_' => {
                let name = self.word();
                self.after_name(name, false)
            }
            other => self.err(format!("unexpected `{other}`")),
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn quoted(&mut self) -> Result<String, ReadError> {
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.src[self.pos..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some((_, e)) => out.push(e),
                    None => break,
                },
                '\'' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                c => out.push(c),
            }
        }
        self.err("unterminated quoted atom")
    }

    fn after_name(&mut self, name: String, quoted: bool) -> Result<Term, ReadError> {
        // no whitespace between a functor and its bracket
        let rest = &self.src[self.pos..];
        if rest.starts_with('(') {
            self.pos += 1;
            return Ok(Term::Compound(name, self.args(")")?));
        }
        if !quoted && name == "identical" && rest.starts_with('[') {
            self.pos += 1;
            return Ok(Term::Identical(self.args("]")?));
        }
        if !quoted && var_kind(&name).is_some() {
            return Ok(Term::Var(name));
        }
        Ok(Term::Atom(name))
    }
}

pub fn read_term(s: &str) -> Result<Term, ReadError> {
    let mut r = Reader { src: s, pos: 0 };
    let t = r.expr()?;
    r.eat(".");
    r.skip_ws();
    if r.pos < s.len() {
        return r.err("trailing input");
    }
    Ok(t)
}

/// Reads comma-separated top-level clauses, with an optional final `.`.
pub fn read_form(s: &str) -> Result<Vec<Term>, ReadError> {
    let mut r = Reader { src: s, pos: 0 };
    let mut out = Vec::new();
    if r.peek().is_none() {
        return Ok(out);
    }
    loop {
        out.push(r.expr()?);
        if r.eat(",") {
            continue;
        }
        r.eat(".");
        r.skip_ws();
        if r.pos < s.len() {
            return r.err("expected `,` between clauses");
        }
        return Ok(out);
    }
}
