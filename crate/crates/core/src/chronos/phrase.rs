//! Time phrases: clock times, dates, named days and months, decades,
//! centuries and phrases grounded against the utterance time.
//!
//! Everything is read as local wall-clock time at the session offset and
//! converted to UTC at the end.

use std::cell::Cell;

use chrono::{Datelike, Duration, Months, NaiveDate, NaiveDateTime, NaiveTime, Weekday};
use serde::{Deserialize, Serialize};

use super::{utc_denormalize, ChronosError, Interval, TimeRef, Timestamp, UtcOffset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemporalRelation {
    During,
    Before,
    After,
}

impl TemporalRelation {
    pub fn name(self) -> &'static str {
        match self {
            TemporalRelation::During => "during",
            TemporalRelation::Before => "before",
            TemporalRelation::After => "after",
        }
    }

    pub fn from_name(s: &str) -> Option<TemporalRelation> {
        match s {
            "during" => Some(TemporalRelation::During),
            "before" => Some(TemporalRelation::Before),
            "after" => Some(TemporalRelation::After),
            _ => None,
        }
    }
}

/// A temporal adjunct such as "on Monday" or "before 13:00".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalAdjunct {
    pub relation: TemporalRelation,
    pub reference: Interval,
}

const WEEKDAYS: [(&str, Weekday); 7] = [
    ("monday", Weekday::Mon),
    ("tuesday", Weekday::Tue),
    ("wednesday", Weekday::Wed),
    ("thursday", Weekday::Thu),
    ("friday", Weekday::Fri),
    ("saturday", Weekday::Sat),
    ("sunday", Weekday::Sun),
];

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

const NUMBER_WORDS: [&str; 21] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
];

#[derive(Debug, Clone, Copy)]
enum Unit {
    Second,
    Minute,
    Hour,
    Day,
    Week,
    Month,
    Year,
}

fn unit(word: &str) -> Option<Unit> {
    Some(match word.strip_suffix('s').unwrap_or(word) {
        "second" => Unit::Second,
        "minute" => Unit::Minute,
        "hour" => Unit::Hour,
        "day" => Unit::Day,
        "week" => Unit::Week,
        "month" => Unit::Month,
        "year" => Unit::Year,
        _ => return None,
    })
}

/// Local span, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Span {
    start: NaiveDateTime,
    end: NaiveDateTime,
    /// Set when a clock literal carried a `Z` suffix.
    utc: bool,
}

impl Span {
    fn point(t: NaiveDateTime) -> Span {
        Span {
            start: t,
            end: t,
            utc: false,
        }
    }

    fn days(first: NaiveDate, last: NaiveDate) -> Span {
        Span {
            start: first.and_time(NaiveTime::MIN),
            end: last.and_hms_opt(23, 59, 59).expect("valid time"),
            utc: false,
        }
    }

    fn day(d: NaiveDate) -> Span {
        Span::days(d, d)
    }
}

fn month_span(year: i32, month: u32) -> Option<Span> {
    let first = NaiveDate::from_ymd_opt(year, month, 1)?;
    let last = first.checked_add_months(Months::new(1))?.pred_opt()?;
    Some(Span::days(first, last))
}

fn year_span(year: i32) -> Option<Span> {
    Some(Span::days(
        NaiveDate::from_ymd_opt(year, 1, 1)?,
        NaiveDate::from_ymd_opt(year, 12, 31)?,
    ))
}

fn iso_week(d: NaiveDate) -> Span {
    let monday = d - Duration::days(d.weekday().num_days_from_monday() as i64);
    Span::days(monday, monday + Duration::days(6))
}

fn add_units(t: NaiveDateTime, u: Unit, n: i64) -> Option<NaiveDateTime> {
    Some(match u {
        Unit::Second => t + Duration::seconds(n),
        Unit::Minute => t + Duration::minutes(n),
        Unit::Hour => t + Duration::hours(n),
        Unit::Day => t + Duration::days(n),
        Unit::Week => t + Duration::weeks(n),
        Unit::Month if n >= 0 => t.checked_add_months(Months::new(n as u32))?,
        Unit::Month => t.checked_sub_months(Months::new((-n) as u32))?,
        Unit::Year if n >= 0 => t.checked_add_months(Months::new(12 * n as u32))?,
        Unit::Year => t.checked_sub_months(Months::new(12 * (-n) as u32))?,
    })
}

struct Cursor<'a> {
    toks: Vec<String>,
    raw: &'a [&'a str],
    now: NaiveDateTime,
    furthest: Cell<usize>,
}

type Step = Option<(Span, usize)>;

impl<'a> Cursor<'a> {
    fn tok(&self, i: usize) -> Option<&str> {
        if i > self.furthest.get() {
            self.furthest.set(i);
        }
        self.toks.get(i).map(String::as_str)
    }

    fn is(&self, i: usize, word: &str) -> bool {
        self.tok(i) == Some(word)
    }

    fn today(&self) -> NaiveDate {
        self.now.date()
    }

    fn number(&self, i: usize) -> Option<i64> {
        let t = self.tok(i)?;
        if t == "a" || t == "an" {
            return Some(1);
        }
        if let Some(n) = NUMBER_WORDS.iter().position(|w| *w == t) {
            return Some(n as i64);
        }
        if !t.is_empty() && t.len() <= 4 && t.chars().all(|c| c.is_ascii_digit()) {
            return t.parse().ok();
        }
        None
    }

    fn ordinal(&self, i: usize) -> Option<u32> {
        let t = self.tok(i)?;
        let digits = ["st", "nd", "rd", "th"]
            .iter()
            .find_map(|s| t.strip_suffix(s))?;
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n: u32 = digits.parse().ok()?;
        (ordinal_suffix(n) == &t[digits.len()..]).then_some(n)
    }

    fn year(&self, i: usize) -> Option<i32> {
        let t = self.tok(i)?;
        (t.len() == 4 && t.chars().all(|c| c.is_ascii_digit())).then(|| t.parse().ok())?
    }

    fn month(&self, i: usize) -> Option<u32> {
        let t = self.tok(i)?;
        MONTHS.iter().position(|m| *m == t).map(|p| p as u32 + 1)
    }

    fn weekday(&self, i: usize) -> Option<Weekday> {
        let t = self.tok(i)?;
        WEEKDAYS.iter().find(|(n, _)| *n == t).map(|(_, w)| *w)
    }

    /// Clock time: `13:00`, `10:33:48 AM`, `1 PM`, `one o'clock`, `noon`.
    fn clock(&self, i: usize) -> Option<(NaiveTime, bool, usize)> {
        let t = self.tok(i)?;
        match t {
            "noon" => return Some((NaiveTime::from_hms_opt(12, 0, 0)?, false, i + 1)),
            "midnight" => return Some((NaiveTime::MIN, false, i + 1)),
            _ => {}
        }
        let (mut h, m, s, utc, mut next) = if let Some((h, m, s, utc)) = clock_literal(t) {
            (h, m, s, utc, i + 1)
        } else {
            let n = self.number(i).filter(|_| t != "a" && t != "an")?;
            let mut next = i + 1;
            let oclock = self.is(next, "o'clock");
            if oclock {
                next += 1;
            }
            let meridiem = matches!(self.tok(next), Some("am" | "pm"));
            if !oclock && !meridiem {
                return None;
            }
            (u32::try_from(n).ok()?, 0, 0, false, next)
        };
        if let Some(mer @ ("am" | "pm")) = self.tok(next) {
            if !(1..=12).contains(&h) {
                return None;
            }
            h = match (mer, h) {
                ("am", 12) => 0,
                ("pm", h) if h < 12 => h + 12,
                (_, h) => h,
            };
            next += 1;
        }
        Some((NaiveTime::from_hms_opt(h, m, s)?, utc, next))
    }

    fn at_clock(&self, date: NaiveDate, i: usize) -> Step {
        if self.is(i, "at") {
            if let Some((time, utc, next)) = self.clock(i + 1) {
                let mut span = Span::point(date.and_time(time));
                span.utc = utc;
                return Some((span, next));
            }
        }
        None
    }

    /// `[Weekday] [the] 2nd of June [2014] [at CLOCK]`
    fn full_date(&self, i: usize) -> Step {
        let mut j = i;
        let weekday = self.weekday(j);
        if weekday.is_some() {
            j += 1;
        }
        if self.is(j, "the") {
            j += 1;
        }
        let day = self.ordinal(j)?;
        if !self.is(j + 1, "of") {
            return None;
        }
        let month = self.month(j + 2)?;
        j += 3;
        let year = match self.year(j) {
            Some(y) => {
                j += 1;
                y
            }
            None => self.today().year(),
        };
        let date = NaiveDate::from_ymd_opt(year, month, day)?;
        if weekday.is_some_and(|w| w != date.weekday()) {
            // the named weekday contradicts the date
            self.furthest.set(self.furthest.get().max(i));
            return None;
        }
        self.at_clock(date, j).or(Some((Span::day(date), j)))
    }

    fn weekday_phrase(&self, i: usize) -> Step {
        let w = self.weekday(i)?;
        let today = self.today();
        let back = (today.weekday().num_days_from_monday() + 7 - w.num_days_from_monday()) % 7;
        let date = today - Duration::days(back as i64);
        self.at_clock(date, i + 1)
            .or(Some((Span::day(date), i + 1)))
    }

    fn month_phrase(&self, i: usize) -> Step {
        let month = self.month(i)?;
        match self.year(i + 1) {
            Some(y) => Some((month_span(y, month)?, i + 2)),
            None => Some((month_span(self.today().year(), month)?, i + 1)),
        }
    }

    fn decade_or_century(&self, i: usize) -> Step {
        let j = if self.is(i, "the") { i + 1 } else { i };
        let t = self.tok(j)?;
        if let Some(d) = t.strip_suffix('s') {
            if d.len() == 4 && d.ends_with('0') && d.chars().all(|c| c.is_ascii_digit()) {
                let y: i32 = d.parse().ok()?;
                return Some((
                    Span::days(
                        NaiveDate::from_ymd_opt(y, 1, 1)?,
                        NaiveDate::from_ymd_opt(y + 9, 12, 31)?,
                    ),
                    j + 1,
                ));
            }
        }
        let n = self.ordinal(j)?;
        if self.is(j + 1, "century") && n >= 1 {
            let first = (n as i32 - 1) * 100;
            let span = Span::days(
                NaiveDate::from_ymd_opt(first, 1, 1)?,
                NaiveDate::from_ymd_opt(first + 99, 12, 31)?,
            );
            return Some((span, j + 2));
        }
        None
    }

    fn relative(&self, i: usize) -> Step {
        let today = self.today();
        match self.tok(i)? {
            "today" => return Some((Span::day(today), i + 1)),
            "yesterday" => return Some((Span::day(today.pred_opt()?), i + 1)),
            "tomorrow" => return Some((Span::day(today.succ_opt()?), i + 1)),
            "now" => return Some((Span::point(self.now), i + 1)),
            "last" | "next" | "this" => {
                let shift: i64 = match self.tok(i)? {
                    "last" => -1,
                    "next" => 1,
                    _ => 0,
                };
                let u = self.tok(i + 1).and_then(unit)?;
                let span = match u {
                    Unit::Week => iso_week(today + Duration::weeks(shift)),
                    Unit::Day => Span::day(today + Duration::days(shift)),
                    Unit::Month => {
                        let d =
                            add_units(today.and_time(NaiveTime::MIN), Unit::Month, shift)?.date();
                        month_span(d.year(), d.month())?
                    }
                    Unit::Year => year_span(today.year() + shift as i32)?,
                    _ => return None,
                };
                return Some((span, i + 2));
            }
            _ => {}
        }
        // N units ago
        let n = self.number(i)?;
        let u = self.tok(i + 1).and_then(unit)?;
        if self.is(i + 2, "ago") {
            return Some((self.offset_span(u, -n)?, i + 3));
        }
        None
    }

    /// The span `n` units away from now: whole days for day-sized units,
    /// a point for clock-sized units.
    fn offset_span(&self, u: Unit, n: i64) -> Option<Span> {
        let t = add_units(self.now, u, n)?;
        Some(match u {
            Unit::Second | Unit::Minute | Unit::Hour => Span::point(t),
            _ => Span::day(t.date()),
        })
    }

    /// A single reference time, not including the `from .. to` template.
    fn reference(&self, i: usize) -> Step {
        if let Some(hit) = self.full_date(i) {
            return Some(hit);
        }
        if let Some(hit) = self.weekday_phrase(i) {
            return Some(hit);
        }
        if let Some(hit) = self.month_phrase(i) {
            return Some(hit);
        }
        if let Some(hit) = self.decade_or_century(i) {
            return Some(hit);
        }
        if let Some(hit) = self.relative(i) {
            return Some(hit);
        }
        if let Some(y) = self.year(i) {
            return Some((year_span(y)?, i + 1));
        }
        if let Some((time, utc, next)) = self.clock(i) {
            let mut span = Span::point(self.today().and_time(time));
            span.utc = utc;
            return Some((span, next));
        }
        None
    }

    fn expression(&self, i: usize) -> Step {
        if self.is(i, "from") {
            let (a, j) = self.reference(i + 1)?;
            if !self.is(j, "to") {
                return None;
            }
            let (b, k) = self.reference(j + 1)?;
            if b.end < a.start {
                return None;
            }
            return Some((
                Span {
                    start: a.start,
                    end: b.end,
                    utc: a.utc || b.utc,
                },
                k,
            ));
        }
        if self.is(i, "in") {
            // grounded: "in one month", "in two days"
            if let (Some(n), Some(u)) = (self.number(i + 1), self.tok(i + 2).and_then(unit)) {
                return Some((self.offset_span(u, n)?, i + 3));
            }
        }
        self.reference(i)
    }

    fn error(&self) -> ChronosError {
        let at = self.furthest.get().min(self.raw.len().saturating_sub(1));
        ChronosError::Unparseable {
            token: self.raw[at].to_string(),
        }
    }
}

fn clock_literal(t: &str) -> Option<(u32, u32, u32, bool)> {
    let (body, utc) = match t.strip_suffix(['z', 'Z']) {
        Some(b) => (b, true),
        None => (t, false),
    };
    let parts: Vec<&str> = body.split(':').collect();
    if !(2..=3).contains(&parts.len())
        || parts
            .iter()
            .any(|p| p.is_empty() || p.len() > 2 || !p.chars().all(|c| c.is_ascii_digit()))
    {
        return None;
    }
    if parts[1].len() != 2 || parts.get(2).is_some_and(|p| p.len() != 2) {
        return None;
    }
    let h = parts[0].parse().ok()?;
    let m = parts[1].parse().ok()?;
    let s = parts.get(2).map(|p| p.parse().ok()).unwrap_or(Some(0))?;
    (h < 24 && m < 60 && s < 60).then_some((h, m, s, utc))
}

/// True for tokens the tokenizer should keep whole as clock literals.
pub fn is_clock_literal(t: &str) -> bool {
    clock_literal(t).is_some()
}

fn to_utc(span: Span, offset: UtcOffset) -> TimeRef {
    let shift = if span.utc { 0 } else { offset.minutes() as i64 };
    let start = Timestamp::from_naive(span.start - Duration::minutes(shift));
    let end = Timestamp::from_naive(span.end - Duration::minutes(shift));
    if start == end {
        TimeRef::Point(start)
    } else {
        TimeRef::Interval(Interval { start, end })
    }
}

fn cursor<'a>(tokens: &'a [&'a str], utterance: Timestamp, offset: UtcOffset) -> Cursor<'a> {
    Cursor {
        toks: tokens.iter().map(|t| t.to_lowercase()).collect(),
        raw: tokens,
        now: utc_denormalize(utterance, offset).to_naive(),
        furthest: Cell::new(0),
    }
}

/// Parses a whole time phrase ("1 PM", "from 12:00 to 13:00", "yesterday",
/// "in one month") relative to the utterance time (UTC) and local offset.
pub fn parse_time_expression(
    tokens: &[&str],
    utterance: Timestamp,
    offset: UtcOffset,
) -> Result<TimeRef, ChronosError> {
    if tokens.is_empty() {
        return Err(ChronosError::Empty);
    }
    let c = cursor(tokens, utterance, offset);
    match c.expression(0) {
        Some((span, n)) if n == tokens.len() => Ok(to_utc(span, offset)),
        Some((_, n)) => Err(ChronosError::Unparseable {
            token: tokens[n].to_string(),
        }),
        None => Err(c.error()),
    }
}

/// Parses a temporal adjunct: a preposition (or none, for self-grounding
/// phrases like "yesterday") followed by a time phrase.
pub fn parse_temporal_adjunct(
    tokens: &[&str],
    utterance: Timestamp,
    offset: UtcOffset,
) -> Result<TemporalAdjunct, ChronosError> {
    let first = tokens.first().ok_or(ChronosError::Empty)?.to_lowercase();
    let (relation, rest) = match first.as_str() {
        "before" | "until" => (TemporalRelation::Before, &tokens[1..]),
        "after" | "since" => (TemporalRelation::After, &tokens[1..]),
        "on" | "at" | "during" => (TemporalRelation::During, &tokens[1..]),
        "in" => {
            // "in January" is a preposition; "in one month" is a grounded phrase
            let grounded = tokens.len() == 3 && unit(&tokens[2].to_lowercase()).is_some();
            (
                TemporalRelation::During,
                if grounded { tokens } else { &tokens[1..] },
            )
        }
        "for" => {
            let c = cursor(tokens, utterance, offset);
            let n = c.number(1);
            let u = tokens.get(2).and_then(|t| unit(&t.to_lowercase()));
            return match (n, u, tokens.len()) {
                (Some(n), Some(u), 3) => {
                    let start = add_units(c.now, u, -n).ok_or(ChronosError::Unparseable {
                        token: tokens[1].to_string(),
                    })?;
                    let span = Span {
                        start,
                        end: c.now,
                        utc: false,
                    };
                    let reference = to_utc(span, offset).interval().expect("grounded");
                    Ok(TemporalAdjunct {
                        relation: TemporalRelation::During,
                        reference,
                    })
                }
                _ => Err(ChronosError::Unparseable {
                    token: tokens.get(1).unwrap_or(&tokens[0]).to_string(),
                }),
            };
        }
        "from" => (TemporalRelation::During, tokens),
        "today" | "yesterday" | "tomorrow" | "last" | "next" | "this" | "now" => {
            (TemporalRelation::During, tokens)
        }
        _ => {
            // "two days ago"
            let c = cursor(tokens, utterance, offset);
            if tokens.last().is_some_and(|t| t.eq_ignore_ascii_case("ago"))
                && c.relative(0).is_some()
            {
                (TemporalRelation::During, tokens)
            } else {
                return Err(ChronosError::Unparseable {
                    token: tokens[0].to_string(),
                });
            }
        }
    };
    let reference = parse_time_expression(rest, utterance, offset)?
        .interval()
        .expect("grounded reference");
    Ok(TemporalAdjunct {
        relation,
        reference,
    })
}

fn ordinal_suffix(n: u32) -> &'static str {
    match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    }
}

/// `Monday the 2nd of June 2014 at 10:33:48 AM`, in local time.
pub fn format_date_phrase(utc: Timestamp, offset: UtcOffset) -> String {
    let local = utc_denormalize(utc, offset).to_naive();
    let weekday = WEEKDAYS[local.weekday().num_days_from_monday() as usize].0;
    let month = MONTHS[local.month0() as usize];
    let (h12, mer) = match local
        .time()
        .format("%H")
        .to_string()
        .parse::<u32>()
        .unwrap_or(0)
    {
        0 => (12, "AM"),
        h @ 1..=11 => (h, "AM"),
        12 => (12, "PM"),
        h => (h - 12, "PM"),
    };
    format!(
        "{} the {}{} of {} {} at {}:{} {}",
        capitalize(weekday),
        local.day(),
        ordinal_suffix(local.day()),
        capitalize(month),
        local.year(),
        h12,
        local.time().format("%M:%S"),
        mer
    )
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
