//! Spatiotemporal handler: UTC timestamps and intervals, tense anchoring,
//! Allen's thirteen interval relations and natural-language time phrases.

mod allen;
mod phrase;

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use allen::{allen_relation, AllenRelation};
pub use phrase::{
    format_date_phrase, is_clock_literal, parse_temporal_adjunct, parse_time_expression,
    TemporalAdjunct, TemporalRelation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChronosError {
    #[error("invalid calendar fields {0}")]
    InvalidDate(String),
    #[error("offset {0} minutes is outside -14:00..+14:00")]
    OffsetRange(i32),
    #[error("cannot parse offset `{0}`")]
    BadOffset(String),
    #[error("interval start {start} is after end {end}")]
    Inverted { start: Timestamp, end: Timestamp },
    #[error("unexpected `{token}` in time expression")]
    Unparseable { token: String },
    #[error("empty time expression")]
    Empty,
}

/// A UTC instant at second precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Timestamp {
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub hour: u32,
    pub minute: u32,
    pub second: u32,
}

impl Timestamp {
    pub fn new(
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: u32,
    ) -> Result<Timestamp, ChronosError> {
        let ts = Timestamp {
            year,
            month,
            day,
            hour,
            minute,
            second,
        };
        ts.naive()?;
        Ok(ts)
    }

    fn naive(&self) -> Result<NaiveDateTime, ChronosError> {
        NaiveDate::from_ymd_opt(self.year, self.month, self.day)
            .and_then(|d| d.and_hms_opt(self.hour, self.minute, self.second))
            .ok_or_else(|| ChronosError::InvalidDate(self.to_string()))
    }

    pub(crate) fn to_naive(self) -> NaiveDateTime {
        self.naive()
            .expect("timestamp fields validated at construction")
    }

    pub(crate) fn from_naive(dt: NaiveDateTime) -> Timestamp {
        Timestamp {
            year: dt.year(),
            month: dt.month(),
            day: dt.day(),
            hour: dt.hour(),
            minute: dt.minute(),
            second: dt.second(),
        }
    }

    /// Seconds since 1970-01-01T00:00:00.
    pub fn epoch_seconds(self) -> i64 {
        self.to_naive().and_utc().timestamp()
    }

    pub fn from_epoch_seconds(secs: i64) -> Option<Timestamp> {
        chrono::DateTime::from_timestamp(secs, 0).map(|dt| Timestamp::from_naive(dt.naive_utc()))
    }

    pub fn add_seconds(self, secs: i64) -> Timestamp {
        Timestamp::from_naive(self.to_naive() + Duration::seconds(secs))
    }

    /// Parses `2014-06-02T01:03:48Z`, with an optional numeric offset
    /// instead of `Z`; the result is in UTC.
    pub fn parse_iso(s: &str) -> Result<Timestamp, ChronosError> {
        if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(s) {
            return Ok(Timestamp::from_naive(dt.naive_utc()));
        }
        NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S")
            .map(Timestamp::from_naive)
            .map_err(|_| ChronosError::InvalidDate(s.to_string()))
    }

    /// `2014-06-02T01:03:48Z`.
    pub fn iso(self) -> String {
        format!(
            "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            self.year, self.month, self.day, self.hour, self.minute, self.second
        )
    }

    pub fn now() -> Timestamp {
        Timestamp::from_naive(chrono::Utc::now().naive_utc())
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "timestamp({},{},{},{},{},{})",
            self.year, self.month, self.day, self.hour, self.minute, self.second
        )
    }
}

/// Closed interval of UTC instants. Points are degenerate intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Interval {
    pub fn new(start: Timestamp, end: Timestamp) -> Result<Interval, ChronosError> {
        if start > end {
            return Err(ChronosError::Inverted { start, end });
        }
        Ok(Interval { start, end })
    }

    pub fn point(ts: Timestamp) -> Interval {
        Interval { start: ts, end: ts }
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invl({},{})", self.start, self.end)
    }
}

/// A time reference as it appears in a logical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeRef {
    Point(Timestamp),
    Interval(Interval),
    /// The time variable `t_N`.
    Symbolic(u32),
    Before(u32, Interval),
    After(u32, Interval),
}

impl TimeRef {
    /// The interval a grounded reference denotes.
    pub fn interval(&self) -> Option<Interval> {
        match self {
            TimeRef::Point(t) => Some(Interval::point(*t)),
            TimeRef::Interval(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for TimeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeRef::Point(t) => write!(f, "{}", Interval::point(*t)),
            TimeRef::Interval(i) => write!(f, "{i}"),
            TimeRef::Symbolic(n) => write!(f, "t_{n}"),
            TimeRef::Before(n, i) => write!(f, "before(t_{n},{i})"),
            TimeRef::After(n, i) => write!(f, "after(t_{n},{i})"),
        }
    }
}

/// Signed offset of local wall-clock time from UTC, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct UtcOffset(i32);

impl UtcOffset {
    pub const MAX_MINUTES: i32 = 14 * 60;

    pub fn from_minutes(minutes: i32) -> Result<UtcOffset, ChronosError> {
        if minutes.abs() > Self::MAX_MINUTES {
            return Err(ChronosError::OffsetRange(minutes));
        }
        Ok(UtcOffset(minutes))
    }

    pub fn minutes(self) -> i32 {
        self.0
    }
}

impl FromStr for UtcOffset {
    type Err = ChronosError;

    /// Accepts `+09:30`, `-05:00`, `+0930`, `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChronosError::BadOffset(s.to_string());
        let t = s.trim();
        let (sign, rest) = match t.as_bytes().first() {
            Some(b'+') => (1, &t[1..]),
            Some(b'-') => (-1, &t[1..]),
            _ => (1, t),
        };
        let digits: String = rest.chars().filter(|c| *c != ':').collect();
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let (h, m) = match digits.len() {
            1 | 2 => (digits.parse::<i32>().map_err(|_| bad())?, 0),
            4 => (
                digits[..2].parse::<i32>().map_err(|_| bad())?,
                digits[2..].parse::<i32>().map_err(|_| bad())?,
            ),
            _ => return Err(bad()),
        };
        if m >= 60 {
            return Err(bad());
        }
        UtcOffset::from_minutes(sign * (h * 60 + m))
    }
}

impl fmt::Display for UtcOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { '-' } else { '+' };
        write!(f, "{sign}{:02}:{:02}", self.0.abs() / 60, self.0.abs() % 60)
    }
}

/// Local wall-clock fields to UTC: subtracts the offset.
pub fn utc_normalize(local: Timestamp, offset: UtcOffset) -> Result<Timestamp, ChronosError> {
    let naive = local.naive()?;
    Ok(Timestamp::from_naive(
        naive - Duration::minutes(offset.0 as i64),
    ))
}

/// Inverse of [`utc_normalize`].
pub fn utc_denormalize(utc: Timestamp, offset: UtcOffset) -> Timestamp {
    Timestamp::from_naive(utc.to_naive() + Duration::minutes(offset.0 as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TenseKind {
    Past,
    PresentHabitual,
    Future,
}

/// How a clause's time variable relates to the utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TenseAnchor {
    Constraint(TimeRef),
    /// No constraint; the event clause carries the `general_habitual` tag.
    Habitual,
}

pub fn anchor_tense(tense: TenseKind, var: u32, utterance: Interval) -> TenseAnchor {
    match tense {
        TenseKind::Past => TenseAnchor::Constraint(TimeRef::Before(var, utterance)),
        TenseKind::Future => TenseAnchor::Constraint(TimeRef::After(var, utterance)),
        TenseKind::PresentHabitual => TenseAnchor::Habitual,
    }
}
