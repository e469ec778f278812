use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllenRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equals,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Before,
        AllenRelation::After,
        AllenRelation::Meets,
        AllenRelation::MetBy,
        AllenRelation::Overlaps,
        AllenRelation::OverlappedBy,
        AllenRelation::Starts,
        AllenRelation::StartedBy,
        AllenRelation::During,
        AllenRelation::Contains,
        AllenRelation::Finishes,
        AllenRelation::FinishedBy,
        AllenRelation::Equals,
    ];

    pub fn converse(self) -> AllenRelation {
        use AllenRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }

    pub fn name(self) -> &'static str {
        use AllenRelation::*;
        match self {
            Before => "before",
            After => "after",
            Meets => "meets",
            MetBy => "met_by",
            Overlaps => "overlaps",
            OverlappedBy => "overlapped_by",
            Starts => "starts",
            StartedBy => "started_by",
            During => "during",
            Contains => "contains",
            Finishes => "finishes",
            FinishedBy => "finished_by",
            Equals => "equals",
        }
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AllenRelation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AllenRelation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown Allen relation `{s}`"))
    }
}

/// Classifies a pair of intervals by comparing endpoints.
///
/// Degenerate intervals make some of the textbook conditions overlap
/// (a point at the start of an interval both "meets" and "starts" it), so
/// the checks run in a fixed order and the first match wins: shared
/// endpoints are reported as equals/starts/finishes before meets.
pub fn allen_relation<T: Ord + Copy>(a: (T, T), b: (T, T)) -> AllenRelation {
    use std::cmp::Ordering::*;
    use AllenRelation::*;
    let (a0, a1) = a;
    let (b0, b1) = b;
    match (a0.cmp(&b0), a1.cmp(&b1)) {
        (Equal, Equal) => Equals,
        (Equal, Less) => Starts,
        (Equal, Greater) => StartedBy,
        (Greater, Equal) => Finishes,
        (Less, Equal) => FinishedBy,
        (Greater, Less) => During,
        (Less, Greater) => Contains,
        (Less, Less) => match a1.cmp(&b0) {
            Less => Before,
            Equal => Meets,
            Greater => Overlaps,
        },
        (Greater, Greater) => match a0.cmp(&b1) {
            Greater => After,
            Equal => MetBy,
            Less => OverlappedBy,
        },
    }
}

impl Interval {
    pub fn relation_to(&self, other: &Interval) -> AllenRelation {
        allen_relation((self.start, self.end), (other.start, other.end))
    }
}
