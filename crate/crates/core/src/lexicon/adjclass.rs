use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Semantic class of a prenominal modifier. The derived `Ord` is the
/// canonical left-to-right order of modifiers inside a noun phrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjClass {
    Ordinal,
    Noun,
    Subjective,
    Evaluative,
    Objective,
    Amplifier,
    Weak,
    Size,
    Girth,
    Height,
    Shape,
    Age,
    Century,
    Participle,
    Colour,
    Compass,
    Provenance,
    Religion,
    Denominal,
}

impl AdjClass {
    pub const ALL: [AdjClass; 19] = [
        AdjClass::Ordinal,
        AdjClass::Noun,
        AdjClass::Subjective,
        AdjClass::Evaluative,
        AdjClass::Objective,
        AdjClass::Amplifier,
        AdjClass::Weak,
        AdjClass::Size,
        AdjClass::Girth,
        AdjClass::Height,
        AdjClass::Shape,
        AdjClass::Age,
        AdjClass::Century,
        AdjClass::Participle,
        AdjClass::Colour,
        AdjClass::Compass,
        AdjClass::Provenance,
        AdjClass::Religion,
        AdjClass::Denominal,
    ];

    /// Position in the canonical order, 0-based.
    pub fn rank(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            AdjClass::Ordinal => "ordinal",
            AdjClass::Noun => "noun",
            AdjClass::Subjective => "subjective",
            AdjClass::Evaluative => "evaluative",
            AdjClass::Objective => "objective",
            AdjClass::Amplifier => "amplifier",
            AdjClass::Weak => "weak",
            AdjClass::Size => "size",
            AdjClass::Girth => "girth",
            AdjClass::Height => "height",
            AdjClass::Shape => "shape",
            AdjClass::Age => "age",
            AdjClass::Century => "century",
            AdjClass::Participle => "participle",
            AdjClass::Colour => "colour",
            AdjClass::Compass => "compass",
            AdjClass::Provenance => "provenance",
            AdjClass::Religion => "religion",
            AdjClass::Denominal => "denominal",
        }
    }
}

impl fmt::Display for AdjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdjClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdjClass::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s || (s == "color" && *c == AdjClass::Colour))
            .ok_or_else(|| format!("unknown adjective class `{s}`"))
    }
}

/// True when the classes appear in canonical order. Repeats of a class are
/// allowed ("ancient old").
pub fn adjective_order_valid(classes: &[AdjClass]) -> bool {
    classes.windows(2).all(|w| w[0] <= w[1])
}
