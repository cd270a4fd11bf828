//! Zero patterns of a prescribed triple (a, b, c).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which of a, b, c are nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CasePattern {
    #[serde(rename = "000")]
    Zero,
    #[serde(rename = "a00")]
    A,
    #[serde(rename = "0b0")]
    B,
    #[serde(rename = "00c")]
    C,
    #[serde(rename = "ab0")]
    AB,
    #[serde(rename = "a0c")]
    AC,
    #[serde(rename = "0bc")]
    BC,
    #[serde(rename = "abc")]
    ABC,
}

/// The two families the existence question splits into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternClass {
    Zeros,
    Nonzeros,
}

impl CasePattern {
    pub const ALL: [CasePattern; 8] = [
        CasePattern::Zero,
        CasePattern::A,
        CasePattern::B,
        CasePattern::C,
        CasePattern::AB,
        CasePattern::AC,
        CasePattern::BC,
        CasePattern::ABC,
    ];

    pub fn from_flags(a: bool, b: bool, c: bool) -> Self {
        match (a, b, c) {
            (false, false, false) => CasePattern::Zero,
            (true, false, false) => CasePattern::A,
            (false, true, false) => CasePattern::B,
            (false, false, true) => CasePattern::C,
            (true, true, false) => CasePattern::AB,
            (true, false, true) => CasePattern::AC,
            (false, true, true) => CasePattern::BC,
            (true, true, true) => CasePattern::ABC,
        }
    }

    pub fn of(a: u64, b: u64, c: u64) -> Self {
        Self::from_flags(a != 0, b != 0, c != 0)
    }

    pub fn a(self) -> bool {
        matches!(self, CasePattern::A | CasePattern::AB | CasePattern::AC | CasePattern::ABC)
    }

    pub fn b(self) -> bool {
        matches!(self, CasePattern::B | CasePattern::AB | CasePattern::BC | CasePattern::ABC)
    }

    pub fn c(self) -> bool {
        matches!(self, CasePattern::C | CasePattern::AC | CasePattern::BC | CasePattern::ABC)
    }

    pub fn label(self) -> &'static str {
        match self {
            CasePattern::Zero => "000",
            CasePattern::A => "a00",
            CasePattern::B => "0b0",
            CasePattern::C => "00c",
            CasePattern::AB => "ab0",
            CasePattern::AC => "a0c",
            CasePattern::BC => "0bc",
            CasePattern::ABC => "abc",
        }
    }

    pub fn class(self) -> PatternClass {
        if self == CasePattern::Zero {
            PatternClass::Zeros
        } else {
            PatternClass::Nonzeros
        }
    }
}

impl fmt::Display for CasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CasePattern {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CasePattern::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| format!("unknown pattern {s:?}"))
    }
}

impl PatternClass {
    pub fn label(self) -> &'static str {
        match self {
            PatternClass::Zeros => "zeros",
            PatternClass::Nonzeros => "nonzeros",
        }
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PatternClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zeros" | "000" => Ok(PatternClass::Zeros),
            "nonzeros" => Ok(PatternClass::Nonzeros),
            _ => Err(format!("unknown pattern class {s:?}")),
        }
    }
}
