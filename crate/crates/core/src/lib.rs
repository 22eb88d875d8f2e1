//! Homogeneous regular expressions: classification, an exact NFA baseline,
//! faster matching/membership for the improvable types, and generators for
//! Formula-Pair hardness instances.

pub mod fast;
pub mod forge;
pub mod formula;
pub mod nfa;
pub mod ov;
pub mod pattern;

use std::fmt;

pub use nfa::{match_intervals, nfa_match, nfa_member, Nfa};
pub use pattern::{
    classify, conforms_to, parse_pattern, render_pattern, simplify_type, Classification, Op,
    Pattern, PatternError, Symbol, TypeString,
};

/// Which question is asked about a text and a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Does some substring of the text belong to the language?
    Matching,
    /// Does the whole text belong to the language?
    Membership,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Matching => "matching",
            Problem::Membership => "membership",
        })
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matching" => Ok(Problem::Matching),
            "membership" => Ok(Problem::Membership),
            other => Err(format!("unknown problem '{other}' (expected matching or membership)")),
        }
    }
}
