//! Run-length encodings of texts and of `∘+` patterns.

use std::fmt;

use crate::pattern::{Pattern, Symbol};

use super::FastError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RunKind {
    /// Exactly `len` copies.
    Exact,
    /// At least `len` copies.
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub symbol: Symbol,
    pub kind: RunKind,
    pub len: usize,
}

impl Run {
    pub fn exact(symbol: Symbol, len: usize) -> Self {
        Run {
            symbol,
            kind: RunKind::Exact,
            len,
        }
    }

    pub fn at_least(symbol: Symbol, len: usize) -> Self {
        Run {
            symbol,
            kind: RunKind::AtLeast,
            len,
        }
    }

    /// Does a text run of `len` copies of `symbol` match this pattern run?
    pub fn accepts(&self, symbol: Symbol, len: usize) -> bool {
        self.symbol == symbol
            && match self.kind {
                RunKind::Exact => len == self.len,
                RunKind::AtLeast => len >= self.len,
            }
    }

    pub fn is_plus(&self) -> bool {
        self.kind == RunKind::AtLeast
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RunKind::Exact => write!(f, "({},={})", self.symbol, self.len),
            RunKind::AtLeast => write!(f, "({},≥{})", self.symbol, self.len),
        }
    }
}

/// Maximal runs; adjacent runs carry distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Rle {
    pub runs: Vec<Run>,
}

impl Rle {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Shortest word length in the language.
    pub fn min_len(&self) -> usize {
        self.runs.iter().map(|r| r.len).sum()
    }

    /// Expand a text encoding back into symbols.
    pub fn expand(&self) -> Vec<Symbol> {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.symbol, r.len))
            .collect()
    }

    /// Pattern with the same language.
    pub fn to_pattern(&self) -> Pattern {
        let mut items = Vec::new();
        for r in &self.runs {
            let exact = if r.is_plus() { r.len - 1 } else { r.len };
            items.extend(std::iter::repeat_n(Pattern::Symbol(r.symbol), exact));
            if r.is_plus() {
                items.push(Pattern::plus(Pattern::Symbol(r.symbol)));
            }
        }
        Pattern::concat(items)
    }

    fn push(&mut self, symbol: Symbol, plus: bool) {
        match self.runs.last_mut() {
            Some(last) if last.symbol == symbol => {
                last.len += 1;
                if plus {
                    last.kind = RunKind::AtLeast;
                }
            }
            _ => self.runs.push(Run {
                symbol,
                kind: if plus { RunKind::AtLeast } else { RunKind::Exact },
                len: 1,
            }),
        }
    }
}

impl fmt::Display for Rle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.runs.iter().try_for_each(|r| write!(f, "{r}"))
    }
}

pub fn rle(t: &[Symbol]) -> Rle {
    let mut out = Rle::default();
    for &c in t {
        out.push(c, false);
    }
    out
}

/// Encoding of a concatenation of symbols and single-symbol Pluses.
pub fn rle_pattern(p: &Pattern) -> Result<Rle, FastError> {
    let mut out = Rle::default();
    let items = match p {
        Pattern::Concat(cs) => cs.as_slice(),
        other => std::slice::from_ref(other),
    };
    for item in items {
        match item {
            Pattern::Symbol(c) => out.push(*c, false),
            Pattern::Plus(inner) => match inner.as_ref() {
                Pattern::Symbol(c) => out.push(*c, true),
                _ => {
                    return Err(FastError::Malformed(format!(
                        "Plus over a non-symbol in {item}"
                    )))
                }
            },
            other => {
                return Err(FastError::Malformed(format!(
                    "expected a symbol or σ+, found {other}"
                )))
            }
        }
    }
    Ok(out)
}
