//! Symbol-change counts of texts and patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::pattern::{Pattern, Symbol};

/// Number of positions `i` with `t[i] ≠ t[i+1]`.
pub fn symbol_changes(t: &[Symbol]) -> usize {
    t.windows(2).filter(|w| w[0] != w[1]).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MaxChanges {
    Bounded(usize),
    Unbounded,
}

impl fmt::Display for MaxChanges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxChanges::Bounded(k) => write!(f, "{k}"),
            MaxChanges::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Maximum symbol changes over the words of a pattern, with the symbols those
/// words can start and end with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeProfile {
    pub max_changes: MaxChanges,
    pub first: BTreeSet<Symbol>,
    pub last: BTreeSet<Symbol>,
    pub nullable: bool,
}

/// Best change count among nonempty words, keyed by (first, last) symbol.
type Table = BTreeMap<(Symbol, Symbol), usize>;

fn put(t: &mut Table, k: (Symbol, Symbol), v: usize) {
    let e = t.entry(k).or_insert(v);
    *e = (*e).max(v);
}

/// `None` when a repetition of something other than a single symbol occurs.
fn table(p: &Pattern) -> Option<(Table, bool)> {
    match p {
        Pattern::Symbol(c) => Some((Table::from([((*c, *c), 0)]), false)),
        Pattern::Plus(inner) | Pattern::Star(inner) => match inner.as_ref() {
            Pattern::Symbol(c) => Some((
                Table::from([((*c, *c), 0)]),
                matches!(p, Pattern::Star(_)),
            )),
            _ => None,
        },
        Pattern::Alt(cs) => {
            let mut out = Table::new();
            let mut nullable = false;
            for c in cs {
                let (t, n) = table(c)?;
                t.into_iter().for_each(|(k, v)| put(&mut out, k, v));
                nullable |= n;
            }
            Some((out, nullable))
        }
        Pattern::Concat(cs) => {
            let mut acc = Table::new();
            let mut nullable = true;
            for c in cs {
                let (t, n) = table(c)?;
                let mut next = Table::new();
                for (&(f1, l1), &v1) in &acc {
                    for (&(f2, l2), &v2) in &t {
                        put(&mut next, (f1, l2), v1 + v2 + usize::from(l1 != f2));
                    }
                    if n {
                        put(&mut next, (f1, l1), v1);
                    }
                }
                if nullable {
                    t.iter().for_each(|(&k, &v)| put(&mut next, k, v));
                }
                acc = next;
                nullable &= n;
            }
            Some((acc, nullable))
        }
    }
}

/// Change profile of `p`; unbounded when a repetition of a compound
/// subpattern occurs.
pub fn pattern_changes(p: &Pattern) -> ChangeProfile {
    match table(p) {
        Some((t, nullable)) => ChangeProfile {
            max_changes: MaxChanges::Bounded(t.values().copied().max().unwrap_or(0)),
            first: t.keys().map(|k| k.0).collect(),
            last: t.keys().map(|k| k.1).collect(),
            nullable,
        },
        None => ChangeProfile {
            max_changes: MaxChanges::Unbounded,
            first: p.alphabet(),
            last: p.alphabet(),
            nullable: p.nullable(),
        },
    }
}
