//! The matched-substring set M for alternatives of type `∘|`.

use std::collections::{BTreeMap, BTreeSet};

use crate::nfa::Nfa;
use crate::ov::{batch_ov, BitVec, ChiEncoder};
use crate::pattern::{Pattern, Symbol};

use super::{FastConfig, FastError};

/// Per position, the sorted set of symbols allowed there.
pub type SetWord = Vec<Vec<Symbol>>;

/// 1-based closed intervals (i, j) matched by some alternative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchSet(pub BTreeSet<(usize, usize)>);

impl MatchSet {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.0.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.0.iter()
    }
}

/// Symbols of an alternative-of-symbols node, or `None` if it is anything else.
pub(crate) fn symbol_set(p: &Pattern) -> Option<Vec<Symbol>> {
    fn collect(p: &Pattern, out: &mut Vec<Symbol>) -> bool {
        match p {
            Pattern::Symbol(c) => {
                out.push(*c);
                true
            }
            Pattern::Alt(bs) => bs.iter().all(|b| collect(b, out)),
            _ => false,
        }
    }
    let mut out = Vec::new();
    if !collect(p, &mut out) {
        return None;
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Read a `∘|` pattern (or a word, or a single set) as a [`SetWord`].
pub fn set_word(p: &Pattern) -> Result<SetWord, FastError> {
    let items = match p {
        Pattern::Concat(cs) => cs.as_slice(),
        other => std::slice::from_ref(other),
    };
    items
        .iter()
        .map(|it| {
            symbol_set(it).ok_or_else(|| {
                FastError::Malformed(format!("expected a symbol or an alternative of symbols, found {it}"))
            })
        })
        .collect()
}

pub(crate) fn set_word_pattern(w: &SetWord) -> Pattern {
    Pattern::concat(
        w.iter()
            .map(|s| {
                if s.len() == 1 {
                    Pattern::Symbol(s[0])
                } else {
                    Pattern::Alt(s.iter().copied().map(Pattern::Symbol).collect())
                }
            })
            .collect(),
    )
}

fn word_matches(w: &SetWord, sub: &[Symbol]) -> bool {
    w.len() == sub.len() && w.iter().zip(sub).all(|(s, c)| s.binary_search(c).is_ok())
}

/// Compute M for the `∘|` alternatives `alts` over `t`.
pub fn compute_match_set(
    t: &[Symbol],
    alts: &[Pattern],
    cfg: &FastConfig,
) -> Result<MatchSet, FastError> {
    let words = alts.iter().map(set_word).collect::<Result<Vec<_>, _>>()?;
    let m = alts.iter().map(Pattern::size).sum();
    match_set_words(t, &words, m, cfg)
}

fn baseline_into(t: &[Symbol], w: &SetWord, out: &mut BTreeSet<(usize, usize)>) {
    out.extend(Nfa::compile(&set_word_pattern(w)).intervals(t));
}

pub(crate) fn match_set_words(
    t: &[Symbol],
    words: &[SetWord],
    m: usize,
    cfg: &FastConfig,
) -> Result<MatchSet, FastError> {
    let n = t.len();
    let f = cfg.threshold(n, m);
    let mut out = BTreeSet::new();
    let mut small: BTreeMap<usize, Vec<&SetWord>> = BTreeMap::new();
    for w in words {
        // a word longer than the text cannot match anywhere
        if w.is_empty() || w.len() > n {
            continue;
        }
        if w.len() <= f && w.iter().all(|s| s.len() <= f) {
            small.entry(w.len()).or_default().push(w);
        } else {
            baseline_into(t, w, &mut out);
        }
    }
    if small.values().all(|g| g.len() < 2) {
        for w in small.values().flatten() {
            baseline_into(t, w, &mut out);
        }
        return Ok(MatchSet(out));
    }

    let mut alphabet: Vec<Symbol> = t.to_vec();
    alphabet.extend(small.values().flatten().flat_map(|w| w.iter().flatten()));
    let enc = ChiEncoder::with_constant(&alphabet, f, cfg.chi_c, cfg.seed)?;
    let pad = enc.chi_symbol(enc.fresh_symbol())?.clone();

    for (&j, group) in &small {
        if group.len() == 1 {
            baseline_into(t, group[0], &mut out);
            continue;
        }
        let texts = (0..=n - j)
            .map(|i| {
                let mut parts: Vec<&BitVec> = t[i..i + j]
                    .iter()
                    .map(|&c| enc.chi_symbol(c))
                    .collect::<Result<_, _>>()?;
                parts.extend(std::iter::repeat_n(&pad, f - j));
                Ok(BitVec::concat(&parts))
            })
            .collect::<Result<Vec<_>, FastError>>()?;
        let pats = group
            .iter()
            .map(|w| {
                let sets = w.iter().map(|s| enc.chi_set(s)).collect::<Result<Vec<_>, _>>()?;
                let mut parts: Vec<&BitVec> = sets.iter().collect();
                parts.extend(std::iter::repeat_n(&pad, f - j));
                Ok(BitVec::concat(&parts).not())
            })
            .collect::<Result<Vec<_>, FastError>>()?;
        let hits = batch_ov(&texts, &pats)?;
        for (i, hit) in hits.into_iter().enumerate() {
            // χ only errs towards false positives; confirm each candidate exactly
            if hit && group.iter().any(|w| word_matches(w, &t[i..i + j])) {
                out.insert((i + 1, i + j));
            }
        }
    }
    Ok(MatchSet(out))
}
