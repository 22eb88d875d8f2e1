//! Matching and membership for the improvable types `|∘|`, `|∘+`, `+|∘|`
//! and `+|∘+` through matched-substring sets and prefix-graph reachability.

mod flagged;
mod graph;
mod matchset;
mod rle;

use thiserror::Error;

use crate::ov::{OvError, DEFAULT_CHI_CONSTANT};
use crate::pattern::{Pattern, Symbol};
use crate::Problem;

pub use flagged::{compute_flagged_set, run_vec_orthogonal, FlaggedMatch, FlaggedMatchSet};
pub use graph::PrefixGraph;
pub use matchset::{compute_match_set, set_word, MatchSet, SetWord};
pub use rle::{rle, rle_pattern, Rle, Run, RunKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FastError {
    #[error("unsupported pattern type: {0}")]
    UnsupportedType(String),
    #[error("malformed alternative: {0}")]
    Malformed(String),
    #[error("run length {len} outside 1..={limit}")]
    RunLength { len: usize, limit: usize },
    #[error(transparent)]
    Ov(#[from] OvError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastConfig {
    /// Small/large split; `None` picks [`default_threshold`].
    pub threshold_f: Option<usize>,
    pub chi_c: f64,
    pub seed: u64,
}

impl Default for FastConfig {
    fn default() -> Self {
        FastConfig {
            threshold_f: None,
            chi_c: DEFAULT_CHI_CONSTANT,
            seed: 0x5eed,
        }
    }
}

impl FastConfig {
    pub fn threshold(&self, n: usize, m: usize) -> usize {
        self.threshold_f
            .unwrap_or_else(|| default_threshold(n, m))
            .max(1)
    }
}

/// `max(2, ⌊2^{√(log₂ min(n, m)) / 3}⌋)`
pub fn default_threshold(n: usize, m: usize) -> usize {
    let x = n.min(m).max(1) as f64;
    let f = 2f64.powf(x.log2().sqrt() / 3.0).floor() as usize;
    f.max(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Elem {
    Set(usize),
    Sym(Symbol),
    PlusSym(Symbol),
}

/// A pattern read as `(p_1 | … | p_k)` with an optional outer Plus.
#[derive(Debug, Clone)]
enum Shape {
    Sets(Vec<SetWord>),
    Runs(Vec<Rle>),
}

#[derive(Debug, Clone)]
struct Normalized {
    outer_plus: bool,
    shape: Shape,
}

fn unsupported(p: &Pattern) -> FastError {
    FastError::UnsupportedType(format!("{} ({p})", crate::pattern::classify(p).type_string))
}

/// Single symbol under any number of Pluses and unary alternatives.
fn plus_symbol(p: &Pattern) -> Option<Symbol> {
    match p {
        Pattern::Symbol(c) => Some(*c),
        Pattern::Plus(c) => plus_symbol(c),
        Pattern::Alt(bs) if bs.len() == 1 => plus_symbol(&bs[0]),
        _ => None,
    }
}

fn normalize(p: &Pattern, prob: Problem) -> Result<Normalized, FastError> {
    let mut root = p;
    let mut outer_plus = false;
    while let Pattern::Plus(c) = root {
        if plus_symbol(root).is_some() {
            break;
        }
        outer_plus = true;
        root = c;
    }
    // for matching, or under an outer Plus, (q+ | r) behaves like (q | r)
    let peel = prob == Problem::Matching || outer_plus;
    let mut branches = Vec::new();
    let mut todo = vec![root];
    while let Some(b) = todo.pop() {
        match b {
            Pattern::Alt(bs) if plus_symbol(b).is_none() && matchset::symbol_set(b).is_none() => {
                todo.extend(bs.iter().rev())
            }
            Pattern::Plus(c) if peel && plus_symbol(b).is_none() => todo.push(c),
            other => branches.push(other),
        }
    }

    let mut sets: Vec<Vec<Symbol>> = Vec::new();
    let mut words: Vec<Vec<Elem>> = Vec::new();
    let (mut any_plus, mut any_set) = (false, false);
    for b in branches {
        let mut items = Vec::new();
        let mut todo = vec![b];
        while let Some(x) = todo.pop() {
            match x {
                Pattern::Concat(cs) => todo.extend(cs.iter().rev()),
                other => items.push(other),
            }
        }
        let mut word = Vec::new();
        for it in items {
            let elem = if let Pattern::Symbol(c) = it {
                Elem::Sym(*c)
            } else if let Some(s) = matchset::symbol_set(it) {
                if s.len() == 1 {
                    Elem::Sym(s[0])
                } else {
                    any_set = true;
                    sets.push(s);
                    Elem::Set(sets.len() - 1)
                }
            } else if let Some(c) = plus_symbol(it) {
                any_plus = true;
                Elem::PlusSym(c)
            } else {
                return Err(unsupported(p));
            };
            word.push(elem);
        }
        words.push(word);
    }
    if any_plus && any_set {
        return Err(unsupported(p));
    }
    let shape = if any_plus {
        Shape::Runs(
            words
                .iter()
                .map(|w| {
                    let items = w
                        .iter()
                        .map(|e| match e {
                            Elem::Sym(c) => Pattern::Symbol(*c),
                            Elem::PlusSym(c) => Pattern::plus(Pattern::Symbol(*c)),
                            Elem::Set(_) => unreachable!(),
                        })
                        .collect();
                    rle_pattern(&Pattern::concat(items))
                })
                .collect::<Result<_, _>>()?,
        )
    } else {
        Shape::Sets(
            words
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|e| match e {
                            Elem::Sym(c) => vec![*c],
                            Elem::Set(k) => sets[*k].clone(),
                            Elem::PlusSym(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect(),
        )
    };
    Ok(Normalized { outer_plus, shape })
}

/// Result of [`fast_solve`] with the engine that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastOutcome {
    pub answer: bool,
    pub engine: String,
}

fn solve_sets(t: &[Symbol], words: &[SetWord], outer_plus: bool, m: usize, prob: Problem, cfg: &FastConfig) -> Result<bool, FastError> {
    let set = matchset::match_set_words(t, words, m, cfg)?;
    Ok(match prob {
        Problem::Matching => !set.is_empty(),
        Problem::Membership if t.is_empty() => false,
        Problem::Membership if outer_plus => {
            PrefixGraph::from_match_set(t.len(), &set).reachable((0, 0), (t.len(), 0))
        }
        Problem::Membership => set.contains(1, t.len()),
    })
}

fn solve_runs(t: &[Symbol], rles: &[Rle], outer_plus: bool, m: usize, prob: Problem, cfg: &FastConfig) -> Result<bool, FastError> {
    let set = flagged::flagged_set_runs(t, rles, m, cfg)?;
    Ok(match prob {
        Problem::Matching => !set.is_empty(),
        Problem::Membership if t.is_empty() => false,
        Problem::Membership => {
            let g = PrefixGraph::from_flagged_set(t, &set);
            if outer_plus {
                g.reachable((0, 0), (t.len(), 0))
            } else {
                g.reachable_with_one_match((0, 0), (t.len(), 0))
            }
        }
    })
}

fn label(outer_plus: bool, last: char, prob: Problem) -> String {
    let prefix = if outer_plus && prob == Problem::Membership { "+" } else { "" };
    format!("fast:{prefix}|∘{last}")
}

/// `|∘|` matching or (`+`)`|∘|` membership through the set M.
pub fn member_or(t: &[Symbol], p: &Pattern, prob: Problem, cfg: &FastConfig) -> Result<bool, FastError> {
    let norm = normalize(p, prob)?;
    let Shape::Sets(words) = norm.shape else {
        return Err(unsupported(p));
    };
    solve_sets(t, &words, norm.outer_plus, p.size(), prob, cfg)
}

/// `|∘+` matching or (`+`)`|∘+` membership through the flagged set M′.
pub fn member_plus(t: &[Symbol], p: &Pattern, prob: Problem, cfg: &FastConfig) -> Result<bool, FastError> {
    let norm = normalize(p, prob)?;
    let rles = match norm.shape {
        Shape::Runs(r) => r,
        Shape::Sets(words) if words.iter().flatten().all(|s| s.len() == 1) => words
            .iter()
            .map(|w| rle(&w.iter().map(|s| s[0]).collect::<Vec<_>>()))
            .collect(),
        Shape::Sets(_) => return Err(unsupported(p)),
    };
    solve_runs(t, &rles, norm.outer_plus, p.size(), prob, cfg)
}

/// Dispatch to the set- or run-based algorithm; `UnsupportedType` means the
/// caller should fall back to the baseline.
pub fn fast_solve(t: &[Symbol], p: &Pattern, prob: Problem, cfg: &FastConfig) -> Result<FastOutcome, FastError> {
    let norm = normalize(p, prob)?;
    let m = p.size();
    let (answer, engine) = match &norm.shape {
        Shape::Sets(words) => (
            solve_sets(t, words, norm.outer_plus, m, prob, cfg)?,
            label(norm.outer_plus, '|', prob),
        ),
        Shape::Runs(rles) => (
            solve_runs(t, rles, norm.outer_plus, m, prob, cfg)?,
            label(norm.outer_plus, '+', prob),
        ),
    };
    Ok(FastOutcome { answer, engine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::{nfa_match, nfa_member};
    use crate::pattern::parse_pattern;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn solve(t: &str, p: &str, prob: Problem) -> FastOutcome {
        fast_solve(&chars(t), &parse_pattern(p).unwrap(), prob, &FastConfig::default()).unwrap()
    }

    #[test]
    fn worked_membership_instance() {
        let out = solve("aaaabccba", "(a+|a+b|bc+|cba|b+a)+", Problem::Membership);
        assert_eq!(out, FastOutcome { answer: true, engine: "fast:+|∘+".into() });
    }

    #[test]
    fn plus_graph_single_run() {
        let t = chars("aaa");
        let p = parse_pattern("(a+)+").unwrap();
        assert!(member_plus(&t, &p, Problem::Membership, &FastConfig::default()).unwrap());
        let set = compute_flagged_set(&t, &[parse_pattern("a+").unwrap()], &FastConfig::default()).unwrap();
        let g = PrefixGraph::from_flagged_set(&t, &set);
        for (a, b) in [((0, 0), (0, 1)), ((0, 1), (1, 2)), ((1, 2), (2, 2)), ((2, 2), (3, 2)), ((3, 2), (3, 0))] {
            assert!(g.has_edge(a, b), "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn or_graph_example() {
        let t = chars("abab");
        let p = parse_pattern("((ab)|(ba))+").unwrap();
        assert!(member_or(&t, &p, Problem::Membership, &FastConfig::default()).unwrap());
        let set = compute_match_set(&t, &[parse_pattern("ab").unwrap(), parse_pattern("ba").unwrap()], &FastConfig::default()).unwrap();
        let g = PrefixGraph::from_match_set(4, &set);
        assert!(g.has_edge((0, 0), (2, 0)) && g.has_edge((2, 0), (4, 0)));
    }

    #[test]
    fn empty_text() {
        assert!(!solve("", "((ab)|c)+", Problem::Membership).answer);
        assert!(!solve("", "(a+b|c)+", Problem::Membership).answer);
        assert!(!solve("", "ab|c", Problem::Matching).answer);
    }

    #[test]
    fn unsupported_shapes() {
        let cfg = FastConfig::default();
        for p in ["a(bc)+d", "(a|b)c|d+", "a*b", "((ab)+c|d)"] {
            let p = parse_pattern(p).unwrap();
            assert!(
                matches!(fast_solve(&chars("abcd"), &p, Problem::Membership, &cfg), Err(FastError::UnsupportedType(_))),
                "{p}"
            );
        }
    }

    #[test]
    fn degenerate_word_is_substring_search() {
        let out = solve("xxabyy", "ab", Problem::Matching);
        assert!(out.answer);
        assert!(!solve("xxayby", "ab", Problem::Matching).answer);
    }

    #[test]
    fn non_plus_membership() {
        for (t, p) in [("aab", "a+b|c"), ("ab", "a+b|c"), ("b", "a+b|c"), ("aabb", "a+b+"), ("ac", "(a|b)c|d")] {
            let pat = parse_pattern(p).unwrap();
            let out = fast_solve(&chars(t), &pat, Problem::Membership, &FastConfig::default()).unwrap();
            assert_eq!(out.answer, nfa_member(&chars(t), &pat), "{t} {p}");
            let out = fast_solve(&chars(t), &pat, Problem::Matching, &FastConfig::default()).unwrap();
            assert_eq!(out.answer, nfa_match(&chars(t), &pat), "{t} {p}");
        }
    }
}
