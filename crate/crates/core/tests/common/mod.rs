//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use homre_core::{Pattern, Problem};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Recursive-descent language membership, written without automata.
pub fn lang_member(p: &Pattern, t: &[char]) -> bool {
    match p {
        Pattern::Symbol(c) => t.len() == 1 && t[0] == *c,
        Pattern::Concat(cs) => concat_member(cs, t),
        Pattern::Alt(bs) => bs.iter().any(|b| lang_member(b, t)),
        Pattern::Plus(c) => {
            if t.is_empty() {
                return lang_member(c, t);
            }
            repeat_member(c, t)
        }
        Pattern::Star(c) => t.is_empty() || repeat_member(c, t),
    }
}

/// t is a concatenation of one or more nonempty words of L(p).
fn repeat_member(p: &Pattern, t: &[char]) -> bool {
    (1..=t.len()).any(|k| lang_member(p, &t[..k]) && (k == t.len() || repeat_member(p, &t[k..])))
}

fn concat_member(cs: &[Pattern], t: &[char]) -> bool {
    match cs {
        [] => t.is_empty(),
        [only] => lang_member(only, t),
        [first, rest @ ..] => (0..=t.len()).any(|k| lang_member(first, &t[..k]) && concat_member(rest, &t[k..])),
    }
}

pub fn lang_match(p: &Pattern, t: &[char]) -> bool {
    (0..=t.len()).any(|i| (i..=t.len()).any(|j| lang_member(p, &t[i..j])))
}

pub fn lang_solve(p: &Pattern, t: &[char], prob: Problem) -> bool {
    match prob {
        Problem::Matching => lang_match(p, t),
        Problem::Membership => lang_member(p, t),
    }
}

/// Every pattern AST with exactly `size` nodes over `alphabet`.
pub fn patterns_of_size(size: usize, alphabet: &[char]) -> Vec<Pattern> {
    let mut table: Vec<Vec<Pattern>> = vec![Vec::new(); size + 1];
    for s in 1..=size {
        let mut out = Vec::new();
        if s == 1 {
            out.extend(alphabet.iter().map(|&c| Pattern::Symbol(c)));
        } else {
            for c in &table[s - 1] {
                out.push(Pattern::plus(c.clone()));
                out.push(Pattern::star(c.clone()));
            }
            for seq in sequences(s - 1, &table) {
                if seq.len() >= 2 {
                    out.push(Pattern::Concat(seq.clone()));
                }
                out.push(Pattern::Alt(seq));
            }
        }
        table[s] = out;
    }
    table.swap_remove(size)
}

/// Ordered child lists whose sizes sum to `total`.
fn sequences(total: usize, table: &[Vec<Pattern>]) -> Vec<Vec<Pattern>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for head in &table[first] {
            for mut tail in sequences(total - first, table) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
    }
    out
}

pub fn all_texts(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &layer {
            for &c in alphabet {
                let mut u: Vec<char> = t.clone();
                u.push(c);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn random_text(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> Vec<char> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

pub fn random_alphabet(rng: &mut ChaCha8Rng) -> Vec<char> {
    let k = rng.random_range(1..=4);
    ['a', 'b', 'c', 'd'][..k].to_vec()
}

/// One alternative of a `|∘|` pattern: positions of symbol sets.
pub fn random_set_word(rng: &mut ChaCha8Rng, alphabet: &[char], max_size: usize) -> Pattern {
    let mut items = Vec::new();
    let mut size = 0;
    let len = rng.random_range(1..=4);
    for _ in 0..len {
        let k = rng.random_range(1..=alphabet.len().min(3));
        let item = if k == 1 {
            Pattern::Symbol(*alphabet.choose(rng).unwrap())
        } else {
            let set: Vec<_> = alphabet.choose_multiple(rng, k).map(|&c| Pattern::Symbol(c)).collect();
            Pattern::Alt(set)
        };
        if size + item.size() + 1 > max_size && !items.is_empty() {
            break;
        }
        size += item.size();
        items.push(item);
    }
    Pattern::concat(items)
}

/// One alternative of a `|∘+` pattern: symbols and σ+.
pub fn random_plus_word(rng: &mut ChaCha8Rng, alphabet: &[char], max_size: usize) -> Pattern {
    let mut items = Vec::new();
    let mut size = 1;
    let len = rng.random_range(1..=5);
    for _ in 0..len {
        let c = Pattern::Symbol(*alphabet.choose(rng).unwrap());
        let item = if rng.random_bool(0.5) { Pattern::plus(c) } else { c };
        if size + item.size() > max_size && !items.is_empty() {
            break;
        }
        size += item.size();
        items.push(item);
    }
    Pattern::concat(items)
}

/// Kinds of instances the fast engine accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastKind {
    OrMatching,
    PlusMatching,
    OrMembership,
    PlusMembership,
}

impl FastKind {
    pub const ALL: [FastKind; 4] = [
        FastKind::OrMatching,
        FastKind::PlusMatching,
        FastKind::OrMembership,
        FastKind::PlusMembership,
    ];

    pub fn problem(self) -> Problem {
        match self {
            FastKind::OrMatching | FastKind::PlusMatching => Problem::Matching,
            _ => Problem::Membership,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FastKind::OrMatching => "|∘| matching",
            FastKind::PlusMatching => "|∘+ matching",
            FastKind::OrMembership => "+|∘| membership",
            FastKind::PlusMembership => "+|∘+ membership",
        }
    }
}

/// A word of L(alt) for alternatives produced by the generators above.
fn sample_word(rng: &mut ChaCha8Rng, alt: &Pattern, out: &mut Vec<char>) {
    match alt {
        Pattern::Symbol(c) => out.push(*c),
        Pattern::Concat(cs) => cs.iter().for_each(|c| sample_word(rng, c, out)),
        Pattern::Alt(bs) => {
            let b = rng.random_range(0..bs.len());
            sample_word(rng, &bs[b], out)
        }
        Pattern::Plus(c) => {
            for _ in 0..rng.random_range(1..=3) {
                sample_word(rng, c, out);
            }
        }
        Pattern::Star(c) => {
            for _ in 0..rng.random_range(0..=3) {
                sample_word(rng, c, out);
            }
        }
    }
}

/// Random (text, pattern) of the given kind: Σ ≤ 4, n ≤ 60, ≤ 8 alternatives
/// of size ≤ 12, total pattern size ≤ 50. Half the texts are built from the
/// alternatives (and sometimes perturbed) so both answers occur.
pub fn random_fast_instance(rng: &mut ChaCha8Rng, kind: FastKind) -> (Vec<char>, Pattern) {
    let alphabet = random_alphabet(rng);
    let k = rng.random_range(1..=8);
    let mut alts = Vec::new();
    let mut total = 2;
    for _ in 0..k {
        let alt = match kind {
            FastKind::OrMatching | FastKind::OrMembership => random_set_word(rng, &alphabet, 12),
            _ => random_plus_word(rng, &alphabet, 12),
        };
        if total + alt.size() > 49 && !alts.is_empty() {
            break;
        }
        total += alt.size();
        alts.push(alt);
    }
    let text = if rng.random_bool(0.5) {
        let max_len = if rng.random_bool(0.5) { 8 } else { 60 };
        random_text(rng, &alphabet, max_len)
    } else {
        let mut t = Vec::new();
        if kind.problem() == Problem::Matching {
            t.extend(random_text(rng, &alphabet, 10));
        }
        let pieces = rng.random_range(1..=6);
        for _ in 0..pieces {
            let alt = alts.choose(rng).unwrap().clone();
            sample_word(rng, &alt, &mut t);
            if t.len() > 50 {
                break;
            }
        }
        if kind.problem() == Problem::Matching {
            t.extend(random_text(rng, &alphabet, 10));
        }
        if !t.is_empty() && rng.random_bool(0.3) {
            let i = rng.random_range(0..t.len());
            t[i] = *alphabet.choose(rng).unwrap();
        }
        t.truncate(60);
        t
    };
    let body = Pattern::alt(alts);
    let pattern = match kind {
        FastKind::OrMembership | FastKind::PlusMembership => Pattern::plus(body),
        _ => body,
    };
    (text, pattern)
}
