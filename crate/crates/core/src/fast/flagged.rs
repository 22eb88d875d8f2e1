//! The flagged set M′ for alternatives of type `∘+`.
//!
//! Each alternative is reduced to its core: the first and last run lose
//! their Kleene Plus and keep their minimum count. A tuple (f, i, j, e)
//! records that t_i..t_j is matched by the core of an alternative whose
//! first/last run carried a Plus (f/e). The graph extends such a tuple
//! through the neighbouring text run when the flag is set.

use std::collections::{BTreeMap, BTreeSet};

use crate::nfa::Nfa;
use crate::ov::{batch_ov, BitVec};
use crate::pattern::{Pattern, Symbol};

use super::rle::{rle, rle_pattern, Rle, Run, RunKind};
use super::{FastConfig, FastError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlaggedMatch {
    pub first_plus: bool,
    pub i: usize,
    pub j: usize,
    pub last_plus: bool,
}

impl FlaggedMatch {
    pub fn tuple(&self) -> (u8, usize, usize, u8) {
        (self.first_plus as u8, self.i, self.j, self.last_plus as u8)
    }

    /// Widest interval reachable by extending through the runs of `t` that
    /// the flags allow.
    pub fn span(&self, t: &[Symbol]) -> (usize, usize) {
        let (mut i, mut j) = (self.i, self.j);
        if self.first_plus {
            while i > 1 && t[i - 2] == t[i - 1] {
                i -= 1;
            }
        }
        if self.last_plus {
            while j < t.len() && t[j] == t[j - 1] {
                j += 1;
            }
        }
        (i, j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlaggedMatchSet(pub BTreeSet<FlaggedMatch>);

impl FlaggedMatchSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FlaggedMatch> {
        self.0.iter()
    }
}

/// Core of an alternative: the first and last run become exact.
#[derive(Debug, Clone)]
pub(crate) struct Core {
    pub runs: Vec<Run>,
    pub first_plus: bool,
    pub last_plus: bool,
}

impl Core {
    pub fn new(p: &Rle) -> Core {
        let mut runs = p.runs.clone();
        let first_plus = runs.first().is_some_and(Run::is_plus);
        let last_plus = runs.last().is_some_and(Run::is_plus);
        if let Some(r) = runs.first_mut() {
            r.kind = RunKind::Exact;
        }
        if let Some(r) = runs.last_mut() {
            r.kind = RunKind::Exact;
        }
        Core {
            runs,
            first_plus,
            last_plus,
        }
    }

    fn pattern(&self) -> Pattern {
        Rle {
            runs: self.runs.clone(),
        }
        .to_pattern()
    }

    fn flagged(&self, i: usize, j: usize) -> FlaggedMatch {
        FlaggedMatch {
            first_plus: self.first_plus,
            i,
            j,
            last_plus: self.last_plus,
        }
    }

    /// Do the clipped runs of a substring match the core run by run?
    fn accepts_runs(&self, sub: &[(Symbol, usize)]) -> bool {
        self.runs.len() == sub.len()
            && self.runs.iter().zip(sub).all(|(r, &(c, l))| r.accepts(c, l))
    }
}

/// Text runs with their 1-based start positions.
struct TextRuns {
    runs: Vec<(Symbol, usize)>,
    starts: Vec<usize>,
}

impl TextRuns {
    fn new(t: &[Symbol]) -> TextRuns {
        let mut starts = Vec::new();
        let mut at = 1;
        let runs: Vec<_> = rle(t)
            .runs
            .into_iter()
            .map(|r| {
                starts.push(at);
                at += r.len;
                (r.symbol, r.len)
            })
            .collect();
        TextRuns { runs, starts }
    }

    /// Core placements whose text-run window starts at run `r0`.
    fn placements_at(&self, core: &Core, r0: usize, out: &mut BTreeSet<FlaggedMatch>) {
        let k = core.runs.len();
        if k == 1 {
            let (c, len) = self.runs[r0];
            let need = core.runs[0].len;
            if c == core.runs[0].symbol && len >= need {
                for s in self.starts[r0]..=self.starts[r0] + len - need {
                    out.insert(core.flagged(s, s + need - 1));
                }
            }
            return;
        }
        if r0 + k > self.runs.len() {
            return;
        }
        let first = core.runs[0];
        let last = core.runs[k - 1];
        let (c0, l0) = self.runs[r0];
        let (ck, lk) = self.runs[r0 + k - 1];
        if c0 != first.symbol || l0 < first.len || ck != last.symbol || lk < last.len {
            return;
        }
        let middle_ok = (1..k - 1).all(|x| {
            let (c, l) = self.runs[r0 + x];
            core.runs[x].accepts(c, l)
        });
        if middle_ok {
            let i = self.starts[r0] + l0 - first.len;
            let j = self.starts[r0 + k - 1] + last.len - 1;
            out.insert(core.flagged(i, j));
        }
    }
}

fn bin_width(alphabet_len: usize) -> usize {
    (usize::BITS - alphabet_len.saturating_sub(1).leading_zeros()).max(1) as usize
}

fn push_bits(bits: &mut Vec<bool>, code: usize, width: usize, negate: bool) {
    for b in (0..width).rev() {
        bits.push((code >> b & 1 == 1) != negate);
    }
}

fn push_repeat(bits: &mut Vec<bool>, b: bool, count: usize) {
    bits.extend(std::iter::repeat_n(b, count));
}

/// `(c, r) ↦ bin(c) ¬bin(c) 0^r 1^{F−r} 1^r 0^{F−r}`
fn encode_text_run(bits: &mut Vec<bool>, code: usize, width: usize, r: usize, big_f: usize) {
    push_bits(bits, code, width, false);
    push_bits(bits, code, width, true);
    push_repeat(bits, false, r);
    push_repeat(bits, true, big_f - r);
    push_repeat(bits, true, r);
    push_repeat(bits, false, big_f - r);
}

/// `(c, =r) ↦ ¬bin(c) bin(c) 1^r 0^{F−r} 0^r 1^{F−r}`,
/// `(c, ≥r) ↦ ¬bin(c) bin(c) 1^r 0^{F−r} 0^F`
fn encode_pattern_run(bits: &mut Vec<bool>, code: usize, width: usize, run: &Run, big_f: usize) {
    push_bits(bits, code, width, true);
    push_bits(bits, code, width, false);
    push_repeat(bits, true, run.len);
    push_repeat(bits, false, big_f - run.len);
    match run.kind {
        RunKind::Exact => {
            push_repeat(bits, false, run.len);
            push_repeat(bits, true, big_f - run.len);
        }
        RunKind::AtLeast => push_repeat(bits, false, big_f),
    }
}

/// Whether a text run (`symbol`, `len`) matches pattern run `y`, decided
/// through the orthogonality of their bit encodings with `F = f³`.
pub fn run_vec_orthogonal(x: (Symbol, usize), y: Run, f: usize) -> Result<bool, FastError> {
    let big_f = f.pow(3);
    for len in [x.1, y.len] {
        if len == 0 || len > big_f {
            return Err(FastError::RunLength { len, limit: big_f });
        }
    }
    let mut alphabet = vec![x.0, y.symbol];
    alphabet.sort_unstable();
    alphabet.dedup();
    let code = |c: Symbol| alphabet.binary_search(&c).unwrap();
    let width = bin_width(alphabet.len());
    let mut a = Vec::new();
    encode_text_run(&mut a, code(x.0), width, x.1, big_f);
    let mut b = Vec::new();
    encode_pattern_run(&mut b, code(y.symbol), width, &y, big_f);
    Ok(BitVec::from_bools(&a).orthogonal(&BitVec::from_bools(&b))?)
}

/// Compute M′ for the `∘+` alternatives `alts` over `t`.
pub fn compute_flagged_set(
    t: &[Symbol],
    alts: &[Pattern],
    cfg: &FastConfig,
) -> Result<FlaggedMatchSet, FastError> {
    let rles = alts.iter().map(rle_pattern).collect::<Result<Vec<_>, _>>()?;
    let m = alts.iter().map(Pattern::size).sum();
    flagged_set_runs(t, &rles, m, cfg)
}

fn baseline_into(t: &[Symbol], core: &Core, out: &mut BTreeSet<FlaggedMatch>) {
    for (i, j) in Nfa::compile(&core.pattern()).intervals(t) {
        out.insert(core.flagged(i, j));
    }
}

/// A substring of `t` with at most `f` runs, all shorter than `F`.
struct Substring {
    i: usize,
    j: usize,
    runs: Vec<(Symbol, usize)>,
}

fn short_substrings(t: &[Symbol], f: usize, big_f: usize) -> Vec<Substring> {
    let max_len = f.pow(4);
    let mut out = Vec::new();
    for i in 0..t.len() {
        let mut runs: Vec<(Symbol, usize)> = Vec::new();
        for j in i..t.len().min(i + max_len) {
            match runs.last_mut() {
                Some((c, l)) if *c == t[j] => *l += 1,
                _ => runs.push((t[j], 1)),
            }
            if runs.len() > f || runs.last().unwrap().1 >= big_f {
                break;
            }
            out.push(Substring {
                i: i + 1,
                j: j + 1,
                runs: runs.clone(),
            });
        }
    }
    out
}

pub(crate) fn flagged_set_runs(
    t: &[Symbol],
    patterns: &[Rle],
    m: usize,
    cfg: &FastConfig,
) -> Result<FlaggedMatchSet, FastError> {
    let n = t.len();
    let f = cfg.threshold(n, m);
    let big_f = f.pow(3);
    let mut out = BTreeSet::new();
    let mut groups: BTreeMap<(usize, bool, bool), Vec<Core>> = BTreeMap::new();
    for p in patterns {
        // anything whose shortest word exceeds the text matches nowhere
        if p.is_empty() || p.min_len() > n {
            continue;
        }
        let core = Core::new(p);
        if core.runs.len() <= f && core.runs.iter().all(|r| r.len < big_f) {
            groups
                .entry((core.runs.len(), core.first_plus, core.last_plus))
                .or_default()
                .push(core);
        } else {
            baseline_into(t, &core, &mut out);
        }
    }
    groups.retain(|_, g| {
        if g.len() == 1 {
            baseline_into(t, &g[0], &mut out);
            false
        } else {
            true
        }
    });
    if groups.is_empty() {
        return Ok(FlaggedMatchSet(out));
    }

    // placements touching a long text run, by exhaustive alignment
    let text_runs = TextRuns::new(t);
    for (r, &(_, len)) in text_runs.runs.iter().enumerate() {
        if len < big_f {
            continue;
        }
        for core in groups.values().flatten() {
            let k = core.runs.len();
            for r0 in r.saturating_sub(k - 1)..=r {
                text_runs.placements_at(core, r0, &mut out);
            }
        }
    }

    // everything else lies inside a short substring
    let mut alphabet: Vec<Symbol> = t.to_vec();
    alphabet.extend(groups.values().flatten().flat_map(|c| c.runs.iter().map(|r| r.symbol)));
    alphabet.sort_unstable();
    alphabet.dedup();
    let code = |c: Symbol| alphabet.binary_search(&c).unwrap();
    let width = bin_width(alphabet.len());
    let block = 2 * width + 2 * big_f;

    let subs = short_substrings(t, f, big_f);
    let mut by_runs: BTreeMap<usize, Vec<&Substring>> = BTreeMap::new();
    for s in &subs {
        by_runs.entry(s.runs.len()).or_default().push(s);
    }
    let mut text_vecs: BTreeMap<usize, Vec<BitVec>> = BTreeMap::new();
    for ((k, _, _), cores) in &groups {
        let Some(cands) = by_runs.get(k) else {
            continue;
        };
        let tv = text_vecs.entry(*k).or_insert_with(|| {
            cands
                .iter()
                .map(|s| {
                    let mut bits = Vec::with_capacity(f * block);
                    for &(c, r) in &s.runs {
                        encode_text_run(&mut bits, code(c), width, r, big_f);
                    }
                    push_repeat(&mut bits, true, (f - k) * block);
                    BitVec::from_bools(&bits)
                })
                .collect()
        });
        let pv: Vec<BitVec> = cores
            .iter()
            .map(|core| {
                let mut bits = Vec::with_capacity(f * block);
                for run in &core.runs {
                    encode_pattern_run(&mut bits, code(run.symbol), width, run, big_f);
                }
                push_repeat(&mut bits, false, (f - k) * block);
                BitVec::from_bools(&bits)
            })
            .collect();
        let hits = batch_ov(tv, &pv)?;
        for (s, hit) in cands.iter().zip(hits) {
            if hit {
                if let Some(core) = cores.iter().find(|c| c.accepts_runs(&s.runs)) {
                    out.insert(core.flagged(s.i, s.j));
                }
            }
        }
    }
    Ok(FlaggedMatchSet(out))
}
