//! Thompson NFA compiled from a [`Pattern`] and simulated over state sets.
//!
//! Every symbol transition goes from a state `s` to `s + 1`, so a state set
//! step is "select states labelled with the symbol, shift by one, close under
//! ε". Small automata precompute the ε-closure of every state as a bit
//! matrix; large ones close on the fly with a generation-stamped DFS.

use crate::pattern::{Pattern, Symbol};

/// Automata with at most this many states use the closure matrix.
pub const DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone)]
pub struct Nfa {
    /// `label[s] = Some(c)` iff `s --c--> s + 1`.
    label: Vec<Option<Symbol>>,
    eps: Vec<Vec<u32>>,
    start: u32,
    accept: u32,
    dense: Option<Dense>,
}

#[derive(Debug, Clone)]
struct Dense {
    words: usize,
    /// Row `s` is the ε-closure of `s`.
    closure: Vec<u64>,
    /// Per distinct symbol, the set of states labelled with it.
    masks: Vec<(Symbol, Vec<u64>)>,
}

struct Builder {
    label: Vec<Option<Symbol>>,
    eps: Vec<Vec<u32>>,
}

impl Builder {
    fn state(&mut self) -> u32 {
        self.label.push(None);
        self.eps.push(Vec::new());
        (self.label.len() - 1) as u32
    }

    fn edge(&mut self, from: u32, to: u32) {
        self.eps[from as usize].push(to);
    }

    /// Returns the (entry, exit) states of the fragment for `p`.
    fn build(&mut self, p: &Pattern) -> (u32, u32) {
        match p {
            Pattern::Symbol(c) => {
                let s = self.state();
                let e = self.state();
                self.label[s as usize] = Some(*c);
                (s, e)
            }
            Pattern::Concat(cs) => {
                let (s, mut e) = self.build(&cs[0]);
                for c in &cs[1..] {
                    let (cs_, ce) = self.build(c);
                    self.edge(e, cs_);
                    e = ce;
                }
                (s, e)
            }
            Pattern::Alt(bs) => {
                let s = self.state();
                let e = self.state();
                for b in bs {
                    let (bs_, be) = self.build(b);
                    self.edge(s, bs_);
                    self.edge(be, e);
                }
                (s, e)
            }
            Pattern::Plus(c) => {
                let (s, e) = self.build(c);
                self.edge(e, s);
                (s, e)
            }
            Pattern::Star(c) => {
                let s = self.state();
                let e = self.state();
                let (cs_, ce) = self.build(c);
                self.edge(s, cs_);
                self.edge(s, e);
                self.edge(ce, cs_);
                self.edge(ce, e);
                (s, e)
            }
        }
    }
}

/// Reusable simulation state; one per thread.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    cur: Vec<u64>,
    next: Vec<u64>,
    cur_list: Vec<u32>,
    next_list: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    stack: Vec<u32>,
    /// Number of (position, state) configurations touched.
    pub visited: u64,
}

impl Nfa {
    pub fn compile(p: &Pattern) -> Nfa {
        Self::compile_with_limit(p, DENSE_LIMIT)
    }

    /// Compile, using the closure matrix only if the state count is at most `dense_limit`.
    pub fn compile_with_limit(p: &Pattern, dense_limit: usize) -> Nfa {
        let mut b = Builder {
            label: Vec::new(),
            eps: Vec::new(),
        };
        let (start, accept) = b.build(p);
        let mut nfa = Nfa {
            label: b.label,
            eps: b.eps,
            start,
            accept,
            dense: None,
        };
        if nfa.states() <= dense_limit {
            nfa.dense = Some(nfa.build_dense());
        }
        nfa
    }

    pub fn states(&self) -> usize {
        self.label.len()
    }

    pub fn start(&self) -> usize {
        self.start as usize
    }

    pub fn accept(&self) -> usize {
        self.accept as usize
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    fn build_dense(&self) -> Dense {
        let n = self.states();
        let words = n.div_ceil(64);
        let mut closure = vec![0u64; n * words];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut closure[s * words..(s + 1) * words];
            row[s / 64] |= 1 << (s % 64);
            stack.push(s as u32);
            while let Some(x) = stack.pop() {
                for &y in &self.eps[x as usize] {
                    let y = y as usize;
                    if row[y / 64] >> (y % 64) & 1 == 0 {
                        row[y / 64] |= 1 << (y % 64);
                        stack.push(y as u32);
                    }
                }
            }
        }
        let mut masks: Vec<(Symbol, Vec<u64>)> = Vec::new();
        for (s, l) in self.label.iter().enumerate() {
            if let Some(c) = l {
                let idx = match masks.iter().position(|(d, _)| d == c) {
                    Some(i) => i,
                    None => {
                        masks.push((*c, vec![0; words]));
                        masks.len() - 1
                    }
                };
                masks[idx].1[s / 64] |= 1 << (s % 64);
            }
        }
        Dense {
            words,
            closure,
            masks,
        }
    }

    fn reset(&self, sc: &mut Scratch) {
        sc.visited = 0;
        match &self.dense {
            Some(d) => {
                sc.cur.clear();
                sc.cur.resize(d.words, 0);
                sc.next.clear();
                sc.next.resize(d.words, 0);
            }
            None => {
                sc.cur_list.clear();
                sc.next_list.clear();
                if sc.stamp.len() != self.states() {
                    sc.stamp.clear();
                    sc.stamp.resize(self.states(), 0);
                    sc.generation = 0;
                }
                self.bump_generation(sc);
            }
        }
    }

    fn bump_generation(&self, sc: &mut Scratch) {
        sc.generation = sc.generation.wrapping_add(1);
        if sc.generation == 0 {
            sc.stamp.iter_mut().for_each(|x| *x = 0);
            sc.generation = 1;
        }
    }

    /// Add the ε-closure of `s` to the current set (sparse mode: the `next` list under construction).
    fn add_closure_sparse(&self, s: u32, sc: &mut Scratch) {
        if sc.stamp[s as usize] == sc.generation {
            return;
        }
        sc.stamp[s as usize] = sc.generation;
        sc.stack.push(s);
        while let Some(x) = sc.stack.pop() {
            sc.next_list.push(x);
            for &y in &self.eps[x as usize] {
                if sc.stamp[y as usize] != sc.generation {
                    sc.stamp[y as usize] = sc.generation;
                    sc.stack.push(y);
                }
            }
        }
    }

    /// Put the start closure into the current set.
    fn seed_start(&self, sc: &mut Scratch) {
        match &self.dense {
            Some(d) => {
                let row = &d.closure[self.start as usize * d.words..][..d.words];
                sc.cur.iter_mut().zip(row).for_each(|(a, b)| *a |= b);
            }
            None => {
                // the current list doubles as the set under construction here
                std::mem::swap(&mut sc.cur_list, &mut sc.next_list);
                self.add_closure_sparse(self.start, sc);
                std::mem::swap(&mut sc.cur_list, &mut sc.next_list);
            }
        }
    }

    /// Advance the current set by symbol `c`; returns whether it stays nonempty.
    fn step(&self, c: Symbol, sc: &mut Scratch) -> bool {
        match &self.dense {
            Some(d) => {
                sc.next.iter_mut().for_each(|x| *x = 0);
                let mut any = false;
                if let Some((_, mask)) = d.masks.iter().find(|(s, _)| *s == c) {
                    for w in 0..d.words {
                        let mut bits = sc.cur[w] & mask[w];
                        while bits != 0 {
                            let s = w * 64 + bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            let row = &d.closure[(s + 1) * d.words..][..d.words];
                            sc.next.iter_mut().zip(row).for_each(|(a, b)| *a |= b);
                            any = true;
                            sc.visited += 1;
                        }
                    }
                }
                std::mem::swap(&mut sc.cur, &mut sc.next);
                any
            }
            None => {
                self.bump_generation(sc);
                sc.next_list.clear();
                let cur = std::mem::take(&mut sc.cur_list);
                for &s in &cur {
                    sc.visited += 1;
                    if self.label[s as usize] == Some(c) {
                        self.add_closure_sparse(s + 1, sc);
                    }
                }
                sc.cur_list = cur;
                std::mem::swap(&mut sc.cur_list, &mut sc.next_list);
                !sc.cur_list.is_empty()
            }
        }
    }

    fn accepting(&self, sc: &Scratch) -> bool {
        let a = self.accept as usize;
        match &self.dense {
            Some(_) => sc.cur[a / 64] >> (a % 64) & 1 == 1,
            None => sc.stamp[a] == sc.generation,
        }
    }

    fn cost_check(&self, sc: &Scratch, steps: usize) {
        debug_assert!(
            sc.visited <= (steps as u64 + 1) * self.states() as u64,
            "simulation visited {} configurations for {} steps over {} states",
            sc.visited,
            steps,
            self.states()
        );
    }

    /// Whole-text membership.
    pub fn accepts_with(&self, t: &[Symbol], sc: &mut Scratch) -> bool {
        self.reset(sc);
        self.seed_start(sc);
        for &c in t {
            if !self.step(c, sc) {
                self.cost_check(sc, t.len());
                return false;
            }
        }
        self.cost_check(sc, t.len());
        self.accepting(sc)
    }

    pub fn accepts(&self, t: &[Symbol]) -> bool {
        self.accepts_with(t, &mut Scratch::default())
    }

    /// Whether some substring (possibly empty) of `t` is accepted.
    pub fn matches_with(&self, t: &[Symbol], sc: &mut Scratch) -> bool {
        self.reset(sc);
        self.seed_start(sc);
        if self.accepting(sc) {
            return true;
        }
        for &c in t {
            self.step(c, sc);
            self.seed_start(sc);
            if self.accepting(sc) {
                self.cost_check(sc, t.len());
                return true;
            }
        }
        self.cost_check(sc, t.len());
        false
    }

    pub fn matches(&self, t: &[Symbol]) -> bool {
        self.matches_with(t, &mut Scratch::default())
    }

    /// All nonempty accepted substrings as 1-based closed intervals, sorted.
    pub fn intervals_with(&self, t: &[Symbol], sc: &mut Scratch) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..t.len() {
            self.reset(sc);
            self.seed_start(sc);
            for (j, &c) in t.iter().enumerate().skip(i) {
                if !self.step(c, sc) {
                    break;
                }
                if self.accepting(sc) {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn intervals(&self, t: &[Symbol]) -> Vec<(usize, usize)> {
        self.intervals_with(t, &mut Scratch::default())
    }

    /// Intervals starting at 1-based position `i`, ending no later than `max_j`.
    pub fn intervals_from(
        &self,
        t: &[Symbol],
        i: usize,
        max_j: usize,
        sc: &mut Scratch,
        out: &mut Vec<usize>,
    ) {
        self.reset(sc);
        self.seed_start(sc);
        for j in i..=max_j.min(t.len()) {
            if !self.step(t[j - 1], sc) {
                break;
            }
            if self.accepting(sc) {
                out.push(j);
            }
        }
    }
}

/// Is `t` in L(p)?
pub fn nfa_member(t: &[Symbol], p: &Pattern) -> bool {
    Nfa::compile(p).accepts(t)
}

/// Is some substring of `t` in L(p)? True for every text when ε ∈ L(p).
pub fn nfa_match(t: &[Symbol], p: &Pattern) -> bool {
    Nfa::compile(p).matches(t)
}

/// All 1-based closed intervals (i, j) with t_i..t_j ∈ L(p).
pub fn match_intervals(t: &[Symbol], p: &Pattern) -> Vec<(usize, usize)> {
    Nfa::compile(p).intervals(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn member(t: &str, p: &str) -> bool {
        nfa_member(&chars(t), &parse_pattern(p).unwrap())
    }

    #[test]
    fn symbol_automaton() {
        let nfa = Nfa::compile(&Pattern::sym('a'));
        assert_eq!(nfa.states(), 2);
        assert!(nfa.accepts(&chars("a")));
        assert!(!nfa.accepts(&chars("")));
        assert!(!nfa.accepts(&chars("aa")));
    }

    #[test]
    fn star_and_plus_on_empty() {
        assert!(member("", "a*"));
        assert!(!member("", "a+"));
        assert!(member("aa", "a+"));
        assert!(member("aa", "(a*)+"));
        assert!(member("", "(a*)+"));
    }

    #[test]
    fn input_gate_examples() {
        assert!(member("011", "0+11+"));
        assert!(!member("001", "0+11+"));
        assert!(nfa_match(&chars("0011"), &parse_pattern("0+11+").unwrap()));
        assert!(member("aaaabccba", "(a+|a+b|bc+|cba|b+a)+"));
    }

    #[test]
    fn interval_examples() {
        let p = parse_pattern("01").unwrap();
        assert_eq!(match_intervals(&chars("0011"), &p), vec![(2, 3)]);
        let z = parse_pattern("0").unwrap();
        assert_eq!(
            match_intervals(&chars("00000"), &z),
            (1..=5).map(|i| (i, i)).collect::<Vec<_>>()
        );
        assert!(match_intervals(&chars("111"), &z).is_empty());
        assert!(nfa_match(&chars("xxabyy"), &parse_pattern("ab").unwrap()));
    }

    #[test]
    fn sparse_mode_agrees_on_examples() {
        for (t, p) in [("aaaabccba", "(a+|a+b|bc+|cba|b+a)+"), ("0011", "0+11+"), ("ab", "(a*b*)*")] {
            let p = parse_pattern(p).unwrap();
            let dense = Nfa::compile(&p);
            let sparse = Nfa::compile_with_limit(&p, 0);
            assert!(dense.is_dense() && !sparse.is_dense());
            let t = chars(t);
            assert_eq!(dense.accepts(&t), sparse.accepts(&t));
            assert_eq!(dense.matches(&t), sparse.matches(&t));
            assert_eq!(dense.intervals(&t), sparse.intervals(&t));
        }
    }
}
