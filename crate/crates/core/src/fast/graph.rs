//! Prefix graphs whose paths spell decompositions of the text.

use crate::pattern::Symbol;

use super::flagged::FlaggedMatchSet;
use super::matchset::MatchSet;

/// Directed graph over prefix nodes `v_i` (one version) or `v_i^0, v_i^1, v_i^2`
/// (three versions). Edges coming from matched substrings are marked.
#[derive(Debug, Clone)]
pub struct PrefixGraph {
    versions: usize,
    n: usize,
    adj: Vec<Vec<(u32, bool)>>,
}

impl PrefixGraph {
    fn new(n: usize, versions: usize) -> Self {
        PrefixGraph {
            versions,
            n,
            adj: vec![Vec::new(); (n + 1) * versions],
        }
    }

    /// Graph over `v_0..v_n` with an edge `v_{i−1} → v_j` per `(i, j) ∈ M`.
    pub fn from_match_set(n: usize, m: &MatchSet) -> Self {
        let mut g = PrefixGraph::new(n, 1);
        for &(i, j) in m.iter() {
            g.add((i - 1, 0), (j, 0), true);
        }
        g
    }

    /// Three-version graph for `∘+` alternatives.
    pub fn from_flagged_set(t: &[Symbol], m: &FlaggedMatchSet) -> Self {
        let n = t.len();
        let mut g = PrefixGraph::new(n, 3);
        let mut start = 0;
        while start < n {
            let mut end = start;
            while end + 1 < n && t[end + 1] == t[start] {
                end += 1;
            }
            // 1-based run from i = start + 1 to j = end + 1
            let (i, j) = (start + 1, end + 1);
            for k in i..j {
                g.add((k - 1, 1), (k, 1), false);
                g.add((k, 2), (k + 1, 2), false);
            }
            start = end + 1;
        }
        for i in 0..=n {
            g.add((i, 2), (i, 0), false);
            g.add((i, 0), (i, 1), false);
        }
        for x in m.iter() {
            let to = if x.last_plus { 2 } else { 0 };
            g.add((x.i - 1, x.first_plus as usize), (x.j, to), true);
        }
        g
    }

    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn versions(&self) -> usize {
        self.versions
    }

    fn id(&self, (i, v): (usize, usize)) -> usize {
        i * self.versions + v
    }

    fn add(&mut self, from: (usize, usize), to: (usize, usize), matched: bool) {
        let (a, b) = (self.id(from), self.id(to));
        self.adj[a].push((b as u32, matched));
    }

    pub fn has_edge(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        let b = self.id(to) as u32;
        self.adj[self.id(from)].iter().any(|&(x, _)| x == b)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Node `(i, version)` reachable from `from` by depth-first search.
    pub fn reachable(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        let (s, goal) = (self.id(from), self.id(to));
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            if x == goal {
                return true;
            }
            for &(y, _) in &self.adj[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y as usize);
                }
            }
        }
        false
    }

    /// Reachability along paths that use exactly one matched-substring edge.
    pub fn reachable_with_one_match(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        let size = self.adj.len();
        let (s, goal) = (self.id(from), self.id(to) + size);
        let mut seen = vec![false; 2 * size];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            if x == goal {
                return true;
            }
            let layer = x / size;
            for &(y, matched) in &self.adj[x % size] {
                let target = match (layer, matched) {
                    (0, true) => y as usize + size,
                    (1, true) => continue,
                    _ => y as usize + layer * size,
                };
                if !seen[target] {
                    seen[target] = true;
                    stack.push(target);
                }
            }
        }
        false
    }
}
