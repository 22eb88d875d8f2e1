//! Monotone De Morgan formulas and Formula-Pair instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pattern::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable {0} is used more than once")]
    DuplicateVariable(String),
    #[error("{side} variables must be numbered 1..={count}, {index} is out of range")]
    VariableGap { side: Side, index: usize, count: usize },
    #[error("assignment for side {side} has {got} bits, formula reads {want}")]
    Arity { side: Side, want: usize, got: usize },
    #[error("the {0} side of the instance has no assignments")]
    EmptySide(Side),
    #[error("no formula with {s} leaves has depth at most {depth_cap}")]
    Infeasible { s: usize, depth_cap: usize },
    #[error("instance file: {0}")]
    Instance(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Formula tree used for construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Reads variable `index` (1-based) of half-assignment `side`.
    Leaf(Side, usize),
}

impl Formula {
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn a(i: usize) -> Formula {
        Formula::Leaf(Side::A, i)
    }

    pub fn b(i: usize) -> Formula {
        Formula::Leaf(Side::B, i)
    }
}

pub type GateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And(GateId, GateId),
    Or(GateId, GateId),
    Leaf(Side, usize),
}

/// A validated formula stored in preorder; the gate at position `k` has ID `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneFormula {
    gates: Vec<Gate>,
    parent: Vec<Option<GateId>>,
    level: Vec<usize>,
    arity_a: usize,
    arity_b: usize,
}

/// Bits of one side's variables, `bits[i - 1]` for variable `i`.
pub type HalfAssignment = Vec<bool>;

impl MonotoneFormula {
    pub fn new(tree: &Formula) -> Result<Self, FormulaError> {
        let mut f = MonotoneFormula {
            gates: Vec::new(),
            parent: Vec::new(),
            level: Vec::new(),
            arity_a: 0,
            arity_b: 0,
        };
        f.push(tree, None, 0);
        for side in [Side::A, Side::B] {
            let mut seen: Vec<usize> = f.leaves(side).map(|(_, i)| i).collect();
            seen.sort_unstable();
            let count = seen.len();
            for (k, &i) in seen.iter().enumerate() {
                if k > 0 && seen[k - 1] == i {
                    let name = format!("{}{}", side.to_string().to_lowercase(), i);
                    return Err(FormulaError::DuplicateVariable(name));
                }
                if i == 0 || i > count {
                    return Err(FormulaError::VariableGap { side, index: i, count });
                }
            }
            match side {
                Side::A => f.arity_a = count,
                Side::B => f.arity_b = count,
            }
        }
        Ok(f)
    }

    fn push(&mut self, node: &Formula, parent: Option<GateId>, level: usize) -> GateId {
        let id = self.gates.len() + 1;
        self.gates.push(Gate::Leaf(Side::A, 0));
        self.parent.push(parent);
        self.level.push(level);
        let gate = match node {
            Formula::Leaf(side, i) => Gate::Leaf(*side, *i),
            Formula::And(l, r) => {
                let l = self.push(l, Some(id), level + 1);
                let r = self.push(r, Some(id), level + 1);
                Gate::And(l, r)
            }
            Formula::Or(l, r) => {
                let l = self.push(l, Some(id), level + 1);
                let r = self.push(r, Some(id), level + 1);
                Gate::Or(l, r)
            }
        };
        self.gates[id - 1] = gate;
        id
    }

    fn leaves(&self, side: Side) -> impl Iterator<Item = (GateId, usize)> + '_ {
        self.gates.iter().enumerate().filter_map(move |(k, g)| match g {
            Gate::Leaf(s, i) if *s == side => Some((k + 1, *i)),
            _ => None,
        })
    }

    pub fn root(&self) -> GateId {
        1
    }

    pub fn gate(&self, id: GateId) -> Gate {
        self.gates[id - 1]
    }

    /// IDs `1..=2s-1` in preorder.
    pub fn gate_ids(&self) -> std::ops::RangeInclusive<GateId> {
        1..=self.gates.len()
    }

    /// IDs ordered so every gate comes after its children.
    pub fn bottom_up(&self) -> impl Iterator<Item = GateId> {
        (1..=self.gates.len()).rev()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of leaves `s`.
    pub fn size(&self) -> usize {
        self.gates.len().div_ceil(2)
    }

    /// Longest root-to-leaf path, counted in edges.
    pub fn depth(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }

    pub fn gate_depth(&self, id: GateId) -> usize {
        self.level[id - 1]
    }

    pub fn parent(&self, id: GateId) -> Option<GateId> {
        self.parent[id - 1]
    }

    /// Gates from the root down to `id`, inclusive.
    pub fn path(&self, id: GateId) -> Vec<GateId> {
        let mut out = vec![id];
        let mut g = id;
        while let Some(p) = self.parent(g) {
            out.push(p);
            g = p;
        }
        out.reverse();
        out
    }

    /// All gates of the subformula rooted at `id`; preorder makes this a range.
    pub fn subtree(&self, id: GateId) -> std::ops::Range<GateId> {
        let mut end = id + 1;
        while end <= self.gates.len() && self.level[end - 1] > self.level[id - 1] {
            end += 1;
        }
        id..end
    }

    pub fn arity(&self, side: Side) -> usize {
        match side {
            Side::A => self.arity_a,
            Side::B => self.arity_b,
        }
    }

    /// Bits used per gate ID: ⌊log₂ s⌋ + 2.
    pub fn id_width(&self) -> usize {
        self.size().ilog2() as usize + 2
    }

    /// Zero-padded binary ID of `id` over the symbols `0` and `1`, most significant bit first.
    pub fn bin(&self, id: GateId) -> Vec<Symbol> {
        let w = self.id_width();
        (0..w)
            .rev()
            .map(|k| if id >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn eval(&self, a: &[bool], b: &[bool]) -> Result<bool, FormulaError> {
        self.check_arity(Side::A, a.len())?;
        self.check_arity(Side::B, b.len())?;
        Ok(self.eval_gate(self.root(), a, b))
    }

    pub fn check_arity(&self, side: Side, got: usize) -> Result<(), FormulaError> {
        let want = self.arity(side);
        if want != got {
            return Err(FormulaError::Arity { side, want, got });
        }
        Ok(())
    }

    /// Value of the subformula at `id`; assignments must have the right arity.
    pub fn eval_gate(&self, id: GateId, a: &[bool], b: &[bool]) -> bool {
        match self.gate(id) {
            Gate::Leaf(Side::A, i) => a[i - 1],
            Gate::Leaf(Side::B, i) => b[i - 1],
            Gate::And(l, r) => self.eval_gate(l, a, b) && self.eval_gate(r, a, b),
            Gate::Or(l, r) => self.eval_gate(l, a, b) || self.eval_gate(r, a, b),
        }
    }

    pub fn to_tree(&self) -> Formula {
        self.tree_at(self.root())
    }

    pub fn tree_at(&self, id: GateId) -> Formula {
        match self.gate(id) {
            Gate::Leaf(s, i) => Formula::Leaf(s, i),
            Gate::And(l, r) => Formula::and(self.tree_at(l), self.tree_at(r)),
            Gate::Or(l, r) => Formula::or(self.tree_at(l), self.tree_at(r)),
        }
    }

    /// The same formula with the two sides exchanged.
    pub fn swap_sides(&self) -> MonotoneFormula {
        let mut f = self.clone();
        for g in &mut f.gates {
            if let Gate::Leaf(s, _) = g {
                *s = s.other();
            }
        }
        std::mem::swap(&mut f.arity_a, &mut f.arity_b);
        f
    }

    pub fn parse(src: &str) -> Result<Self, FormulaError> {
        MonotoneFormula::new(&parse_formula(src)?)
    }

    pub fn render(&self) -> String {
        render_formula(&self.to_tree())
    }
}

impl fmt::Display for MonotoneFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for MonotoneFormula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MonotoneFormula::parse(s)
    }
}

// ---------------------------------------------------------------------------
// Text format

/// Parse `formula := leaf | "(" ("and"|"or") formula formula ")"`,
/// `leaf := ("a"|"b") positive-integer`.
pub fn parse_formula(src: &str) -> Result<Formula, FormulaError> {
    let tokens = tokenize(src);
    let mut pos = 0;
    let f = parse_node(&tokens, &mut pos, src.len())?;
    if let Some(&(off, tok)) = tokens.get(pos) {
        return Err(syntax(off, format!("unexpected {tok:?} after formula")));
    }
    Ok(f)
}

fn syntax(offset: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in src.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &src[s..i]));
            }
            if !c.is_whitespace() {
                out.push((i, &src[i..i + 1]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &src[s..]));
    }
    out
}

fn parse_node(tokens: &[(usize, &str)], pos: &mut usize, end: usize) -> Result<Formula, FormulaError> {
    let Some(&(off, tok)) = tokens.get(*pos) else {
        return Err(syntax(end, "expected a formula"));
    };
    *pos += 1;
    if tok == "(" {
        let Some(&(op_off, op)) = tokens.get(*pos) else {
            return Err(syntax(end, "expected `and` or `or`"));
        };
        *pos += 1;
        let l = parse_node(tokens, pos, end)?;
        let r = parse_node(tokens, pos, end)?;
        match tokens.get(*pos) {
            Some(&(_, ")")) => *pos += 1,
            Some(&(o, t)) => return Err(syntax(o, format!("expected `)`, found {t:?}"))),
            None => return Err(syntax(end, "expected `)`")),
        }
        return match op {
            "and" => Ok(Formula::and(l, r)),
            "or" => Ok(Formula::or(l, r)),
            _ => Err(syntax(op_off, format!("unknown gate {op:?}"))),
        };
    }
    let side = match tok.as_bytes()[0] {
        b'a' => Side::A,
        b'b' => Side::B,
        _ => return Err(syntax(off, format!("expected a leaf or `(`, found {tok:?}"))),
    };
    let digits = &tok[1..];
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(syntax(off, format!("bad leaf {tok:?}")));
    }
    match digits.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(Formula::Leaf(side, i)),
        _ => Err(syntax(off, format!("leaf index must be a positive integer: {tok:?}"))),
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_into(f, &mut out);
    out
}

fn render_into(f: &Formula, out: &mut String) {
    match f {
        Formula::Leaf(Side::A, i) => out.push_str(&format!("a{i}")),
        Formula::Leaf(Side::B, i) => out.push_str(&format!("b{i}")),
        Formula::And(l, r) | Formula::Or(l, r) => {
            out.push_str(if matches!(f, Formula::And(..)) { "(and " } else { "(or " });
            render_into(l, out);
            out.push(' ');
            render_into(r, out);
            out.push(')');
        }
    }
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaPairInstance {
    pub formula: MonotoneFormula,
    pub a: Vec<HalfAssignment>,
    pub b: Vec<HalfAssignment>,
}

impl FormulaPairInstance {
    pub fn new(
        formula: MonotoneFormula,
        a: Vec<HalfAssignment>,
        b: Vec<HalfAssignment>,
    ) -> Result<Self, FormulaError> {
        let inst = FormulaPairInstance { formula, a, b };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), FormulaError> {
        for (side, set) in [(Side::A, &self.a), (Side::B, &self.b)] {
            if set.is_empty() {
                return Err(FormulaError::EmptySide(side));
            }
            for x in set {
                self.formula.check_arity(side, x.len())?;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Exchange the roles of A and B; `F'(b, a) = F(a, b)`.
    pub fn swapped(&self) -> FormulaPairInstance {
        FormulaPairInstance {
            formula: self.formula.swap_sides(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// Instance file: `F <formula>`, then `A <bits>` lines, then `B <bits>` lines.
    /// An assignment of a side without variables is written as `A -`.
    pub fn render(&self) -> String {
        let mut out = format!("F {}\n", self.formula);
        for (tag, set) in [("A", &self.a), ("B", &self.b)] {
            for x in set {
                out.push_str(tag);
                out.push(' ');
                if x.is_empty() {
                    out.push('-');
                }
                out.extend(x.iter().map(|&v| if v { '1' } else { '0' }));
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(src: &str) -> Result<Self, FormulaError> {
        let bad = |line: usize, msg: &str| FormulaError::Instance(format!("line {line}: {msg}"));
        let mut formula = None;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (k, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (tag, rest) = line.split_at(1);
            let rest = rest.trim();
            match tag {
                "F" if formula.is_none() => formula = Some(MonotoneFormula::parse(rest)?),
                "F" => return Err(bad(k + 1, "second formula line")),
                "A" | "B" => {
                    if formula.is_none() {
                        return Err(bad(k + 1, "assignment before the formula line"));
                    }
                    if tag == "A" && !b.is_empty() {
                        return Err(bad(k + 1, "A line after B lines"));
                    }
                    let bits = parse_bits(rest).ok_or_else(|| bad(k + 1, "bad bit string"))?;
                    if tag == "A" { &mut a } else { &mut b }.push(bits);
                }
                _ => return Err(bad(k + 1, "expected F, A or B")),
            }
        }
        let formula = formula.ok_or_else(|| FormulaError::Instance("missing F line".into()))?;
        FormulaPairInstance::new(formula, a, b)
    }
}

fn parse_bits(s: &str) -> Option<HalfAssignment> {
    if s == "-" {
        return Some(Vec::new());
    }
    if s.is_empty() {
        return None;
    }
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Lexicographically first 1-based `(k, l)` with `F(a_k, b_l)` true.
pub fn brute_force_pair(inst: &FormulaPairInstance) -> Option<(usize, usize)> {
    for (k, a) in inst.a.iter().enumerate() {
        for (l, b) in inst.b.iter().enumerate() {
            if inst.formula.eval_gate(inst.formula.root(), a, b) {
                return Some((k + 1, l + 1));
            }
        }
    }
    None
}

/// Random formula with `s` leaves and depth at most `depth_cap`, leaves
/// alternating between the sides, plus `n` and `m` random assignments.
pub fn random_instance(
    s: usize,
    depth_cap: usize,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<FormulaPairInstance, FormulaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formula = random_formula(s, depth_cap, &mut rng)?;
    let mut set = |side: Side, count: usize| -> Vec<HalfAssignment> {
        (0..count)
            .map(|_| (0..formula.arity(side)).map(|_| rng.random()).collect())
            .collect()
    };
    let a = set(Side::A, n);
    let b = set(Side::B, m);
    FormulaPairInstance::new(formula, a, b)
}

pub fn random_formula(
    s: usize,
    depth_cap: usize,
    rng: &mut impl Rng,
) -> Result<MonotoneFormula, FormulaError> {
    let fits = s >= 1 && (depth_cap >= usize::BITS as usize || s <= 1usize << depth_cap);
    if !fits {
        return Err(FormulaError::Infeasible { s, depth_cap });
    }
    let sides: Vec<Side> = (0..s).map(|k| if k % 2 == 0 { Side::A } else { Side::B }).collect();
    let mut idx_a: Vec<usize> = (1..=s.div_ceil(2)).collect();
    let mut idx_b: Vec<usize> = (1..=s / 2).collect();
    idx_a.shuffle(rng);
    idx_b.shuffle(rng);
    let mut leaves = sides.into_iter().map(|side| {
        let i = match side {
            Side::A => idx_a.pop(),
            Side::B => idx_b.pop(),
        };
        Formula::Leaf(side, i.expect("one index per leaf"))
    });
    let tree = random_shape(s, depth_cap, rng, &mut leaves);
    MonotoneFormula::new(&tree)
}

fn random_shape(
    s: usize,
    cap: usize,
    rng: &mut impl Rng,
    leaves: &mut impl Iterator<Item = Formula>,
) -> Formula {
    if s == 1 {
        return leaves.next().expect("enough leaves");
    }
    let half = if cap - 1 >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1usize << (cap - 1)
    };
    let lo = s.saturating_sub(half).max(1);
    let hi = (s - 1).min(half);
    let k = rng.random_range(lo..=hi);
    let l = random_shape(k, cap - 1, rng, leaves);
    let r = random_shape(s - k, cap - 1, rng, leaves);
    if rng.random() {
        Formula::and(l, r)
    } else {
        Formula::or(l, r)
    }
}
