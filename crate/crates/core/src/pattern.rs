//! Pattern AST, the textual pattern grammar, homogeneity classification and
//! the type-simplification rewrite system.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! alt     := concat ('|' concat)* ['|']      trailing '|' marks an explicit (possibly unary) alternative
//! concat  := postfix+
//! postfix := atom ('+' | '*')*
//! atom    := '(' alt ')' | '\' any-char | symbol
//! ```
//!
//! A symbol is any character except `( ) | + * \` and whitespace.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::Problem;

/// A single pattern symbol.
pub type Symbol = char;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("empty pattern")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid type string: {0}")]
    InvalidType(String),
}

/// Rooted parse tree of a regular expression over `∘ | + ⋆`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Symbol(Symbol),
    /// At least two children.
    Concat(Vec<Pattern>),
    /// At least one child; a single child is an explicit unary alternative.
    Alt(Vec<Pattern>),
    Plus(Box<Pattern>),
    Star(Box<Pattern>),
}

impl Pattern {
    pub fn sym(c: Symbol) -> Self {
        Pattern::Symbol(c)
    }

    pub fn plus(p: Pattern) -> Self {
        Pattern::Plus(Box::new(p))
    }

    pub fn star(p: Pattern) -> Self {
        Pattern::Star(Box::new(p))
    }

    /// Concatenation that collapses a single item into itself.
    ///
    /// Panics on an empty item list.
    pub fn concat(mut items: Vec<Pattern>) -> Self {
        assert!(!items.is_empty(), "concatenation needs at least one item");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Pattern::Concat(items)
        }
    }

    /// Alternative over `branches`; a single branch stays an explicit unary `Alt`.
    pub fn alt(branches: Vec<Pattern>) -> Self {
        assert!(!branches.is_empty(), "alternative needs at least one branch");
        Pattern::Alt(branches)
    }

    /// Concatenation of the symbols of `word`.
    pub fn word(word: &[Symbol]) -> Self {
        Pattern::concat(word.iter().copied().map(Pattern::Symbol).collect())
    }

    pub fn op(&self) -> Option<Op> {
        match self {
            Pattern::Symbol(_) => None,
            Pattern::Concat(_) => Some(Op::Concat),
            Pattern::Alt(_) => Some(Op::Alt),
            Pattern::Plus(_) => Some(Op::Plus),
            Pattern::Star(_) => Some(Op::Star),
        }
    }

    pub fn children(&self) -> &[Pattern] {
        match self {
            Pattern::Symbol(_) => &[],
            Pattern::Concat(c) | Pattern::Alt(c) => c,
            Pattern::Plus(c) | Pattern::Star(c) => std::slice::from_ref(c.as_ref()),
        }
    }

    /// Number of inner nodes plus number of leaves.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Pattern::size).sum::<usize>()
    }

    /// Maximum number of operations on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Pattern::Symbol(_) => 0,
            _ => 1 + self.children().iter().map(Pattern::depth).max().unwrap_or(0),
        }
    }

    /// All symbols occurring in the pattern.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Pattern::Symbol(c) => {
                out.insert(*c);
            }
            _ => self.children().iter().for_each(|c| c.collect_symbols(out)),
        }
    }

    /// Replace every symbol through `f`, keeping the tree shape.
    pub fn map_symbols(&self, f: &impl Fn(Symbol) -> Symbol) -> Pattern {
        match self {
            Pattern::Symbol(c) => Pattern::Symbol(f(*c)),
            Pattern::Concat(cs) => Pattern::Concat(cs.iter().map(|c| c.map_symbols(f)).collect()),
            Pattern::Alt(cs) => Pattern::Alt(cs.iter().map(|c| c.map_symbols(f)).collect()),
            Pattern::Plus(c) => Pattern::plus(c.map_symbols(f)),
            Pattern::Star(c) => Pattern::star(c.map_symbols(f)),
        }
    }

    /// Whether the empty word is in the language.
    pub fn nullable(&self) -> bool {
        match self {
            Pattern::Symbol(_) => false,
            Pattern::Concat(cs) => cs.iter().all(Pattern::nullable),
            Pattern::Alt(cs) => cs.iter().any(Pattern::nullable),
            Pattern::Plus(c) => c.nullable(),
            Pattern::Star(_) => true,
        }
    }

    pub fn parse(src: &str) -> Result<Pattern, PatternError> {
        parse_pattern(src)
    }

    pub fn render(&self) -> String {
        render_pattern(self)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_pattern(self))
    }
}

impl std::str::FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_special(c: char) -> bool {
    matches!(c, '(' | ')' | '|' | '+' | '*' | '\\') || c.is_whitespace()
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, PatternError> {
        Err(PatternError::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> char {
        let c = self.src[self.pos..].chars().next().unwrap();
        self.pos += c.len_utf8();
        c
    }

    fn alt(&mut self) -> Result<Pattern, PatternError> {
        let mut branches = vec![self.concat()?];
        let mut explicit = false;
        while self.peek() == Some('|') {
            self.bump();
            match self.peek() {
                None | Some(')') => {
                    explicit = true;
                    break;
                }
                _ => branches.push(self.concat()?),
            }
        }
        if branches.len() == 1 && !explicit {
            Ok(branches.pop().unwrap())
        } else {
            Ok(Pattern::Alt(branches))
        }
    }

    fn concat(&mut self) -> Result<Pattern, PatternError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.postfix()?);
        }
        if items.is_empty() {
            let at = self.pos;
            return self.err(at, "empty alternative branch");
        }
        Ok(Pattern::concat(items))
    }

    fn postfix(&mut self) -> Result<Pattern, PatternError> {
        let mut atom = self.atom()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    atom = Pattern::plus(atom);
                }
                Some('*') => {
                    self.bump();
                    atom = Pattern::star(atom);
                }
                _ => return Ok(atom),
            }
        }
    }

    fn atom(&mut self) -> Result<Pattern, PatternError> {
        let start = self.pos;
        match self.bump() {
            '(' => {
                if self.peek() == Some(')') {
                    return self.err(start, "empty group");
                }
                let inner = self.alt()?;
                if self.peek() != Some(')') {
                    let at = self.pos;
                    return self.err(at, "expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            '\\' => match self.src[self.pos..].chars().next() {
                Some(c) => {
                    self.pos += c.len_utf8();
                    Ok(Pattern::Symbol(c))
                }
                None => self.err(start, "dangling escape"),
            },
            c @ ('+' | '*') => self.err(start, format!("'{c}' without operand")),
            c => Ok(Pattern::Symbol(c)),
        }
    }
}

/// Parse the textual pattern grammar into an AST.
pub fn parse_pattern(src: &str) -> Result<Pattern, PatternError> {
    let mut parser = Parser { src, pos: 0 };
    if parser.peek().is_none() {
        return Err(PatternError::Empty);
    }
    let p = parser.alt()?;
    if parser.peek().is_some() {
        let at = parser.pos;
        return parser.err(at, "unbalanced ')'");
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Rendering

/// Render an AST back into the pattern grammar; `parse_pattern` inverts this.
pub fn render_pattern(p: &Pattern) -> String {
    let mut out = String::with_capacity(p.size());
    render_into(p, &mut out);
    out
}

fn render_symbol(c: Symbol, out: &mut String) {
    if is_special(c) {
        out.push('\\');
    }
    out.push(c);
}

fn render_grouped(p: &Pattern, out: &mut String) {
    match p {
        Pattern::Alt(bs) if bs.len() == 1 => render_into(p, out),
        Pattern::Alt(_) | Pattern::Concat(_) => {
            out.push('(');
            render_into(p, out);
            out.push(')');
        }
        _ => render_into(p, out),
    }
}

fn render_into(p: &Pattern, out: &mut String) {
    match p {
        Pattern::Symbol(c) => render_symbol(*c, out),
        Pattern::Concat(cs) => cs.iter().for_each(|c| render_grouped(c, out)),
        Pattern::Alt(bs) if bs.len() == 1 => {
            out.push('(');
            render_alt_branch(&bs[0], out);
            out.push_str("|)");
        }
        Pattern::Alt(bs) => {
            for (k, b) in bs.iter().enumerate() {
                if k > 0 {
                    out.push('|');
                }
                render_alt_branch(b, out);
            }
        }
        Pattern::Plus(c) => {
            render_grouped(c, out);
            out.push('+');
        }
        Pattern::Star(c) => {
            render_grouped(c, out);
            out.push('*');
        }
    }
}

fn render_alt_branch(b: &Pattern, out: &mut String) {
    match b {
        Pattern::Alt(bs) if bs.len() > 1 => {
            out.push('(');
            render_into(b, out);
            out.push(')');
        }
        _ => render_into(b, out),
    }
}

// ---------------------------------------------------------------------------
// Types

/// One operation of a type string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Concat,
    Alt,
    Plus,
    Star,
}

impl Op {
    pub fn glyph(self) -> char {
        match self {
            Op::Concat => '∘',
            Op::Alt => '|',
            Op::Plus => '+',
            Op::Star => '⋆',
        }
    }

    /// ASCII code used in file formats and CLI flags.
    pub fn ascii(self) -> char {
        match self {
            Op::Concat => 'c',
            Op::Alt => 'o',
            Op::Plus => 'p',
            Op::Star => 's',
        }
    }

    fn from_char(c: char) -> Option<Op> {
        match c {
            '∘' | 'c' | '.' => Some(Op::Concat),
            '|' | 'o' => Some(Op::Alt),
            '+' | 'p' => Some(Op::Plus),
            '⋆' | '*' | 's' => Some(Op::Star),
            _ => None,
        }
    }
}

/// Sequence of operations from the root to the deepest leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TypeString(pub Vec<Op>);

impl TypeString {
    pub fn new(ops: Vec<Op>) -> Self {
        TypeString(ops)
    }

    /// Accepts the glyph form (`+∘|∘`) and the ASCII form (`pcoc`).
    pub fn parse(s: &str) -> Result<Self, PatternError> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Op::from_char(c).ok_or_else(|| PatternError::InvalidType(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(TypeString)
    }

    pub fn ops(&self) -> &[Op] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_ascii(&self) -> String {
        self.0.iter().map(|o| o.ascii()).collect()
    }
}

impl fmt::Display for TypeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|o| write!(f, "{}", o.glyph()))
    }
}

impl std::str::FromStr for TypeString {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TypeString::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub homogeneous: bool,
    /// Per-level operations; for non-homogeneous patterns the operation of the
    /// first inner node on each level.
    pub type_string: TypeString,
    pub depth: usize,
    pub size: usize,
}

/// Level-wise homogeneity scan.
pub fn classify(p: &Pattern) -> Classification {
    let mut level: Vec<&Pattern> = vec![p];
    let mut ops = Vec::new();
    let mut homogeneous = true;
    let mut size = 0;
    while !level.is_empty() {
        size += level.len();
        let mut level_op = None;
        let mut next = Vec::new();
        for node in &level {
            if let Some(op) = node.op() {
                match level_op {
                    None => level_op = Some(op),
                    Some(o) if o != op => homogeneous = false,
                    _ => {}
                }
                next.extend(node.children());
            }
        }
        if let Some(op) = level_op {
            ops.push(op);
        }
        level = next;
    }
    Classification {
        homogeneous,
        depth: ops.len(),
        type_string: TypeString(ops),
        size,
    }
}

/// Type check against `expected`, reading a `Plus` found where an `Alt` level
/// is expected as an implicit unary alternative.
pub fn conforms_to(p: &Pattern, expected: &TypeString) -> bool {
    fn walk(p: &Pattern, ty: &[Op], k: usize) -> Option<usize> {
        let Some(op) = p.op() else {
            return Some(k);
        };
        let want = *ty.get(k)?;
        if want == op {
            let mut deepest = k + 1;
            for c in p.children() {
                deepest = deepest.max(walk(c, ty, k + 1)?);
            }
            Some(deepest)
        } else if want == Op::Alt && op == Op::Plus {
            walk(p, ty, k + 1)
        } else {
            None
        }
    }
    walk(p, expected.ops(), 0) == Some(expected.len())
}

// ---------------------------------------------------------------------------
// Simplification

/// Every type reachable by one application of a simplification rule.
pub fn simplification_steps(ty: &TypeString, prob: Problem) -> Vec<TypeString> {
    let t = ty.ops();
    let mut out = Vec::new();
    match prob {
        Problem::Matching => {
            if t.first() == Some(&Op::Plus) {
                out.push(TypeString(t[1..].to_vec()));
            }
            if t.starts_with(&[Op::Alt, Op::Plus]) {
                let mut v = vec![Op::Alt];
                v.extend_from_slice(&t[2..]);
                out.push(TypeString(v));
            }
        }
        Problem::Membership => {
            for i in 0..t.len().saturating_sub(2) {
                if t[i..i + 3] == [Op::Plus, Op::Alt, Op::Plus] {
                    let mut v = t.to_vec();
                    v.remove(i + 2);
                    out.push(TypeString(v));
                }
            }
            if let Some(k) = t.iter().position(|o| !matches!(o, Op::Plus | Op::Alt)) {
                if t[k] == Op::Star {
                    let mut v = t.to_vec();
                    v[k] = Op::Plus;
                    out.push(TypeString(v));
                }
            }
        }
    }
    for i in 0..t.len().saturating_sub(1) {
        if t[i] == t[i + 1] {
            let mut v = t.to_vec();
            v.remove(i + 1);
            out.push(TypeString(v));
        }
    }
    out
}

/// Apply the simplification rules for `prob` until none applies.
pub fn simplify_type(ty: &TypeString, prob: Problem) -> TypeString {
    let mut cur = ty.clone();
    while let Some(next) = simplification_steps(&cur, prob).into_iter().next() {
        cur = next;
    }
    cur
}
