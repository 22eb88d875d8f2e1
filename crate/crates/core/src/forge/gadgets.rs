//! Per-gate text and pattern gadgets for the five matching types.

use crate::formula::{Gate, GateId, MonotoneFormula, Side};
use crate::pattern::{Pattern, Symbol};

use super::{ForgeError, ReductionType};

/// One position of a gadget template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetToken {
    Symbol(Symbol),
    /// Filled with the bit of variable `i` of the A-side assignment.
    HoleA(usize),
    /// Filled with the bit of variable `i` of the B-side assignment.
    HoleB(usize),
}

fn bit(v: bool) -> Symbol {
    if v {
        '1'
    } else {
        '0'
    }
}

fn fill(tok: GadgetToken, side: Side, bits: &[bool]) -> Result<Symbol, ForgeError> {
    match (tok, side) {
        (GadgetToken::Symbol(c), _) => Ok(c),
        (GadgetToken::HoleA(i), Side::A) | (GadgetToken::HoleB(i), Side::B) => bits
            .get(i.wrapping_sub(1))
            .map(|&v| bit(v))
            .ok_or(ForgeError::MissingHole { side, index: i }),
        (GadgetToken::HoleA(i), Side::B) => Err(ForgeError::MissingHole { side: Side::A, index: i }),
        (GadgetToken::HoleB(i), Side::A) => Err(ForgeError::MissingHole { side: Side::B, index: i }),
    }
}

/// A text whose holes are A-side variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TextTemplate(pub Vec<GadgetToken>);

impl TextTemplate {
    pub fn literal(t: &[Symbol]) -> Self {
        TextTemplate(t.iter().map(|&c| GadgetToken::Symbol(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn instantiate(&self, a: &[bool]) -> Result<Vec<Symbol>, ForgeError> {
        self.0.iter().map(|&t| fill(t, Side::A, a)).collect()
    }

    fn push(&mut self, t: &[Symbol]) -> &mut Self {
        self.0.extend(t.iter().map(|&c| GadgetToken::Symbol(c)));
        self
    }

    fn append(&mut self, other: &TextTemplate) -> &mut Self {
        self.0.extend_from_slice(&other.0);
        self
    }
}

/// One item of a pattern template concatenation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternItem {
    Token(GadgetToken),
    Node(Pattern),
}

/// A concatenation whose holes are B-side variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PatternTemplate(pub Vec<PatternItem>);

impl PatternTemplate {
    /// The items of a concrete pattern, splitting a top-level concatenation.
    pub fn from_pattern(p: &Pattern) -> Self {
        let mut out = PatternTemplate::default();
        out.pattern(p);
        out
    }

    pub fn instantiate(&self, b: &[bool]) -> Result<Pattern, ForgeError> {
        let items = self
            .0
            .iter()
            .map(|it| match it {
                PatternItem::Token(t) => fill(*t, Side::B, b).map(Pattern::Symbol),
                PatternItem::Node(p) => Ok(p.clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pattern::concat(items))
    }

    /// The pattern with every hole replaced by `(0|1)`; its language covers
    /// every instantiation.
    pub fn widened(&self) -> Pattern {
        Pattern::concat(
            self.0
                .iter()
                .map(|it| match it {
                    PatternItem::Token(GadgetToken::Symbol(c)) => Pattern::Symbol(*c),
                    PatternItem::Token(_) => Pattern::alt(vec![Pattern::sym('0'), Pattern::sym('1')]),
                    PatternItem::Node(p) => p.clone(),
                })
                .collect(),
        )
    }

    pub fn has_holes(&self) -> bool {
        self.0.iter().any(|it| {
            matches!(it, PatternItem::Token(GadgetToken::HoleA(_) | GadgetToken::HoleB(_)))
        })
    }

    pub(crate) fn sym(&mut self, c: Symbol) -> &mut Self {
        self.0.push(PatternItem::Token(GadgetToken::Symbol(c)));
        self
    }

    pub(crate) fn text(&mut self, t: &[Symbol]) -> &mut Self {
        self.0
            .extend(t.iter().map(|&c| PatternItem::Token(GadgetToken::Symbol(c))));
        self
    }

    pub(crate) fn node(&mut self, p: Pattern) -> &mut Self {
        match p {
            Pattern::Symbol(c) => self.sym(c),
            p => {
                self.0.push(PatternItem::Node(p));
                self
            }
        }
    }

    pub(crate) fn pattern(&mut self, p: &Pattern) -> &mut Self {
        match p {
            Pattern::Concat(items) => {
                for it in items {
                    self.node(it.clone());
                }
                self
            }
            p => self.node(p.clone()),
        }
    }

    pub(crate) fn append(&mut self, other: &PatternTemplate) -> &mut Self {
        self.0.extend_from_slice(&other.0);
        self
    }
}

/// How a repetition `α⁺` is written in a given pattern type.
pub(crate) fn plus(ty: ReductionType, word: &[Symbol]) -> PatternTemplate {
    let mut out = PatternTemplate::default();
    match ty {
        ReductionType::Cpc => {
            out.node(Pattern::plus(Pattern::word(word)));
        }
        ReductionType::Coc => {
            let rep = |k: usize| Pattern::word(&word.repeat(k));
            out.node(Pattern::alt(vec![rep(1), rep(2), rep(3)]));
        }
        ReductionType::Cs => {
            assert_eq!(word.len(), 1, "∘⋆ only repeats single symbols");
            out.sym(word[0]).node(Pattern::star(Pattern::sym(word[0])));
        }
        ReductionType::Cpo => {
            assert_eq!(word.len(), 1, "∘+| only repeats single symbols");
            out.node(Pattern::plus(Pattern::sym(word[0])));
        }
        ReductionType::Cop => {
            assert_eq!(word.len(), 1, "∘|+ only repeats single symbols");
            let s = Pattern::sym(word[0]);
            out.node(Pattern::alt(vec![s.clone(), Pattern::plus(s)]));
        }
        ReductionType::Opoc => unreachable!("no per-gate gadgets for |+|∘"),
    }
    out
}

/// `v₁* v₂* ⋯`
pub fn starred(v: &[Symbol]) -> PatternTemplate {
    let mut out = PatternTemplate::default();
    for &c in v {
        out.node(Pattern::star(Pattern::sym(c)));
    }
    out
}

/// `(v₁|τ)(v₂|τ)⋯`
pub fn barred(v: &[Symbol], tau: Symbol) -> PatternTemplate {
    let mut out = PatternTemplate::default();
    for &c in v {
        out.node(Pattern::alt(vec![Pattern::sym(c), Pattern::sym(tau)]));
    }
    out
}

/// Text `t`, universal text `u`, universal pattern `q` and pattern `p` of one gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateGadget {
    pub t: TextTemplate,
    pub u: Vec<Symbol>,
    pub q: PatternTemplate,
    pub p: PatternTemplate,
}

/// Gadgets for every gate of a formula, indexed by gate ID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    pub ty: ReductionType,
    gadgets: Vec<GateGadget>,
}

impl GadgetMap {
    pub fn get(&self, id: GateId) -> &GateGadget {
        &self.gadgets[id - 1]
    }

    pub fn len(&self) -> usize {
        self.gadgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gadgets.is_empty()
    }
}

/// Concrete gadget of one gate for one pair of assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiated {
    pub t: Vec<Symbol>,
    pub u: Vec<Symbol>,
    pub q: Pattern,
    pub p: Pattern,
}

pub fn instantiate(
    map: &GadgetMap,
    gate: GateId,
    a: &[bool],
    b: &[bool],
) -> Result<Instantiated, ForgeError> {
    let g = map.get(gate);
    Ok(Instantiated {
        t: g.t.instantiate(a)?,
        u: g.u.clone(),
        q: g.q.instantiate(&[])?,
        p: g.p.instantiate(b)?,
    })
}

/// Separator `2·bin(g)·2`.
pub fn separator(f: &MonotoneFormula, g: GateId) -> Vec<Symbol> {
    let mut out = vec!['2'];
    out.extend(f.bin(g));
    out.push('2');
    out
}

fn cat(parts: &[&[Symbol]]) -> Vec<Symbol> {
    parts.concat()
}

pub fn encode_gates(f: &MonotoneFormula, ty: ReductionType) -> Result<GadgetMap, ForgeError> {
    if !ty.is_matching() {
        return Err(ForgeError::Unsupported {
            ty,
            problem: crate::Problem::Matching,
        });
    }
    let mut gadgets: Vec<Option<GateGadget>> = vec![None; f.gate_count()];
    for id in f.bottom_up() {
        let gadget = match f.gate(id) {
            Gate::Leaf(side, i) => input_gadget(ty, side, i),
            Gate::And(l, r) => {
                let (g1, g2) = (gadgets[l - 1].as_ref().unwrap(), gadgets[r - 1].as_ref().unwrap());
                and_gadget(&separator(f, id), g1, g2)
            }
            Gate::Or(l, r) => {
                let (g1, g2) = (gadgets[l - 1].as_ref().unwrap(), gadgets[r - 1].as_ref().unwrap());
                or_gadget(ty, &separator(f, id), g1, g2)
            }
        };
        gadgets[id - 1] = Some(gadget);
    }
    Ok(GadgetMap {
        ty,
        gadgets: gadgets.into_iter().map(Option::unwrap).collect(),
    })
}

fn input_gadget(ty: ReductionType, side: Side, i: usize) -> GateGadget {
    let mut t = TextTemplate::default();
    let mut p = PatternTemplate::default();
    p.append(&plus(ty, &['0']));
    match side {
        Side::A => {
            t.push(&['0']);
            t.0.push(GadgetToken::HoleA(i));
            t.push(&['1']);
            p.sym('1');
        }
        Side::B => {
            t.push(&['0', '1', '1']);
            p.0.push(PatternItem::Token(GadgetToken::HoleB(i)));
        }
    }
    p.append(&plus(ty, &['1']));
    let mut q = plus(ty, &['0']);
    q.append(&plus(ty, &['1']));
    GateGadget {
        t,
        u: vec!['0', '0', '1', '1'],
        q,
        p,
    }
}

fn and_gadget(sep: &[Symbol], g1: &GateGadget, g2: &GateGadget) -> GateGadget {
    let mut t = g1.t.clone();
    t.push(sep).append(&g2.t);
    let mut q = g1.q.clone();
    q.text(sep).append(&g2.q);
    let mut p = g1.p.clone();
    p.text(sep).append(&g2.p);
    GateGadget {
        t,
        u: cat(&[&g1.u, sep, &g2.u]),
        q,
        p,
    }
}

fn or_gadget(ty: ReductionType, sep: &[Symbol], g1: &GateGadget, g2: &GateGadget) -> GateGadget {
    let (u1, u2) = (&g1.u[..], &g2.u[..]);
    // u1 G G u2
    let uu = cat(&[u1, sep, sep, u2]);
    match ty {
        ReductionType::Cpc | ReductionType::Coc | ReductionType::Cs => {
            let mut t = TextTemplate::default();
            t.push(&uu).push(sep).push(&uu).push(sep);
            t.append(&g1.t).push(sep).push(sep).append(&g2.t);
            t.push(sep).push(&uu).push(sep).push(&uu);
            let u = cat(&[&uu, sep, &uu, sep, &uu, sep, &uu, sep, &uu]);
            let mut q = PatternTemplate::default();
            q.text(&uu).text(sep).text(&uu).text(sep);
            q.append(&g1.q).text(sep).text(sep).append(&g2.q);
            q.text(sep).text(&uu).text(sep).text(&uu);
            let mut p = PatternTemplate::default();
            if ty == ReductionType::Cs {
                p.append(&starred(&uu)).append(&starred(sep));
                p.text(&uu).text(sep);
            } else {
                p.append(&plus(ty, &cat(&[&uu, sep])));
            }
            p.append(&g1.q).text(sep).text(sep).append(&g2.p).text(sep);
            p.append(&g1.p).text(sep).text(sep).append(&g2.q);
            if ty == ReductionType::Cs {
                p.text(sep).text(&uu);
                p.append(&starred(sep)).append(&starred(&uu));
            } else {
                p.append(&plus(ty, &cat(&[sep, &uu])));
            }
            GateGadget { t, u, q, p }
        }
        ReductionType::Cpo => {
            let mut t = TextTemplate::default();
            t.push(&['0']).push(sep);
            t.append(&g1.t).push(sep).push(sep).push(u2).push(sep);
            t.push(u1).push(sep).push(sep).append(&g2.t);
            t.push(sep).push(&['1']);
            let u = cat(&[&['0'], sep, &uu, sep, &uu, sep, &['1']]);
            let mut q = PatternTemplate::default();
            q.sym('0').text(sep);
            q.append(&g1.q).text(sep).text(sep).text(u2).text(sep);
            q.text(u1).text(sep).text(sep).append(&g2.q);
            q.text(sep).sym('1');
            let any = Pattern::plus(Pattern::alt(vec![
                Pattern::sym('0'),
                Pattern::sym('1'),
                Pattern::sym('2'),
            ]));
            let mut p = PatternTemplate::default();
            p.node(any.clone()).text(sep);
            p.append(&g1.p).text(sep).text(sep).append(&g2.p);
            p.text(sep).node(any);
            GateGadget { t, u, q, p }
        }
        ReductionType::Cop => {
            let zeros = vec!['0'; uu.len() + sep.len() + 1];
            let ones = vec!['1'; uu.len() + sep.len() + 1];
            let mut t = TextTemplate::default();
            t.push(&zeros).push(&uu).push(sep);
            t.append(&g1.t).push(sep).push(sep).append(&g2.t);
            t.push(sep).push(&uu).push(&ones);
            let u = cat(&[&zeros, &uu, sep, &uu, sep, &uu, &ones]);
            let mut q = PatternTemplate::default();
            q.text(&zeros).text(&uu).text(sep);
            q.append(&g1.q).text(sep).text(sep).append(&g2.q);
            q.text(sep).text(&uu).text(&ones);
            let mut p = plus(ty, &['0']);
            p.append(&barred(&cat(&[&uu, sep]), '0'));
            p.append(&g1.q).text(sep).text(sep).append(&g2.p).text(sep);
            p.append(&g1.p).text(sep).text(sep).append(&g2.q);
            p.append(&barred(&cat(&[sep, &uu]), '1'));
            p.append(&plus(ty, &['1']));
            GateGadget { t, u, q, p }
        }
        ReductionType::Opoc => unreachable!(),
    }
}
