//! Dictionary construction for `|+|∘` membership.

use std::collections::BTreeSet;

use crate::formula::{FormulaPairInstance, Gate, GateId, MonotoneFormula, Side};
use crate::pattern::{Pattern, Symbol};
use crate::Problem;

use super::gadgets::{GadgetToken, TextTemplate};
use super::outer::finish;
use super::{ForgeError, ReductionInstance, ReductionType};

/// Per-gate text and dictionaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDictionary {
    pub t: TextTemplate,
    /// Words that may contain B-side holes.
    pub main: Vec<Vec<GadgetToken>>,
    pub side: BTreeSet<Vec<Symbol>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryEncoding {
    gates: Vec<GateDictionary>,
    subtree_ends: Vec<GateId>,
}

impl DictionaryEncoding {
    pub fn get(&self, id: GateId) -> &GateDictionary {
        &self.gates[id - 1]
    }

    /// `D_g`: the dictionaries of every gate below and including `id`,
    /// instantiated with `b`.
    pub fn words(&self, id: GateId, b: &[bool]) -> Result<BTreeSet<Vec<Symbol>>, ForgeError> {
        let mut out = BTreeSet::new();
        for g in id..self.subtree_ends[id - 1] {
            let d = self.get(g);
            out.extend(d.side.iter().cloned());
            for w in &d.main {
                out.insert(TextTemplate(w.clone()).instantiate_b(b)?);
            }
        }
        Ok(out)
    }
}

impl TextTemplate {
    fn instantiate_b(&self, b: &[bool]) -> Result<Vec<Symbol>, ForgeError> {
        self.0
            .iter()
            .map(|&t| match t {
                GadgetToken::Symbol(c) => Ok(c),
                GadgetToken::HoleB(i) => b
                    .get(i.wrapping_sub(1))
                    .map(|&v| if v { '1' } else { '0' })
                    .ok_or(ForgeError::MissingHole { side: Side::B, index: i }),
                GadgetToken::HoleA(i) => Err(ForgeError::MissingHole { side: Side::A, index: i }),
            })
            .collect()
    }
}

/// Path token `h^g_i = 2·bin(h_i)·bin(g)·2`, `h_i` the depth-`i` gate on the way to `g`.
pub fn path_token(f: &MonotoneFormula, g: GateId, i: usize) -> Vec<Symbol> {
    let path = f.path(g);
    let mut out = vec!['2'];
    out.extend(f.bin(path[i]));
    out.extend(f.bin(g));
    out.push('2');
    out
}

/// `h^g_lo ⋯ h^g_hi`, ascending or descending.
fn tokens(f: &MonotoneFormula, g: GateId, lo: usize, hi: usize, down: bool) -> Vec<Symbol> {
    let mut idx: Vec<usize> = (lo..=hi).collect();
    if down {
        idx.reverse();
    }
    idx.into_iter().flat_map(|i| path_token(f, g, i)).collect()
}

fn up(f: &MonotoneFormula, g: GateId, lo: usize, hi: usize) -> Vec<Symbol> {
    tokens(f, g, lo, hi, false)
}

fn down(f: &MonotoneFormula, g: GateId, lo: usize, hi: usize) -> Vec<Symbol> {
    tokens(f, g, lo, hi, true)
}

fn lit(w: &[Symbol]) -> Vec<GadgetToken> {
    w.iter().map(|&c| GadgetToken::Symbol(c)).collect()
}

pub fn encode_dictionaries(f: &MonotoneFormula) -> DictionaryEncoding {
    let mut gates: Vec<Option<GateDictionary>> = vec![None; f.gate_count()];
    for g in f.bottom_up() {
        let d = f.gate_depth(g);
        let head = up(f, g, 0, d);
        let foot = down(f, g, 0, d);
        let mut side = BTreeSet::new();
        let entry = match f.gate(g) {
            Gate::Leaf(s, i) => {
                for x in ['0', '1'] {
                    for k in 1..=d {
                        side.insert([up(f, g, k, d), vec![x], down(f, g, k, d)].concat());
                    }
                }
                let hole = |tok| [lit(&head), vec![tok], lit(&foot)].concat();
                let (t, main) = match s {
                    Side::A => (hole(GadgetToken::HoleA(i)), hole(GadgetToken::Symbol('1'))),
                    Side::B => (hole(GadgetToken::Symbol('1')), hole(GadgetToken::HoleB(i))),
                };
                GateDictionary {
                    t: TextTemplate(t),
                    main: vec![main],
                    side,
                }
            }
            Gate::And(l, r) => {
                for k in 1..=d {
                    side.insert([up(f, g, k, d), up(f, l, 0, k - 1)].concat());
                    side.insert([down(f, l, 0, k - 1), up(f, r, 0, k - 1)].concat());
                    side.insert([down(f, r, 0, k - 1), down(f, g, k, d)].concat());
                }
                let (t1, t2) = (&gates[l - 1].as_ref().unwrap().t, &gates[r - 1].as_ref().unwrap().t);
                let mut t = lit(&head);
                t.extend(&t1.0);
                t.extend(&t2.0);
                t.extend(lit(&foot));
                GateDictionary {
                    t: TextTemplate(t),
                    main: vec![lit(&head), lit(&foot)],
                    side,
                }
            }
            Gate::Or(l, r) => {
                let hd = path_token(f, g, d);
                for k in 1..=d {
                    side.insert([up(f, g, k, d), up(f, l, 0, k - 1)].concat());
                    side.insert([down(f, l, 0, k - 1), hd.clone(), up(f, r, 0, k - 1)].concat());
                    side.insert([down(f, r, 0, k - 1), down(f, g, k, d)].concat());
                }
                let main = [
                    head.clone(),
                    [hd.clone(), up(f, r, 0, d)].concat(),
                    [down(f, r, 0, d), foot.clone()].concat(),
                    [head.clone(), up(f, l, 0, d)].concat(),
                    [down(f, l, 0, d), hd.clone()].concat(),
                    foot.clone(),
                ];
                let (t1, t2) = (&gates[l - 1].as_ref().unwrap().t, &gates[r - 1].as_ref().unwrap().t);
                let mut t = lit(&head);
                t.extend(&t1.0);
                t.extend(lit(&hd));
                t.extend(&t2.0);
                t.extend(lit(&foot));
                GateDictionary {
                    t: TextTemplate(t),
                    main: main.iter().map(|w| lit(w)).collect(),
                    side,
                }
            }
        };
        gates[g - 1] = Some(entry);
    }
    DictionaryEncoding {
        gates: gates.into_iter().map(Option::unwrap).collect(),
        subtree_ends: f.gate_ids().map(|g| f.subtree(g).end).collect(),
    }
}

/// `t⇑u = u t₁ u t₂ ⋯ u t_n`
pub fn blow_up(t: &[Symbol], u: &[Symbol]) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(t.len() * (u.len() + 1));
    for &c in t {
        out.extend(u);
        out.push(c);
    }
    out
}

const BLOW: [Symbol; 3] = ['4', '5', '6'];
const STATE_WORDS: [&str; 10] = [
    "5604", "5614", "5624", "5634", "563", "456345", "6045", "6145", "6245", "6345",
];

/// `|+|∘` membership instance: one text group per A-assignment, one
/// repeated alternative per B-assignment.
pub fn build_membership_opoc(inst: &FormulaPairInstance) -> Result<ReductionInstance, ForgeError> {
    inst.validate()?;
    let f = &inst.formula;
    let enc = encode_dictionaries(f);
    let root = f.root();

    let mut text = vec!['5', '6', '3'];
    for a in &inst.a {
        let mut group = enc.get(root).t.instantiate(a)?;
        group.push('3');
        text.extend(blow_up(&group, &BLOW));
    }
    text.extend(['4', '5']);

    let mut branches = Vec::with_capacity(inst.m());
    for b in &inst.b {
        let mut words: BTreeSet<Vec<Symbol>> = STATE_WORDS.iter().map(|w| w.chars().collect()).collect();
        for w in enc.words(root, b)? {
            words.insert(blow_up(&w, &BLOW));
        }
        let alts = words.iter().map(|w| Pattern::word(w)).collect();
        branches.push(Pattern::plus(Pattern::alt(alts)));
    }
    let pattern = Pattern::alt(branches);
    Ok(finish(
        ReductionType::Opoc,
        Problem::Membership,
        inst,
        false,
        text,
        pattern,
    ))
}
