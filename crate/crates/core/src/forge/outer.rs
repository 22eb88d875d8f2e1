//! Text and pattern groups that search over all pairs of assignments.

use rand::Rng;

use crate::formula::FormulaPairInstance;
use crate::nfa::nfa_member;
use crate::pattern::{Pattern, Symbol};

use super::gadgets::{barred, encode_gates, plus, starred, GadgetMap, PatternTemplate};
use super::{ForgeError, Meta, ReductionInstance, ReductionType};
use crate::Problem;

/// Ensures `n ≥ m` by exchanging the sides; returns whether it did.
pub(crate) fn oriented(inst: &FormulaPairInstance) -> (FormulaPairInstance, bool) {
    if inst.m() > inst.n() {
        (inst.swapped(), true)
    } else {
        (inst.clone(), false)
    }
}

/// `a^{(i)}` for `i ∈ [1, 3n]`, wrapping around after `n`.
fn cyclic(inst: &FormulaPairInstance, i: usize) -> &[bool] {
    &inst.a[(i - 1) % inst.n()]
}

pub(crate) fn finish(
    ty: ReductionType,
    problem: Problem,
    inst: &FormulaPairInstance,
    swapped: bool,
    text: Vec<Symbol>,
    pattern: Pattern,
) -> ReductionInstance {
    let meta = Meta {
        ty,
        problem,
        n: inst.n(),
        m: inst.m(),
        s: inst.formula.size(),
        d: inst.formula.depth(),
        text_len: text.len(),
        pattern_size: pattern.size(),
        seed: None,
        swapped,
    };
    ReductionInstance { text, pattern, meta }
}

/// Outer OR for `∘+∘`; with `Coc` every repetition is written as `(α|αα|ααα)`.
pub fn build_matching_cpc(inst: &FormulaPairInstance) -> Result<ReductionInstance, ForgeError> {
    build_concat_plus(inst, ReductionType::Cpc)
}

/// Outer OR for `∘|∘`.
pub fn build_matching_coc(inst: &FormulaPairInstance) -> Result<ReductionInstance, ForgeError> {
    build_concat_plus(inst, ReductionType::Coc)
}

fn build_concat_plus(
    inst: &FormulaPairInstance,
    ty: ReductionType,
) -> Result<ReductionInstance, ForgeError> {
    inst.validate()?;
    let (inst, swapped) = oriented(inst);
    let map = encode_gates(&inst.formula, ty)?;
    let root = map.get(inst.formula.root());
    let u = &root.u;
    let q = root.q.instantiate(&[])?;

    let mut text = Vec::new();
    for i in 1..=3 * inst.n() {
        let t = root.t.instantiate(cyclic(&inst, i))?;
        text.extend(['3', '3']);
        for _ in 0..3 {
            text.extend(u);
            text.push('3');
        }
        text.extend(t);
        for _ in 0..4 {
            text.push('3');
            text.extend(u);
        }
    }

    let mut frame = PatternTemplate::default();
    for _ in 0..4 {
        frame.sym('3').text(u);
    }
    let mut u3 = u.clone();
    u3.push('3');
    let mut p = frame.clone();
    // A closing group whose p-slot is u itself: a group can only re-align
    // the text for the suffix when another group follows it, so without
    // this a pair satisfied only by the last B-assignment would be missed.
    let closing = Pattern::word(u);
    let slots = inst.b.iter().map(|b| root.p.instantiate(b));
    for slot in slots.chain([Ok(closing)]) {
        p.append(&plus(ty, &['3']));
        p.append(&plus(ty, &u3));
        p.text(u);
        p.append(&plus(ty, &['3']));
        p.pattern(&q).sym('3');
        p.pattern(&slot?).sym('3');
        p.append(&plus(ty, &u3));
        p.pattern(&q);
    }
    p.append(&frame);
    Ok(finish(ty, Problem::Matching, &inst, swapped, text, p.instantiate(&[])?))
}

/// Helper gadget `H` of the generic outer OR for `∘⋆`, `∘+|` and `∘|+`.
pub fn helper_gadget(ty: ReductionType, u: &[Symbol]) -> Result<Pattern, ForgeError> {
    let mut h = PatternTemplate::default();
    match ty {
        ReductionType::Cs => {
            h.sym('4').node(Pattern::star(Pattern::sym('4')));
            h.node(Pattern::star(Pattern::sym('3')));
            h.append(&starred(u));
            h.node(Pattern::star(Pattern::sym('3')));
            h.sym('4').node(Pattern::star(Pattern::sym('4')));
        }
        ReductionType::Cpo => {
            let alt = |cs: &[Symbol]| Pattern::plus(Pattern::alt(cs.iter().map(|&c| Pattern::sym(c)).collect()));
            h.node(Pattern::plus(Pattern::sym('4')));
            h.node(alt(&['3', '4']));
            h.node(alt(&['0', '1', '2', '4']));
            h.node(alt(&['3', '4']));
            h.node(Pattern::plus(Pattern::sym('4')));
        }
        ReductionType::Cop => {
            let three_or_four = Pattern::alt(vec![Pattern::sym('3'), Pattern::sym('4')]);
            h.append(&plus(ty, &['4']));
            h.node(three_or_four.clone());
            h.append(&barred(u, '4'));
            h.node(three_or_four);
            h.append(&plus(ty, &['4']));
        }
        _ => {
            return Err(ForgeError::Unsupported {
                ty,
                problem: Problem::Matching,
            })
        }
    }
    h.instantiate(&[])
}

/// `4⁺(3|4)*(0|1|2|4)*(3|4)*4⁺`, the language every helper gadget must stay inside.
pub fn helper_envelope() -> Pattern {
    let alt = |cs: &[Symbol]| Pattern::alt(cs.iter().map(|&c| Pattern::sym(c)).collect());
    Pattern::concat(vec![
        Pattern::plus(Pattern::sym('4')),
        Pattern::star(alt(&['3', '4'])),
        Pattern::star(alt(&['0', '1', '2', '4'])),
        Pattern::star(alt(&['3', '4'])),
        Pattern::plus(Pattern::sym('4')),
    ])
}

/// Outcome of the helper-gadget conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HelperCheck {
    pub accepts_padding: bool,
    pub accepts_framed_universal: bool,
    pub sampled_inside_envelope: bool,
}

impl HelperCheck {
    pub fn ok(&self) -> bool {
        self.accepts_padding && self.accepts_framed_universal && self.sampled_inside_envelope
    }
}

/// Checks `4^ℓ ∈ L(H)`, `4^ℓ 3 u 3 4^ℓ ∈ L(H)` with `ℓ = |u| + 4`, and that
/// `samples` random members of `L(H)` lie in [`helper_envelope`].
pub fn check_helper(h: &Pattern, u: &[Symbol], samples: usize, rng: &mut impl Rng) -> HelperCheck {
    let l = u.len() + 4;
    let pad = vec!['4'; l];
    let mut framed = pad.clone();
    framed.push('3');
    framed.extend(u);
    framed.push('3');
    framed.extend(&pad);
    let env = crate::nfa::Nfa::compile(&helper_envelope());
    let sampled_inside_envelope = (0..samples).all(|_| env.accepts(&super::sample_member(h, rng)));
    HelperCheck {
        accepts_padding: nfa_member(&pad, h),
        accepts_framed_universal: nfa_member(&framed, h),
        sampled_inside_envelope,
    }
}

/// Outer OR through a helper gadget, for `∘⋆`, `∘+|` and `∘|+`.
pub fn build_matching_generic(
    inst: &FormulaPairInstance,
    ty: ReductionType,
) -> Result<ReductionInstance, ForgeError> {
    inst.validate()?;
    if !matches!(ty, ReductionType::Cs | ReductionType::Cpo | ReductionType::Cop) {
        return Err(ForgeError::Unsupported {
            ty,
            problem: Problem::Matching,
        });
    }
    let (inst, swapped) = oriented(inst);
    let map = encode_gates(&inst.formula, ty)?;
    let (text, pattern) = generic_parts(&inst, &map)?;
    Ok(finish(ty, Problem::Matching, &inst, swapped, text, pattern))
}

fn generic_parts(
    inst: &FormulaPairInstance,
    map: &GadgetMap,
) -> Result<(Vec<Symbol>, Pattern), ForgeError> {
    let ty = map.ty;
    let root = map.get(inst.formula.root());
    let u = &root.u;
    let q = root.q.instantiate(&[])?;
    let h = helper_gadget(ty, u)?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(u.len() as u64);
    let check = check_helper(&h, u, 64, &mut rng);
    if !check.ok() {
        return Err(ForgeError::HelperGadget(format!("{check:?}")));
    }
    let pad = vec!['4'; u.len() + 4];
    // 3 4^ℓ 3 u 3 4^ℓ
    let mut tail = vec!['3'];
    tail.extend(&pad);
    tail.push('3');
    tail.extend(u);
    tail.push('3');
    tail.extend(&pad);

    let mut text = Vec::new();
    for i in 1..=3 * inst.n() {
        text.extend(['3', '3', '3']);
        text.extend(u);
        text.extend(&tail);
        text.extend(['3', '3']);
        text.extend(root.t.instantiate(cyclic(inst, i))?);
        text.extend(&tail);
    }

    let mut p = PatternTemplate::default();
    p.sym('3');
    for b in &inst.b {
        p.sym('3').append(&plus(ty, &['3'])).pattern(&q).sym('3');
        p.pattern(&h).append(&plus(ty, &['3']));
        p.pattern(&root.p.instantiate(b)?).sym('3');
        p.pattern(&h).sym('3').append(&plus(ty, &['3']));
        p.pattern(&q).text(&tail);
    }
    p.sym('3').sym('3').pattern(&q).text(&tail);
    p.text(&['3', '3', '3']);
    Ok((text, p.instantiate(&[])?))
}
