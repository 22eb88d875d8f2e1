//! Matching-to-membership transforms that keep the pattern type.

use std::collections::BTreeSet;

use crate::pattern::{Pattern, Symbol};

use super::gadgets::{starred, PatternTemplate};
use super::{ForgeError, ReductionType};

fn items(p: &Pattern) -> Vec<Pattern> {
    match p {
        Pattern::Concat(cs) => cs.clone(),
        p => vec![p.clone()],
    }
}

fn alphabet(t: &[Symbol], p: &Pattern, extra: &[Symbol]) -> Vec<Symbol> {
    let mut s: BTreeSet<Symbol> = p.alphabet();
    s.extend(t.iter().copied());
    s.extend(extra.iter().copied());
    s.into_iter().collect()
}

fn any_of(sigma: &[Symbol]) -> Pattern {
    Pattern::alt(sigma.iter().map(|&c| Pattern::sym(c)).collect())
}

/// `(t′, p′)` with `t ∈ M(p) ⟺ t′ ∈ L(p′)`, `p′` of the same type as `p`.
pub fn to_membership(
    t: &[Symbol],
    p: &Pattern,
    ty: ReductionType,
) -> Result<(Vec<Symbol>, Pattern), ForgeError> {
    if t.is_empty() {
        return Err(ForgeError::EmptyText);
    }
    match ty {
        ReductionType::Cs => {
            let mut out = starred(t);
            out.pattern(p).append(&starred(t));
            Ok((t.to_vec(), out.instantiate(&[])?))
        }
        ReductionType::Cpc => Ok(concat_plus(t, p)),
        ReductionType::Coc => Ok(concat_or(t, p)),
        ReductionType::Cpo => {
            let sigma = any_of(&alphabet(t, p, &['1']));
            let mut tt = vec!['1'];
            tt.extend(t);
            tt.push('1');
            let mut out = PatternTemplate::default();
            out.node(Pattern::plus(sigma.clone()))
                .pattern(p)
                .node(Pattern::plus(sigma));
            Ok((tt, out.instantiate(&[])?))
        }
        ReductionType::Cop => {
            let sigma = any_of(&alphabet(t, p, &['1']));
            let ones = vec!['1'; t.len() + 1];
            let tt = [&ones[..], t, &ones[..]].concat();
            let one_plus = Pattern::alt(vec![Pattern::sym('1'), Pattern::plus(Pattern::sym('1'))]);
            let mut out = PatternTemplate::default();
            out.node(one_plus.clone());
            for _ in 0..t.len() {
                out.node(sigma.clone());
            }
            out.pattern(p);
            for _ in 0..t.len() {
                out.node(sigma.clone());
            }
            out.node(one_plus);
            Ok((tt, out.instantiate(&[])?))
        }
        ReductionType::Opoc => Err(ForgeError::Unsupported {
            ty,
            problem: crate::Problem::Membership,
        }),
    }
}

/// Recodes each symbol `x` as the sorted alphabet with `x` doubled, so that
/// `U = 1⁺2⁺⋯s⁺` absorbs any recoded prefix or suffix.
fn concat_plus(t: &[Symbol], p: &Pattern) -> (Vec<Symbol>, Pattern) {
    let sigma = alphabet(t, p, &[]);
    let code = |x: Symbol| -> Vec<Symbol> {
        let mut out = Vec::with_capacity(sigma.len() + 1);
        for &c in &sigma {
            out.push(c);
            if c == x {
                out.push(c);
            }
        }
        out
    };
    let recode = |w: &[Symbol]| -> Vec<Symbol> { w.iter().flat_map(|&c| code(c)).collect() };

    let mut tt = sigma.repeat(t.len() + 1);
    tt.extend(recode(t));
    tt.extend(sigma.repeat(t.len() + 1));

    let mut out = PatternTemplate::default();
    let r_plus = Pattern::plus(Pattern::word(&sigma));
    let u_block: Vec<Pattern> = sigma.iter().map(|&c| Pattern::plus(Pattern::sym(c))).collect();
    out.node(r_plus.clone());
    for _ in 0..t.len() {
        u_block.iter().for_each(|x| {
            out.node(x.clone());
        });
    }
    for it in items(p) {
        match &it {
            Pattern::Symbol(c) => {
                out.text(&code(*c));
            }
            Pattern::Plus(inner) => {
                let w: Vec<Symbol> = match inner.as_ref() {
                    Pattern::Symbol(c) => vec![*c],
                    Pattern::Concat(cs) => cs
                        .iter()
                        .map(|x| match x {
                            Pattern::Symbol(c) => *c,
                            _ => unreachable!("∘+∘ repetitions hold words"),
                        })
                        .collect(),
                    _ => unreachable!("∘+∘ repetitions hold words"),
                };
                out.node(Pattern::plus(Pattern::word(&recode(&w))));
            }
            _ => unreachable!("∘+∘ items are symbols or repetitions"),
        }
    }
    for _ in 0..t.len() {
        u_block.iter().for_each(|x| {
            out.node(x.clone());
        });
    }
    out.node(r_plus);
    (tt, out.instantiate(&[]).expect("no holes"))
}

/// Pads with a fresh symbol `a`; the power blocks `(a^{2^i} | a^{2^{i+1}})`
/// absorb any number of padding symbols in `[2L − 1, 4L − 2]`.
fn concat_or(t: &[Symbol], p: &Pattern) -> (Vec<Symbol>, Pattern) {
    let base = alphabet(t, p, &[]);
    let fresh = ('0'..='9')
        .chain('a'..='z')
        .find(|c| !base.contains(c))
        .expect("alphabet leaves a free symbol");
    let l = t.len().next_power_of_two();
    let log_l = l.trailing_zeros() as usize;
    let mut tt = vec![fresh; 3 * l - 1];
    tt.extend(t);
    tt.extend(vec![fresh; 3 * l - 1]);

    let mut sigma = base.clone();
    sigma.push(fresh);
    let any = any_of(&sigma);
    let powers: Vec<Pattern> = (0..=log_l)
        .map(|i| {
            Pattern::alt(vec![
                Pattern::word(&vec![fresh; 1 << i]),
                Pattern::word(&vec![fresh; 1 << (i + 1)]),
            ])
        })
        .collect();
    let mut out = PatternTemplate::default();
    powers.iter().for_each(|x| {
        out.node(x.clone());
    });
    for _ in 0..l {
        out.node(any.clone());
    }
    out.pattern(p);
    for _ in 0..l {
        out.node(any.clone());
    }
    powers.iter().for_each(|x| {
        out.node(x.clone());
    });
    (tt, out.instantiate(&[]).expect("no holes"))
}
