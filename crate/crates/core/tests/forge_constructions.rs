use std::collections::BTreeSet;

use homre_core::forge::{
    build, build_membership_opoc, encode_dictionaries, encode_gates, gate_triple, helper_gadget,
    instantiate, path_token, pattern_changes, read_bundle, sample_member, symbol_changes,
    to_membership, verify_reduction, write_bundle, ForgeError, GadgetToken, MaxChanges,
    ReductionType,
};
use homre_core::formula::{random_instance, FormulaPairInstance, MonotoneFormula, Side};
use homre_core::{conforms_to, nfa_match, nfa_member, Nfa, Pattern, Problem};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn bits(x: usize, len: usize) -> Vec<bool> {
    (0..len).map(|k| x >> k & 1 == 1).collect()
}

fn all_assignments(len: usize) -> Vec<Vec<bool>> {
    (0..1usize << len).map(|x| bits(x, len)).collect()
}

fn small_formula(s: usize, cap: usize, seed: u64) -> MonotoneFormula {
    random_instance(s, cap, 1, 1, seed).unwrap().formula
}

#[test]
fn input_gadget_examples() {
    let f = MonotoneFormula::parse("a1").unwrap();
    let map = encode_gates(&f, ReductionType::Cpc).unwrap();
    let g = map.get(1);
    assert_eq!(
        g.t.0,
        vec![GadgetToken::Symbol('0'), GadgetToken::HoleA(1), GadgetToken::Symbol('1')]
    );
    assert_eq!(g.p.instantiate(&[]).unwrap().render(), "0+11+");
    assert_eq!(g.u, chars("0011"));
    assert_eq!(g.q.instantiate(&[]).unwrap().render(), "0+1+");

    assert_eq!(g.t.instantiate(&[false]).unwrap(), chars("001"));
    assert_eq!(g.t.instantiate(&[true]).unwrap(), chars("011"));
    let p = g.p.instantiate(&[]).unwrap();
    assert!(!nfa_member(&chars("001"), &p));
    assert!(nfa_member(&chars("011"), &p));
    assert!(nfa_member(&chars("0011"), &p));

    let f = MonotoneFormula::parse("b1").unwrap();
    let map = encode_gates(&f, ReductionType::Cpc).unwrap();
    let g = map.get(1);
    assert_eq!(g.t.instantiate(&[]).unwrap(), chars("011"));
    assert_eq!(g.p.instantiate(&[false]).unwrap().render(), "0+01+");
    assert_eq!(g.p.instantiate(&[true]).unwrap().render(), "0+11+");
    assert!(matches!(
        g.p.instantiate(&[]),
        Err(ForgeError::MissingHole { side: Side::B, index: 1 })
    ));
}

#[test]
fn gate_triples_hold_on_small_formulas() {
    for ty in ReductionType::MATCHING {
        for seed in 0..12u64 {
            let f = small_formula(1 + seed as usize % 4, 2, seed);
            let map = encode_gates(&f, ty).unwrap();
            let (na, nb) = (f.arity(Side::A), f.arity(Side::B));
            for g in f.gate_ids() {
                for a in all_assignments(na) {
                    for b in all_assignments(nb) {
                        let tr = gate_triple(&map, &f, g, &a, &b).unwrap();
                        assert!(tr.ok(), "{ty} {} gate {g} a={a:?} b={b:?}: {tr:?}", f.render());
                    }
                }
            }
        }
    }
    assert!(encode_gates(&small_formula(2, 1, 0), ReductionType::Opoc).is_err());
}

#[test]
fn symbol_change_examples() {
    assert_eq!(symbol_changes(&chars("aaa")), 0);
    assert_eq!(symbol_changes(&chars("ab")), 1);
    assert_eq!(symbol_changes(&chars("0011")), 1);
    let prof = pattern_changes(&Pattern::parse("0+11+").unwrap());
    assert_eq!(prof.max_changes, MaxChanges::Bounded(1));
}

/// Every word of `L(p)` with each repetition taken at most twice; more
/// copies of a single symbol never add a change.
fn short_words(p: &Pattern) -> Vec<Vec<char>> {
    match p {
        Pattern::Symbol(c) => vec![vec![*c]],
        Pattern::Alt(bs) => bs.iter().flat_map(short_words).collect(),
        Pattern::Concat(cs) => cs.iter().fold(vec![Vec::new()], |acc, c| {
            let tails = short_words(c);
            acc.iter()
                .flat_map(|w| tails.iter().map(move |x| [w.clone(), x.clone()].concat()))
                .collect()
        }),
        Pattern::Plus(c) | Pattern::Star(c) => {
            let once = short_words(c);
            let mut out: Vec<Vec<char>> = once.clone();
            for w in &once {
                out.extend(once.iter().map(|x| [w.clone(), x.clone()].concat()));
            }
            if matches!(p, Pattern::Star(_)) {
                out.push(Vec::new());
            }
            out
        }
    }
}

fn compound_repetition(p: &Pattern) -> bool {
    match p {
        Pattern::Plus(c) | Pattern::Star(c) => !matches!(**c, Pattern::Symbol(_)),
        _ => p.children().iter().any(compound_repetition),
    }
}

#[test]
fn pattern_changes_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sigma = chars("012");
    for _ in 0..400 {
        let ty = *[ReductionType::Cs, ReductionType::Cpo, ReductionType::Cop, ReductionType::Coc]
            .choose(&mut rng)
            .unwrap();
        let p = random_typed_pattern(ty, &mut rng, &sigma);
        let prof = pattern_changes(&p);
        if compound_repetition(&p) {
            assert_eq!(prof.max_changes, MaxChanges::Unbounded);
            continue;
        }
        let words = short_words(&p);
        let best = words.iter().map(|w| symbol_changes(w)).max().unwrap();
        assert_eq!(prof.max_changes, MaxChanges::Bounded(best), "{p}");
        assert_eq!(prof.nullable, words.iter().any(Vec::is_empty), "{p}");
        let first: BTreeSet<char> = words.iter().filter_map(|w| w.first().copied()).collect();
        assert_eq!(prof.first, first, "{p}");
    }
}

#[test]
fn change_claim_on_star_gadgets() {
    for ty in [ReductionType::Cs] {
        for seed in 0..20u64 {
            let f = small_formula(1 + seed as usize % 8, 4, seed);
            let map = encode_gates(&f, ty).unwrap();
            for g in f.gate_ids() {
                for a in all_assignments(f.arity(Side::A)).into_iter().take(8) {
                    assert!(homre_core::forge::change_claim(&map, g, &a).unwrap(), "{ty} gate {g}");
                }
            }
        }
    }
}

fn assert_end_to_end(
    ty: ReductionType,
    problem: Problem,
    seeds: std::ops::Range<u64>,
    s_max: usize,
    nm_max: usize,
) {
    let mut seen = BTreeSet::new();
    for seed in seeds {
        let s = 1 + seed as usize % s_max;
        let cap = (s as f64).log2().ceil() as usize;
        let (n, m) = (1 + seed as usize % nm_max, 1 + (seed as usize / 2) % nm_max);
        let inst = random_instance(s, cap.max(1), n, m, seed).unwrap();
        let ri = build(&inst, ty, problem).unwrap();
        let expected = homre_core::formula::brute_force_pair(&inst).is_some();
        assert_eq!(ri.baseline_verdict(), expected, "{ty} {problem} seed {seed}");
        seen.insert(expected);
    }
    assert_eq!(seen.len(), 2, "{ty} {problem}: both verdicts should occur");
}

#[test]
fn matching_builders_agree_with_brute_force() {
    for ty in ReductionType::MATCHING {
        assert_end_to_end(ty, Problem::Matching, 0..20, 3, 2);
    }
}

#[test]
fn membership_builders_agree_with_brute_force() {
    assert_end_to_end(ReductionType::Cpo, Problem::Membership, 0..12, 2, 2);
    // The padded transforms are quadratic for the baseline; keep them tiny.
    for ty in [ReductionType::Cpc, ReductionType::Coc, ReductionType::Cs, ReductionType::Cop] {
        assert_end_to_end(ty, Problem::Membership, 0..8, 1, 1);
    }
    assert_end_to_end(ReductionType::Opoc, Problem::Membership, 0..40, 6, 3);
}

#[test]
fn single_leaf_instance_matches_iff_satisfied() {
    for ty in ReductionType::MATCHING {
        for (a, b, want) in [(true, true, true), (false, true, false)] {
            let f = MonotoneFormula::parse("(and a1 b1)").unwrap();
            let inst = FormulaPairInstance::new(f, vec![vec![a]], vec![vec![b]]).unwrap();
            let ri = build(&inst, ty, Problem::Matching).unwrap();
            assert_eq!(nfa_match(&ri.text, &ri.pattern), want, "{ty}");
        }
    }
}

#[test]
fn generated_patterns_keep_their_type() {
    for ty in ReductionType::ALL {
        for seed in 0..6u64 {
            let inst = random_instance(1 + seed as usize, 3, 2, 2, seed).unwrap();
            for problem in [Problem::Matching, Problem::Membership] {
                if !ty.supports(problem) {
                    continue;
                }
                let ri = build(&inst, ty, problem).unwrap();
                assert!(conforms_to(&ri.pattern, &ty.type_string()), "{ty} {problem}");
                if ty == ReductionType::Coc {
                    assert!(!has_repetition(&ri.pattern));
                }
                if problem == Problem::Matching {
                    let mut sigma = ri.pattern.alphabet();
                    sigma.extend(ri.text.iter().copied());
                    let allowed: BTreeSet<char> = match ty {
                        ReductionType::Cpc | ReductionType::Coc => "0123".chars().collect(),
                        _ => "01234".chars().collect(),
                    };
                    assert!(sigma.is_subset(&allowed), "{ty}: {sigma:?}");
                } else if ty == ReductionType::Opoc {
                    let sigma = ri.pattern.alphabet();
                    assert!(sigma.is_subset(&"0123456".chars().collect()));
                }
            }
        }
    }
}

fn has_repetition(p: &Pattern) -> bool {
    matches!(p, Pattern::Plus(_) | Pattern::Star(_)) || p.children().iter().any(has_repetition)
}

fn random_word(rng: &mut ChaCha8Rng, sigma: &[char], len: usize) -> Vec<char> {
    (0..len).map(|_| *sigma.choose(rng).unwrap()).collect()
}

/// Random pattern of the given matching type over `sigma`.
fn random_typed_pattern(ty: ReductionType, rng: &mut ChaCha8Rng, sigma: &[char]) -> Pattern {
    let k = rng.random_range(1..=4);
    let items = (0..k)
        .map(|_| {
            let sym = Pattern::sym(*sigma.choose(rng).unwrap());
            if rng.random_bool(0.3) {
                return sym;
            }
            match ty {
                ReductionType::Cpc => {
                    let len = rng.random_range(1..=3);
                    Pattern::plus(Pattern::word(&random_word(rng, sigma, len)))
                }
                ReductionType::Coc => {
                    let b = rng.random_range(2..=3);
                    Pattern::alt(
                        (0..b)
                            .map(|_| {
                                let len = rng.random_range(1..=3);
                                Pattern::word(&random_word(rng, sigma, len))
                            })
                            .collect(),
                    )
                }
                ReductionType::Cs => Pattern::star(sym),
                ReductionType::Cpo => {
                    let alts: BTreeSet<char> = random_word(rng, sigma, 2).into_iter().collect();
                    Pattern::plus(Pattern::alt(alts.into_iter().map(Pattern::sym).collect()))
                }
                ReductionType::Cop => {
                    let other = Pattern::sym(*sigma.choose(rng).unwrap());
                    Pattern::alt(vec![other, Pattern::plus(sym)])
                }
                ReductionType::Opoc => unreachable!(),
            }
        })
        .collect();
    Pattern::concat(items)
}

#[test]
fn membership_transforms_preserve_verdicts() {
    let sigma = chars("012");
    for ty in ReductionType::MATCHING {
        let mut rng = ChaCha8Rng::seed_from_u64(ty as u64);
        let mut positives = 0;
        for trial in 0..500 {
            let p = random_typed_pattern(ty, &mut rng, &sigma);
            let len = rng.random_range(1..=20);
            let mut t = random_word(&mut rng, &sigma, len);
            if trial % 2 == 0 {
                let w = sample_member(&p, &mut rng);
                let at = rng.random_range(0..=t.len());
                t.splice(at..at, w);
                t.truncate(20);
                if t.is_empty() {
                    t.push('0');
                }
            }
            let want = nfa_match(&t, &p);
            positives += usize::from(want);
            let (t2, p2) = to_membership(&t, &p, ty).unwrap();
            assert_eq!(nfa_member(&t2, &p2), want, "{ty} t={t:?} p={p}");
            assert!(conforms_to(&p2, &ty.type_string()) || !conforms_to(&p, &ty.type_string()));
        }
        assert!(positives >= 25 && positives <= 475, "{ty}: {positives} positives");
    }
    assert_eq!(
        to_membership(&[], &Pattern::sym('a'), ReductionType::Cs),
        Err(ForgeError::EmptyText)
    );
}

#[test]
fn plus_or_transform_example() {
    let (t, p) = to_membership(&chars("ab"), &Pattern::parse("ab").unwrap(), ReductionType::Cpo).unwrap();
    assert_eq!(t, chars("1ab1"));
    assert!(nfa_member(&t, &p));
}

#[test]
fn concat_or_transform_size_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = chars("012");
    for len in [1usize, 3, 7, 16, 33] {
        let p = random_typed_pattern(ReductionType::Coc, &mut rng, &sigma);
        let t = random_word(&mut rng, &sigma, len);
        let (_, p2) = to_membership(&t, &p, ReductionType::Coc).unwrap();
        let l = len.next_power_of_two();
        let alpha = p2.alphabet().len();
        assert!(p2.size() - p.size() <= 8 * alpha * l + 64, "len {len}");
    }
}

#[test]
fn dictionary_path_confinement() {
    for seed in 0..16u64 {
        let f = small_formula(1 + seed as usize % 4, 2, seed);
        let enc = encode_dictionaries(&f);
        let (na, nb) = (f.arity(Side::A), f.arity(Side::B));
        for g in f.gate_ids() {
            let d = f.gate_depth(g);
            let prefix = |i: usize| (0..i).flat_map(|k| path_token(&f, g, k)).collect::<Vec<_>>();
            let suffix = |j: usize| (0..j).rev().flat_map(|k| path_token(&f, g, k)).collect::<Vec<_>>();
            for b in all_assignments(nb) {
                let dict = Pattern::plus(Pattern::alt(
                    enc.words(g, &b).unwrap().iter().map(|w| Pattern::word(w)).collect(),
                ));
                let framed = |i: usize, j: usize| {
                    let mut items: Vec<Pattern> = prefix(i).into_iter().map(Pattern::sym).collect();
                    items.push(dict.clone());
                    items.extend(suffix(j).into_iter().map(Pattern::sym));
                    Nfa::compile(&Pattern::concat(items))
                };
                for a in all_assignments(na) {
                    let t = enc.get(g).t.instantiate(&a).unwrap();
                    for i in 1..=d {
                        assert!(framed(i, i).accepts(&t), "gate {g} i={i}");
                    }
                    for i in 0..=d {
                        for j in (0..=d).filter(|&j| j != i) {
                            assert!(!framed(i, j).accepts(&t), "gate {g} i={i} j={j}");
                        }
                    }
                    let whole = Nfa::compile(&dict).accepts(&t);
                    assert_eq!(whole, f.eval_gate(g, &a, &b));
                }
            }
        }
    }
}

#[test]
fn opoc_uses_state_words_and_blow_up() {
    let inst = random_instance(3, 2, 2, 1, 4).unwrap();
    let ri = build_membership_opoc(&inst).unwrap();
    assert!(ri.text.starts_with(&chars("563")));
    assert!(ri.text.ends_with(&chars("45")));
    assert!(matches!(&ri.pattern, Pattern::Alt(bs) if bs.len() == 1));
    assert!(!ri.meta.swapped);
}

#[test]
fn helper_gadgets_accept_padding() {
    let u = chars("0011");
    let l = u.len() + 4;
    let pad = vec!['4'; l];
    let framed = [&pad[..], &['3'], &u[..], &['3'], &pad[..]].concat();
    for ty in [ReductionType::Cs, ReductionType::Cpo, ReductionType::Cop] {
        let h = helper_gadget(ty, &u).unwrap();
        assert!(nfa_member(&pad, &h), "{ty}");
        assert!(nfa_member(&framed, &h), "{ty}");
        assert!(conforms_to(&h, &ty.type_string()), "{ty}: {h}");
    }
}

#[test]
fn verify_agrees_and_catches_mutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ty in ReductionType::ALL {
        let problem = if ty.is_matching() { Problem::Matching } else { Problem::Membership };
        let inst = random_instance(2, 1, 2, 1, 7).unwrap();
        let ri = build(&inst, ty, problem).unwrap();
        let report = verify_reduction(&ri, &inst);
        assert!(report.ok(), "{ty}: {report}");
        assert!(report.to_string().starts_with("AGREE"));

        let mut flagged = 0;
        for _ in 0..100 {
            let mut bad = ri.clone();
            let k = rng.random_range(0..bad.text.len());
            let sigma: Vec<char> = bad.pattern.alphabet().into_iter().filter(|&c| c != bad.text[k]).collect();
            bad.text[k] = *sigma.choose(&mut rng).unwrap();
            flagged += usize::from(!verify_reduction(&bad, &inst).ok());
        }
        assert!(flagged >= 95, "{ty}: {flagged}/100 flagged");
    }
}

#[test]
fn rejects_empty_sides() {
    let f = MonotoneFormula::parse("(or a1 b1)").unwrap();
    assert!(FormulaPairInstance::new(f.clone(), vec![vec![true]], vec![]).is_err());
    let inst = FormulaPairInstance { formula: f, a: vec![vec![true]], b: vec![] };
    assert!(build(&inst, ReductionType::Cpc, Problem::Matching).is_err());
    assert!(build(&inst, ReductionType::Opoc, Problem::Membership).is_err());
}

#[test]
fn bundles_round_trip() {
    let dir = std::env::temp_dir().join(format!("homre-bundle-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = random_instance(4, 2, 2, 3, 1).unwrap();
    for ty in ReductionType::ALL {
        let problem = if ty.is_matching() { Problem::Matching } else { Problem::Membership };
        let ri = build(&inst, ty, problem).unwrap();
        let prefix = dir.join(ty.code());
        write_bundle(&prefix, &ri).unwrap();
        assert_eq!(read_bundle(&prefix).unwrap(), ri);
    }
    let cpc = build(&inst, ReductionType::Cpc, Problem::Matching).unwrap();
    assert!(cpc.meta.swapped);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn instantiate_fills_holes() {
    let f = MonotoneFormula::parse("(or a1 b1)").unwrap();
    let map = encode_gates(&f, ReductionType::Cpc).unwrap();
    let g = instantiate(&map, f.root(), &[true], &[false]).unwrap();
    assert!(!g.t.is_empty());
    assert!(instantiate(&map, f.root(), &[], &[false]).is_err());
}
