mod common;

use std::collections::BTreeSet;

use common::*;
use homre_core::fast::{
    compute_flagged_set, compute_match_set, fast_solve, rle, rle_pattern, run_vec_orthogonal, FastConfig, FlaggedMatch,
    Run,
};
use homre_core::nfa::Nfa;
use homre_core::{nfa_match, nfa_member, Pattern, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn baseline(t: &[char], p: &Pattern, prob: Problem) -> bool {
    match prob {
        Problem::Matching => nfa_match(t, p),
        Problem::Membership => nfa_member(t, p),
    }
}

fn alternatives(p: &Pattern) -> Vec<Pattern> {
    let body = match p {
        Pattern::Plus(c) => c.as_ref(),
        other => other,
    };
    match body {
        Pattern::Alt(bs) => bs.clone(),
        other => vec![other.clone()],
    }
}

#[test]
fn threshold_choice_never_changes_answers() {
    let configs: Vec<FastConfig> = [Some(2), Some(3), Some(4), None]
        .into_iter()
        .map(|f| FastConfig { threshold_f: f, ..FastConfig::default() })
        .collect();
    for kind in FastKind::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfa57 + kind as u64);
        for _ in 0..2000 {
            let (t, p) = random_fast_instance(&mut rng, kind);
            let expected = baseline(&t, &p, kind.problem());
            for cfg in &configs {
                let got = fast_solve(&t, &p, kind.problem(), cfg).unwrap();
                assert_eq!(got.answer, expected, "{} f={:?}: {p} on {:?}", kind.name(), cfg.threshold_f, String::from_iter(&t));
            }
        }
    }
}

#[test]
fn match_set_is_union_of_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for round in 0..2000 {
        let (t, p) = random_fast_instance(&mut rng, FastKind::OrMatching);
        let alts = alternatives(&p);
        let cfg = FastConfig { threshold_f: Some(2 + round % 3), ..FastConfig::default() };
        let got = compute_match_set(&t, &alts, &cfg).unwrap();
        let mut expected = BTreeSet::new();
        for a in &alts {
            expected.extend(Nfa::compile(a).intervals(&t));
        }
        assert_eq!(got.0, expected, "{p} on {:?}", String::from_iter(&t));
    }
}

/// Placements of each alternative's core, straight from the definition.
fn flagged_by_definition(t: &[char], alts: &[Pattern]) -> BTreeSet<FlaggedMatch> {
    let mut out = BTreeSet::new();
    for a in alts {
        let r = rle_pattern(a).unwrap();
        if r.min_len() > t.len() {
            continue;
        }
        let mut core = r.clone();
        let first_plus = core.runs[0].is_plus();
        let last_plus = core.runs.last().unwrap().is_plus();
        let k = core.runs.len();
        core.runs[0] = Run::exact(core.runs[0].symbol, core.runs[0].len);
        core.runs[k - 1] = Run::exact(core.runs[k - 1].symbol, core.runs[k - 1].len);
        let cp = core.to_pattern();
        for i in 0..t.len() {
            for j in i + 1..=t.len() {
                if lang_member(&cp, &t[i..j]) {
                    out.insert(FlaggedMatch { first_plus, i: i + 1, j, last_plus });
                }
            }
        }
    }
    out
}

#[test]
fn flagged_set_equals_core_placements() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for round in 0..1500 {
        let (mut t, p) = random_fast_instance(&mut rng, FastKind::PlusMembership);
        // long runs exercise the exhaustive alignment path
        if round % 4 == 0 && !t.is_empty() {
            let i = rng.random_range(0..t.len());
            let c = t[i];
            t.splice(i..i, std::iter::repeat_n(c, 10));
        }
        let alts = alternatives(&p);
        let cfg = FastConfig { threshold_f: Some(2 + round % 2), ..FastConfig::default() };
        let got = compute_flagged_set(&t, &alts, &cfg).unwrap();
        assert_eq!(got.0, flagged_by_definition(&t, &alts), "{p} on {:?}", String::from_iter(&t));
    }
}

#[test]
fn run_encoding_matches_run_predicate() {
    for f in [2usize] {
        let big_f = f.pow(3);
        for (x, y) in [('a', 'a'), ('a', 'b')] {
            for lx in 1..=big_f {
                for ly in 1..=big_f {
                    for run in [Run::exact(y, ly), Run::at_least(y, ly)] {
                        let expected = x == y
                            && match run.is_plus() {
                                true => lx >= ly,
                                false => lx == ly,
                            };
                        assert_eq!(run_vec_orthogonal((x, lx), run, f).unwrap(), expected, "({x},{lx}) vs {run}");
                    }
                }
            }
        }
    }
}

#[test]
fn text_encoding_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let t = random_text(&mut rng, &['a', 'b', 'c'], 40);
        let r = rle(&t);
        assert_eq!(r.expand(), t);
        assert!(r.runs.windows(2).all(|w| w[0].symbol != w[1].symbol));
        assert!(r.runs.iter().all(|x| x.len >= 1));
    }
}

#[test]
fn type_plus_concat_plus_concat_is_rejected() {
    let p = homre_core::parse_pattern("(0(1(23)+)+)").unwrap();
    assert!(fast_solve(&chars("0123"), &p, Problem::Matching, &FastConfig::default()).is_err());
}
