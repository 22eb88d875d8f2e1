//! Fixed-seed differential suite: fast engine against the baseline, and every
//! reduction against brute force on small instances.

use std::fmt::Write;

use homre_core::fast::{fast_solve, FastConfig};
use homre_core::forge::{build, ReductionType};
use homre_core::formula::{brute_force_pair, random_instance};
use homre_core::{Pattern, Problem, Symbol};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline;

pub struct Report {
    pub text: String,
    pub ok: bool,
}

/// One alternative: symbols, and either sets or `σ+` items.
fn alternative(rng: &mut ChaCha8Rng, sigma: &[Symbol], plus: bool) -> Pattern {
    let len = rng.random_range(1..=4);
    let items = (0..len)
        .map(|_| {
            let c = Pattern::sym(*sigma.choose(rng).unwrap());
            match (plus, rng.random_bool(0.5)) {
                (true, true) => Pattern::plus(c),
                (false, true) => {
                    let k = rng.random_range(2..=sigma.len().max(2)).min(sigma.len());
                    let set = sigma.choose_multiple(rng, k).map(|&s| Pattern::sym(s)).collect();
                    Pattern::alt(set)
                }
                _ => c,
            }
        })
        .collect();
    Pattern::concat(items)
}

fn instance(rng: &mut ChaCha8Rng, plus: bool, prob: Problem) -> (Vec<Symbol>, Pattern) {
    let sigma: Vec<Symbol> = ['a', 'b', 'c', 'd'][..rng.random_range(1..=4)].to_vec();
    let alts: Vec<Pattern> = (0..rng.random_range(1..=5)).map(|_| alternative(rng, &sigma, plus)).collect();
    let len = rng.random_range(0..=40);
    let t = (0..len).map(|_| *sigma.choose(rng).unwrap()).collect();
    let body = Pattern::alt(alts);
    let p = match prob {
        Problem::Matching => body,
        Problem::Membership => Pattern::plus(body),
    };
    (t, p)
}

pub fn run(seed: u64, count: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = FastConfig { seed, ..FastConfig::default() };
    let mut text = format!("selftest seed={seed}\n");
    let mut ok = true;

    for (plus, prob, name) in [
        (false, Problem::Matching, "|∘| matching"),
        (true, Problem::Matching, "|∘+ matching"),
        (false, Problem::Membership, "+|∘| membership"),
        (true, Problem::Membership, "+|∘+ membership"),
    ] {
        let (mut agree, mut positives) = (0, 0);
        for _ in 0..count {
            let (t, p) = instance(&mut rng, plus, prob);
            let want = baseline(&t, &p, prob);
            positives += usize::from(want);
            agree += usize::from(matches!(fast_solve(&t, &p, prob, &cfg), Ok(o) if o.answer == want));
        }
        ok &= agree == count;
        writeln!(text, "  fast {name}: {agree}/{count} agree ({positives} true)").unwrap();
    }

    for ty in ReductionType::ALL {
        for prob in [Problem::Matching, Problem::Membership] {
            if !ty.supports(prob) {
                continue;
            }
            // Padded membership transforms grow quadratically for the baseline.
            let small = prob == Problem::Membership && ty.is_matching();
            let (mut agree, mut total) = (0, 0);
            for _ in 0..10 {
                let s = if small { 1 } else { rng.random_range(1..=3) };
                let nm = if small { 1 } else { 2 };
                let (n, m) = (rng.random_range(1..=nm), rng.random_range(1..=nm));
                let inst = random_instance(s, 2, n, m, rng.random()).expect("feasible shape");
                let ri = build(&inst, ty, prob).expect("construction succeeds");
                total += 1;
                agree += usize::from(ri.baseline_verdict() == brute_force_pair(&inst).is_some());
            }
            ok &= agree == total;
            writeln!(text, "  reduce {ty} {prob}: {agree}/{total} agree").unwrap();
        }
    }
    writeln!(text, "{}", if ok { "selftest: ok" } else { "selftest: FAILED" }).unwrap();
    Report { text, ok }
}
