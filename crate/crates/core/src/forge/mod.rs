//! Hardness-instance generators: Formula-Pair instances turned into a text
//! and a pattern whose match/membership verdict equals the existence of a
//! satisfying pair.

pub mod changes;
mod dictionary;
mod gadgets;
mod membership;
mod outer;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{brute_force_pair, FormulaError, FormulaPairInstance, GateId, Side};
use crate::nfa::Nfa;
use crate::pattern::{conforms_to, Pattern, PatternError, Symbol, TypeString};
use crate::Problem;

pub use changes::{pattern_changes, symbol_changes, ChangeProfile, MaxChanges};
pub use dictionary::{
    blow_up, build_membership_opoc, encode_dictionaries, path_token, DictionaryEncoding,
    GateDictionary,
};
pub use gadgets::{
    barred, encode_gates, instantiate, separator, starred, GadgetMap, GadgetToken, GateGadget,
    Instantiated, PatternItem, PatternTemplate, TextTemplate,
};
pub use membership::to_membership;
pub use outer::{
    build_matching_coc, build_matching_cpc, build_matching_generic, check_helper, helper_envelope,
    helper_gadget, HelperCheck,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("no {problem} construction for type {ty}")]
    Unsupported { ty: ReductionType, problem: Problem },
    #[error("no value for variable {index} of side {side}")]
    MissingHole { side: Side, index: usize },
    #[error("helper gadget violates its conditions: {0}")]
    HelperGadget(String),
    #[error("the text is empty")]
    EmptyText,
    #[error("unknown reduction type {0:?}")]
    UnknownType(String),
    #[error("bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Pattern types with a reduction; codes use `c`=∘, `o`=|, `p`=+, `s`=⋆.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionType {
    Cpc,
    Coc,
    Cs,
    Cpo,
    Cop,
    Opoc,
}

impl ReductionType {
    pub const ALL: [ReductionType; 6] = [
        ReductionType::Cpc,
        ReductionType::Coc,
        ReductionType::Cs,
        ReductionType::Cpo,
        ReductionType::Cop,
        ReductionType::Opoc,
    ];
    pub const MATCHING: [ReductionType; 5] = [
        ReductionType::Cpc,
        ReductionType::Coc,
        ReductionType::Cs,
        ReductionType::Cpo,
        ReductionType::Cop,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ReductionType::Cpc => "cpc",
            ReductionType::Coc => "coc",
            ReductionType::Cs => "cs",
            ReductionType::Cpo => "cpo",
            ReductionType::Cop => "cop",
            ReductionType::Opoc => "opoc",
        }
    }

    pub fn type_string(self) -> TypeString {
        TypeString::parse(self.code()).expect("codes are valid type strings")
    }

    /// Has a per-gate gadget encoding and a matching construction.
    pub fn is_matching(self) -> bool {
        self != ReductionType::Opoc
    }

    pub fn supports(self, problem: Problem) -> bool {
        problem == Problem::Membership || self.is_matching()
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ReductionType {
    type Err = ForgeError;

    /// Accepts the codes and any spelling of the same type string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ty = TypeString::parse(s).map_err(|_| ForgeError::UnknownType(s.into()))?;
        ReductionType::ALL
            .into_iter()
            .find(|r| r.type_string() == ty)
            .ok_or_else(|| ForgeError::UnknownType(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meta {
    pub ty: ReductionType,
    pub problem: Problem,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub d: usize,
    pub text_len: usize,
    pub pattern_size: usize,
    pub seed: Option<u64>,
    /// A and B were exchanged because `m > n`.
    pub swapped: bool,
}

impl Meta {
    pub fn render(&self) -> String {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "type={}\nproblem={}\nn={}\nm={}\ns={}\nd={}\nseed={}\nswapped={}\ntext_len={}\npattern_size={}\n",
            self.ty, self.problem, self.n, self.m, self.s, self.d, seed, self.swapped,
            self.text_len, self.pattern_size
        )
    }

    pub fn parse(src: &str) -> Result<Self, ForgeError> {
        let mut kv = std::collections::HashMap::new();
        for line in src.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ForgeError::Bundle(format!("bad meta line {line:?}")))?;
            kv.insert(k.trim(), v.trim());
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| ForgeError::Bundle(format!("meta is missing {k}")))
        };
        let num = |k: &str| -> Result<usize, ForgeError> {
            get(k)?
                .parse()
                .map_err(|_| ForgeError::Bundle(format!("meta {k} is not a number")))
        };
        let seed = match get("seed")? {
            "none" => None,
            s => Some(s.parse().map_err(|_| ForgeError::Bundle("bad seed".into()))?),
        };
        Ok(Meta {
            ty: get("type")?.parse()?,
            problem: get("problem")?.parse().map_err(ForgeError::Bundle)?,
            n: num("n")?,
            m: num("m")?,
            s: num("s")?,
            d: num("d")?,
            text_len: num("text_len")?,
            pattern_size: num("pattern_size")?,
            seed,
            swapped: get("swapped")? == "true",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub text: Vec<Symbol>,
    pub pattern: Pattern,
    pub meta: Meta,
}

impl ReductionInstance {
    /// Baseline verdict for the declared problem.
    pub fn baseline_verdict(&self) -> bool {
        let nfa = Nfa::compile(&self.pattern);
        match self.meta.problem {
            Problem::Matching => nfa.matches(&self.text),
            Problem::Membership => nfa.accepts(&self.text),
        }
    }
}

/// Builds the instance of type `ty` for `problem`; membership instances of
/// the matching types go through [`to_membership`].
pub fn build(
    inst: &FormulaPairInstance,
    ty: ReductionType,
    problem: Problem,
) -> Result<ReductionInstance, ForgeError> {
    match (ty, problem) {
        (ReductionType::Opoc, Problem::Membership) => build_membership_opoc(inst),
        (ReductionType::Opoc, Problem::Matching) => Err(ForgeError::Unsupported { ty, problem }),
        (ReductionType::Cpc, Problem::Matching) => build_matching_cpc(inst),
        (ReductionType::Coc, Problem::Matching) => build_matching_coc(inst),
        (_, Problem::Matching) => build_matching_generic(inst, ty),
        (_, Problem::Membership) => {
            let mut ri = build(inst, ty, Problem::Matching)?;
            let (t, p) = to_membership(&ri.text, &ri.pattern, ty)?;
            ri.meta.problem = Problem::Membership;
            ri.meta.text_len = t.len();
            ri.meta.pattern_size = p.size();
            ri.text = t;
            ri.pattern = p;
            Ok(ri)
        }
    }
}

/// Random member of `L(p)`; repetitions are geometric with mean about two.
pub fn sample_member(p: &Pattern, rng: &mut impl Rng) -> Vec<Symbol> {
    let mut out = Vec::new();
    sample_into(p, rng, &mut out);
    out
}

fn sample_into(p: &Pattern, rng: &mut impl Rng, out: &mut Vec<Symbol>) {
    match p {
        Pattern::Symbol(c) => out.push(*c),
        Pattern::Concat(cs) => cs.iter().for_each(|c| sample_into(c, rng, out)),
        Pattern::Alt(cs) => sample_into(&cs[rng.random_range(0..cs.len())], rng, out),
        Pattern::Plus(c) | Pattern::Star(c) => {
            let mut reps = usize::from(matches!(p, Pattern::Plus(_)));
            while reps < 8 && rng.random_bool(0.5) {
                reps += 1;
            }
            for _ in 0..reps {
                sample_into(c, rng, out);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Verification

/// The three per-gate conditions: correctness, `t(a) ∈ L(q)`, `u ∈ L(q) ∩ L(p(b))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateTriple {
    pub correct: bool,
    pub text_in_universal: bool,
    pub universal_in_both: bool,
}

impl GateTriple {
    pub fn ok(&self) -> bool {
        self.correct && self.text_in_universal && self.universal_in_both
    }
}

pub fn gate_triple(
    map: &GadgetMap,
    f: &crate::formula::MonotoneFormula,
    gate: GateId,
    a: &[bool],
    b: &[bool],
) -> Result<GateTriple, ForgeError> {
    let g = instantiate(map, gate, a, b)?;
    let p = Nfa::compile(&g.p);
    let q = Nfa::compile(&g.q);
    Ok(GateTriple {
        correct: f.eval_gate(gate, a, b) == p.accepts(&g.t),
        text_in_universal: q.accepts(&g.t),
        universal_in_both: q.accepts(&g.u) && p.accepts(&g.u),
    })
}

/// `A(u) = A(t(a)) = A(q)` and `2·A(u) > A(p)`, the pattern taken over every
/// B-assignment at once.
pub fn change_claim(map: &GadgetMap, gate: GateId, a: &[bool]) -> Result<bool, ForgeError> {
    let g = map.get(gate);
    let au = symbol_changes(&g.u);
    let at = symbol_changes(&g.t.instantiate(a)?);
    let aq = pattern_changes(&g.q.instantiate(&[])?).max_changes;
    let ap = pattern_changes(&g.p.widened()).max_changes;
    Ok(au == at
        && aq == MaxChanges::Bounded(au)
        && matches!(ap, MaxChanges::Bounded(k) if 2 * au > k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// A satisfying pair exists.
    pub expected: bool,
    /// Baseline verdict on the bundle.
    pub observed: bool,
    pub pair: Option<(usize, usize)>,
    pub checks: Vec<SubCheck>,
}

impl VerifyReport {
    pub fn agree(&self) -> bool {
        self.expected == self.observed
    }

    pub fn ok(&self) -> bool {
        self.agree() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &SubCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (baseline={}, brute-force={})",
            if self.agree() { "AGREE" } else { "DISAGREE" },
            self.observed,
            self.expected
        )?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "  {mark} {}", c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs the baseline on `ri` against brute force on `inst`, plus structural
/// and gadget-level checks.
pub fn verify_reduction(ri: &ReductionInstance, inst: &FormulaPairInstance) -> VerifyReport {
    let pair = brute_force_pair(inst);
    let mut checks = Vec::new();
    let meta = &ri.meta;
    let mut check = |name, passed, detail: String| checks.push(SubCheck { name, passed, detail });

    let ty = meta.ty;
    match build(inst, ty, meta.problem) {
        Ok(fresh) => {
            let same = fresh.text == ri.text && fresh.pattern == ri.pattern;
            check("rebuild", same, if same { String::new() } else { "bundle differs from the construction".into() });
        }
        Err(e) => check("rebuild", false, e.to_string()),
    }
    let sizes = meta.text_len == ri.text.len() && meta.pattern_size == ri.pattern.size();
    check(
        "sizes",
        sizes,
        format!("|t|={} size(p)={}", ri.text.len(), ri.pattern.size()),
    );
    let conforms = conforms_to(&ri.pattern, &ty.type_string());
    check("type", conforms, ty.type_string().to_string());

    let oriented = if meta.swapped { inst.swapped() } else { inst.clone() };
    if ty.is_matching() {
        match gadget_checks(&oriented, ty) {
            Ok(list) => list.into_iter().for_each(|(n, p, d)| check(n, p, d)),
            Err(e) => check("gadgets", false, e.to_string()),
        }
    } else {
        match dictionary_check(&oriented) {
            Ok(passed) => check("dictionary", passed, String::new()),
            Err(e) => check("dictionary", false, e.to_string()),
        }
    }

    VerifyReport {
        expected: pair.is_some(),
        observed: ri.baseline_verdict(),
        pair,
        checks,
    }
}

fn gadget_checks(
    inst: &FormulaPairInstance,
    ty: ReductionType,
) -> Result<Vec<(&'static str, bool, String)>, ForgeError> {
    let f = &inst.formula;
    let map = encode_gates(f, ty)?;
    let root = f.root();
    let mut triple = true;
    for a in &inst.a {
        for b in &inst.b {
            triple &= gate_triple(&map, f, root, a, b)?.ok();
        }
    }
    let mut out = vec![("gadget-triple", triple, String::new())];
    if matches!(ty, ReductionType::Cs | ReductionType::Cpo | ReductionType::Cop) {
        let u = &map.get(root).u;
        let h = helper_gadget(ty, u)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let hc = check_helper(&h, u, 64, &mut rng);
        out.push(("helper", hc.ok(), format!("{hc:?}")));
    }
    if matches!(ty, ReductionType::Cs | ReductionType::Cop) {
        let mut holds = true;
        for g in f.gate_ids() {
            for a in &inst.a {
                holds &= change_claim(&map, g, a)?;
            }
        }
        out.push(("symbol-changes", holds, String::new()));
    }
    Ok(out)
}

/// `F(a, b) ⟺ t_r(a) ∈ L(D_r(b)⁺)` for every pair.
fn dictionary_check(inst: &FormulaPairInstance) -> Result<bool, ForgeError> {
    let f = &inst.formula;
    let enc = encode_dictionaries(f);
    for b in &inst.b {
        let words = enc.words(f.root(), b)?;
        let dict = Pattern::plus(Pattern::alt(words.iter().map(|w| Pattern::word(w)).collect()));
        let nfa = Nfa::compile(&dict);
        for a in &inst.a {
            let t = enc.get(f.root()).t.instantiate(a)?;
            if nfa.accepts(&t) != f.eval_gate(f.root(), a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Bundles

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `<prefix>.text`, `<prefix>.pattern` and `<prefix>.meta`.
pub fn write_bundle(prefix: &Path, ri: &ReductionInstance) -> std::io::Result<()> {
    let mut text: String = ri.text.iter().collect();
    text.push('\n');
    std::fs::write(with_ext(prefix, "text"), text)?;
    std::fs::write(with_ext(prefix, "pattern"), format!("{}\n", ri.pattern))?;
    std::fs::write(with_ext(prefix, "meta"), ri.meta.render())
}

pub fn read_bundle(prefix: &Path) -> Result<ReductionInstance, ForgeError> {
    let read = |ext| {
        std::fs::read_to_string(with_ext(prefix, ext))
            .map_err(|e| ForgeError::Bundle(format!("{}: {e}", with_ext(prefix, ext).display())))
    };
    let text = read("text")?.trim_end_matches(['\n', '\r']).chars().collect();
    let pattern = Pattern::parse(read("pattern")?.trim_end_matches(['\n', '\r']))?;
    let meta = Meta::parse(&read("meta")?)?;
    Ok(ReductionInstance { text, pattern, meta })
}
