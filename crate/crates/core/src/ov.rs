//! Packed bit vectors, Batch-OV, and the randomized characteristic-vector
//! encoder χ.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pattern::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OvError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("symbol {0:?} is not in the encoder universe")]
    UnknownSymbol(Symbol),
    #[error("set of size {size} exceeds threshold f = {f}")]
    SetTooLarge { size: usize, f: usize },
    #[error("threshold f must be at least 1")]
    BadThreshold,
}

/// Fixed-dimension bit vector packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    dim: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(dim: usize) -> Self {
        BitVec {
            dim,
            words: vec![0; dim.div_ceil(64)],
        }
    }

    pub fn ones(dim: usize) -> Self {
        let mut v = BitVec::zeros(dim);
        v.fill(0, dim, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.dim);
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Set bits `from..to` to `b`.
    pub fn fill(&mut self, from: usize, to: usize, b: bool) {
        for i in from..to {
            self.set(i, b);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bitwise complement within the dimension.
    pub fn not(&self) -> BitVec {
        let mut v = BitVec {
            dim: self.dim,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        assert_eq!(self.dim, other.dim);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    /// Every set bit of `self` is set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        assert_eq!(self.dim, other.dim);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn orthogonal(&self, other: &BitVec) -> Result<bool, OvError> {
        if self.dim != other.dim {
            return Err(OvError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.orthogonal_unchecked(other))
    }

    fn orthogonal_unchecked(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Concatenation of `parts` in order.
    pub fn concat(parts: &[&BitVec]) -> BitVec {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut v = BitVec::zeros(dim);
        let mut at = 0;
        for p in parts {
            for i in 0..p.dim {
                if p.get(i) {
                    v.set(at + i, true);
                }
            }
            at += p.dim;
        }
        v
    }

    fn clear_tail(&mut self) {
        if self.dim % 64 != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.dim % 64)) - 1;
            }
        }
    }
}

fn check_dims(a: &[BitVec], b: &[BitVec]) -> Result<(), OvError> {
    let Some(d) = a.first().or(b.first()).map(BitVec::dim) else {
        return Ok(());
    };
    for v in a.iter().chain(b) {
        if v.dim != d {
            return Err(OvError::DimensionMismatch(d, v.dim));
        }
    }
    Ok(())
}

/// For each `a` in `a_set`, whether some `b` in `b_set` is orthogonal to it.
///
/// The larger side is cut into blocks the size of the smaller one.
pub fn batch_ov(a_set: &[BitVec], b_set: &[BitVec]) -> Result<Vec<bool>, OvError> {
    let block = a_set.len().min(b_set.len()).max(1);
    batch_ov_with_block(a_set, b_set, block)
}

/// [`batch_ov`] with an explicit block size for the larger side.
pub fn batch_ov_with_block(
    a_set: &[BitVec],
    b_set: &[BitVec],
    block: usize,
) -> Result<Vec<bool>, OvError> {
    check_dims(a_set, b_set)?;
    let block = block.max(1);
    let mut out = vec![false; a_set.len()];
    if a_set.len() >= b_set.len() {
        for (k, chunk) in a_set.chunks(block).enumerate() {
            for (i, a) in chunk.iter().enumerate() {
                out[k * block + i] = b_set.iter().any(|b| a.orthogonal_unchecked(b));
            }
        }
    } else {
        for chunk in b_set.chunks(block) {
            for (i, a) in a_set.iter().enumerate() {
                if !out[i] {
                    out[i] = chunk.iter().any(|b| a.orthogonal_unchecked(b));
                }
            }
        }
    }
    Ok(out)
}

/// Unpacked reference: one boolean per coordinate.
pub fn scalar_batch_ov(a_set: &[Vec<bool>], b_set: &[Vec<bool>]) -> Vec<bool> {
    a_set
        .iter()
        .map(|a| {
            b_set
                .iter()
                .any(|b| a.iter().zip(b).all(|(&x, &y)| !(x && y)))
        })
        .collect()
}

pub const DEFAULT_CHI_CONSTANT: f64 = 8.0;
/// Minimum size of the padded universe.
pub const MIN_UNIVERSE: usize = 16;

/// First code point used for padding symbols (Unicode supplementary private use area A).
const SENTINEL_BASE: u32 = 0xF0000;

/// Seeded Bloom-style encoder: χ(σ) has each bit set with probability 1/f,
/// χ(S) is the OR over members. `f = 1` is encoded as `f = 2`: with
/// probability 1 every vector would be all ones and nothing gets filtered.
#[derive(Debug, Clone)]
pub struct ChiEncoder {
    universe: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
    fresh: Symbol,
    f: usize,
    c: f64,
    d: usize,
    seed: u64,
    vectors: Vec<BitVec>,
}

impl ChiEncoder {
    pub fn new(alphabet: &[Symbol], f: usize, seed: u64) -> Result<Self, OvError> {
        Self::with_constant(alphabet, f, DEFAULT_CHI_CONSTANT, seed)
    }

    /// The universe is `alphabet` (deduplicated, sorted) followed by private-use
    /// sentinels until it has `max(|alphabet| + 1, 16)` symbols, so at least
    /// one symbol outside `alphabet` is always available.
    pub fn with_constant(
        alphabet: &[Symbol],
        f: usize,
        c: f64,
        seed: u64,
    ) -> Result<Self, OvError> {
        if f == 0 {
            return Err(OvError::BadThreshold);
        }
        let mut universe: Vec<Symbol> = alphabet.to_vec();
        universe.sort_unstable();
        universe.dedup();
        let target = (universe.len() + 1).max(MIN_UNIVERSE);
        let mut code = SENTINEL_BASE;
        let mut fresh = None;
        while universe.len() < target {
            let s = char::from_u32(code).expect("private use code point");
            code += 1;
            if !alphabet.contains(&s) {
                fresh.get_or_insert(s);
                universe.push(s);
            }
        }
        let fb = f.max(2);
        let d = (c * fb as f64 * (universe.len() as f64).ln()).ceil() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors = universe
            .iter()
            .map(|_| {
                let mut v = BitVec::zeros(d);
                for i in 0..d {
                    if rng.random_range(0..fb) == 0 {
                        v.set(i, true);
                    }
                }
                v
            })
            .collect();
        let index = universe.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(ChiEncoder {
            universe,
            index,
            fresh: fresh.expect("padding adds at least one symbol"),
            f,
            c,
            d,
            seed,
            vectors,
        })
    }

    pub fn universe(&self) -> &[Symbol] {
        &self.universe
    }

    /// A padding symbol outside the encoded alphabet.
    pub fn fresh_symbol(&self) -> Symbol {
        self.fresh
    }

    pub fn threshold(&self) -> usize {
        self.f
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chi_symbol(&self, s: Symbol) -> Result<&BitVec, OvError> {
        self.index
            .get(&s)
            .map(|&i| &self.vectors[i])
            .ok_or(OvError::UnknownSymbol(s))
    }

    pub fn chi_set(&self, set: &[Symbol]) -> Result<BitVec, OvError> {
        if set.len() > self.f {
            return Err(OvError::SetTooLarge {
                size: set.len(),
                f: self.f,
            });
        }
        let mut v = BitVec::zeros(self.d);
        for &s in set {
            v.or_assign(self.chi_symbol(s)?);
        }
        Ok(v)
    }
}
