//! `sigma^k`-factorizations `U = x sigma^k(u) y`, the greedy Dumont-Thomas
//! decompositions of proper prefixes and suffixes of letter images, and the
//! `≡_k` relation on `(p_U, s_U)` pairs.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::factors::{factor_set, is_factor};
use crate::limits;
use crate::word::{add_mod, check_alphabet, sigma_power, tm_window, Letter, ParikhVector, Word};

/// `sigma^k(0)` and the decoding helpers built on it; `sigma^k(a)[i]` is
/// `a + sigma^k(0)[i]`.
struct Images {
    m: usize,
    k: u32,
    block: usize,
    base: Vec<u8>,
}

impl Images {
    fn new(m: usize, k: u32) -> Result<Images> {
        check_alphabet(m)?;
        let block = limits::pow(m, k).unwrap_or(u128::MAX);
        limits::check_prefix(block)?;
        let base = tm_window(m, 0, block as usize)?.into_letters();
        Ok(Images {
            m,
            k,
            block: block as usize,
            base,
        })
    }

    fn letter(&self, a: u8, i: usize) -> u8 {
        add_mod(self.base[i], a as usize, self.m)
    }

    /// The letter `b` such that `w` is a proper prefix of `sigma^k(b)`.
    /// `Some(None)` for the empty word, `None` if there is no such letter.
    fn prefix_letter(&self, w: &[u8]) -> Option<Option<u8>> {
        if w.is_empty() {
            return Some(None);
        }
        if w.len() >= self.block {
            return None;
        }
        let b = w[0];
        w.iter()
            .enumerate()
            .all(|(i, &c)| c == self.letter(b, i))
            .then_some(Some(b))
    }

    /// The letter `a` such that `w` is a proper suffix of `sigma^k(a)`;
    /// `sigma^k(a)` ends with `a - k`.
    fn suffix_letter(&self, w: &[u8]) -> Option<Option<u8>> {
        let Some(&last) = w.last() else {
            return Some(None);
        };
        if w.len() >= self.block {
            return None;
        }
        let a = add_mod(last, self.k as usize % self.m, self.m);
        let off = self.block - w.len();
        w.iter()
            .enumerate()
            .all(|(i, &c)| c == self.letter(a, off + i))
            .then_some(Some(a))
    }

    /// `Some(u)` when `w = sigma^k(u)`.
    fn decode(&self, w: &[u8]) -> Option<Vec<u8>> {
        if !w.len().is_multiple_of(self.block) {
            return None;
        }
        let mut out = Vec::with_capacity(w.len() / self.block);
        for chunk in w.chunks(self.block) {
            let a = chunk[0];
            if !chunk.iter().enumerate().all(|(i, &c)| c == self.letter(a, i)) {
                return None;
            }
            out.push(a);
        }
        Some(out)
    }
}

/// `U = x sigma^k(u) y` with `x` a proper suffix of `sigma^k(a)`, `y` a proper
/// prefix of `sigma^k(b)` and `a u b` a factor of `t_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaFactorization {
    pub k: u32,
    pub x: Word,
    pub u: Word,
    pub y: Word,
    pub a: Option<Letter>,
    pub b: Option<Letter>,
}

impl SigmaFactorization {
    pub fn alphabet_size(&self) -> usize {
        self.u.alphabet_size()
    }

    /// `x sigma^k(u) y`.
    pub fn reassemble(&self) -> Result<Word> {
        let mid = sigma_power(self.alphabet_size(), self.k, &self.u)?;
        self.x.concat(&mid)?.concat(&self.y)
    }

    /// The context word `a u b`, absent letters dropped.
    pub fn context(&self) -> Word {
        let m = self.alphabet_size();
        let mut letters = Vec::with_capacity(self.u.len() + 2);
        letters.extend(self.a.map(|l| l.value() as u8));
        letters.extend_from_slice(self.u.letters());
        letters.extend(self.b.map(|l| l.value() as u8));
        Word::from_raw(m, letters)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "x": self.x.to_string(),
            "u": self.u.to_string(),
            "y": self.y.to_string(),
            "a": self.a.map(|l| l.value()),
            "b": self.b.map(|l| l.value()),
            "k": self.k,
        })
    }
}

fn check_word_alphabet(m: usize, w: &Word) -> Result<()> {
    check_alphabet(m)?;
    if w.alphabet_size() != m {
        return Err(Error::AlphabetMismatch {
            left: m,
            right: w.alphabet_size(),
        });
    }
    Ok(())
}

fn check_exponent(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("exponent k must be >= 1".into()));
    }
    Ok(())
}

/// All candidates `x sigma^k(u) y` of `U` whose context word is a factor.
/// Assumes `U` is a factor.
fn factorizations_of(img: &Images, w: &Word) -> Result<Vec<SigmaFactorization>> {
    let m = img.m;
    let letters = w.letters();
    let n = letters.len();
    let mut out = Vec::new();
    for cut in 0..img.block.min(n + 1) {
        let (x, rest) = letters.split_at(cut);
        let ylen = rest.len() % img.block;
        let (mid, y) = rest.split_at(rest.len() - ylen);
        let Some(a) = img.suffix_letter(x) else {
            continue;
        };
        let Some(b) = img.prefix_letter(y) else {
            continue;
        };
        let Some(u) = img.decode(mid) else {
            continue;
        };
        let mut ctx = Vec::with_capacity(u.len() + 2);
        ctx.extend(a);
        ctx.extend_from_slice(&u);
        ctx.extend(b);
        if !is_factor(&Word::from_raw(m, ctx))? {
            continue;
        }
        out.push(SigmaFactorization {
            k: img.k,
            x: Word::from_slice(m, x),
            u: Word::from_raw(m, u),
            y: Word::from_slice(m, y),
            a: a.map(|c| Letter::new(c as i64, m)),
            b: b.map(|c| Letter::new(c as i64, m)),
        });
    }
    Ok(out)
}

/// Every `sigma^k`-factorization of the factor `w`, ordered by `|x|`.
pub fn enumerate_factorizations(m: usize, k: u32, w: &Word) -> Result<Vec<SigmaFactorization>> {
    check_word_alphabet(m, w)?;
    check_exponent(k)?;
    if !is_factor(w)? {
        return Err(Error::NotAFactor {
            m,
            word: w.to_string(),
        });
    }
    factorizations_of(&Images::new(m, k)?, w)
}

/// The factorization of a factor of length `>= 2 m^k`, which is unique.
pub fn unique_factorization(m: usize, k: u32, w: &Word) -> Result<SigmaFactorization> {
    check_word_alphabet(m, w)?;
    check_exponent(k)?;
    let needed = limits::pow(m, k).map_or(u128::MAX, |b| b.saturating_mul(2));
    if (w.len() as u128) < needed {
        return Err(Error::TooShort {
            m,
            k,
            len: w.len(),
            needed: needed.min(usize::MAX as u128) as usize,
        });
    }
    let mut all = enumerate_factorizations(m, k, w)?;
    if all.len() != 1 {
        return Err(Error::InternalInvariant(format!(
            "{} has {} sigma^{k}-factorizations, expected exactly one",
            w,
            all.len()
        )));
    }
    Ok(all.pop().unwrap())
}

/// The outer blocks `(p_U, s_U)` of a unique `sigma^k`-factorization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PSPair {
    pub m: usize,
    pub k: u32,
    pub p: Word,
    pub s: Word,
}

impl PSPair {
    /// A pair of blocks of length `< m^k` each.
    pub fn new(m: usize, k: u32, p: Word, s: Word) -> Result<PSPair> {
        check_word_alphabet(m, &p)?;
        check_word_alphabet(m, &s)?;
        check_exponent(k)?;
        let block = limits::pow(m, k).unwrap_or(u128::MAX);
        for w in [&p, &s] {
            if w.len() as u128 >= block {
                return Err(Error::MalformedPair(format!(
                    "block {w} is not shorter than m^k = {block}"
                )));
            }
        }
        Ok(PSPair { m, k, p, s })
    }

    /// Whether `p` is a proper suffix and `s` a proper prefix of `sigma^k`
    /// letter images, as for pairs coming from factorizations.
    pub fn is_image_pair(&self) -> Result<bool> {
        let img = Images::new(self.m, self.k)?;
        Ok(img.suffix_letter(self.p.letters()).is_some()
            && img.prefix_letter(self.s.letters()).is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "p": self.p.to_string(), "s": self.s.to_string(), "m": self.m, "k": self.k })
    }
}

pub fn ps_pair(m: usize, k: u32, w: &Word) -> Result<PSPair> {
    let f = unique_factorization(m, k, w)?;
    Ok(PSPair { m, k, p: f.x, s: f.y })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageSide {
    Prefix,
    Suffix,
}

/// Greedy layering of a proper prefix or suffix of `sigma^k(j)`.
///
/// Prefix side: the word is `sigma^{k-1}(v_1) sigma^{k-2}(v_2) .. v_k` and
/// `v_1 v_2 .. v_k` reads `j, j+1, j+2, ..` cyclically.
/// Suffix side: the word is `v_1 sigma(v_2) .. sigma^{k-1}(v_k)`.
/// In both cases `digits[i] = |v_{i+1}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTDecomposition {
    pub anchor: Letter,
    pub side: ImageSide,
    pub digits: Vec<usize>,
    pub parts: Vec<Word>,
}

impl DTDecomposition {
    pub fn reassemble(&self, m: usize) -> Result<Word> {
        let k = self.parts.len() as u32;
        let mut out = Word::empty(m);
        for (i, v) in self.parts.iter().enumerate() {
            let e = match self.side {
                ImageSide::Prefix => k - 1 - i as u32,
                ImageSide::Suffix => i as u32,
            };
            out = out.concat(&sigma_power(m, e, v)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "anchor": self.anchor.value(),
            "side": self.side,
            "digits": self.digits,
            "parts": self.parts.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn image_length(m: usize, k: u32, len: usize) -> Result<usize> {
    check_alphabet(m)?;
    let block = limits::pow(m, k).unwrap_or(u128::MAX);
    if len as u128 >= block {
        return Err(Error::InvalidArgument(format!(
            "length {len} is not below m^k = {block}"
        )));
    }
    limits::check_prefix(block)?;
    Ok(block as usize)
}

/// Base-`m` digits of `len`, `k` of them, most significant first.
fn digits_msf(m: usize, k: u32, mut len: usize) -> Vec<usize> {
    let mut d = vec![0; k as usize];
    for slot in d.iter_mut().rev() {
        *slot = len % m;
        len /= m;
    }
    d
}

/// The length-`len` proper prefix of `sigma^k(j)` and its decomposition.
pub fn image_prefix(m: usize, k: u32, j: Letter, len: usize) -> Result<(Word, DTDecomposition)> {
    image_length(m, k, len)?;
    let word = tm_window(m, 0, len)?;
    let word = Word::from_raw(
        m,
        word.letters().iter().map(|&c| add_mod(c, j.value(), m)).collect(),
    );
    let digits = digits_msf(m, k, len);
    let mut next = j.value();
    let mut parts = Vec::with_capacity(k as usize);
    for &c in &digits {
        parts.push(Word::from_raw(
            m,
            (0..c).map(|i| ((next + i) % m) as u8).collect(),
        ));
        next = (next + c) % m;
    }
    Ok((
        word,
        DTDecomposition {
            anchor: j,
            side: ImageSide::Prefix,
            digits,
            parts,
        },
    ))
}

/// The length-`len` proper suffix of `sigma^k(j)` and its decomposition.
pub fn image_suffix(m: usize, k: u32, j: Letter, len: usize) -> Result<(Word, DTDecomposition)> {
    let block = image_length(m, k, len)?;
    let word = tm_window(m, (block - len) as u128, len)?;
    let word = Word::from_raw(
        m,
        word.letters().iter().map(|&c| add_mod(c, j.value(), m)).collect(),
    );
    let mut digits = digits_msf(m, k, len);
    digits.reverse();
    // peel the top layer: the last c blocks of sigma^k(a) are
    // sigma^{k-1}((a-c) .. (a-1)), preceded by a suffix of sigma^{k-1}(a-c-1)
    let mut parts = vec![Word::empty(m); k as usize];
    let mut anchor = j.value();
    for i in (0..k as usize).rev() {
        let c = digits[i];
        let start = (anchor + m - c) % m;
        parts[i] = Word::from_raw(m, (0..c).map(|t| ((start + t) % m) as u8).collect());
        anchor = (anchor + 2 * m - c - 1) % m;
    }
    Ok((
        word,
        DTDecomposition {
            anchor: j,
            side: ImageSide::Suffix,
            digits,
            parts,
        },
    ))
}

/// A pair split as `(x sigma^{k-1}(p'), sigma^{k-1}(q') y)`.
struct SplitPair {
    x: Vec<u8>,
    y: Vec<u8>,
    core: ParikhVector,
}

fn split_pair(img: &Images, pair: &PSPair) -> Result<SplitPair> {
    let p = pair.p.letters();
    let s = pair.s.letters();
    let (x, pblocks) = p.split_at(p.len() % img.block);
    let (sblocks, y) = s.split_at(s.len() - s.len() % img.block);
    let malformed = |w: &[u8]| {
        Error::MalformedPair(format!(
            "{} does not decode into sigma^{} blocks",
            Word::from_slice(img.m, w),
            img.k
        ))
    };
    let mut core = img.decode(pblocks).ok_or_else(|| malformed(pblocks))?;
    core.extend(img.decode(sblocks).ok_or_else(|| malformed(sblocks))?);
    Ok(SplitPair {
        x: x.to_vec(),
        y: y.to_vec(),
        core: ParikhVector::of_slice(img.m, &core),
    })
}

fn split_equiv(a: &SplitPair, b: &SplitPair) -> bool {
    a.x == b.x
        && a.y == b.y
        && (a.core == b.core || a.core == b.core.shifted(1) || b.core == a.core.shifted(1))
}

fn check_pair(m: usize, k: u32, pair: &PSPair) -> Result<()> {
    if pair.m != m || pair.k != k {
        return Err(Error::InvalidArgument(format!(
            "pair built for (m={}, k={}), expected (m={m}, k={k})",
            pair.m, pair.k
        )));
    }
    Ok(())
}

/// `(p_1, s_1) ≡_k (p_2, s_2)`.
pub fn equiv_k_pairs(m: usize, k: u32, first: &PSPair, second: &PSPair) -> Result<bool> {
    check_exponent(k)?;
    check_pair(m, k, first)?;
    check_pair(m, k, second)?;
    let img = Images::new(m, k - 1)?;
    Ok(split_equiv(
        &split_pair(&img, first)?,
        &split_pair(&img, second)?,
    ))
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> DisjointSets {
        DisjointSets {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut i = i;
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    fn merge(&mut self, i: usize, j: usize) {
        let (i, j) = (self.find(i), self.find(j));
        if i != j {
            self.parent[i.max(j)] = i.min(j);
        }
    }
}

/// The distinct pairs `(p_U, s_U)` over `Fac_n(t_m)`, sorted.
pub fn collect_pairs(m: usize, k: u32, n: usize) -> Result<Vec<PSPair>> {
    let fs = factor_set(m, n)?;
    let mut pairs = BTreeSet::new();
    for w in fs.factors() {
        pairs.insert(ps_pair(m, k, w)?);
    }
    Ok(pairs.into_iter().collect())
}

/// The pairs `(p_U, s_U)` over `Fac_n(t_m)` grouped into `≡_k` classes,
/// ordered by smallest member.
pub fn pair_classes(m: usize, k: u32, n: usize) -> Result<Vec<Vec<PSPair>>> {
    check_exponent(k)?;
    let pairs = collect_pairs(m, k, n)?;
    let img = Images::new(m, k - 1)?;
    let split: Vec<SplitPair> = pairs
        .iter()
        .map(|p| split_pair(&img, p))
        .collect::<Result<_>>()?;
    let mut sets = DisjointSets::new(pairs.len());
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if split_equiv(&split[i], &split[j]) {
                sets.merge(i, j);
            }
        }
    }
    let mut classes: Vec<Vec<PSPair>> = Vec::new();
    let mut slot = vec![usize::MAX; pairs.len()];
    for (i, pair) in pairs.into_iter().enumerate() {
        let root = sets.find(i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(pair);
    }
    Ok(classes)
}

/// Number of `≡_k` classes of `(p_U, s_U)` over `Fac_n(t_m)`, `n >= 2 m^k`.
pub fn count_pair_classes(m: usize, k: u32, n: usize) -> Result<usize> {
    Ok(pair_classes(m, k, n)?.len())
}
