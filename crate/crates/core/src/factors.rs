//! Certified enumeration of `Fac_n(t_m)` and the empirical complexity
//! functions built on it.
//!
//! Every length-`n` factor of `t_m = sigma^j(t_m)` with `n <= m^j + 1` lies
//! inside `sigma^j(ab)` for some factor `ab`, and all `m^2` pairs occur, so
//! the windows of the `m^2` words `sigma^j(ab)` are exactly `Fac_n(t_m)`.
//! The result is certified by comparing its size with the closed-form factor
//! complexity; a mismatch is reported as an internal invariant violation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock, RwLock};

use crate::binomial::{signature, BinomialSignature};
use crate::error::{Error, Result};
use crate::formulas::starosta_p;
use crate::limits;
use crate::word::{add_mod, check_alphabet, parikh, tm_prefix, ParikhVector, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    /// Exponent `j` of the images `sigma^j(ab)` whose windows were collected.
    pub exponent: u32,
    /// Closed-form factor complexity that the enumeration matched.
    pub expected: u128,
}

#[derive(Debug, Clone)]
pub struct FactorSet {
    m: usize,
    n: usize,
    factors: Vec<Word>,
    lookup: HashSet<Vec<u8>>,
    certificate: Certificate,
}

impl FactorSet {
    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// Factors in lexicographic order.
    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.alphabet_size() == self.m && self.contains_slice(w.letters())
    }

    pub fn contains_slice(&self, letters: &[u8]) -> bool {
        letters.len() == self.n && self.lookup.contains(letters)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.factors
                .iter()
                .map(|w| serde_json::Value::String(w.to_string()))
                .collect(),
        )
    }
}

type Cache = RwLock<HashMap<(usize, usize), Arc<FactorSet>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Smallest `j` with `m^j + 1 >= n`.
fn covering_exponent(m: usize, n: usize) -> u32 {
    let mut j = 0u32;
    let mut mj = 1usize;
    while mj + 1 < n {
        mj = mj.saturating_mul(m);
        j += 1;
    }
    j
}

fn enumerate(m: usize, n: usize) -> Result<FactorSet> {
    check_alphabet(m)?;
    limits::check_factor_len(n)?;
    let j = covering_exponent(m, n);
    let block = limits::pow(m, j).unwrap_or(u128::MAX);
    limits::check_prefix(block.saturating_mul(2))?;
    let base = tm_prefix(m, block as usize)?;
    let block = block as usize;
    let mut lookup: HashSet<Vec<u8>> = HashSet::new();
    let mut buf = vec![0u8; 2 * block];
    for a in 0..m {
        for b in 0..m {
            for (i, &d) in base.letters().iter().enumerate() {
                buf[i] = add_mod(d, a, m);
                buf[block + i] = add_mod(d, b, m);
            }
            for w in buf.windows(n.max(1)) {
                if n == 0 {
                    lookup.insert(Vec::new());
                    break;
                }
                if !lookup.contains(w) {
                    lookup.insert(w.to_vec());
                }
            }
        }
    }
    let expected = starosta_p(m as u128, n as u128)?;
    if lookup.len() as u128 != expected {
        return Err(Error::InternalInvariant(format!(
            "enumerated {} factors of length {n} in t_{m}, formula gives {expected}",
            lookup.len()
        )));
    }
    let mut factors: Vec<Word> = lookup.iter().map(|w| Word::from_slice(m, w)).collect();
    factors.sort();
    Ok(FactorSet {
        m,
        n,
        factors,
        lookup,
        certificate: Certificate {
            exponent: j,
            expected,
        },
    })
}

/// `Fac_n(t_m)`, memoized per `(m, n)`.
pub fn factor_set(m: usize, n: usize) -> Result<Arc<FactorSet>> {
    if let Some(fs) = cache().read().ok().and_then(|c| c.get(&(m, n)).cloned()) {
        return Ok(fs);
    }
    let fs = Arc::new(enumerate(m, n)?);
    if let Ok(mut c) = cache().write() {
        c.entry((m, n)).or_insert_with(|| fs.clone());
    }
    Ok(fs)
}

/// Whether `w` (over `A_m`) occurs in `t_m`. Uses the cached factor set when
/// there is one, otherwise scans the images `sigma^j(ab)` directly.
pub fn is_factor(w: &Word) -> Result<bool> {
    let (m, n) = (w.alphabet_size(), w.len());
    if let Some(fs) = cache().read().ok().and_then(|c| c.get(&(m, n)).cloned()) {
        return Ok(fs.contains(w));
    }
    if n <= 2 {
        return Ok(true);
    }
    limits::check_factor_len(n)?;
    let j = covering_exponent(m, n);
    let block = limits::pow(m, j).unwrap_or(u128::MAX);
    limits::check_prefix(block.saturating_mul(2))?;
    let base = tm_prefix(m, block as usize)?;
    let block = block as usize;
    let mut buf = vec![0u8; 2 * block];
    let target = w.letters();
    for a in 0..m {
        for b in 0..m {
            for (i, &d) in base.letters().iter().enumerate() {
                buf[i] = add_mod(d, a, m);
                buf[block + i] = add_mod(d, b, m);
            }
            if buf.windows(n).any(|x| x == target) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn factor_complexity(m: usize, n: usize) -> Result<usize> {
    Ok(factor_set(m, n)?.len())
}

pub fn abelian_complexity(m: usize, n: usize) -> Result<usize> {
    let fs = factor_set(m, n)?;
    let vectors: HashSet<ParikhVector> = fs.factors().iter().map(parikh).collect();
    Ok(vectors.len())
}

/// `#(Fac_n(t_m) / ~_k)`.
pub fn kbinomial_complexity(m: usize, k: usize, n: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if k == 1 {
        return abelian_complexity(m, n);
    }
    let fs = factor_set(m, n)?;
    let mut sigs: HashSet<BinomialSignature> = HashSet::with_capacity(fs.len());
    for w in fs.factors() {
        sigs.insert(signature(w, k)?);
    }
    Ok(sigs.len())
}

/// `Fac_n(t_m)` grouped into `~_k` classes.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    pub k: usize,
    /// Classes ordered by their smallest member; members sorted.
    pub classes: Vec<(BinomialSignature, Vec<Word>)>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, w: &Word) -> Option<&[Word]> {
        self.classes
            .iter()
            .find(|(_, members)| members.contains(w))
            .map(|(_, members)| members.as_slice())
    }
}

pub fn class_partition(m: usize, k: usize, n: usize) -> Result<ClassPartition> {
    let fs = factor_set(m, n)?;
    let mut groups: HashMap<BinomialSignature, Vec<Word>> = HashMap::new();
    // factors are sorted, so each member list comes out sorted
    for w in fs.factors() {
        groups.entry(signature(w, k)?).or_default().push(w.clone());
    }
    let mut classes: Vec<(BinomialSignature, Vec<Word>)> = groups.into_iter().collect();
    classes.sort_by(|a, b| a.1[0].cmp(&b.1[0]));
    Ok(ClassPartition { k, classes })
}

/// Smallest length admitting two distinct `~_k`-equivalent factors, with the
/// two smallest members of the first such class.
pub fn shortest_equivalent_pair(m: usize, k: usize) -> Result<(usize, Word, Word)> {
    if k < 2 {
        return Err(Error::InvalidArgument("depth must be >= 2".into()));
    }
    let cap = limits::current().max_factor_len;
    for n in 1..=cap {
        let part = class_partition(m, k, n)?;
        if let Some((_, members)) = part.classes.iter().find(|(_, ms)| ms.len() >= 2) {
            return Ok((n, members[0].clone(), members[1].clone()));
        }
    }
    Err(Error::ResourceCap {
        what: "factor length",
        requested: cap as u128 + 1,
        limit: cap as u128,
    })
}

/// Whether `w` contains a factor `a u a u a` (an overlap).
pub fn contains_overlap(w: &[u8]) -> bool {
    // an overlap of period p has length 2p + 1 and w[i] = w[i + p] throughout
    let n = w.len();
    for p in 1..=n.saturating_sub(1) / 2 {
        let mut run = 0usize;
        for i in 0..n - p {
            if w[i] == w[i + p] {
                run += 1;
                if run > p {
                    return true;
                }
            } else {
                run = 0;
            }
        }
    }
    false
}

/// `n,value` CSV for a complexity sweep.
pub fn complexity_csv(rows: &[(usize, usize)]) -> String {
    let mut out = String::from("n,value\n");
    for (n, v) in rows {
        out.push_str(&format!("{n},{v}\n"));
    }
    out
}

/// Parikh-vector classes of `Fac_n(t_m)`, ordered.
pub fn abelian_classes(m: usize, n: usize) -> Result<BTreeMap<ParikhVector, Vec<Word>>> {
    let fs = factor_set(m, n)?;
    let mut out: BTreeMap<ParikhVector, Vec<Word>> = BTreeMap::new();
    for w in fs.factors() {
        out.entry(parikh(w)).or_default().push(w.clone());
    }
    Ok(out)
}
