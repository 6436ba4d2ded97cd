//! Binomial coefficients of words (subword occurrence counts), depth-`k`
//! signatures and the `k`-binomial equivalence.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::word::{parikh, Word};

/// Exact, arbitrary-precision subword count.
pub type SubwordCount = BigUint;

/// Accumulator used by the counting DPs. `u128` is used whenever the counts
/// provably fit, `BigUint` otherwise.
trait Counter: Clone {
    fn zero_count() -> Self;
    fn one_count() -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn into_big(self) -> BigUint;
}

impl Counter for u128 {
    fn zero_count() -> Self {
        0
    }
    fn one_count() -> Self {
        1
    }
    #[inline]
    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Counter for BigUint {
    fn zero_count() -> Self {
        Zero::zero()
    }
    fn one_count() -> Self {
        One::one()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// `binom(n, k) <= n^k`; fits in u128 comfortably when `n^k < 2^126`.
fn fits_u128(n: usize, k: usize) -> bool {
    match (n.max(1) as u128).checked_pow(k as u32) {
        Some(v) => v < (1u128 << 126),
        None => false,
    }
}

fn binom_dp<C: Counter>(u: &[u8], w: &[u8]) -> C {
    let mut dp = vec![C::zero_count(); w.len() + 1];
    dp[0] = C::one_count();
    for &a in u {
        for j in (1..=w.len()).rev() {
            if w[j - 1] == a {
                let (lo, hi) = dp.split_at_mut(j);
                hi[0].add_assign_ref(&lo[j - 1]);
            }
        }
    }
    dp.pop().unwrap()
}

/// Number of occurrences of `w` as a (scattered) subword of `u`, on raw letters.
pub fn binom_slice(u: &[u8], w: &[u8]) -> SubwordCount {
    if w.len() > u.len() {
        return BigUint::zero();
    }
    if fits_u128(u.len(), w.len()) {
        binom_dp::<u128>(u, w).into_big()
    } else {
        binom_dp::<BigUint>(u, w)
    }
}

/// Number of index tuples `i_1 < .. < i_|w|` with `u[i_1..] = w`.
pub fn binom(u: &Word, w: &Word) -> Result<SubwordCount> {
    u.ensure_same_alphabet(w)?;
    Ok(binom_slice(u.letters(), w.letters()))
}

/// Number of nonempty words of length `<= k` over `m` letters.
pub fn signature_domain_size(m: usize, k: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..k {
        layer = layer.checked_mul(m as u128)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// Layered DP: `layers[L][idx]` counts the length-`L` word whose base-`m`
/// value (most significant letter first) is `idx`.
fn signature_dp<C: Counter>(m: usize, k: usize, u: &[u8]) -> Vec<Vec<C>> {
    let mut layers: Vec<Vec<C>> = (0..=k).map(|l| vec![C::zero_count(); m.pow(l as u32)]).collect();
    layers[0][0] = C::one_count();
    for &a in u {
        let a = a as usize;
        for l in (1..=k).rev() {
            let (lo, hi) = layers.split_at_mut(l);
            let prev = &lo[l - 1];
            let cur = &mut hi[0];
            for (p, c) in prev.iter().enumerate() {
                cur[p * m + a].add_assign_ref(c);
            }
        }
    }
    layers
}

/// All subword counts of one word up to depth `k`; equality of signatures is
/// exactly `k`-binomial equivalence.
///
/// Counts are stored in canonical order: by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinomialSignature {
    m: usize,
    k: usize,
    length: usize,
    counts: Vec<SubwordCount>,
}

impl BinomialSignature {
    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.k
    }

    /// Length of the signed word.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn counts(&self) -> &[SubwordCount] {
        &self.counts
    }

    /// The count attached to `x`, or `None` if `x` is empty or longer than `k`.
    pub fn get(&self, x: &Word) -> Option<&SubwordCount> {
        if x.is_empty() || x.len() > self.k || x.alphabet_size() != self.m {
            return None;
        }
        Some(&self.counts[self.index_of(x.letters())])
    }

    fn index_of(&self, x: &[u8]) -> usize {
        domain_index(self.m, x)
    }

    /// Domain words in canonical order, paired with their counts.
    pub fn entries(&self) -> impl Iterator<Item = (Word, &SubwordCount)> + '_ {
        let m = self.m;
        (1..=self.k)
            .flat_map(move |l| (0..m.pow(l as u32)).map(move |idx| decode_index(m, l, idx)))
            .zip(self.counts.iter())
    }

    /// First domain word (canonical order) on which the two signatures differ.
    pub fn first_difference(&self, other: &BinomialSignature) -> Option<Word> {
        if self.m != other.m || self.k != other.k {
            return None;
        }
        self.entries()
            .zip(other.counts.iter())
            .find(|((_, a), b)| a != b)
            .map(|((w, _), _)| w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut ordered = serde_json::Map::new();
        for (w, c) in self.entries() {
            ordered.insert(w.to_string(), serde_json::Value::String(c.to_string()));
        }
        serde_json::json!({
            "m": self.m,
            "k": self.k,
            "length": self.length,
            "counts": serde_json::Value::Object(ordered),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<BinomialSignature> {
        let raw: RawSignature = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("signature JSON: {e}")))?;
        let domain = signature_domain_size(raw.m, raw.k)
            .ok_or_else(|| Error::InvalidArgument("signature domain overflow".into()))?;
        limits::check_signature_domain(domain)?;
        let mut counts = vec![BigUint::zero(); domain as usize];
        let mut seen = 0usize;
        for (key, val) in &raw.counts {
            let w = Word::parse(raw.m, key)?;
            if w.is_empty() || w.len() > raw.k {
                return Err(Error::InvalidArgument(format!("word {key} outside domain")));
            }
            let c: BigUint = val
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("count {val:?} is not decimal")))?;
            counts[domain_index(raw.m, w.letters())] = c;
            seen += 1;
        }
        if seen as u128 != domain {
            return Err(Error::InvalidArgument(format!(
                "signature lists {seen} words, expected {domain}"
            )));
        }
        Ok(BinomialSignature {
            m: raw.m,
            k: raw.k,
            length: raw.length,
            counts,
        })
    }
}

#[derive(Deserialize, Serialize)]
struct RawSignature {
    m: usize,
    k: usize,
    length: usize,
    counts: BTreeMap<String, String>,
}

fn domain_index(m: usize, x: &[u8]) -> usize {
    let offset: usize = (1..x.len()).map(|l| m.pow(l as u32)).sum();
    offset + x.iter().fold(0usize, |acc, &a| acc * m + a as usize)
}

fn decode_index(m: usize, len: usize, mut idx: usize) -> Word {
    let mut letters = vec![0u8; len];
    for slot in letters.iter_mut().rev() {
        *slot = (idx % m) as u8;
        idx /= m;
    }
    Word::from_raw(m, letters)
}

/// Signature of raw letters over `A_m`.
pub fn signature_slice(m: usize, u: &[u8], k: usize) -> Result<BinomialSignature> {
    if k == 0 {
        return Err(Error::InvalidArgument("signature depth must be >= 1".into()));
    }
    let domain = signature_domain_size(m, k).unwrap_or(u128::MAX);
    limits::check_signature_domain(domain)?;
    let layers: Vec<Vec<BigUint>> = if fits_u128(u.len(), k) {
        signature_dp::<u128>(m, k, u)
            .into_iter()
            .map(|l| l.into_iter().map(Counter::into_big).collect())
            .collect()
    } else {
        signature_dp::<BigUint>(m, k, u)
    };
    let counts = layers.into_iter().skip(1).flatten().collect();
    Ok(BinomialSignature {
        m,
        k,
        length: u.len(),
        counts,
    })
}

pub fn signature(u: &Word, k: usize) -> Result<BinomialSignature> {
    signature_slice(u.alphabet_size(), u.letters(), k)
}

/// `u ~_k v`.
pub fn equivalent_k(u: &Word, v: &Word, k: usize) -> Result<bool> {
    u.ensure_same_alphabet(v)?;
    if k == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if u.len() != v.len() || parikh(u) != parikh(v) {
        return Ok(false);
    }
    if k == 1 || u == v {
        return Ok(true);
    }
    Ok(signature(u, k)? == signature(v, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(m: usize, s: &str) -> Word {
        Word::parse(m, s).unwrap()
    }

    /// Enumerates every increasing index tuple.
    fn brute_binom(u: &[u8], x: &[u8]) -> u64 {
        fn go(u: &[u8], x: &[u8]) -> u64 {
            if x.is_empty() {
                return 1;
            }
            (0..u.len())
                .filter(|&i| u[i] == x[0])
                .map(|i| go(&u[i + 1..], &x[1..]))
                .sum()
        }
        go(u, x)
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(&w(2, "111"), &w(2, "11")).unwrap(), BigUint::from(3u32));
        assert_eq!(binom(&w(3, "012"), &w(3, "01")).unwrap(), BigUint::from(1u32));
        assert_eq!(brute_binom(&[0, 1, 0, 1], &[0, 1]), 3);
        assert_eq!(binom(&w(2, "0101"), &w(2, "01")).unwrap(), BigUint::from(3u32));
        assert_eq!(binom(&w(2, "01"), &Word::empty(2)).unwrap(), BigUint::one());
        assert_eq!(binom(&w(2, "01"), &w(2, "011")).unwrap(), BigUint::zero());
    }

    #[test]
    fn binom_big_counts_are_exact() {
        // binom(0^200, 0^100) = C(200, 100)
        let u = vec![0u8; 200];
        let x = vec![0u8; 100];
        let mut c = BigUint::one();
        for i in 0..100u32 {
            c = c * BigUint::from(200 - i) / BigUint::from(i + 1);
        }
        assert_eq!(binom_slice(&u, &x), c);
    }

    #[test]
    fn signature_examples() {
        let s = signature(&w(2, "01"), 1).unwrap();
        assert_eq!(s.counts(), &[BigUint::one(), BigUint::one()]);
        assert_eq!(
            signature(&w(3, "012120"), 2).unwrap(),
            signature(&w(3, "120012"), 2).unwrap()
        );
        let a = signature(&w(2, "01"), 2).unwrap();
        let b = signature(&w(2, "10"), 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.first_difference(&b).unwrap(), w(2, "01"));
        assert_eq!(a.get(&w(2, "01")).unwrap(), &BigUint::one());
        assert_eq!(b.get(&w(2, "01")).unwrap(), &BigUint::zero());
    }

    #[test]
    fn equivalence_examples() {
        let u = w(3, "0121");
        assert!(equivalent_k(&u, &u, 4).unwrap());
        assert!(equivalent_k(&w(3, "012120"), &w(3, "120012"), 2).unwrap());
        assert!(!equivalent_k(&w(3, "012120"), &w(3, "120012"), 3).unwrap());
        assert!(!equivalent_k(&w(3, "01"), &w(3, "012"), 1).unwrap());
    }

    #[test]
    fn signature_matches_brute_force() {
        let u = w(3, "0120211020");
        let s = signature(&u, 3).unwrap();
        for (x, c) in s.entries() {
            assert_eq!(*c, BigUint::from(brute_binom(u.letters(), x.letters())));
        }
        assert_eq!(s.counts().len(), 3 + 9 + 27);
    }

    #[test]
    fn json_round_trip() {
        let s = signature(&w(3, "0121201"), 2).unwrap();
        let j = s.to_json();
        assert_eq!(j["counts"]["01"], "4");
        assert_eq!(BinomialSignature::from_json(&j).unwrap(), s);
    }

    fn word_strategy(m: usize, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0..m as u8, 0..=max_len)
    }

    proptest! {
        #[test]
        fn concatenation_identity(x in word_strategy(3, 8), y in word_strategy(3, 8), z in word_strategy(3, 6)) {
            let lhs = binom_slice(&[x.clone(), y.clone()].concat(), &z);
            let rhs: BigUint = (0..=z.len())
                .map(|i| binom_slice(&x, &z[..i]) * binom_slice(&y, &z[i..]))
                .sum();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cancellation(u in word_strategy(2, 5), v in word_strategy(2, 6), k in 1usize..4) {
            // w is a permutation of v so that both outcomes show up
            let mut w_ = v.clone();
            w_.reverse();
            let (u, v, w_) = (Word::new(2, u).unwrap(), Word::new(2, v).unwrap(), Word::new(2, w_).unwrap());
            let base = equivalent_k(&v, &w_, k).unwrap();
            prop_assert_eq!(equivalent_k(&u.concat(&v).unwrap(), &u.concat(&w_).unwrap(), k).unwrap(), base);
            prop_assert_eq!(equivalent_k(&v.concat(&u).unwrap(), &w_.concat(&u).unwrap(), k).unwrap(), base);
        }

        #[test]
        fn depth_one_is_abelian(u in word_strategy(3, 7), v in word_strategy(3, 7)) {
            let (u, v) = (Word::new(3, u).unwrap(), Word::new(3, v).unwrap());
            let by_sig = u.len() == v.len() && signature(&u, 1).unwrap() == signature(&v, 1).unwrap();
            prop_assert_eq!(by_sig, parikh(&u) == parikh(&v));
        }

        #[test]
        fn monotone_in_depth(u in word_strategy(2, 7), v in word_strategy(2, 7), k in 1usize..4) {
            let (u, v) = (Word::new(2, u).unwrap(), Word::new(2, v).unwrap());
            if equivalent_k(&u, &v, k + 1).unwrap() {
                prop_assert!(equivalent_k(&u, &v, k).unwrap());
            }
        }
    }
}
