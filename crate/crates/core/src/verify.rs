//! Brute-force checks of the subword-count lemmas, the characterization of
//! `~_k` through `sigma^{k-1}`-factorizations, the block-pair class count and
//! the closed-form complexities. Each check returns a [`CheckReport`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::RangeInclusive;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::binomial::{binom_slice, signature, BinomialSignature};
use crate::error::{Error, Result};
use crate::factorization::{
    enumerate_factorizations, equiv_k_pairs, pair_classes, ps_pair, PSPair,
};
use crate::factors::{
    abelian_complexity, factor_complexity, factor_set, kbinomial_complexity,
};
use crate::formulas::{abelian_b1, lcw_b2, llr_b2k, main_bk, main_equiv_count, starosta_p};
use crate::limits;
use crate::word::{check_alphabet, parikh, sigma_power, ParikhVector, Word};

/// Seed used by randomized checks unless another one is given.
pub const DEFAULT_SEED: u64 = 1729;

/// Instances per parameter point for randomized checks.
pub const DEFAULT_INSTANCES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub instances: u64,
    /// Failing instances with their inputs and both computed sides, smallest
    /// first.
    pub failures: Vec<Value>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

struct Recorder {
    check: &'static str,
    params: Value,
    start: Instant,
    instances: u64,
    failures: Vec<Value>,
    details: Value,
}

impl Recorder {
    fn new(check: &'static str, params: Value) -> Recorder {
        Recorder {
            check,
            params,
            start: Instant::now(),
            instances: 0,
            failures: Vec::new(),
            details: Value::Null,
        }
    }

    fn record(&mut self, ok: bool, failure: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            check: self.check.to_string(),
            params: self.params,
            instances: self.instances,
            failures: self.failures,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            details: self.details,
        }
    }
}

/// `0 (-1) (-2) .. (-(len-1))` mod `m`.
pub fn descending_word(m: usize, len: usize) -> Word {
    descending_from(m, 0, len)
}

/// `(-j) (-(j+1)) .. (-(j+len-1))` mod `m`.
fn descending_from(m: usize, j: usize, len: usize) -> Word {
    let letters = (0..len)
        .map(|i| ((m - (j + i) % m) % m) as u8)
        .collect::<Vec<_>>();
    Word::new(m, letters).expect("letters reduced mod m")
}

fn big(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn binomial_coefficient(n: u32, r: u32) -> u32 {
    if r > n {
        0
    } else {
        (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64) as u32
    }
}

fn m_pow_big(m: usize, e: u32) -> BigInt {
    BigInt::from(m).pow(e)
}

fn letter_word(m: usize, a: usize) -> Word {
    Word::new(m, vec![a as u8]).expect("letter below m")
}

/// All words of length `len` over `A_m`, in lexicographic order.
fn all_words(m: usize, len: usize) -> Result<Vec<Word>> {
    let count = limits::pow(m, len as u32).unwrap_or(u128::MAX);
    limits::check_prefix(count)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u8; len];
    loop {
        out.push(Word::new(m, cur.clone())?);
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if (cur[i] as usize) + 1 < m {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// `binom(sigma^k(0), e) - binom(sigma^k(j), e) = m^{C(k,2)}` for `j != 0`,
/// with `e = 0 (-1) .. (-k)`.
pub fn check_prop41(m: usize, k: u32) -> Result<CheckReport> {
    check_alphabet(m)?;
    let mut rec = Recorder::new("prop41", json!({ "m": m, "k": k }));
    let e = descending_word(m, k as usize + 1);
    let expected = m_pow_big(m, binomial_coefficient(k, 2));
    let zero = big(binom_slice(
        sigma_power(m, k, &letter_word(m, 0))?.letters(),
        e.letters(),
    ));
    let mut others = BTreeSet::new();
    let mut difference = None;
    for j in 1..m {
        let cj = big(binom_slice(
            sigma_power(m, k, &letter_word(m, j))?.letters(),
            e.letters(),
        ));
        let diff = &zero - &cj;
        rec.record(diff == expected, || {
            json!({ "j": j, "e": e.to_string(), "difference": diff.to_string(), "expected": expected.to_string() })
        });
        difference.get_or_insert(diff);
        others.insert(cj);
    }
    // the counts for j != 0 coincide
    rec.record(others.len() <= 1, || {
        json!({ "distinct_counts": others.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
    });
    rec.details = json!({
        "difference": difference.map(|d| d.to_string()),
        "expected": expected.to_string(),
    });
    Ok(rec.finish())
}

/// The difference identity for `sigma^k(u)`, `sigma^k(v)` over all pairs of
/// words with `|u| = |v| <= max_len`, and `u !~_1 v => sigma^k(u) !~_{k+1} sigma^k(v)`.
pub fn check_cor42(m: usize, k: u32, max_len: usize) -> Result<CheckReport> {
    check_alphabet(m)?;
    let mut rec = Recorder::new("cor42", json!({ "m": m, "k": k, "max_len": max_len }));
    let e = descending_word(m, k as usize + 1);
    let scale = m_pow_big(m, binomial_coefficient(k, 2));
    for len in 0..=max_len {
        let words = all_words(m, len)?;
        let images: Vec<Word> = words
            .iter()
            .map(|w| sigma_power(m, k, w))
            .collect::<Result<_>>()?;
        let counts: Vec<BigInt> = images
            .iter()
            .map(|w| big(binom_slice(w.letters(), e.letters())))
            .collect();
        let sigs: Vec<BinomialSignature> = images
            .iter()
            .map(|w| signature(w, k as usize + 1))
            .collect::<Result<_>>()?;
        for i in 0..words.len() {
            for j in 0..words.len() {
                let (u, v) = (&words[i], &words[j]);
                let diff = &counts[i] - &counts[j];
                let zeros = u.letters().iter().filter(|&&c| c == 0).count() as i64
                    - v.letters().iter().filter(|&&c| c == 0).count() as i64;
                let expected = &scale * zeros;
                rec.record(diff == expected, || {
                    json!({ "u": u.to_string(), "v": v.to_string(), "difference": diff.to_string(), "expected": expected.to_string() })
                });
                if parikh(u) != parikh(v) {
                    rec.record(sigs[i] != sigs[j], || {
                        json!({ "u": u.to_string(), "v": v.to_string(), "reason": "images equivalent at depth k+1" })
                    });
                }
            }
        }
    }
    Ok(rec.finish())
}

/// `x ~_1 y <=> sigma^k(x) ~_{k+1} sigma^k(y)` over all `|x| = |y| <= max_len`.
pub fn check_prop23_bothdir(m: usize, k: u32, max_len: usize) -> Result<CheckReport> {
    check_alphabet(m)?;
    let mut rec = Recorder::new("bothdir", json!({ "m": m, "k": k, "max_len": max_len }));
    for len in 0..=max_len {
        let words = all_words(m, len)?;
        let sigs: Vec<BinomialSignature> = words
            .iter()
            .map(|w| signature(&sigma_power(m, k, w)?, k as usize + 1))
            .collect::<Result<_>>()?;
        let vectors: Vec<ParikhVector> = words.iter().map(parikh).collect();
        for i in 0..words.len() {
            for j in i..words.len() {
                let left = vectors[i] == vectors[j];
                let right = sigs[i] == sigs[j];
                rec.record(left == right, || {
                    json!({ "x": words[i].to_string(), "y": words[j].to_string(), "abelian": left, "images_equivalent": right })
                });
            }
        }
    }
    Ok(rec.finish())
}

/// `binom(sigma^k(u), 0 (-1) .. (-(l-1))) = binom(sigma^k(u), (-j) .. (-(j+l-1)))`.
pub fn check_lemma43(m: usize, k: u32, ell: usize, u: &Word, j: usize) -> Result<CheckReport> {
    check_alphabet(m)?;
    if ell > k as usize {
        return Err(Error::InvalidArgument(format!("requires l <= k (l={ell}, k={k})")));
    }
    let mut rec = Recorder::new(
        "lemma43",
        json!({ "m": m, "k": k, "l": ell, "u": u.to_string(), "j": j }),
    );
    lemma43_instance(&mut rec, m, k, ell, u, j)?;
    Ok(rec.finish())
}

fn lemma43_instance(
    rec: &mut Recorder,
    m: usize,
    k: u32,
    ell: usize,
    u: &Word,
    j: usize,
) -> Result<()> {
    let image = sigma_power(m, k, u)?;
    let left = binom_slice(image.letters(), descending_word(m, ell).letters());
    let right = binom_slice(image.letters(), descending_from(m, j, ell).letters());
    rec.record(left == right, || {
        json!({ "u": u.to_string(), "k": k, "l": ell, "j": j, "left": left.to_string(), "right": right.to_string() })
    });
    Ok(())
}

/// Lemma 4.3 over all `1 <= |u| <= max_len`, `1 <= l <= k`, `j in A_m`.
pub fn check_lemma43_grid(m: usize, k: u32, max_len: usize) -> Result<CheckReport> {
    check_alphabet(m)?;
    let mut rec = Recorder::new("lemma43", json!({ "m": m, "k": k, "max_len": max_len }));
    for len in 1..=max_len {
        for u in all_words(m, len)? {
            for ell in 1..=k as usize {
                for j in 0..m {
                    lemma43_instance(&mut rec, m, k, ell, &u, j)?;
                }
            }
        }
    }
    Ok(rec.finish())
}

/// How instances of the big-difference identity are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceMode {
    /// `gamma, gamma'` proper suffixes and `delta, delta'` proper prefixes of
    /// `sigma` images, `u, u'` factors of `t_m`.
    Context,
    /// Arbitrary words subject only to `gamma delta ~_1 gamma' delta'` and
    /// `|u| = |u'|`.
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigDiffInstance {
    pub u: Word,
    pub u2: Word,
    pub gamma: Word,
    pub gamma2: Word,
    pub delta: Word,
    pub delta2: Word,
}

impl BigDiffInstance {
    fn size(&self) -> usize {
        self.u.len() + self.gamma.len() + self.delta.len() + self.gamma2.len() + self.delta2.len()
    }

    fn to_json(&self) -> Value {
        json!({
            "u": self.u.to_string(), "u'": self.u2.to_string(),
            "gamma": self.gamma.to_string(), "gamma'": self.gamma2.to_string(),
            "delta": self.delta.to_string(), "delta'": self.delta2.to_string(),
        })
    }
}

/// Brute-force left side of the big-difference identity.
pub fn bigdiff_lhs(m: usize, k: u32, inst: &BigDiffInstance) -> Result<BigInt> {
    let e = descending_word(m, k as usize + 1);
    let side = |gamma: &Word, u: &Word, delta: &Word| -> Result<BigInt> {
        let inner = gamma.concat(&sigma_power(m, 1, u)?)?.concat(delta)?;
        let image = sigma_power(m, k - 1, &inner)?;
        Ok(big(binom_slice(image.letters(), e.letters())))
    };
    Ok(side(&inst.gamma, &inst.u, &inst.delta)? - side(&inst.gamma2, &inst.u2, &inst.delta2)?)
}

/// Closed right side of the big-difference identity.
pub fn bigdiff_rhs(m: usize, k: u32, inst: &BigDiffInstance) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::InvalidArgument("requires k >= 2".into()));
    }
    let c = binomial_coefficient(k, 2);
    let minus_one = (m - 1) as u8;
    let count = |w: &Word, a: u8| w.letters().iter().filter(|&&x| x == a).count() as i64;
    let linear = count(&inst.u, 0) - count(&inst.u2, 0)
        + inst.u.len() as i64
            * (count(&inst.gamma, 0) - count(&inst.gamma2, 0) + count(&inst.delta, minus_one)
                - count(&inst.delta2, minus_one));
    let gd = inst.gamma.concat(&inst.delta)?;
    let gd2 = inst.gamma2.concat(&inst.delta2)?;
    let mut sum = BigInt::zero();
    for b in 0..m as u8 {
        for x in [[b, minus_one], [0, b]] {
            sum += big(binom_slice(gd.letters(), &x)) - big(binom_slice(gd2.letters(), &x));
        }
    }
    Ok(m_pow_big(m, c) * linear + m_pow_big(m, c - 1) * sum)
}

fn image_suffixes(m: usize) -> Vec<Word> {
    // proper suffixes of sigma(a): (a+m-l) .. (a+m-1), i.e. a run ending in a-1
    let mut out = vec![Word::empty(m)];
    for a in 0..m {
        for l in 1..m {
            let letters = (0..l).map(|i| ((a + m - l + i) % m) as u8).collect();
            out.push(Word::new(m, letters).expect("reduced"));
        }
    }
    out
}

fn image_prefixes(m: usize) -> Vec<Word> {
    let mut out = vec![Word::empty(m)];
    for b in 0..m {
        for l in 1..m {
            let letters = (0..l).map(|i| ((b + i) % m) as u8).collect();
            out.push(Word::new(m, letters).expect("reduced"));
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, m: usize, len: usize) -> Word {
    Word::new(m, (0..len).map(|_| rng.gen_range(0..m) as u8).collect()).expect("reduced")
}

/// Draws `count` instances satisfying the hypotheses, deterministically from
/// `seed`.
pub fn bigdiff_instances(
    m: usize,
    count: usize,
    seed: u64,
    mode: InstanceMode,
) -> Result<Vec<BigDiffInstance>> {
    check_alphabet(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32));
    let mut out = Vec::with_capacity(count);
    match mode {
        InstanceMode::Context => {
            let suffixes = image_suffixes(m);
            let prefixes = image_prefixes(m);
            let mut by_vector: HashMap<ParikhVector, Vec<(usize, usize)>> = HashMap::new();
            for (i, g) in suffixes.iter().enumerate() {
                for (j, d) in prefixes.iter().enumerate() {
                    by_vector
                        .entry(parikh(&g.concat(d)?))
                        .or_default()
                        .push((i, j));
                }
            }
            let max_core = 4usize;
            let cores: Vec<Vec<Word>> = (0..=max_core)
                .map(|n| factor_set(m, n).map(|fs| fs.factors().to_vec()))
                .collect::<Result<_>>()?;
            for _ in 0..count {
                let i = rng.gen_range(0..suffixes.len());
                let j = rng.gen_range(0..prefixes.len());
                let key = parikh(&suffixes[i].concat(&prefixes[j])?);
                let &(i2, j2) = by_vector[&key].choose(&mut rng).expect("contains (i, j)");
                let len = rng.gen_range(0..=max_core);
                let u = cores[len].choose(&mut rng).expect("nonempty").clone();
                let u2 = cores[len].choose(&mut rng).expect("nonempty").clone();
                out.push(BigDiffInstance {
                    u,
                    u2,
                    gamma: suffixes[i].clone(),
                    gamma2: suffixes[i2].clone(),
                    delta: prefixes[j].clone(),
                    delta2: prefixes[j2].clone(),
                });
            }
        }
        InstanceMode::Arbitrary => {
            for _ in 0..count {
                let glen = rng.gen_range(0..=3);
                let dlen = rng.gen_range(0..=3);
                let gamma = random_word(&mut rng, m, glen);
                let delta = random_word(&mut rng, m, dlen);
                let mut mixed = gamma.concat(&delta)?.into_letters();
                mixed.shuffle(&mut rng);
                let cut = rng.gen_range(0..=mixed.len());
                let gamma2 = Word::new(m, mixed[..cut].to_vec())?;
                let delta2 = Word::new(m, mixed[cut..].to_vec())?;
                let len = rng.gen_range(0..=3);
                out.push(BigDiffInstance {
                    u: random_word(&mut rng, m, len),
                    u2: random_word(&mut rng, m, len),
                    gamma,
                    gamma2,
                    delta,
                    delta2,
                });
            }
        }
    }
    Ok(out)
}

/// Brute-force left side against the closed right side on explicit instances.
pub fn check_lemma44_instances(
    m: usize,
    k: u32,
    instances: &[BigDiffInstance],
) -> Result<CheckReport> {
    check_alphabet(m)?;
    if k < 2 {
        return Err(Error::InvalidArgument("requires k >= 2".into()));
    }
    let mut rec = Recorder::new("bigdiff", json!({ "m": m, "k": k }));
    let mut failing: Vec<(usize, Value)> = Vec::new();
    for inst in instances {
        let gd = inst.gamma.concat(&inst.delta)?;
        let gd2 = inst.gamma2.concat(&inst.delta2)?;
        if parikh(&gd) != parikh(&gd2) || inst.u.len() != inst.u2.len() {
            return Err(Error::InvalidArgument(format!(
                "instance violates the hypotheses: {}",
                inst.to_json()
            )));
        }
        let lhs = bigdiff_lhs(m, k, inst)?;
        let rhs = bigdiff_rhs(m, k, inst)?;
        rec.instances += 1;
        if lhs != rhs {
            let mut v = inst.to_json();
            v["lhs"] = json!(lhs.to_string());
            v["rhs"] = json!(rhs.to_string());
            failing.push((inst.size(), v));
        }
    }
    failing.sort_by_key(|(size, _)| *size);
    rec.failures = failing.into_iter().map(|(_, v)| v).collect();
    Ok(rec.finish())
}

/// The big-difference identity on `count` seeded instances.
pub fn check_lemma44_bigdiff(
    m: usize,
    k: u32,
    count: usize,
    seed: u64,
    mode: InstanceMode,
) -> Result<CheckReport> {
    let instances = bigdiff_instances(m, count, seed, mode)?;
    let mut report = check_lemma44_instances(m, k, &instances)?;
    report.params = json!({
        "m": m, "k": k, "instances": count, "seed": seed,
        "mode": match mode { InstanceMode::Context => "context", InstanceMode::Arbitrary => "arbitrary" },
    });
    Ok(report)
}

type FactorKey = (Vec<u8>, Vec<u8>, ParikhVector);

/// For every `n <= max_n` and all `U, V` in `Fac_n(t_m)`: `U ~_k V` iff some
/// `sigma^{k-1}`-factorizations of `U` and `V` share outer blocks and have
/// abelian-equivalent cores.
pub fn check_characterization(m: usize, k: u32, max_n: usize) -> Result<CheckReport> {
    check_alphabet(m)?;
    if k < 2 {
        return Err(Error::InvalidArgument("requires k >= 2".into()));
    }
    let mut rec = Recorder::new("characterization", json!({ "m": m, "k": k, "max_n": max_n }));
    let mut first_nontrivial = None;
    for n in 0..=max_n {
        let fs = factor_set(m, n)?;
        let facs = fs.factors();
        let sigs: Vec<BinomialSignature> = facs
            .iter()
            .map(|u| signature(u, k as usize))
            .collect::<Result<_>>()?;
        let keys: Vec<BTreeSet<FactorKey>> = facs
            .iter()
            .map(|u| {
                Ok(enumerate_factorizations(m, k - 1, u)?
                    .into_iter()
                    .map(|f| (f.x.into_letters(), f.y.into_letters(), parikh(&f.u)))
                    .collect())
            })
            .collect::<Result<_>>()?;
        for i in 0..facs.len() {
            for j in i + 1..facs.len() {
                let equivalent = sigs[i] == sigs[j];
                let shared = !keys[i].is_disjoint(&keys[j]);
                if equivalent && first_nontrivial.is_none() {
                    first_nontrivial = Some(n);
                }
                rec.record(equivalent == shared, || {
                    json!({ "n": n, "U": facs[i].to_string(), "V": facs[j].to_string(), "equivalent": equivalent, "shared_factorization": shared })
                });
            }
        }
    }
    let threshold = 2 * m.pow(k - 1);
    if max_n >= threshold {
        rec.record(first_nontrivial == Some(threshold), || {
            json!({ "first_nontrivial_length": first_nontrivial, "expected": threshold })
        });
    }
    rec.details = json!({ "first_nontrivial_length": first_nontrivial });
    Ok(rec.finish())
}

fn main_equiv_instance(rec: &mut Recorder, m: usize, k: u32, n: usize) -> Result<Value> {
    let classes = pair_classes(m, k, n)?;
    let counted = classes.len() as u128;
    let formula = main_equiv_count(m as u128, k, n as u128)?;
    let empirical = kbinomial_complexity(m, k as usize, n)? as u128;
    rec.record(counted == formula && formula == empirical, || {
        json!({ "n": n, "pair_classes": counted, "formula": formula, "binomial_complexity": empirical })
    });
    // every class is a clique under the pair relation
    for class in &classes {
        for i in 0..class.len() {
            for j in i + 1..class.len() {
                let ok = equiv_k_pairs(m, k, &class[i], &class[j])?;
                rec.record(ok, || {
                    json!({ "n": n, "p1": class[i].to_json(), "p2": class[j].to_json(), "reason": "not transitive" })
                });
            }
        }
    }
    let fs = factor_set(m, n)?;
    let facs = fs.factors();
    let pairs: Vec<PSPair> = facs
        .iter()
        .map(|u| ps_pair(m, k, u))
        .collect::<Result<_>>()?;
    let sigs: Vec<BinomialSignature> = facs
        .iter()
        .map(|u| signature(u, k as usize))
        .collect::<Result<_>>()?;
    for i in 0..facs.len() {
        for j in i + 1..facs.len() {
            let by_pairs = equiv_k_pairs(m, k, &pairs[i], &pairs[j])?;
            let by_counts = sigs[i] == sigs[j];
            rec.record(by_pairs == by_counts, || {
                json!({ "n": n, "U": facs[i].to_string(), "V": facs[j].to_string(), "pairs_equivalent": by_pairs, "binomially_equivalent": by_counts })
            });
        }
    }
    Ok(json!({ "n": n, "pair_classes": counted, "formula": formula, "binomial_complexity": empirical }))
}

/// Pair-class count, closed formula and empirical complexity agree at `n`,
/// and `≡_k` on pairs matches `~_k` on the factors.
pub fn check_main_equiv(m: usize, k: u32, n: usize) -> Result<CheckReport> {
    check_main_equiv_range(m, k, n..=n)
}

pub fn check_main_equiv_range(m: usize, k: u32, range: RangeInclusive<usize>) -> Result<CheckReport> {
    check_alphabet(m)?;
    if k < 2 {
        return Err(Error::InvalidArgument("requires k >= 2".into()));
    }
    let mut rec = Recorder::new(
        "main-equiv",
        json!({ "m": m, "k": k, "from": range.start(), "to": range.end() }),
    );
    let mut rows = Vec::new();
    for n in range {
        rows.push(main_equiv_instance(&mut rec, m, k, n)?);
    }
    rec.details = json!({ "rows": rows });
    Ok(rec.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityKind {
    Factor,
    Abelian,
    /// `k`-binomial; `k = 1` is abelian.
    Binomial(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub computed: u128,
    pub formula: u128,
}

impl ComplexityRow {
    pub fn matches(&self) -> bool {
        self.computed == self.formula
    }
}

fn formula_value(m: usize, kind: ComplexityKind, n: usize) -> Result<u128> {
    let (mm, nn) = (m as u128, n as u128);
    Ok(match kind {
        ComplexityKind::Factor => starosta_p(mm, nn)?,
        ComplexityKind::Abelian | ComplexityKind::Binomial(1) => abelian_b1(mm, nn)?,
        ComplexityKind::Binomial(k) => main_bk(mm, k as u32, nn)?,
    })
}

fn computed_value(m: usize, kind: ComplexityKind, n: usize) -> Result<u128> {
    Ok(match kind {
        ComplexityKind::Factor => factor_complexity(m, n)?,
        ComplexityKind::Abelian => abelian_complexity(m, n)?,
        ComplexityKind::Binomial(k) => kbinomial_complexity(m, k, n)?,
    } as u128)
}

/// Empirical complexity next to the closed formula, one row per `n`, in
/// increasing `n`.
pub fn complexity_rows(
    m: usize,
    kind: ComplexityKind,
    range: RangeInclusive<usize>,
) -> Result<Vec<ComplexityRow>> {
    check_alphabet(m)?;
    if kind == ComplexityKind::Binomial(0) {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    range
        .into_par_iter()
        .map(|n| {
            Ok(ComplexityRow {
                n,
                computed: computed_value(m, kind, n)?,
                formula: formula_value(m, kind, n)?,
            })
        })
        .collect()
}

/// Empirical factor, abelian and `k`-binomial complexities against their
/// closed forms over `range`, plus the `k = 2` and `m = 2` specializations
/// where they apply.
pub fn check_complexity_theorems(
    m: usize,
    k: usize,
    range: RangeInclusive<usize>,
) -> Result<CheckReport> {
    check_alphabet(m)?;
    if k == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let mut rec = Recorder::new(
        "theorems",
        json!({ "m": m, "k": k, "from": range.start(), "to": range.end() }),
    );
    let mut table = Vec::new();
    for (name, kind) in [
        ("factor", ComplexityKind::Factor),
        ("abelian", ComplexityKind::Abelian),
        ("binomial", ComplexityKind::Binomial(k)),
    ] {
        let rows = complexity_rows(m, kind, range.clone())?;
        for row in &rows {
            rec.record(row.matches(), || {
                json!({ "kind": name, "n": row.n, "computed": row.computed, "formula": row.formula })
            });
            if name != "binomial" || k < 2 {
                continue;
            }
            let special = if m == 2 {
                Some(llr_b2k(k as u32, row.n as u128)?)
            } else if k == 2 && row.n >= m * m {
                Some(lcw_b2(m as u128, row.n as u128)?)
            } else {
                None
            };
            if let Some(s) = special {
                rec.record(s == row.computed, || {
                    json!({ "kind": "specialization", "n": row.n, "computed": row.computed, "formula": s })
                });
            }
        }
        if name == "binomial" {
            table = rows;
        }
    }
    rec.details = json!({ "rows": table });
    Ok(rec.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    All,
    Prop41,
    Cor42,
    Bothdir,
    Lemma43,
    Bigdiff,
    Characterization,
    MainEquiv,
    Theorems,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "all",
        "prop41",
        "cor42",
        "bothdir",
        "lemma43",
        "bigdiff",
        "characterization",
        "main-equiv",
        "theorems",
    ];

    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "all" => Suite::All,
            "prop41" => Suite::Prop41,
            "cor42" => Suite::Cor42,
            "bothdir" => Suite::Bothdir,
            "lemma43" => Suite::Lemma43,
            "bigdiff" => Suite::Bigdiff,
            "characterization" => Suite::Characterization,
            "main-equiv" => Suite::MainEquiv,
            "theorems" => Suite::Theorems,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub m: usize,
    pub k: u32,
    /// Largest factor length for the exhaustive factor checks; defaults to
    /// `3 m^k`.
    pub max_n: Option<usize>,
    pub seed: u64,
    pub instances: usize,
    pub mode: InstanceMode,
}

impl SuiteParams {
    pub fn new(m: usize, k: u32) -> SuiteParams {
        SuiteParams {
            m,
            k,
            max_n: None,
            seed: DEFAULT_SEED,
            instances: DEFAULT_INSTANCES,
            mode: InstanceMode::Context,
        }
    }
}

/// Word length for the exhaustive word-pair checks, kept small enough that
/// `m^len` pairs stay cheap.
fn word_grid_len(m: usize) -> usize {
    match m {
        2 => 5,
        3 => 3,
        4 => 2,
        _ => 1,
    }
}

/// Runs the named suite. Reports come back sorted by check name.
pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<Vec<CheckReport>> {
    check_alphabet(p.m)?;
    if p.k < 2 {
        return Err(Error::InvalidArgument("suites need k >= 2".into()));
    }
    let (m, k) = (p.m, p.k);
    let mk = limits::pow(m, k).unwrap_or(u128::MAX);
    limits::check_factor_len(mk.saturating_mul(2).min(usize::MAX as u128) as usize)?;
    let mk = mk as usize;
    let max_n = p.max_n.unwrap_or(3 * mk);
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    if wanted(Suite::Prop41) {
        out.push(check_prop41(m, k)?);
    }
    if wanted(Suite::Cor42) {
        out.push(check_cor42(m, k, word_grid_len(m))?);
    }
    if wanted(Suite::Bothdir) {
        out.push(check_prop23_bothdir(m, k, word_grid_len(m))?);
    }
    if wanted(Suite::Lemma43) {
        out.push(check_lemma43_grid(m, k, word_grid_len(m))?);
    }
    if wanted(Suite::Bigdiff) {
        out.push(check_lemma44_bigdiff(m, k, p.instances, p.seed, p.mode)?);
    }
    if wanted(Suite::Characterization) {
        out.push(check_characterization(m, k, max_n)?);
    }
    if wanted(Suite::MainEquiv) {
        let from = 2 * mk;
        if max_n < from {
            return Err(Error::TooShort {
                m,
                k,
                len: max_n,
                needed: from,
            });
        }
        out.push(check_main_equiv_range(m, k, from..=max_n)?);
    }
    if wanted(Suite::Theorems) {
        out.push(check_complexity_theorems(m, k as usize, 0..=max_n)?);
    }
    out.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(out)
}

/// Summary line per report, keyed by check name.
pub fn summarize(reports: &[CheckReport]) -> BTreeMap<String, bool> {
    reports.iter().map(|r| (r.check.clone(), r.passed())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: usize, s: &str) -> Word {
        Word::parse(m, s).unwrap()
    }

    /// Independent subsequence counter: enumerate index subsets.
    fn brute(u: &[u8], x: &[u8]) -> u64 {
        fn go(u: &[u8], x: &[u8]) -> u64 {
            if x.is_empty() {
                return 1;
            }
            if u.len() < x.len() {
                return 0;
            }
            let skip = go(&u[1..], x);
            if u[0] == x[0] {
                skip + go(&u[1..], &x[1..])
            } else {
                skip
            }
        }
        go(u, x)
    }

    #[test]
    fn descending() {
        assert_eq!(descending_word(3, 3), w(3, "021"));
        assert_eq!(descending_word(2, 3), w(2, "010"));
        assert_eq!(descending_from(4, 2, 3), w(4, "210"));
    }

    #[test]
    fn prop41_small() {
        // binom(0110, 010) - binom(1001, 010) = 2 - 0
        assert_eq!(brute(&[0, 1, 1, 0], &[0, 1, 0]), 2);
        assert_eq!(brute(&[1, 0, 0, 1], &[0, 1, 0]), 0);
        let r = check_prop41(2, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["difference"], "2");
        let r = check_prop41(3, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["difference"], "3");
        let r = check_prop41(2, 4).unwrap();
        assert_eq!(r.details["difference"], "64");
        for n in 1..3u32 {
            let r = check_prop41(2, 2 * n).unwrap();
            assert!(r.passed());
            assert_eq!(r.details["difference"], (1u64 << (n * (2 * n - 1))).to_string());
        }
    }

    #[test]
    fn cor42_example() {
        let e = descending_word(2, 3);
        let su = sigma_power(2, 2, &w(2, "01")).unwrap();
        let sv = sigma_power(2, 2, &w(2, "11")).unwrap();
        let d = brute(su.letters(), e.letters()) as i64 - brute(sv.letters(), e.letters()) as i64;
        assert_eq!(d, 2);
        assert!(check_cor42(2, 2, 3).unwrap().passed());
        assert!(check_cor42(3, 2, 3).unwrap().passed());
    }

    #[test]
    fn bothdir() {
        let r = check_prop23_bothdir(2, 1, 2).unwrap();
        assert!(r.passed());
        assert!(check_prop23_bothdir(3, 2, 3).unwrap().passed());
    }

    #[test]
    fn lemma43() {
        for m in 2..5 {
            let u = w(m, "0");
            assert!(check_lemma43(m, 2, 1, &u, 1).unwrap().passed());
        }
        assert!(check_lemma43(3, 2, 2, &w(3, "01"), 1).unwrap().passed());
        assert!(check_lemma43(2, 3, 2, &w(2, "0"), 1).unwrap().passed());
        assert!(check_lemma43(2, 2, 3, &w(2, "0"), 1).is_err());
        assert!(check_lemma43_grid(3, 2, 2).unwrap().passed());
    }

    #[test]
    fn bigdiff_examples() {
        let same = BigDiffInstance {
            u: w(2, "01"),
            u2: w(2, "01"),
            gamma: w(2, "1"),
            gamma2: w(2, "1"),
            delta: w(2, "0"),
            delta2: w(2, "0"),
        };
        assert_eq!(bigdiff_lhs(2, 2, &same).unwrap(), BigInt::zero());
        assert_eq!(bigdiff_rhs(2, 2, &same).unwrap(), BigInt::zero());
        let inst = BigDiffInstance {
            u: w(2, "0"),
            u2: w(2, "1"),
            gamma: w(2, "1"),
            gamma2: w(2, "0"),
            delta: w(2, "0"),
            delta2: w(2, "1"),
        };
        assert_eq!(bigdiff_lhs(2, 2, &inst).unwrap(), bigdiff_rhs(2, 2, &inst).unwrap());
        let r = check_lemma44_instances(2, 2, &[same, inst]).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn bigdiff_random() {
        for (m, k) in [(2, 2), (2, 3), (3, 2)] {
            let r = check_lemma44_bigdiff(m, k, 50, DEFAULT_SEED, InstanceMode::Context).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
        for (m, k) in [(2, 2), (3, 2), (3, 3)] {
            let r = check_lemma44_bigdiff(m, k, 200, 11, InstanceMode::Arbitrary).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
        let a = bigdiff_instances(3, 20, 7, InstanceMode::Context).unwrap();
        let b = bigdiff_instances(3, 20, 7, InstanceMode::Context).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn characterization_small() {
        let r = check_characterization(2, 2, 10).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.details["first_nontrivial_length"], 4);
    }

    #[test]
    fn main_equiv_small() {
        let r = check_main_equiv(3, 2, 18).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.details["rows"][0]["pair_classes"], 49);
        let r = check_main_equiv(3, 2, 22).unwrap();
        assert_eq!(r.details["rows"][0]["pair_classes"], 45);
        assert!(check_main_equiv(3, 2, 17).is_err());
    }

    #[test]
    fn theorems_small() {
        let r = check_complexity_theorems(3, 2, 0..=30).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.details["rows"].as_array().unwrap().len(), 31);
    }

    #[test]
    fn report_json() {
        let r = check_prop41(2, 2).unwrap();
        let j = r.to_json();
        for key in ["check", "params", "instances", "failures", "elapsed_ms"] {
            assert!(j.get(key).is_some());
        }
        let back: CheckReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn suite_names() {
        for name in Suite::NAMES {
            assert!(Suite::parse(name).is_some());
        }
        assert!(Suite::parse("nope").is_none());
    }
}
