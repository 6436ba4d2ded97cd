//! Finite words over `A_m = {0, .., m-1}`, the morphisms `sigma_m` and
//! `tau_m`, and direct generation of the generalized Thue-Morse word `t_m`.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;

/// Largest supported alphabet (letters are stored as `u8`).
pub const MAX_ALPHABET: usize = 256;

/// A letter of `A_m`, identified with `Z/mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u8);

impl Letter {
    /// Reduces `value` modulo `m`.
    pub fn new(value: i64, m: usize) -> Letter {
        Letter(value.rem_euclid(m as i64) as u8)
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    pub fn shift(self, j: i64, m: usize) -> Letter {
        Letter::new(self.0 as i64 + j, m)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn check_alphabet(m: usize) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&m) {
        return Err(Error::InvalidAlphabet(m));
    }
    Ok(())
}

#[inline]
pub(crate) fn add_mod(a: u8, j: usize, m: usize) -> u8 {
    ((a as usize + j) % m) as u8
}

/// A finite word over `A_m`. Value semantics: two words are equal iff they
/// share the alphabet and agree letter by letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    m: usize,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(m: usize, letters: Vec<u8>) -> Result<Word> {
        check_alphabet(m)?;
        if let Some(&bad) = letters.iter().find(|&&a| a as usize >= m) {
            return Err(Error::LetterOutOfRange {
                letter: bad as usize,
                m,
            });
        }
        Ok(Word { m, letters })
    }

    pub fn empty(m: usize) -> Word {
        Word {
            m,
            letters: Vec::new(),
        }
    }

    /// Caller guarantees every letter is `< m` and `m` is a valid alphabet size.
    pub(crate) fn from_raw(m: usize, letters: Vec<u8>) -> Word {
        debug_assert!(letters.iter().all(|&a| (a as usize) < m));
        Word { m, letters }
    }

    pub(crate) fn from_slice(m: usize, letters: &[u8]) -> Word {
        Word::from_raw(m, letters.to_vec())
    }

    pub fn from_letters(m: usize, letters: &[Letter]) -> Result<Word> {
        Word::new(m, letters.iter().map(|l| l.0).collect())
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn letter(&self, i: usize) -> Letter {
        Letter(self.letters[i])
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().map(|&a| Letter(a))
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().map(|&a| Letter(a))
    }

    /// The factor at positions `range`.
    pub fn factor(&self, range: Range<usize>) -> Word {
        Word::from_slice(self.m, &self.letters[range])
    }

    pub fn ensure_same_alphabet(&self, other: &Word) -> Result<()> {
        if self.m != other.m {
            return Err(Error::AlphabetMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.ensure_same_alphabet(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word::from_raw(self.m, letters))
    }

    pub fn count(&self, a: Letter) -> usize {
        self.letters.iter().filter(|&&b| b == a.0).count()
    }

    /// Parses either a digit string (`"0120"`, only for `m <= 10`) or a
    /// comma-separated list of integers (`"0,11,3"`).
    pub fn parse(m: usize, input: &str) -> Result<Word> {
        check_alphabet(m)?;
        let s = input.trim();
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Ok(Word::empty(m));
        }
        let letters: Vec<usize> = if s.contains(',') || m > 10 {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| err("bad integer")))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("not a digit")))
                .collect::<Result<_>>()?
        };
        if let Some(&bad) = letters.iter().find(|&&a| a >= m) {
            return Err(Error::LetterOutOfRange { letter: bad, m });
        }
        Ok(Word::from_raw(m, letters.into_iter().map(|a| a as u8).collect()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m <= 10 {
            for &a in &self.letters {
                write!(f, "{}", a)?;
            }
        } else {
            for (i, &a) in self.letters.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[m={}]({})", self.m, self)
    }
}

/// Letter counts of a word, indexed by letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParikhVector {
    counts: Vec<usize>,
}

impl ParikhVector {
    pub fn new(counts: Vec<usize>) -> ParikhVector {
        ParikhVector { counts }
    }

    pub fn zero(m: usize) -> ParikhVector {
        ParikhVector { counts: vec![0; m] }
    }

    pub fn of_slice(m: usize, letters: &[u8]) -> ParikhVector {
        let mut counts = vec![0; m];
        for &a in letters {
            counts[a as usize] += 1;
        }
        ParikhVector { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Adds `t` to every coordinate.
    pub fn shifted(&self, t: usize) -> ParikhVector {
        ParikhVector {
            counts: self.counts.iter().map(|c| c + t).collect(),
        }
    }

    /// `self - e_a + e_b`, or `None` when coordinate `a` is zero.
    pub fn swap_letter(&self, a: Letter, b: Letter) -> Option<ParikhVector> {
        let mut counts = self.counts.clone();
        counts[a.value()] = counts[a.value()].checked_sub(1)?;
        counts[b.value()] += 1;
        Some(ParikhVector { counts })
    }
}

pub fn parikh(w: &Word) -> ParikhVector {
    ParikhVector::of_slice(w.m, &w.letters)
}

/// `sigma_m(a) = a (a+1) .. (a+m-1)`.
pub fn sigma_image(m: usize, a: Letter) -> Word {
    Word::from_raw(m, (0..m).map(|i| add_mod(a.0, i, m)).collect())
}

/// Applies `sigma_m` `k` times.
pub fn sigma_power(m: usize, k: u32, w: &Word) -> Result<Word> {
    check_alphabet(m)?;
    if w.m != m {
        return Err(Error::AlphabetMismatch { left: m, right: w.m });
    }
    let block = limits::pow(m, k).unwrap_or(u128::MAX);
    limits::check_prefix(block.saturating_mul(w.len() as u128))?;
    let base = tm_prefix(m, block as usize)?;
    let mut out = Vec::with_capacity(block as usize * w.len());
    for &a in &w.letters {
        out.extend(base.letters.iter().map(|&d| add_mod(d, a as usize, m)));
    }
    Ok(Word::from_raw(m, out))
}

/// Adds `j` (mod `m`) to every letter: `tau_m^j`.
pub fn tau_apply(m: usize, j: i64, w: &Word) -> Word {
    let shift = j.rem_euclid(m as i64) as usize;
    Word::from_raw(m, w.letters.iter().map(|&a| add_mod(a, shift, m)).collect())
}

/// Base-`m` digit sum of `j`, reduced mod `m`: the letter of `t_m` at index `j`.
pub fn tm_letter(m: usize, j: u128) -> Letter {
    let mut j = j;
    let mut s = 0u128;
    let base = m as u128;
    while j > 0 {
        s += j % base;
        j /= base;
    }
    Letter((s % base) as u8)
}

/// The first `len` letters of `t_m`.
pub fn tm_prefix(m: usize, len: usize) -> Result<Word> {
    tm_window(m, 0, len)
}

/// The factor of `t_m` at positions `start .. start + len`, built by
/// incrementing a base-`m` counter and updating its digit sum.
pub fn tm_window(m: usize, start: u128, len: usize) -> Result<Word> {
    check_alphabet(m)?;
    limits::check_prefix(len as u128)?;
    let mut digits: Vec<usize> = Vec::new();
    let mut j = start;
    while j > 0 {
        digits.push((j % m as u128) as usize);
        j /= m as u128;
    }
    let mut sum: usize = digits.iter().sum::<usize>() % m;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(sum as u8);
        let mut i = 0;
        loop {
            if i == digits.len() {
                digits.push(0);
            }
            if digits[i] + 1 < m {
                digits[i] += 1;
                sum = (sum + 1) % m;
                break;
            }
            digits[i] = 0;
            // m-1 -> 0 lowers the digit sum by m-1, i.e. raises it by 1 mod m
            sum = (sum + 1) % m;
            i += 1;
        }
    }
    Ok(Word::from_raw(m, out))
}
