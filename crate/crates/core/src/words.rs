//! Binary words, the canonical length-then-lexicographic enumeration of
//! them, and the Cantor pairing function.
//!
//! Position `i` of the enumeration is the word of length `L` and binary
//! value `v` with `i = 2^L - 1 + v`:
//!
//! ```text
//! 0 -> ""   1 -> "0"   2 -> "1"   3 -> "00"   4 -> "01"   5 -> "10" ...
//! ```
//!
//! Position 0 is the blank; position `k >= 1` is the numeral of the integer
//! `k - 1`. Machines read and write numerals in that form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A finite word over `{0, 1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn new(bits: Vec<bool>) -> Self {
        Word(bits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// Binary value of the word read big-endian (the empty word is 0).
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.0 {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// The `len`-bit big-endian representation of `v` (high bits dropped).
    pub fn from_value(v: &BigUint, len: usize) -> Self {
        let mut bits = vec![false; len];
        for (i, slot) in bits.iter_mut().rev().enumerate() {
            *slot = v.bit(i as u64);
        }
        Word(bits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a binary word: {0:?}")]
pub struct BadWord(pub String);

impl FromStr for Word {
    type Err = BadWord;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BadWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// The `i`-th word of the canonical enumeration.
pub fn index_word(i: &BigUint) -> Word {
    // i + 1 = 2^L + v, so the word is i + 1 without its leading one.
    let shifted = i + 1u32;
    let len = (shifted.bits() - 1) as usize;
    Word::from_value(&shifted, len)
}

/// Inverse of [`index_word`].
pub fn word_index(w: &Word) -> BigUint {
    let mut v = BigUint::one();
    for &b in w.bits() {
        v <<= 1u32;
        if b {
            v += 1u32;
        }
    }
    v - 1u32
}

/// The word a machine reads or writes for the integer `n`.
pub fn numeral_word(n: &BigUint) -> Word {
    index_word(&(n + 1u32))
}

/// The integer a word stands for; `None` for the blank (empty) word.
pub fn word_numeral(w: &Word) -> Option<BigUint> {
    if w.is_empty() {
        None
    } else {
        Some(word_index(w) - 1u32)
    }
}

/// Cantor pairing `<x, y> = (x + y)(x + y + 1) / 2 + y`.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

/// Inverse of [`pair`]: returns `(x, y)`.
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2) is the diagonal index x + y.
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub fn proj1(z: &BigUint) -> BigUint {
    unpair(z).0
}

pub fn proj2(z: &BigUint) -> BigUint {
    unpair(z).1
}

/// `u64` convenience wrappers used by scans over small ranges.
pub fn pair_u64(x: u64, y: u64) -> BigUint {
    pair(&BigUint::from(x), &BigUint::from(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Independent enumeration: all words of length 0, 1, 2, ... in
    /// lexicographic order.
    fn brute_enumeration(count: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut len = 1;
        while out.len() < count {
            for v in 0..(1u64 << len) {
                out.push(format!("{:0width$b}", v, width = len));
            }
            len += 1;
        }
        out.truncate(count);
        out
    }

    #[test]
    fn first_words() {
        let listed = ["", "0", "1", "00", "01", "10", "11"];
        for (i, s) in listed.iter().enumerate() {
            assert_eq!(index_word(&n(i as u64)), w(s));
        }
        assert_eq!(index_word(&n(7)), w("000"));
    }

    #[test]
    fn word_positions() {
        assert_eq!(word_index(&Word::empty()), n(0));
        assert_eq!(word_index(&w("00")), n(3));
        assert_eq!(word_index(&w("001")), n(8));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (i, s) in brute_enumeration(5000).iter().enumerate() {
            assert_eq!(index_word(&n(i as u64)).to_string(), *s);
            assert_eq!(word_index(&w(s)), n(i as u64));
        }
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral_word(&n(0)), w("0"));
        assert_eq!(numeral_word(&n(1)), w("1"));
        assert_eq!(numeral_word(&n(2)), w("00"));
        assert_eq!(word_numeral(&w("01")), Some(n(3)));
        assert_eq!(word_numeral(&Word::empty()), None);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(pair(&n(1), &n(2)), n(8));
        assert_eq!(pair(&n(2), &n(1)), n(7));
        assert_eq!(unpair(&n(8)), (n(1), n(2)));
        assert_eq!(unpair(&n(0)), (n(0), n(0)));
        assert_eq!(proj2(&n(7)), n(1));
    }

    #[test]
    fn pairing_matches_diagonal_walk() {
        // Walk the diagonals x + y = d with y increasing.
        let mut z = 0u64;
        for d in 0..60u64 {
            for y in 0..=d {
                let x = d - y;
                assert_eq!(pair(&n(x), &n(y)), n(z));
                assert_eq!(unpair(&n(z)), (n(x), n(y)));
                z += 1;
            }
        }
    }

    #[test]
    fn pairing_diagonal_closed_form() {
        for k in 0..10_000u64 {
            assert_eq!(pair(&n(k), &n(k)), n(2 * k * k + 2 * k));
        }
    }

    #[test]
    fn unpair_large() {
        let x = BigUint::from(3u32).pow(90);
        let y = BigUint::from(7u32).pow(41);
        assert_eq!(unpair(&pair(&x, &y)), (x, y));
    }
}
