//! Thue-Morse words, digits and prefixes.
//!
//! `t = t_0 t_1 t_2 ...` is the fixed point of the morphism `0 -> 01, 1 -> 10`
//! starting with `0`. Digit `t_i` is the parity of the number of set bits of
//! `i`, so single digits never require generating a word.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::BigCount;

/// A finite binary string, bit-packed. Symbol `i` lives in bit `i % 64` of
/// storage word `i / 64`; padding bits past `len` are always zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    words: Vec<u64>,
}

impl BitWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(symbols: usize) -> Self {
        BitWord {
            len: 0,
            words: Vec::with_capacity(symbols.div_ceil(64)),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol at `i`, or `None` when `i >= len`.
    pub fn get(&self, i: usize) -> Option<u8> {
        (i < self.len).then(|| ((self.words[i / 64] >> (i % 64)) & 1) as u8)
    }

    /// Symbol at `i`.
    ///
    /// Panics if `i >= len`.
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i)
            .unwrap_or_else(|| panic!("index {i} out of range for BitWord of length {}", self.len))
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit & 1 == 1 {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn extend_from(&mut self, other: &BitWord) {
        if self.len % 64 == 0 {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
        } else {
            other.iter().for_each(|b| self.push(b));
        }
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut out = BitWord::with_capacity(self.len + other.len);
        out.extend_from(self);
        out.extend_from(other);
        out
    }

    /// Bitwise complement: every `0` becomes `1` and vice versa.
    pub fn complement(&self) -> BitWord {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        mask_tail(&mut words, self.len);
        BitWord {
            len: self.len,
            words,
        }
    }

    /// The contiguous sub-word `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitWord::with_capacity(len);
        (start..start + len).for_each(|i| out.push(self.bit(i)));
        out
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u8> + '_ {
        (0..self.len).map(move |i| ((self.words[i / 64] >> (i % 64)) & 1) as u8)
    }

    /// One byte (0 or 1) per symbol.
    pub fn symbols(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Packed storage; bit `i % 64` of word `i / 64` is symbol `i`.
    pub fn storage(&self) -> &[u64] {
        &self.words
    }

    pub fn from_symbols(symbols: &[u8]) -> BitWord {
        let mut out = BitWord::with_capacity(symbols.len());
        symbols.iter().for_each(|&b| out.push(b & 1));
        out
    }

    fn from_storage(words: Vec<u64>, len: usize) -> BitWord {
        let mut words = words;
        words.truncate(len.div_ceil(64));
        mask_tail(&mut words, len);
        BitWord { len, words }
    }
}

fn mask_tail(words: &mut [u64], len: usize) {
    if len % 64 != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << (len % 64)) - 1;
        }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord(\"{self}\")")
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitWord::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(0),
                '1' => out.push(1),
                other => return Err(Error::InvalidSymbol(other)),
            }
        }
        Ok(out)
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Read access to a binary string by index, without requiring it to be
/// materialized.
pub trait SymbolSource {
    fn symbol_count(&self) -> u64;
    /// Symbol at `i`; callers guarantee `i < symbol_count()`.
    fn symbol(&self, i: u64) -> u8;
}

impl SymbolSource for BitWord {
    fn symbol_count(&self) -> u64 {
        self.len as u64
    }

    fn symbol(&self, i: u64) -> u8 {
        self.bit(i as usize)
    }
}

/// A Thue-Morse prefix `t_0 .. t_{len-1}`, optionally complemented, read
/// digit by digit. Never allocates, so it works far beyond the
/// materialization cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThueMorseSource {
    pub len: u64,
    pub complemented: bool,
}

impl ThueMorseSource {
    pub fn prefix(len: u64) -> Self {
        ThueMorseSource {
            len,
            complemented: false,
        }
    }

    pub fn complement_prefix(len: u64) -> Self {
        ThueMorseSource {
            len,
            complemented: true,
        }
    }

    /// `mu^n(d)`; `n` must be below 64.
    pub fn word(n: u32, digit: u8) -> Self {
        assert!(n < 64, "word exponent {n} does not fit a u64 length");
        ThueMorseSource {
            len: 1 << n,
            complemented: digit == 1,
        }
    }
}

impl SymbolSource for ThueMorseSource {
    fn symbol_count(&self) -> u64 {
        self.len
    }

    fn symbol(&self, i: u64) -> u8 {
        tm_digit(i) ^ self.complemented as u8
    }
}

/// Applies `0 -> 01, 1 -> 10` to every symbol.
pub fn morphism_apply(w: &BitWord) -> BitWord {
    let mut out = BitWord::with_capacity(2 * w.len());
    for b in w.iter() {
        out.push(b);
        out.push(b ^ 1);
    }
    out
}

/// `t_i`: parity of the popcount of `i`.
#[inline]
pub fn tm_digit(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

/// `t_0 .. t_63` packed with `t_r` in bit `r`.
const TM_BLOCK: u64 = 0x6996_9669_9669_6996;

fn check_cap(what: impl FnOnce() -> String, requested: u128, limits: &Limits) -> Result<()> {
    if requested > limits.max_symbols as u128 {
        return Err(Error::CapExceeded {
            what: what(),
            requested: requested.to_string(),
            limit: limits.max_symbols,
        });
    }
    Ok(())
}

/// The length-`n` prefix of the Thue-Morse sequence.
pub fn tm_prefix(n: u64, limits: &Limits) -> Result<BitWord> {
    check_cap(|| format!("prefix of length {n}"), n as u128, limits)?;
    Ok(prefix_unchecked(n as usize))
}

fn prefix_unchecked(n: usize) -> BitWord {
    // t_{64q + r} = t_q xor t_r
    let words = (0..n.div_ceil(64) as u64)
        .map(|q| if tm_digit(q) == 1 { !TM_BLOCK } else { TM_BLOCK })
        .collect();
    BitWord::from_storage(words, n)
}

/// `mu^n(d)`, of length `2^n`.
pub fn tm_word(n: u32, digit: u8, limits: &Limits) -> Result<BitWord> {
    let requested = if n < 128 { 1u128 << n } else { u128::MAX };
    check_cap(
        || format!("mu^{n}({digit}) of length 2^{n}"),
        requested,
        limits,
    )?;
    let word = prefix_unchecked(1usize << n);
    Ok(if digit == 1 { word.complement() } else { word })
}

/// Bitwise complement of `w`.
pub fn complement(w: &BitWord) -> BitWord {
    w.complement()
}

/// True iff the binary representation of `n` ends in an odd-length run of
/// ones, equivalently `t_n == t_{n+1}`.
pub fn ends_in_odd_ones(n: u64) -> bool {
    n.trailing_ones() % 2 == 1
}

/// Number of `i < 2^n - 1` with `t_i == t_{i+1}`:
/// `(2^n - 1) / 3` for even `n`, `(2^n - 2) / 3` for odd `n`.
pub fn eq_count(n: u64) -> BigCount {
    let pow = BigUint::one() << n;
    let offset = if n % 2 == 0 { 1u32 } else { 2u32 };
    if n == 0 {
        return BigUint::default();
    }
    (pow - offset) / 3u32
}

/// One block `mu^k(digit)` starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub k: u32,
    pub start: u64,
    pub digit: u8,
}

impl Block {
    pub fn len(&self) -> u64 {
        1 << self.k
    }
}

/// A word written as a contiguous concatenation of Thue-Morse words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Block>", try_from = "Vec<Block>")]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
    total_length: u64,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_length(&self) -> u64 {
        self.total_length
    }

    /// Concatenation of `mu^{k_j}(d_j)` over all blocks.
    pub fn render(&self, limits: &Limits) -> Result<BitWord> {
        check_cap(
            || format!("decomposition of length {}", self.total_length),
            self.total_length as u128,
            limits,
        )?;
        let mut out = BitWord::with_capacity(self.total_length as usize);
        for b in &self.blocks {
            out.extend_from(&tm_word(b.k, b.digit, limits)?);
        }
        Ok(out)
    }
}

impl From<BlockDecomposition> for Vec<Block> {
    fn from(d: BlockDecomposition) -> Self {
        d.blocks
    }
}

impl TryFrom<Vec<Block>> for BlockDecomposition {
    type Error = Error;

    fn try_from(blocks: Vec<Block>) -> Result<Self> {
        let mut next = 0u64;
        for b in &blocks {
            if b.start != next || b.digit > 1 || b.k >= 64 {
                return Err(Error::InvalidArgument(format!(
                    "block {b:?} is not contiguous with the previous one"
                )));
            }
            next = next
                .checked_add(b.len())
                .ok_or_else(|| Error::InvalidArgument("decomposition length overflows".into()))?;
        }
        Ok(BlockDecomposition {
            blocks,
            total_length: next,
        })
    }
}

/// Splits `t_0 .. t_{n-1}` into one Thue-Morse word per set bit of `n`,
/// largest first.
pub fn decompose_prefix(n: u64) -> BlockDecomposition {
    let mut blocks = Vec::with_capacity(n.count_ones() as usize);
    let mut start = 0u64;
    for k in (0..64u32).rev().filter(|&k| n >> k & 1 == 1) {
        // start is a multiple of 2^k, and t_{2^k q + r} = t_q xor t_r
        blocks.push(Block {
            k,
            start,
            digit: tm_digit(start >> k),
        });
        start += 1 << k;
    }
    BlockDecomposition {
        blocks,
        total_length: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn morphism_examples() {
        assert_eq!(morphism_apply(&w("0")), w("01"));
        assert_eq!(morphism_apply(&w("")), w(""));
        assert_eq!(morphism_apply(&w("01")), w("0110"));
    }

    #[test]
    fn word_examples() {
        let l = Limits::default();
        assert_eq!(tm_word(3, 0, &l).unwrap().to_string(), "01101001");
        assert_eq!(tm_word(0, 1, &l).unwrap().to_string(), "1");
        assert_eq!(tm_word(4, 0, &l).unwrap().to_string(), "0110100110010110");
    }

    #[test]
    fn word_cap() {
        let l = Limits::default();
        assert!(tm_word(24, 0, &l).is_ok());
        assert!(matches!(tm_word(25, 0, &l), Err(Error::CapExceeded { .. })));
        assert!(matches!(tm_word(200, 1, &l), Err(Error::CapExceeded { .. })));
        assert!(matches!(
            tm_prefix((1 << 24) + 1, &l),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn digit_examples() {
        assert_eq!(tm_digit(0), 0);
        assert_eq!(tm_digit(5), 0);
        let t = "0110100110010110";
        for (i, c) in t.chars().enumerate() {
            assert_eq!(tm_digit(i as u64), (c == '1') as u8);
        }
    }

    #[test]
    fn digit_recurrences() {
        for i in 0..1u64 << 16 {
            assert_eq!(tm_digit(2 * i), tm_digit(i));
            assert_eq!(tm_digit(2 * i + 1), 1 - tm_digit(i));
        }
    }

    #[test]
    fn prefix_examples() {
        let l = Limits::default();
        assert_eq!(tm_prefix(0, &l).unwrap().to_string(), "");
        assert_eq!(tm_prefix(6, &l).unwrap().to_string(), "011010");
        assert_eq!(tm_prefix(8, &l).unwrap(), tm_word(3, 0, &l).unwrap());
    }

    #[test]
    fn packed_prefix_matches_digits() {
        let l = Limits::default();
        let p = tm_prefix(1000, &l).unwrap();
        for i in 0..1000 {
            assert_eq!(p.bit(i), tm_digit(i as u64));
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&w("01101001")), w("10010110"));
        assert_eq!(complement(&w("")), w(""));
        let l = Limits::default();
        for n in 0..=12 {
            assert_eq!(
                complement(&tm_word(n, 0, &l).unwrap()),
                tm_word(n, 1, &l).unwrap()
            );
        }
    }

    #[test]
    fn odd_ones_examples() {
        assert!(ends_in_odd_ones(1));
        assert_eq!(tm_digit(1), tm_digit(2));
        assert!(!ends_in_odd_ones(0));
        assert!(!ends_in_odd_ones(3));
        assert!(ends_in_odd_ones(0b10111));
    }

    #[test]
    fn eq_count_small() {
        assert_eq!(eq_count(1), BigUint::from(0u32));
        assert_eq!(eq_count(2), BigUint::from(1u32));
        assert_eq!(eq_count(3), BigUint::from(2u32));
        assert_eq!(eq_count(4), BigUint::from(5u32));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_prefix(6);
        assert_eq!(
            d.blocks(),
            &[
                Block { k: 2, start: 0, digit: 0 },
                Block { k: 1, start: 4, digit: 1 },
            ]
        );
        assert_eq!(
            decompose_prefix(1).blocks(),
            &[Block { k: 0, start: 0, digit: 0 }]
        );
        assert_eq!(
            decompose_prefix(8).blocks(),
            &[Block { k: 3, start: 0, digit: 0 }]
        );
        assert_eq!(
            d.render(&Limits::default()).unwrap().to_string(),
            "011010"
        );
    }

    #[test]
    fn decomposition_json() {
        let d = decompose_prefix(6);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"[{"k":2,"start":0,"digit":0},{"k":1,"start":4,"digit":1}]"#
        );
        let back: BlockDecomposition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<BlockDecomposition>(
            r#"[{"k":2,"start":1,"digit":0}]"#
        )
        .is_err());
    }

    #[test]
    fn bitword_text_round_trip() {
        let s = "0110100110010110100101100110100110010110";
        let word = w(s);
        assert_eq!(word.to_string(), s);
        assert_eq!(serde_json::to_string(&word).unwrap(), format!("\"{s}\""));
        assert!("012".parse::<BitWord>().is_err());
        assert_eq!(word.get(word.len()), None);
    }

    #[test]
    fn concat_unaligned() {
        let a = w("011");
        let b = w("1001");
        assert_eq!(a.concat(&b), w("0111001"));
        let big = tm_word(7, 0, &Limits::default()).unwrap();
        assert_eq!(a.concat(&big).slice(3, 128), big);
    }
}
