//! The recursive common subsequence `CS(k)` of `mu^(2^k)(0)` and
//! `mu^(2^k)(1)`, and its extensions to every word exponent and every
//! prefix length.
//!
//! For `k >= 1`, with `m = 2^(k-1)`, both words split into `2^m` blocks of
//! `mu^m(.)`. Block `x_i` is matched against `y_{i+1}` for `i < 2^m - 1`:
//! the whole block when the two are equal (always for even `i`), otherwise
//! a copy of `CS(k-1)`. The last block of `X` and the first of `Y` stay
//! unmatched.
//!
//! A block pair `(mu^m(1), mu^m(0))` reuses the alignment built for
//! `(mu^m(0), mu^m(1))` with its coordinates transposed.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alignment::{transpose, Alignment, Run};
use crate::analysis::cs_length;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::word::{decompose_prefix, ends_in_odd_ones, tm_digit};
use crate::BigCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "kebab-case")]
pub enum ConstructionKind {
    /// `CS(k)` on `mu^(2^k)(0)`, `mu^(2^k)(1)`.
    Pow2Word(u32),
    /// Common subsequence of `mu^n(0)`, `mu^n(1)`.
    Word(u64),
    /// Common subsequence of `t_n` and its complement.
    Prefix(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub kind: ConstructionKind,
    pub length: BigCount,
    /// Present iff materialization was requested.
    pub alignment: Option<Alignment>,
}

impl ConstructionResult {
    /// Length of the two words being aligned.
    pub fn word_len(&self) -> BigCount {
        match self.kind {
            ConstructionKind::Pow2Word(k) => BigUint::one() << (1u64 << k),
            ConstructionKind::Word(n) => BigUint::one() << n,
            ConstructionKind::Prefix(n) => BigUint::from(n),
        }
    }
}

/// Whether `x_i == y_{i+1}` for block index `i` of the `CS(k+1)` split.
///
/// Even `i` always match. For odd `i = 2h + 1`, `x_i = y_{i+1}` iff
/// `t_h = t_{h+1}`, i.e. iff `h` ends in an odd run of ones.
pub fn blocks_equal(i: u64) -> bool {
    i % 2 == 0 || ends_in_odd_ones(i / 2)
}

fn check_pow2_materializable(k: u32, limits: &Limits) -> Result<()> {
    if k > limits.max_materialized_pow2 {
        return Err(Error::ExponentTooLarge {
            what: "materialized CS(k)",
            k,
            max: limits.max_materialized_pow2,
        });
    }
    Ok(())
}

fn cs_alignment(k: u32) -> Alignment {
    if k == 0 {
        // 0 of mu(0) = 01 against the 0 of mu(1) = 10
        return Alignment::from_pairs([(0, 1)]);
    }
    let m = 1u64 << (k - 1);
    let block = 1u64 << m;
    let inner = cs_alignment(k - 1);
    let swapped = transpose(&inner);
    let mut out = Alignment::new();
    for i in 0..block - 1 {
        let (dx, dy) = (i * block, (i + 1) * block);
        if blocks_equal(i) {
            out.push_run(Run {
                i: dx,
                j: dy,
                len: block,
            });
        } else {
            // x_i = mu^m(t_i); the pair is (mu^m(1), mu^m(0)) when t_i = 1
            let piece = if tm_digit(i) == 0 { &inner } else { &swapped };
            piece.runs().iter().for_each(|r| {
                out.push_run(Run {
                    i: r.i + dx,
                    j: r.j + dy,
                    len: r.len,
                })
            });
        }
    }
    out
}

/// `CS(k)`; the alignment is built only when `materialize` is set.
pub fn construct_pow2(k: u32, materialize: bool, limits: &Limits) -> Result<ConstructionResult> {
    let alignment = if materialize {
        check_pow2_materializable(k, limits)?;
        Some(cs_alignment(k))
    } else {
        None
    };
    Ok(ConstructionResult {
        kind: ConstructionKind::Pow2Word(k),
        length: cs_length(k, limits)?,
        alignment,
    })
}

fn check_symbol_cap(what: &str, symbols_log2: Option<u64>, symbols: u64, limits: &Limits) -> Result<()> {
    let too_big = match symbols_log2 {
        Some(e) => e >= 64 || (1u64 << e) > limits.max_symbols,
        None => symbols > limits.max_symbols,
    };
    if too_big {
        return Err(Error::CapExceeded {
            what: what.to_string(),
            requested: match symbols_log2 {
                Some(e) => format!("2^{e}"),
                None => symbols.to_string(),
            },
            limit: limits.max_symbols,
        });
    }
    Ok(())
}

/// Alignment for `mu^n(0)` against `mu^n(1)`; `n = 0` gives the empty one.
fn word_alignment(n: u64, limits: &Limits) -> Result<Alignment> {
    if n == 0 {
        return Ok(Alignment::new());
    }
    let k = n.ilog2();
    check_pow2_materializable(k, limits)?;
    let cs = cs_alignment(k);
    if n == 1 << k {
        return Ok(cs);
    }
    let swapped = transpose(&cs);
    let block = 1u64 << (1u64 << k);
    let mut out = Alignment::new();
    for b in 0..1u64 << (n - (1 << k)) {
        // X block b is mu^(2^k)(t_b), Y block b its complement
        let piece = if tm_digit(b) == 0 { &cs } else { &swapped };
        let offset = b * block;
        piece.runs().iter().for_each(|r| {
            out.push_run(Run {
                i: r.i + offset,
                j: r.j + offset,
                len: r.len,
            })
        });
    }
    Ok(out)
}

/// Common subsequence of `mu^n(0)` and `mu^n(1)` built from copies of
/// `CS(floor(log2 n))`.
pub fn construct_word(n: u64, materialize: bool, limits: &Limits) -> Result<ConstructionResult> {
    let alignment = if materialize {
        check_symbol_cap(&format!("word mu^{n}"), Some(n), 0, limits)?;
        Some(word_alignment(n, limits)?)
    } else {
        None
    };
    Ok(ConstructionResult {
        kind: ConstructionKind::Word(n),
        length: construction_length_word(n, limits)?,
        alignment,
    })
}

/// Common subsequence of `t_n` and its complement, one word construction
/// per block of the binary decomposition of `n`.
pub fn construct_prefix(n: u64, materialize: bool, limits: &Limits) -> Result<ConstructionResult> {
    let alignment = if materialize {
        check_symbol_cap(&format!("prefix of length {n}"), None, n, limits)?;
        let mut out = Alignment::new();
        for block in decompose_prefix(n).blocks() {
            let word = word_alignment(block.k as u64, limits)?;
            // complemented prefix has the complementary digit in every block
            let piece = if block.digit == 0 {
                word
            } else {
                transpose(&word)
            };
            piece.runs().iter().for_each(|r| {
                out.push_run(Run {
                    i: r.i + block.start,
                    j: r.j + block.start,
                    len: r.len,
                })
            });
        }
        Some(out)
    } else {
        None
    };
    Ok(ConstructionResult {
        kind: ConstructionKind::Prefix(n),
        length: construction_length_prefix(n, limits)?,
        alignment,
    })
}

/// `2^(n - 2^k) * |CS(k)|` with `k = floor(log2 n)`; `0` for `n = 0`.
pub fn construction_length_word(n: u64, limits: &Limits) -> Result<BigCount> {
    if n == 0 {
        return Ok(BigUint::zero());
    }
    let k = n.ilog2();
    Ok(cs_length(k, limits)? << (n - (1u64 << k)))
}

/// Sum of the word construction lengths over the blocks of `t_n`.
pub fn construction_length_prefix(n: u64, limits: &Limits) -> Result<BigCount> {
    (0..64u64)
        .filter(|&k| n >> k & 1 == 1)
        .try_fold(BigUint::zero(), |acc, k| {
            Ok(acc + construction_length_word(k, limits)?)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{complement_alignment, matched_string, verify};
    use crate::word::{complement, tm_prefix, tm_word, BitWord};

    fn l() -> Limits {
        Limits::default()
    }

    fn pairs(a: &Alignment) -> Vec<(u64, u64)> {
        a.pairs().collect()
    }

    #[test]
    fn cs0_and_cs1() {
        let r = construct_pow2(0, true, &l()).unwrap();
        assert_eq!(r.length, BigUint::from(1u32));
        assert_eq!(pairs(r.alignment.as_ref().unwrap()), vec![(0, 1)]);
        let r = construct_pow2(1, true, &l()).unwrap();
        assert_eq!(pairs(r.alignment.as_ref().unwrap()), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn cs2_matches_underlined_example() {
        let r = construct_pow2(2, true, &l()).unwrap();
        let a = r.alignment.unwrap();
        assert_eq!(r.length, BigUint::from(10u32));
        assert_eq!(a.len(), 10);
        let x = tm_word(4, 0, &l()).unwrap();
        let y = tm_word(4, 1, &l()).unwrap();
        assert_eq!(verify(&a, &x, &y), Ok(()));
        assert_eq!(
            matched_string(&a, &x).unwrap().to_string(),
            "0110011001"
        );
        // 0110 in block 0, the recursive 01 in block 1, all of block 2
        assert_eq!(
            pairs(&a),
            vec![
                (0, 4), (1, 5), (2, 6), (3, 7),
                (6, 8), (7, 9),
                (8, 12), (9, 13), (10, 14), (11, 15),
            ]
        );
    }

    #[test]
    fn cs4_length_and_validity() {
        let r = construct_pow2(4, true, &l()).unwrap();
        assert_eq!(r.length, BigUint::from(61370u32));
        let a = r.alignment.unwrap();
        assert_eq!(a.len(), 61370);
        let x = tm_word(16, 0, &l()).unwrap();
        let y = tm_word(16, 1, &l()).unwrap();
        assert_eq!(verify(&a, &x, &y), Ok(()));
    }

    #[test]
    fn last_x_block_and_first_y_block_unmatched() {
        for k in 1..=4u32 {
            let m = 1u64 << (k - 1);
            let block = 1u64 << m;
            let a = construct_pow2(k, true, &l()).unwrap().alignment.unwrap();
            assert!(a.pairs().all(|(i, j)| i < (block - 1) * block && j >= block));
        }
    }

    #[test]
    fn materialization_threshold() {
        assert!(matches!(
            construct_pow2(5, true, &l()),
            Err(Error::ExponentTooLarge { k: 5, max: 4, .. })
        ));
        let r = construct_pow2(5, false, &l()).unwrap();
        assert!(r.alignment.is_none());
        assert_eq!(r.length, (BigUint::one() << 32u32) - 91071806u32);
        assert!(matches!(
            construct_word(25, true, &l()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn word_examples() {
        let r = construct_word(3, true, &l()).unwrap();
        assert_eq!(r.length, BigUint::from(4u32));
        let a = r.alignment.unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(
            verify(&a, &tm_word(3, 0, &l()).unwrap(), &tm_word(3, 1, &l()).unwrap()),
            Ok(())
        );
        assert_eq!(construct_word(4, false, &l()).unwrap().length, BigUint::from(10u32));
        let zero = construct_word(0, true, &l()).unwrap();
        assert_eq!(zero.length, BigUint::zero());
        assert!(zero.alignment.unwrap().is_empty());
    }

    #[test]
    fn word_one_is_cs0() {
        let a = construct_word(1, true, &l()).unwrap().alignment.unwrap();
        assert_eq!(pairs(&a), vec![(0, 1)]);
    }

    #[test]
    fn prefix_examples() {
        let r = construct_prefix(6, true, &l()).unwrap();
        assert_eq!(r.length, BigUint::from(3u32));
        let x = tm_prefix(6, &l()).unwrap();
        let y = complement(&x);
        assert_eq!(verify(r.alignment.as_ref().unwrap(), &x, &y), Ok(()));

        let one = construct_prefix(1, true, &l()).unwrap();
        assert_eq!(one.length, BigUint::zero());

        let eight = construct_prefix(8, true, &l()).unwrap();
        assert_eq!(eight.length, BigUint::from(4u32));
        assert_eq!(
            eight.alignment,
            construct_word(3, true, &l()).unwrap().alignment
        );
    }

    #[test]
    fn swapped_blocks_accept_both_reuses() {
        // mu^2(1) = 1001 against mu^2(0) = 0110
        let cs = construct_pow2(1, true, &l()).unwrap().alignment.unwrap();
        let x: BitWord = "1001".parse().unwrap();
        let y: BitWord = "0110".parse().unwrap();
        assert_eq!(verify(&transpose(&cs), &x, &y), Ok(()));
        assert_eq!(verify(&complement_alignment(&cs), &x, &y), Ok(()));
    }

    #[test]
    fn length_only_examples() {
        assert_eq!(
            construction_length_word(16, &l()).unwrap(),
            BigUint::from(61370u32)
        );
        assert_eq!(construction_length_word(2, &l()).unwrap(), BigUint::from(2u32));
        for k in 0..=10u32 {
            assert_eq!(
                construction_length_prefix(1 << k, &l()).unwrap(),
                construction_length_word(k as u64, &l()).unwrap()
            );
        }
    }

    #[test]
    fn equal_block_rule_matches_block_contents() {
        // compare the arithmetic rule against the actual block digits
        for m in 1..=10u32 {
            for i in 0..(1u64 << m) - 1 {
                let x_digit = tm_digit(i);
                let y_digit = 1 - tm_digit(i + 1);
                assert_eq!(blocks_equal(i), x_digit == y_digit, "m = {m}, i = {i}");
            }
        }
    }
}
