//! Exact longest common subsequence of binary words.
//!
//! Three routes to the same number:
//!
//! * `QuadraticDp`: the textbook recurrence with a single rolling row.
//! * `BitParallel`: the Allison-Dix / Hyyro row encoding. After consuming
//!   `y[..j]`, bit `i` of `V` is zero exactly where the score
//!   `L(x[..=i], y[..j])` steps up, so `L(x[..i], y[..j])` is the number of
//!   zero bits below `i`. One machine word covers 64 cells.
//! * `LinearSpace`: Hirschberg's divide and conquer over `y`, recovering an
//!   optimal alignment. Its score rows come from the bit-parallel kernel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alignment::{Alignment, AlignmentRecord};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::word::{complement, tm_prefix, tm_word, BitWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    QuadraticDp,
    LinearSpace,
    BitParallel,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::QuadraticDp,
        Algorithm::LinearSpace,
        Algorithm::BitParallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::QuadraticDp => "quadratic-dp",
            Algorithm::LinearSpace => "linear-space",
            Algorithm::BitParallel => "bit-parallel",
        }
    }

    fn budget(self, limits: &Limits) -> u128 {
        match self {
            Algorithm::QuadraticDp => limits.quadratic_budget,
            Algorithm::LinearSpace | Algorithm::BitParallel => limits.bit_parallel_budget,
        }
    }

    fn check_budget(self, x_len: usize, y_len: usize, limits: &Limits) -> Result<()> {
        let cells = x_len as u128 * y_len as u128;
        let budget = self.budget(limits);
        if cells > budget {
            return Err(Error::BudgetExceeded { cells, budget });
        }
        Ok(())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsResult {
    pub length: u64,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<AlignmentRecord>,
}

/// LCS of `x` and `y`. Only [`Algorithm::LinearSpace`] returns an alignment.
pub fn lcs_length(x: &BitWord, y: &BitWord, algorithm: Algorithm, limits: &Limits) -> Result<LcsResult> {
    algorithm.check_budget(x.len(), y.len(), limits)?;
    let (xs, ys) = (x.symbols(), y.symbols());
    let (length, alignment) = match algorithm {
        Algorithm::QuadraticDp => (quadratic_lcs(&xs, &ys), None),
        Algorithm::BitParallel => (bit_parallel_lcs(&xs, &ys), None),
        Algorithm::LinearSpace => {
            let a = hirschberg(&xs, &ys, bit_parallel_row);
            (a.len(), Some(a.to_record(x.len() as u64, y.len() as u64)))
        }
    };
    Ok(LcsResult {
        length,
        algorithm,
        alignment,
    })
}

/// `a(n)`: LCS of `mu^n(0)` and `mu^n(1)`.
pub fn a_of(n: u32, algorithm: Algorithm, limits: &Limits) -> Result<LcsResult> {
    if n < 64 {
        let len = 1usize.checked_shl(n).unwrap_or(usize::MAX);
        algorithm.check_budget(len, len, limits)?;
    }
    let x = tm_word(n, 0, limits)?;
    let y = tm_word(n, 1, limits)?;
    lcs_length(&x, &y, algorithm, limits)
}

/// `b(n)`: LCS of `t_n` and its complement.
pub fn b_of(n: u64, algorithm: Algorithm, limits: &Limits) -> Result<LcsResult> {
    algorithm.check_budget(n as usize, n as usize, limits)?;
    let x = tm_prefix(n, limits)?;
    lcs_length(&x, &complement(&x), algorithm, limits)
}

/// `b(0), b(1), .., b(max_n)` from a single pass: `b(n)` is the diagonal
/// entry `L(t_n, complement(t_n))` of one table over `t_max_n`.
/// `LinearSpace` has no separate length path and uses the bit-parallel rows.
pub fn b_sequence(max_n: u64, algorithm: Algorithm, limits: &Limits) -> Result<Vec<u64>> {
    algorithm.check_budget(max_n as usize, max_n as usize, limits)?;
    let x = tm_prefix(max_n, limits)?;
    let (xs, ys) = (x.symbols(), complement(&x).symbols());
    Ok(match algorithm {
        Algorithm::QuadraticDp => quadratic_diagonal(&xs, &ys),
        Algorithm::BitParallel | Algorithm::LinearSpace => bit_parallel_diagonal(&xs, &ys),
    })
}

/// Classic DP, one rolling row over the shorter input.
pub fn quadratic_lcs(x: &[u8], y: &[u8]) -> u64 {
    let (outer, inner) = if x.len() < y.len() { (y, x) } else { (x, y) };
    let mut row = vec![0u32; inner.len() + 1];
    for &a in outer {
        let mut diag = 0u32;
        for (j, &b) in inner.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if a == b { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[inner.len()] as u64
}

/// `L(x[..i], y)` for every `i in 0..=|x|`, by the quadratic recurrence.
pub fn scalar_row(x: &[u8], y: &[u8]) -> Vec<u32> {
    let mut row = vec![0u32; x.len() + 1];
    for &b in y {
        let mut diag = 0u32;
        for (i, &a) in x.iter().enumerate() {
            let up = row[i + 1];
            row[i + 1] = if a == b { diag + 1 } else { up.max(row[i]) };
            diag = up;
        }
    }
    row
}

fn quadratic_diagonal(x: &[u8], y: &[u8]) -> Vec<u64> {
    let n = x.len().min(y.len());
    let mut out = Vec::with_capacity(n + 1);
    out.push(0);
    let mut row = vec![0u32; x.len() + 1];
    for (j, &b) in y.iter().take(n).enumerate() {
        let mut diag = 0u32;
        for (i, &a) in x.iter().enumerate() {
            let up = row[i + 1];
            row[i + 1] = if a == b { diag + 1 } else { up.max(row[i]) };
            diag = up;
        }
        out.push(row[j + 1] as u64);
    }
    out
}

/// Match masks for the two symbols, bit `i` set where `x[i]` equals it.
fn match_masks(x: &[u8]) -> [Vec<u64>; 2] {
    let words = x.len().div_ceil(64);
    let mut ones = vec![0u64; words];
    for (i, &s) in x.iter().enumerate() {
        if s == 1 {
            ones[i / 64] |= 1 << (i % 64);
        }
    }
    let mut zeros: Vec<u64> = ones.iter().map(|w| !w).collect();
    if x.len() % 64 != 0 {
        if let Some(last) = zeros.last_mut() {
            *last &= (1u64 << (x.len() % 64)) - 1;
        }
    }
    [zeros, ones]
}

/// Feeds one symbol of `y` into the row vector `v`.
#[inline]
fn advance(v: &mut [u64], mask: &[u64]) {
    let mut carry = false;
    for (vw, &m) in v.iter_mut().zip(mask) {
        let u = *vw & m;
        // v - u never borrows because u is a subset of v
        let rest = *vw & !m;
        let (sum, c1) = vw.overflowing_add(u);
        let (sum, c2) = sum.overflowing_add(carry as u64);
        carry = c1 || c2;
        *vw = sum | rest;
    }
}

fn run_rows(x: &[u8], y: &[u8]) -> Vec<u64> {
    let masks = match_masks(x);
    let mut v = vec![!0u64; x.len().div_ceil(64)];
    for &b in y {
        advance(&mut v, &masks[b as usize & 1]);
    }
    v
}

/// Number of zero bits among the first `len` bits of `v`.
fn zeros_below(v: &[u64], len: usize) -> u64 {
    let full = len / 64;
    let mut ones: u64 = v[..full].iter().map(|w| w.count_ones() as u64).sum();
    if len % 64 != 0 {
        ones += (v[full] & ((1u64 << (len % 64)) - 1)).count_ones() as u64;
    }
    len as u64 - ones
}

/// Bit-parallel LCS length.
pub fn bit_parallel_lcs(x: &[u8], y: &[u8]) -> u64 {
    if x.is_empty() || y.is_empty() {
        return 0;
    }
    zeros_below(&run_rows(x, y), x.len())
}

/// `L(x[..i], y)` for every `i in 0..=|x|`, via the bit-parallel kernel.
pub fn bit_parallel_row(x: &[u8], y: &[u8]) -> Vec<u32> {
    let v = run_rows(x, y);
    let mut row = Vec::with_capacity(x.len() + 1);
    let mut score = 0u32;
    row.push(0);
    for i in 0..x.len() {
        score += ((v[i / 64] >> (i % 64)) & 1 == 0) as u32;
        row.push(score);
    }
    row
}

fn bit_parallel_diagonal(x: &[u8], y: &[u8]) -> Vec<u64> {
    let n = x.len().min(y.len());
    let masks = match_masks(x);
    let mut v = vec![!0u64; x.len().div_ceil(64)];
    let mut out = Vec::with_capacity(n + 1);
    out.push(0);
    for (j, &b) in y.iter().take(n).enumerate() {
        advance(&mut v, &masks[b as usize & 1]);
        out.push(zeros_below(&v, j + 1));
    }
    out
}

/// Hirschberg recovery of one optimal alignment. `row(x, y)` must return
/// `L(x[..i], y)` for all `i`. Splits `y` in half and picks the smallest
/// `x` split point achieving the optimum, so the output is deterministic.
pub fn hirschberg<F>(x: &[u8], y: &[u8], row: F) -> Alignment
where
    F: Fn(&[u8], &[u8]) -> Vec<u32> + Copy,
{
    let mut out = Alignment::new();
    hirschberg_into(x, y, 0, 0, row, &mut out);
    out
}

fn hirschberg_into<F>(x: &[u8], y: &[u8], x0: u64, y0: u64, row: F, out: &mut Alignment)
where
    F: Fn(&[u8], &[u8]) -> Vec<u32> + Copy,
{
    if x.is_empty() || y.is_empty() {
        return;
    }
    if y.len() == 1 {
        if let Some(i) = x.iter().position(|&a| a == y[0]) {
            out.push_pair(x0 + i as u64, y0);
        }
        return;
    }
    let mid = y.len() / 2;
    let forward = row(x, &y[..mid]);
    let x_rev: Vec<u8> = x.iter().rev().copied().collect();
    let y_rev: Vec<u8> = y[mid..].iter().rev().copied().collect();
    let backward = row(&x_rev, &y_rev);
    let n = x.len();
    let split = (0..=n)
        .max_by_key(|&i| (forward[i] + backward[n - i], std::cmp::Reverse(i)))
        .expect("non-empty range");
    hirschberg_into(&x[..split], &y[..mid], x0, y0, row, out);
    hirschberg_into(&x[split..], &y[mid..], x0 + split as u64, y0 + mid as u64, row, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::verify;

    fn sym(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn small_known_values() {
        let cases = [
            ("", "0101", 0),
            ("0110", "1001", 2),
            ("0000", "0000", 4),
            ("0000", "1111", 0),
            ("0110100110010110", "1001011001101001", 12),
            ("01", "10", 1),
        ];
        for (x, y, want) in cases {
            let (x, y) = (sym(x), sym(y));
            assert_eq!(quadratic_lcs(&x, &y), want);
            assert_eq!(bit_parallel_lcs(&x, &y), want);
            assert_eq!(hirschberg(&x, &y, bit_parallel_row).len(), want);
            assert_eq!(hirschberg(&x, &y, scalar_row).len(), want);
        }
    }

    #[test]
    fn rows_agree_across_word_boundaries() {
        let x: Vec<u8> = (0..200u32).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
        let y: Vec<u8> = (0..150u32).map(|i| ((i * i + 1) % 3 == 0) as u8).collect();
        assert_eq!(bit_parallel_row(&x, &y), scalar_row(&x, &y));
        assert_eq!(bit_parallel_row(&x, &[]), vec![0; 201]);
    }

    #[test]
    fn diagonals_agree() {
        let l = Limits::default();
        let x = tm_prefix(300, &l).unwrap();
        let (xs, ys) = (x.symbols(), complement(&x).symbols());
        let q = quadratic_diagonal(&xs, &ys);
        assert_eq!(q, bit_parallel_diagonal(&xs, &ys));
        for n in [0usize, 1, 2, 3, 6, 64, 65, 299] {
            assert_eq!(q[n], quadratic_lcs(&xs[..n], &ys[..n]), "n = {n}");
        }
    }

    #[test]
    fn recovered_alignment_is_valid() {
        let l = Limits::default();
        let x = tm_word(6, 0, &l).unwrap();
        let y = tm_word(6, 1, &l).unwrap();
        let r = lcs_length(&x, &y, Algorithm::LinearSpace, &l).unwrap();
        assert_eq!(r.length, 54);
        let a = r.alignment.unwrap().alignment();
        assert_eq!(a.len(), 54);
        assert_eq!(verify(&a, &x, &y), Ok(()));
    }

    #[test]
    fn a_and_b_examples() {
        let l = Limits::default();
        for alg in Algorithm::ALL {
            assert_eq!(a_of(1, alg, &l).unwrap().length, 1);
            assert_eq!(a_of(3, alg, &l).unwrap().length, 5);
            assert_eq!(a_of(5, alg, &l).unwrap().length, 26);
            assert_eq!(b_of(4, alg, &l).unwrap().length, 2);
            assert_eq!(b_of(1, alg, &l).unwrap().length, 0);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let l = Limits::default();
        assert!(matches!(
            a_of(16, Algorithm::QuadraticDp, &l),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            a_of(18, Algorithm::BitParallel, &l),
            Err(Error::BudgetExceeded { .. })
        ));
        let tight = Limits {
            quadratic_budget: 15,
            ..l
        };
        assert!(matches!(
            b_of(4, Algorithm::QuadraticDp, &tight),
            Err(Error::BudgetExceeded { cells: 16, budget: 15 })
        ));
        assert!(b_sequence(4, Algorithm::QuadraticDp, &tight).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
            assert_eq!(
                serde_json::to_string(&alg).unwrap(),
                format!("\"{}\"", alg.name())
            );
        }
        assert!("fast".parse::<Algorithm>().is_err());
    }

    #[test]
    fn result_json() {
        let r = LcsResult {
            length: 54,
            algorithm: Algorithm::BitParallel,
            alignment: None,
        };
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"length":54,"algorithm":"bit-parallel"}"#);
        assert_eq!(serde_json::from_str::<LcsResult>(&json).unwrap(), r);
    }
}
