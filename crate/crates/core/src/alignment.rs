//! Common subsequences as explicit position matchings.
//!
//! An [`Alignment`] stores its pairs run-length encoded: a run `(i, j, len)`
//! stands for the pairs `(i + r, j + r)` for `0 <= r < len`. Constructions
//! copy whole blocks, so runs are long and the encoding stays small.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{BitWord, SymbolSource};

/// A diagonal run of matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(u64, u64, u64)", into = "(u64, u64, u64)")]
pub struct Run {
    pub i: u64,
    pub j: u64,
    pub len: u64,
}

impl From<(u64, u64, u64)> for Run {
    fn from((i, j, len): (u64, u64, u64)) -> Self {
        Run { i, j, len }
    }
}

impl From<Run> for (u64, u64, u64) {
    fn from(r: Run) -> Self {
        (r.i, r.j, r.len)
    }
}

impl Run {
    fn extends(&self, i: u64, j: u64) -> bool {
        self.i.checked_add(self.len) == Some(i) && self.j.checked_add(self.len) == Some(j)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    runs: Vec<Run>,
    len: u64,
}

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alignment from runs as given; adjacent diagonal runs are
    /// merged and empty runs are dropped. No validity check is made here.
    pub fn from_runs(runs: impl IntoIterator<Item = Run>) -> Self {
        let mut a = Alignment::new();
        runs.into_iter().for_each(|r| a.push_run(r));
        a
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut a = Alignment::new();
        pairs.into_iter().for_each(|(i, j)| a.push_pair(i, j));
        a
    }

    /// A single run of `len` matches starting at `(i, j)`.
    pub fn diagonal(i: u64, j: u64, len: u64) -> Self {
        Self::from_runs([Run { i, j, len }])
    }

    pub fn push_pair(&mut self, i: u64, j: u64) {
        self.push_run(Run { i, j, len: 1 });
    }

    pub fn push_run(&mut self, run: Run) {
        if run.len == 0 {
            return;
        }
        self.len += run.len;
        match self.runs.last_mut() {
            Some(last) if last.extends(run.i, run.j) => last.len += run.len,
            _ => self.runs.push(run),
        }
    }

    /// Number of matched positions.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Lazily expanded `(i, j)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.runs
            .iter()
            .flat_map(|r| (0..r.len).map(move |d| (r.i + d, r.j + d)))
    }

    pub fn first_pair(&self) -> Option<(u64, u64)> {
        self.runs.first().map(|r| (r.i, r.j))
    }

    pub fn last_pair(&self) -> Option<(u64, u64)> {
        self.runs
            .last()
            .map(|r| (r.i + r.len - 1, r.j + r.len - 1))
    }

    pub fn to_record(&self, x_len: u64, y_len: u64) -> AlignmentRecord {
        AlignmentRecord {
            x_len,
            y_len,
            runs: self.runs.clone(),
        }
    }
}

/// Serialized alignment: `{"x_len": .., "y_len": .., "runs": [[i, j, run], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentRecord {
    pub x_len: u64,
    pub y_len: u64,
    pub runs: Vec<Run>,
}

impl AlignmentRecord {
    pub fn alignment(&self) -> Alignment {
        Alignment::from_runs(self.runs.iter().copied())
    }
}

/// The first condition an alignment violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { i: u64, j: u64, x_len: u64, y_len: u64 },
    NotIncreasing { prev: (u64, u64), next: (u64, u64) },
    Mismatch { i: u64, j: u64, x_symbol: u8, y_symbol: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { i, j, x_len, y_len } => write!(
                f,
                "pair ({i}, {j}) out of range for words of lengths {x_len} and {y_len}"
            ),
            Violation::NotIncreasing { prev, next } => write!(
                f,
                "pair {next:?} does not strictly follow {prev:?} in both coordinates"
            ),
            Violation::Mismatch {
                i,
                j,
                x_symbol,
                y_symbol,
            } => write!(f, "x[{i}] = {x_symbol} but y[{j}] = {y_symbol}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Checks that `a` is a common subsequence of `x` and `y`: every index in
/// range, strictly increasing in both coordinates, equal symbols at every
/// pair. Works run by run, so the words may be virtual
/// ([`crate::word::ThueMorseSource`]).
pub fn verify<X, Y>(a: &Alignment, x: &X, y: &Y) -> Result<(), Violation>
where
    X: SymbolSource + ?Sized,
    Y: SymbolSource + ?Sized,
{
    let (x_len, y_len) = (x.symbol_count(), y.symbol_count());
    let mut prev: Option<(u64, u64)> = None;
    for run in a.runs() {
        if let Some(p) = prev {
            if run.i <= p.0 || run.j <= p.1 {
                return Err(Violation::NotIncreasing {
                    prev: p,
                    next: (run.i, run.j),
                });
            }
        }
        let x_end = run.i.checked_add(run.len);
        let y_end = run.j.checked_add(run.len);
        if !x_end.is_some_and(|e| e <= x_len) || !y_end.is_some_and(|e| e <= y_len) {
            // report the first out-of-range pair of the run
            let d = x_len
                .saturating_sub(run.i)
                .min(y_len.saturating_sub(run.j))
                .min(run.len.saturating_sub(1));
            return Err(Violation::OutOfRange {
                i: run.i + d,
                j: run.j + d,
                x_len,
                y_len,
            });
        }
        for d in 0..run.len {
            let (xs, ys) = (x.symbol(run.i + d), y.symbol(run.j + d));
            if xs != ys {
                return Err(Violation::Mismatch {
                    i: run.i + d,
                    j: run.j + d,
                    x_symbol: xs,
                    y_symbol: ys,
                });
            }
        }
        prev = Some((run.i + run.len - 1, run.j + run.len - 1));
    }
    Ok(())
}

/// Translates every pair by `(dx, dy)`.
pub fn shift(a: &Alignment, dx: i64, dy: i64) -> Result<Alignment> {
    let move_by = |v: u64, d: i64| -> Result<u64> {
        let moved = v as i128 + d as i128;
        u64::try_from(moved).map_err(|_| Error::NegativeIndex { index: moved })
    };
    let runs = a
        .runs()
        .iter()
        .map(|r| {
            Ok(Run {
                i: move_by(r.i, dx)?,
                j: move_by(r.j, dy)?,
                len: r.len,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Alignment::from_runs(runs))
}

/// Concatenates alignments that already occupy increasing, disjoint
/// coordinate ranges in both words.
pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Alignment>) -> Result<Alignment> {
    let mut out = Alignment::new();
    for (part_index, part) in parts.into_iter().enumerate() {
        if let (Some(last), Some(first)) = (out.last_pair(), part.first_pair()) {
            if first.0 <= last.0 || first.1 <= last.1 {
                return Err(Error::Overlap {
                    part: part_index,
                    i: first.0,
                    j: first.1,
                });
            }
        }
        part.runs().iter().for_each(|&r| out.push_run(r));
    }
    Ok(out)
}

/// The subsequence of `x` selected by the first coordinates of `a`.
pub fn matched_string(a: &Alignment, x: &BitWord) -> Result<BitWord> {
    let mut out = BitWord::with_capacity(a.len() as usize);
    for run in a.runs() {
        let end = run.i.saturating_add(run.len);
        if end > x.len() as u64 {
            return Err(Error::IndexOutOfRange {
                index: end - 1,
                len: x.len() as u64,
            });
        }
        (run.i..end).for_each(|i| out.push(x.bit(i as usize)));
    }
    Ok(out)
}

/// The alignment to use once both words are complemented. Per-position
/// equality survives complementing both sides, so the pairs are unchanged.
pub fn complement_alignment(a: &Alignment) -> Alignment {
    a.clone()
}

/// Exchanges the roles of the two words: `(i, j)` becomes `(j, i)`. If `a`
/// is valid for `(x, y)` the result is valid for `(y, x)`.
pub fn transpose(a: &Alignment) -> Alignment {
    Alignment::from_runs(a.runs().iter().map(|r| Run {
        i: r.j,
        j: r.i,
        len: r.len,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::word::{tm_word, ThueMorseSource};

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn cs1() -> Alignment {
        Alignment::from_pairs([(0, 2), (1, 3)])
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify(&cs1(), &w("0110"), &w("1001")), Ok(()));
        assert_eq!(verify(&Alignment::new(), &w("0110"), &w("1001")), Ok(()));
        assert_eq!(verify(&Alignment::new(), &w(""), &w("")), Ok(()));
        assert_eq!(
            verify(&Alignment::from_pairs([(0, 0)]), &w("0110"), &w("1001")),
            Err(Violation::Mismatch {
                i: 0,
                j: 0,
                x_symbol: 0,
                y_symbol: 1
            })
        );
    }

    #[test]
    fn verify_rejects_structure() {
        let x = w("0000");
        let y = w("0000");
        let out_of_range = Alignment::from_pairs([(0, 0), (4, 1)]);
        assert!(matches!(
            verify(&out_of_range, &x, &y),
            Err(Violation::OutOfRange { i: 4, j: 1, .. })
        ));
        let long_run = Alignment::diagonal(2, 0, 3);
        assert!(matches!(
            verify(&long_run, &x, &y),
            Err(Violation::OutOfRange { i: 4, j: 2, .. })
        ));
        let repeated_j = Alignment::from_pairs([(0, 1), (1, 1)]);
        assert!(matches!(
            verify(&repeated_j, &x, &y),
            Err(Violation::NotIncreasing { .. })
        ));
        let decreasing = Alignment::from_pairs([(2, 2), (1, 3)]);
        assert!(verify(&decreasing, &x, &y).is_err());
    }

    #[test]
    fn verify_virtual_words() {
        let x = ThueMorseSource::word(2, 0);
        let y = ThueMorseSource::word(2, 1);
        assert_eq!(verify(&cs1(), &x, &y), Ok(()));
        assert!(verify(&cs1(), &y, &y).is_err());
    }

    #[test]
    fn shift_examples() {
        let s = shift(&cs1(), 4, 4).unwrap();
        assert_eq!(s.pairs().collect::<Vec<_>>(), vec![(4, 6), (5, 7)]);
        assert!(shift(&Alignment::new(), 3, 9).unwrap().is_empty());
        assert_eq!(shift(&s, -4, -4).unwrap(), cs1());
        assert!(matches!(
            shift(&cs1(), -1, 0),
            Err(Error::NegativeIndex { index: -1 })
        ));
    }

    #[test]
    fn shift_then_verify_against_offset_blocks() {
        // mu^4(0) = 0110 1001 1001 0110, mu^4(1) = 1001 0110 0110 1001:
        // block 3 of X is mu^2(0), block 3 of Y is mu^2(1)
        let l = Limits::default();
        let x = tm_word(4, 0, &l).unwrap();
        let y = tm_word(4, 1, &l).unwrap();
        let placed = shift(&cs1(), 12, 12).unwrap();
        assert_eq!(verify(&placed, &x, &y), Ok(()));
    }

    #[test]
    fn concat_examples() {
        assert!(concat([]).unwrap().is_empty());
        // mu^3(0) = 0110 1001 = mu^2(0) mu^2(1); mu^3(1) = mu^2(1) mu^2(0)
        let first = cs1();
        let second = shift(&complement_alignment(&cs1()), 4, 4).unwrap();
        let both = concat([&first, &second]).unwrap();
        assert_eq!(both.len(), 4);
        let l = Limits::default();
        assert_eq!(
            verify(&both, &tm_word(3, 0, &l).unwrap(), &tm_word(3, 1, &l).unwrap()),
            Ok(())
        );
        assert!(matches!(
            concat([&second, &first]),
            Err(Error::Overlap { part: 1, .. })
        ));
    }

    #[test]
    fn concat_merges_diagonals() {
        let a = Alignment::diagonal(0, 4, 4);
        let b = Alignment::diagonal(4, 8, 4);
        let c = concat([&a, &b]).unwrap();
        assert_eq!(c.runs(), &[Run { i: 0, j: 4, len: 8 }]);
    }

    #[test]
    fn matched_string_examples() {
        assert_eq!(matched_string(&cs1(), &w("0110")).unwrap(), w("01"));
        assert_eq!(matched_string(&Alignment::new(), &w("0110")).unwrap(), w(""));
        assert!(matched_string(&Alignment::diagonal(3, 0, 2), &w("0110")).is_err());
    }

    #[test]
    fn complement_examples() {
        let c = complement_alignment(&cs1());
        assert_eq!(verify(&c, &w("1001"), &w("0110")), Ok(()));
        assert!(complement_alignment(&Alignment::new()).is_empty());
    }

    #[test]
    fn transpose_swaps_roles() {
        let t = transpose(&cs1());
        assert_eq!(t.pairs().collect::<Vec<_>>(), vec![(2, 0), (3, 1)]);
        assert_eq!(verify(&t, &w("1001"), &w("0110")), Ok(()));
        assert_eq!(transpose(&t), cs1());
    }

    #[test]
    fn record_json_shape() {
        let rec = cs1().to_record(4, 4);
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(json, r#"{"x_len":4,"y_len":4,"runs":[[0,2,2]]}"#);
        let back: AlignmentRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.alignment(), cs1());
    }
}
