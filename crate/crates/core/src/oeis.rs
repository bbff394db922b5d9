//! OEIS b-files for the two LCS sequences.
//!
//! A b-file is one `index value` pair per line, 1-indexed, no header.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lcs::{a_of, b_sequence, Algorithm};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    /// `a(n)`: LCS of `mu^n(0)` and `mu^n(1)`.
    A297618,
    /// `b(n)`: LCS of `t_n` and its complement.
    A320847,
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sequence::A297618 => "A297618",
            Sequence::A320847 => "A320847",
        })
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A297618" => Ok(Sequence::A297618),
            "A320847" => Ok(Sequence::A320847),
            _ => Err(Error::InvalidArgument(format!("unsupported sequence {s:?}"))),
        }
    }
}

/// Terms `(n, value)` for `n = 1..`, plus the error that ended the export
/// early, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Export {
    pub terms: Vec<(u64, u64)>,
    pub stopped: Option<Error>,
}

impl Export {
    pub fn to_bfile(&self) -> String {
        format_bfile(&self.terms)
    }
}

/// Computes terms `1..=max` of `seq`, stopping at the first index the
/// budget or materialization cap does not allow.
pub fn export(seq: Sequence, max: u64, algorithm: Algorithm, limits: &Limits) -> Export {
    match seq {
        Sequence::A297618 => {
            let mut terms = Vec::new();
            for n in 1..=max {
                let n32 = u32::try_from(n).unwrap_or(u32::MAX);
                match a_of(n32, algorithm, limits) {
                    Ok(r) => terms.push((n, r.length)),
                    Err(e) => {
                        return Export {
                            terms,
                            stopped: Some(e),
                        }
                    }
                }
            }
            Export {
                terms,
                stopped: None,
            }
        }
        Sequence::A320847 => {
            // the whole prefix table is one computation; shrink it to fit
            let (reach, stopped) = match b_sequence_budget_check(max, algorithm, limits) {
                Ok(()) => (max, None),
                Err(e) => (largest_prefix_within(max, algorithm, limits), Some(e)),
            };
            match b_sequence(reach, algorithm, limits) {
                Ok(values) => Export {
                    terms: (1..=reach).map(|n| (n, values[n as usize])).collect(),
                    stopped,
                },
                Err(e) => Export {
                    terms: Vec::new(),
                    stopped: Some(e),
                },
            }
        }
    }
}

fn b_sequence_budget_check(n: u64, algorithm: Algorithm, limits: &Limits) -> Result<()> {
    let cells = n as u128 * n as u128;
    let budget = match algorithm {
        Algorithm::QuadraticDp => limits.quadratic_budget,
        _ => limits.bit_parallel_budget,
    };
    if cells > budget {
        return Err(Error::BudgetExceeded { cells, budget });
    }
    if n > limits.max_symbols {
        return Err(Error::CapExceeded {
            what: format!("prefix of length {n}"),
            requested: n.to_string(),
            limit: limits.max_symbols,
        });
    }
    Ok(())
}

fn largest_prefix_within(max: u64, algorithm: Algorithm, limits: &Limits) -> u64 {
    let (mut lo, mut hi) = (0u64, max);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if b_sequence_budget_check(mid, algorithm, limits).is_ok() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

pub fn format_bfile(terms: &[(u64, u64)]) -> String {
    terms.iter().map(|(n, v)| format!("{n} {v}\n")).collect()
}

/// Parses b-file text, rejecting anything but `index value` lines with
/// consecutive indices starting at 1.
pub fn parse_bfile(text: &str) -> Result<Vec<(u64, u64)>> {
    let mut terms = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let bad = || Error::InvalidArgument(format!("malformed b-file line {}: {line:?}", line_no + 1));
        let (n, v) = line.split_once(' ').ok_or_else(bad)?;
        let n: u64 = n.parse().map_err(|_| bad())?;
        let v: u64 = v.parse().map_err(|_| bad())?;
        if n != line_no as u64 + 1 {
            return Err(bad());
        }
        terms.push((n, v));
    }
    Ok(terms)
}
