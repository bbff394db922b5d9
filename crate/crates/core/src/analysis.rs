//! Exact omission counts and the bound checks built on them.
//!
//! `f(k) = 2^(2^k) - |CS(k)|` is evaluated through its exact recurrence
//!
//! ```text
//! f(0) = 1, f(1) = 2,
//! f(k+1) = 2^(2^k) + (2^(2^k - 1) - 1 - eq(2^k - 1)) * f(k)   (k >= 1)
//! ```
//!
//! Every inequality is checked in integer or rational arithmetic. Powers of
//! `log2(3)` in the exponent are cleared by multiplying through by `3^k`.

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::construction::{construction_length_prefix, construction_length_word};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::word::eq_count;
use crate::BigCount;

static OMISSIONS: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

/// `2^(2^k)`, the length of `mu^(2^k)(0)`.
pub fn word_len_pow2(k: u32) -> BigCount {
    BigUint::one() << (1u64 << k)
}

/// Multiplier of `f(k)` in the exact recurrence for `f(k+1)`, `k >= 1`.
pub fn recurrence_coefficient(k: u32) -> BigCount {
    let odd_blocks = (BigUint::one() << ((1u64 << k) - 1)) - 1u32;
    odd_blocks - eq_count((1u64 << k) - 1)
}

/// Exact `f(k)`. Values are memoized process-wide; the table is filled
/// under a lock, so concurrent callers observe a single computation.
pub fn f_exact(k: u32, limits: &Limits) -> Result<BigCount> {
    if k > limits.max_f_exponent {
        return Err(Error::ExponentTooLarge {
            what: "f(k)",
            k,
            max: limits.max_f_exponent,
        });
    }
    let mut memo = OMISSIONS.lock().unwrap_or_else(|e| e.into_inner());
    if memo.is_empty() {
        memo.push(BigUint::from(1u32));
        memo.push(BigUint::from(2u32));
    }
    while memo.len() <= k as usize {
        let prev = (memo.len() - 1) as u32;
        let next = word_len_pow2(prev) + recurrence_coefficient(prev) * &memo[prev as usize];
        memo.push(next);
    }
    Ok(memo[k as usize].clone())
}

/// `|CS(k)| = 2^(2^k) - f(k)`.
pub fn cs_length(k: u32, limits: &Limits) -> Result<BigCount> {
    Ok(word_len_pow2(k) - f_exact(k, limits)?)
}

/// `2^(2^k - k + 1) - 2`.
pub fn f_upper_lemma42(k: u32) -> BigCount {
    (BigUint::one() << ((1u64 << k) - k as u64 + 1)) - 2u32
}

/// `f(k) <= 2^(2^k - k + 1) - 2`.
pub fn check_lemma42(k: u32, limits: &Limits) -> Result<bool> {
    Ok(f_exact(k, limits)? <= f_upper_lemma42(k))
}

/// `f(k+1) <= 2^(2^k) + (2^(2^k - 1) - 1) f(k)`.
pub fn check_lemma41(k: u32, limits: &Limits) -> Result<bool> {
    let odd_blocks = (BigUint::one() << ((1u64 << k) - 1)) - 1u32;
    let bound = word_len_pow2(k) + odd_blocks * f_exact(k, limits)?;
    Ok(f_exact(k + 1, limits)? <= bound)
}

/// `|CS(k)| >= 2^(2^k) (1 - 1/2^(k-1))`, multiplied through by `2^k`:
/// `2^k |CS(k)| >= 2^(2^k) (2^k - 2)`.
pub fn check_thm43(k: u32, limits: &Limits) -> Result<bool> {
    let lhs = BigInt::from(cs_length(k, limits)? << k);
    let rhs = BigInt::from(word_len_pow2(k)) * (BigInt::from(BigUint::one() << k) - 2);
    Ok(lhs >= rhs)
}

/// `f(k+1) <= 2^(2^k) + 2^(2^k - w) f(k)` with `w = log2 3`, as
/// `3 f(k+1) <= 3 * 2^(2^k) + 2 * 2^(2^k - 1) f(k)`. Stated for `k >= 1`.
pub fn check_cor64(k: u32, limits: &Limits) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the strengthened recurrence bound is stated for k >= 1".into(),
        ));
    }
    let half = BigUint::one() << ((1u64 << k) - 1);
    let lhs = f_exact(k + 1, limits)? * 3u32;
    let rhs = word_len_pow2(k) * 3u32 + half * 2u32 * f_exact(k, limits)?;
    Ok(lhs <= rhs)
}

/// `f(k) <= 2^(2^k - wk + 3) - 6`, as `3^k (f(k) + 6) <= 2^(2^k + 3)`.
pub fn check_thm6(k: u32, limits: &Limits) -> Result<bool> {
    let lhs = pow3(k) * (f_exact(k, limits)? + 6u32);
    Ok(lhs <= BigUint::one() << ((1u64 << k) + 3))
}

/// `sum_{j=1..s} 2^j / j <= 2^(s+2) / s - 1`, in exact rationals.
pub fn check_sum_lemma(s: u32) -> Result<bool> {
    if s == 0 {
        return Err(Error::InvalidArgument("sum lemma needs s >= 1".into()));
    }
    let two = BigInt::from(2);
    let sum: BigRational = (1..=s)
        .map(|j| BigRational::new(Pow::pow(&two, j), BigInt::from(j)))
        .fold(BigRational::zero(), |acc, t| acc + t);
    let bound = BigRational::new(Pow::pow(&two, s + 2), BigInt::from(s)) - BigRational::one();
    Ok(sum <= bound)
}

/// Word construction bound `length >= 2^n (1 - 1/(n/4))`, as
/// `length * n >= 2^n (n - 4)`.
pub fn check_thm51(n: u64, limits: &Limits) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("word bound needs n >= 1".into()));
    }
    let lhs = BigInt::from(construction_length_word(n, limits)? * n);
    let rhs = BigInt::from(BigUint::one() << n) * (BigInt::from(n) - 4);
    Ok(lhs >= rhs)
}

/// Prefix construction bound `length >= n (1 - 1/(floor(log2 n)/16))`, as
/// `length * floor(log2 n) >= n (floor(log2 n) - 16)`.
pub fn check_prefix_theorem(n: u64, limits: &Limits) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("prefix bound needs n >= 1".into()));
    }
    let log = n.ilog2() as i64;
    let lhs = BigInt::from(construction_length_prefix(n, limits)?) * log;
    let rhs = BigInt::from(n) * (log - 16);
    Ok(lhs >= rhs)
}

/// `|CS(k)| / 2^(2^k) > 1 - 8/3^k`, as `3^k |CS(k)| > 2^(2^k) (3^k - 8)`.
pub fn check_cs_ratio_floor(k: u32, limits: &Limits) -> Result<bool> {
    let p3 = BigInt::from(pow3(k));
    let lhs = BigInt::from(cs_length(k, limits)?) * &p3;
    let rhs = BigInt::from(word_len_pow2(k)) * (p3 - 8);
    Ok(lhs > rhs)
}

/// `|CS(k)| / 2^(2^k) < |CS(k+1)| / 2^(2^(k+1))`.
pub fn check_cs_ratio_increases(k: u32, limits: &Limits) -> Result<bool> {
    let lhs = cs_length(k, limits)? << (1u64 << k);
    Ok(lhs < cs_length(k + 1, limits)?)
}

fn pow3(k: u32) -> BigUint {
    Pow::pow(BigUint::from(3u32), k)
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub k: u32,
    #[serde(with = "decimal")]
    pub f_exact: BigCount,
    #[serde(with = "decimal")]
    pub cs_length: BigCount,
    #[serde(with = "decimal")]
    pub lemma42_bound: BigCount,
    pub lemma42_holds: bool,
    pub lemma41_holds: bool,
    pub thm43_holds: bool,
    /// `None` at `k = 0`, where the strengthened bound is not stated.
    pub cor_bound1_holds: Option<bool>,
    pub thm6_bound_holds: bool,
    /// `f(k) / 2^(2^k)`, display only.
    pub f_ratio: String,
    /// `|CS(k)| / 2^(2^k)`, display only.
    pub cs_ratio: String,
}

impl BoundsRow {
    pub fn all_hold(&self) -> bool {
        self.lemma42_holds
            && self.lemma41_holds
            && self.thm43_holds
            && self.cor_bound1_holds.unwrap_or(true)
            && self.thm6_bound_holds
    }
}

pub const RATIO_DIGITS: usize = 30;

/// Rows `k = 0..=max_k`. Needs `f` up to `max_k + 1`.
pub fn ratio_table(max_k: u32, limits: &Limits) -> Result<Vec<BoundsRow>> {
    (0..=max_k)
        .map(|k| {
            let f = f_exact(k, limits)?;
            let total = word_len_pow2(k);
            let cs = &total - &f;
            Ok(BoundsRow {
                k,
                f_ratio: format_ratio(&f, &total, RATIO_DIGITS),
                cs_ratio: format_ratio(&cs, &total, RATIO_DIGITS),
                lemma42_bound: f_upper_lemma42(k),
                lemma42_holds: check_lemma42(k, limits)?,
                lemma41_holds: check_lemma41(k, limits)?,
                thm43_holds: check_thm43(k, limits)?,
                cor_bound1_holds: if k == 0 {
                    None
                } else {
                    Some(check_cor64(k, limits)?)
                },
                thm6_bound_holds: check_thm6(k, limits)?,
                f_exact: f,
                cs_length: cs,
            })
        })
        .collect()
}

/// CSV rendering of a bounds table, header first.
pub fn table_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from(
        "k,f,cs_length,lemma42_bound,lemma42_holds,lemma41_holds,thm43_holds,cor_bound1_holds,thm6_bound_holds,f_ratio,cs_ratio\n",
    );
    for r in rows {
        let cor = r.cor_bound1_holds.map_or(String::new(), |b| b.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.k,
            r.f_exact,
            r.cs_length,
            r.lemma42_bound,
            r.lemma42_holds,
            r.lemma41_holds,
            r.thm43_holds,
            cor,
            r.thm6_bound_holds,
            r.f_ratio,
            r.cs_ratio
        ));
    }
    out
}

/// Decimal rendering of `num / den` to `digits` significant digits,
/// rounding half to even. Trailing zeros after the point are dropped.
pub fn format_ratio(num: &BigUint, den: &BigUint, digits: usize) -> String {
    assert!(!den.is_zero(), "zero denominator");
    assert!(digits > 0);
    if num.is_zero() {
        return "0".into();
    }
    // floor(log10(num/den)) is e or e - 1
    let e = decimal_len(num) as i64 - decimal_len(den) as i64;
    let at_least_pow10 = if e >= 0 {
        *num >= den * pow10(e as u32)
    } else {
        num * pow10((-e) as u32) >= *den
    };
    let floor_log = if at_least_pow10 { e } else { e - 1 };
    let scale = digits as i64 - 1 - floor_log;
    let (n, d) = if scale >= 0 {
        (num * pow10(scale as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-scale) as u32))
    };
    let (mut q, r) = n.div_rem(&d);
    let twice = r << 1u32;
    if twice > d || (twice == d && q.is_odd()) {
        q += 1u32;
    }
    place_point(q.to_string(), scale)
}

fn place_point(digits: String, scale: i64) -> String {
    if scale <= 0 {
        return digits + &"0".repeat((-scale) as usize);
    }
    let scale = scale as usize;
    let padded = if digits.len() <= scale {
        "0".repeat(scale + 1 - digits.len()) + &digits
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - scale);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

/// Parses a plain decimal such as `0.625` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a plain decimal: {s:?}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() || !(int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())) {
        return Err(bad());
    }
    let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(numer, BigInt::from(pow10(frac.len() as u32))))
}

fn decimal_len(v: &BigUint) -> usize {
    v.to_string().len()
}

fn pow10(e: u32) -> BigUint {
    Pow::pow(BigUint::from(10u32), e)
}

mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
