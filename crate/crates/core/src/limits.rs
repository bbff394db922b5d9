/// Resource limits shared by the generators, constructions and LCS engine.
///
/// Exceeding any of them is reported as an error; nothing is truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest word or prefix (in symbols) that may be materialized.
    pub max_symbols: u64,
    /// Largest `k` for which `CS(k)` is built as an explicit alignment.
    pub max_materialized_pow2: u32,
    /// Cell budget (`|x| * |y|`) for the quadratic DP.
    pub quadratic_budget: u128,
    /// Cell budget for the bit-parallel kernel and the linear-space recovery.
    pub bit_parallel_budget: u128,
    /// Largest `k` for which the omission count `f(k)` is evaluated.
    pub max_f_exponent: u32,
}

impl Limits {
    pub const DEFAULT_MAX_SYMBOLS: u64 = 1 << 24;
    pub const DEFAULT_MAX_MATERIALIZED_POW2: u32 = 4;
    pub const DEFAULT_QUADRATIC_BUDGET: u128 = 1 << 30;
    pub const DEFAULT_BIT_PARALLEL_BUDGET: u128 = 1 << 34;
    pub const DEFAULT_MAX_F_EXPONENT: u32 = 14;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_symbols: Self::DEFAULT_MAX_SYMBOLS,
            max_materialized_pow2: Self::DEFAULT_MAX_MATERIALIZED_POW2,
            quadratic_budget: Self::DEFAULT_QUADRATIC_BUDGET,
            bit_parallel_budget: Self::DEFAULT_BIT_PARALLEL_BUDGET,
            max_f_exponent: Self::DEFAULT_MAX_F_EXPONENT,
        }
    }
}
