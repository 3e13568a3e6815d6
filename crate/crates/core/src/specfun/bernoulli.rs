//! Even-index Bernoulli numbers as exact rationals.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest supported `j` in `B_{2j}`.
pub const MAX_EVEN_INDEX: usize = 12;

fn table() -> &'static [Ratio<i128>] {
    static TABLE: OnceLock<Vec<Ratio<i128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k, with B_1 = -1/2.
        let top = 2 * MAX_EVEN_INDEX;
        let mut b: Vec<Ratio<i128>> = Vec::with_capacity(top + 1);
        b.push(Ratio::from_integer(1));
        for m in 1..=top {
            let mut acc = Ratio::from_integer(0);
            let mut binom: i128 = 1; // C(m+1, 0)
            for (k, bk) in b.iter().enumerate() {
                acc += *bk * binom;
                binom = binom * (m as i128 + 1 - k as i128) / (k as i128 + 1);
            }
            b.push(-acc / (m as i128 + 1));
        }
        (0..=MAX_EVEN_INDEX).map(|j| b[2 * j]).collect()
    })
}

/// `B_{2j}` as a reduced fraction, `0 <= j <= 12`.
pub fn bernoulli_even_ratio(j: usize) -> Result<Ratio<i128>> {
    table().get(j).copied().ok_or(Error::BernoulliRange(j))
}

/// `B_{2j}` converted to `f64` after exact rational evaluation.
pub fn bernoulli_even(j: usize) -> Result<f64> {
    let r = bernoulli_even_ratio(j)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}
