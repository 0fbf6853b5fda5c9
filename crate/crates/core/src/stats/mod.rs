//! Nonparametric statistics used by the study: Shapiro-Wilk normality test,
//! two-sample Wilcoxon rank-sum (Mann-Whitney) test, and medians.
//!
//! All functions are pure; the only randomness (Shapiro-Wilk subsampling of
//! oversized samples) comes from an explicit seed parameter.

mod mann_whitney;
mod normal;
mod ranks;
mod shapiro;

pub use mann_whitney::{mann_whitney, mann_whitney_with_cap, MannWhitneyTest, DEFAULT_EXACT_CAP};
pub use shapiro::{shapiro_wilk, ShapiroWilkTest, MAX_DIRECT_N};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a p-value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestMethod {
    Exact,
    NormalApprox,
    Subsampled,
}

/// Middle order statistic; mean of the two middle values for even n.
pub fn median(sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::SampleTooSmall { required: 1, got: 0 });
    }
    let mut values = sample.to_vec();
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Ok(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

/// median(sample1) - median(sample2).
pub fn median_diff(sample1: &[f64], sample2: &[f64]) -> Result<f64> {
    Ok(median(sample1)? - median(sample2)?)
}
