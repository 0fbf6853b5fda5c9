//! Two-sample Wilcoxon rank-sum (Mann-Whitney) test.
//!
//! The U statistic is computed from midranks of the pooled sample. The
//! two-sided p-value is exact — by counting, over all label assignments of
//! the pooled values, those at least as far from the null mean n1*n2/2 as
//! the observed U — whenever the number of assignments C(n1+n2, n1) stays
//! within a cap (default 100,000). Beyond the cap a normal approximation
//! with tie-corrected variance and a 0.5 continuity correction is used, as
//! in R's `wilcox.test`.

use serde::{Deserialize, Serialize};

use super::normal;
use super::ranks::midranks;
use super::TestMethod;
use crate::error::{Error, Result};

/// Largest number of label assignments for which the exact p-value is
/// computed.
pub const DEFAULT_EXACT_CAP: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MannWhitneyTest {
    /// U statistic of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub method: TestMethod,
    pub n1: usize,
    pub n2: usize,
    /// p_value < alpha.
    pub significant: bool,
    pub warnings: Vec<String>,
}

/// Run the test with the default exact-enumeration cap.
pub fn mann_whitney(sample1: &[f64], sample2: &[f64], alpha: f64) -> Result<MannWhitneyTest> {
    mann_whitney_with_cap(sample1, sample2, alpha, DEFAULT_EXACT_CAP)
}

/// Run the test with an explicit cap on the number of label assignments for
/// the exact path; a cap of 0 forces the normal approximation.
pub fn mann_whitney_with_cap(
    sample1: &[f64],
    sample2: &[f64],
    alpha: f64,
    exact_cap: u128,
) -> Result<MannWhitneyTest> {
    let n1 = sample1.len();
    let n2 = sample2.len();
    if n1 == 0 || n2 == 0 {
        return Err(Error::SampleTooSmall {
            required: 1,
            got: n1.min(n2),
        });
    }

    let mut pooled = Vec::with_capacity(n1 + n2);
    pooled.extend_from_slice(sample1);
    pooled.extend_from_slice(sample2);
    let ranked = midranks(&pooled);

    let r1: f64 = ranked.ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;

    let mut warnings = Vec::new();
    let (p_value, method) = match binomial(n1 + n2, n1, exact_cap) {
        Some(combinations) => (
            exact_p(&ranked.ranks, n1, n2, combinations),
            TestMethod::Exact,
        ),
        None => {
            let (p, tied) = approx_p(u, n1, n2, &ranked.tie_sizes);
            if tied {
                warnings.push("all pooled values tied; p-value fixed at 1".into());
            }
            (p, TestMethod::NormalApprox)
        }
    };

    Ok(MannWhitneyTest {
        u,
        p_value,
        method,
        n1,
        n2,
        significant: p_value < alpha,
        warnings,
    })
}

/// C(n, k) if it does not exceed `cap`, None otherwise.
fn binomial(n: usize, k: usize, cap: u128) -> Option<u128> {
    if cap == 0 {
        return None;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.checked_mul((n - i) as u128)?;
        result /= (i + 1) as u128;
        if result > cap {
            return None;
        }
    }
    Some(result)
}

/// Exact two-sided p-value by counting label assignments via subset-sum
/// dynamic programming over doubled midranks (doubling makes them integers).
///
/// Subsets of the smaller group size are counted; the distance |U - n1*n2/2|
/// is the same for an assignment and its complement, so this loses nothing
/// while keeping the table small.
fn exact_p(ranks: &[f64], n1: usize, n2: usize, combinations: u128) -> f64 {
    let n = ranks.len();
    let ranks2: Vec<u64> = ranks.iter().map(|&r| (2.0 * r).round() as u64).collect();
    let r1_2: u64 = ranks2[..n1].iter().sum();
    // doubled U of the first sample and its doubled null mean
    let u2_obs = r1_2 as i64 - (n1 * (n1 + 1)) as i64;
    let mean2 = (n1 * n2) as i64;
    let d_obs = (u2_obs - mean2).abs();

    let m = n1.min(n2);
    let mut sorted2 = ranks2.clone();
    sorted2.sort_unstable();
    let max_sum: usize = sorted2[n - m..].iter().sum::<u64>() as usize;

    // counts[k][s]: subsets of size k with doubled-rank sum s
    let mut counts = vec![vec![0u128; max_sum + 1]; m + 1];
    counts[0][0] = 1;
    for &rank in &ranks2 {
        let rank = rank as usize;
        for k in (0..m).rev() {
            for s in (0..=max_sum.saturating_sub(rank)).rev() {
                if counts[k][s] > 0 {
                    counts[k + 1][s + rank] += counts[k][s];
                }
            }
        }
    }

    let offset = (m * (m + 1)) as i64 + mean2;
    let matching: u128 = counts[m]
        .iter()
        .enumerate()
        .filter(|&(s, &c)| c > 0 && (s as i64 - offset).abs() >= d_obs)
        .map(|(_, &c)| c)
        .sum();
    (matching as f64 / combinations as f64).min(1.0)
}

/// Normal approximation with tie-corrected variance and continuity
/// correction. Returns (p, all_tied).
fn approx_p(u: f64, n1: usize, n2: usize, tie_sizes: &[u64]) -> (f64, bool) {
    let n = (n1 + n2) as f64;
    let prod = (n1 * n2) as f64;
    let tie_term: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = prod / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return (1.0, true);
    }
    let sigma = variance.sqrt();
    let centered = u - prod / 2.0;
    let correction = if centered == 0.0 {
        0.0
    } else {
        0.5 * centered.signum()
    };
    let z = (centered - correction) / sigma;
    let p = 2.0 * normal::cdf(z).min(normal::sf(z));
    (p.clamp(0.0, 1.0), false)
}
