//! Shapiro-Wilk normality test.
//!
//! W statistic and p-value follow Royston's algorithm (AS R94, Applied
//! Statistics 44, 1995), the same procedure used by R's `shapiro.test`,
//! valid for 3 <= n <= 5000. Larger samples are tested on a fixed-size
//! random subsample of 5000 drawn from a seeded generator, and the result
//! is tagged accordingly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::normal;
use super::TestMethod;
use crate::error::{Error, Result};

/// Largest sample size handled directly; beyond it a subsample is tested.
pub const MAX_DIRECT_N: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapiroWilkTest {
    pub w: f64,
    pub p_value: f64,
    pub method: TestMethod,
    /// Original sample size (before any subsampling).
    pub n: usize,
    pub warnings: Vec<String>,
}

/// Test a sample for normality. `subsample_seed` only matters for n > 5000.
pub fn shapiro_wilk(sample: &[f64], subsample_seed: u64) -> Result<ShapiroWilkTest> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::SampleTooSmall { required: 3, got: n });
    }

    let mut values: Vec<f64>;
    let mut warnings = Vec::new();
    let method = if n > MAX_DIRECT_N {
        let mut rng = ChaCha8Rng::seed_from_u64(subsample_seed);
        let chosen = rand::seq::index::sample(&mut rng, n, MAX_DIRECT_N);
        values = chosen.iter().map(|i| sample[i]).collect();
        warnings.push(format!("subsampled {MAX_DIRECT_N} of {n} values"));
        TestMethod::Subsampled
    } else {
        values = sample.to_vec();
        TestMethod::NormalApprox
    };

    values.sort_by(f64::total_cmp);
    let m = values.len();
    if values[0] == values[m - 1] {
        return Err(Error::DegenerateSample);
    }

    let w = w_statistic(&values);
    let p_value = p_value(w, m);

    Ok(ShapiroWilkTest {
        w,
        p_value,
        method,
        n,
        warnings,
    })
}

/// Ascending polynomial evaluation: c[0] + c[1] x + c[2] x^2 + ...
fn poly(coefficients: &[f64], x: f64) -> f64 {
    coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c)
}

/// W for a sorted sample, via the antisymmetric coefficient vector of
/// Royston (1995).
fn w_statistic(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let half = n / 2;

    // upper-half coefficients, a[0] pairing with the largest order statistic
    let mut a = vec![0.0; half];
    if n == 3 {
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        // Blom-style scores for the lower half (negative), mirrored later
        let an25 = n as f64 + 0.25;
        let mut m_sq_sum = 0.0;
        for (i, slot) in a.iter_mut().enumerate() {
            let score = normal::quantile((i as f64 + 1.0 - 0.375) / an25);
            *slot = score;
            m_sq_sum += score * score;
        }
        m_sq_sum *= 2.0;
        let norm = m_sq_sum.sqrt();
        let rsn = 1.0 / (n as f64).sqrt();

        const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
        const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

        let a_n = poly(&C1, rsn) - a[0] / norm;
        let (first_scaled, scale) = if n > 5 {
            let a_n1 = poly(&C2, rsn) - a[1] / norm;
            let scale = ((m_sq_sum - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1])
                / (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1))
                .sqrt();
            a[1] = a_n1;
            (2, scale)
        } else {
            let scale = ((m_sq_sum - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a_n * a_n)).sqrt();
            (1, scale)
        };
        a[0] = a_n;
        for slot in a.iter_mut().skip(first_scaled) {
            // lower-half scores are negative; dividing by -scale yields the
            // positive upper-half coefficients
            *slot /= -scale;
        }
    }

    let mean = sorted.iter().sum::<f64>() / n as f64;
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let centered = x - mean;
        denominator += centered * centered;
        let j = n - 1 - i;
        if i != j {
            let coefficient = if i > j { a[n - 1 - i] } else { -a[i] };
            numerator += coefficient * centered;
        }
    }
    (numerator * numerator / denominator).clamp(0.0, 1.0)
}

/// Royston (1995) p-value transformation.
fn p_value(w: f64, n: usize) -> f64 {
    if w >= 1.0 {
        return 1.0;
    }
    if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = (0.75f64).sqrt().asin();
        return (pi6 * (w.sqrt().asin() - stqr)).clamp(0.0, 1.0);
    }

    const G: [f64; 2] = [-2.273, 0.459];
    const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -0.0006714];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

    let an = n as f64;
    let log_w1 = (1.0 - w).ln();
    let (y, mu, sigma) = if n <= 11 {
        let gamma = poly(&G, an);
        if log_w1 >= gamma {
            return 0.0;
        }
        (
            -(gamma - log_w1).ln(),
            poly(&C3, an),
            poly(&C4, an).exp(),
        )
    } else {
        let log_n = an.ln();
        (log_w1, poly(&C5, log_n), poly(&C6, log_n).exp())
    };
    normal::sf((y - mu) / sigma).clamp(0.0, 1.0)
}
