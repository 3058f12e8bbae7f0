//! Small statistical tests used to validate simulated spectra.

/// Kolmogorov-Smirnov test of a sample against the unit-mean exponential
/// distribution. Returns the asymptotic p-value.
///
/// Whitened periodogram ordinates of a Gaussian process are asymptotically
/// i.i.d. Exp(1), so this is the natural goodness-of-fit check of a
/// simulated spectrum against its analytic model.
pub fn ks_test_unit_exponential(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty());
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = 1.0 - (-x).exp();
        let hi = (i as f64 + 1.0) / n - cdf;
        let lo = cdf - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    kolmogorov_q((n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d)
}

/// Complementary CDF of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} exp(−2k²λ²)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponential_samples_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples: Vec<f64> =
            (0..50_000).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let p = ks_test_unit_exponential(&samples);
        assert!(p > 0.01, "p = {p}");
    }

    #[test]
    fn wrong_distribution_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // exponential with mean 1.1 is detectably wrong at this sample size
        let samples: Vec<f64> =
            (0..50_000).map(|_| -1.1 * (1.0 - rng.gen::<f64>()).ln()).collect();
        let p = ks_test_unit_exponential(&samples);
        assert!(p < 1e-3, "p = {p}");
    }

    #[test]
    fn q_function_endpoints() {
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(3.0) < 1e-7);
    }
}
