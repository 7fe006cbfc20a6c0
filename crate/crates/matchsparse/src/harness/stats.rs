//! Estimators used by the experiment runners: sample moments, the paired
//! ratio-of-means estimator, and a 2x2 chi-square independence test.

use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for fewer than two samples.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn standard_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (sample_variance(xs) / xs.len() as f64).sqrt()
}

/// Ratio of means over paired samples with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub se: f64,
    pub num_mean: f64,
    pub den_mean: f64,
    pub samples: usize,
}

/// Estimates `mean(num) / mean(den)` from paired observations.
///
/// The standard error comes from the first-order delta method:
/// `Var(r) ≈ (s_nn − 2 r s_nd + r² s_dd) / (n · mean(den)²)`, which is what
/// makes paired evaluation worthwhile — the covariance term cancels most of
/// the shared realization noise.
pub fn paired_ratio(num: &[f64], den: &[f64]) -> RatioEstimate {
    assert_eq!(num.len(), den.len(), "paired samples must align");
    let n = num.len();
    let num_mean = mean(num);
    let den_mean = mean(den);
    if n == 0 || den_mean == 0.0 {
        return RatioEstimate {
            ratio: 0.0,
            se: 0.0,
            num_mean,
            den_mean,
            samples: n,
        };
    }
    let r = num_mean / den_mean;
    let se = if n < 2 {
        0.0
    } else {
        let mut s_nn = 0.0;
        let mut s_dd = 0.0;
        let mut s_nd = 0.0;
        for i in 0..n {
            let dn = num[i] - num_mean;
            let dd = den[i] - den_mean;
            s_nn += dn * dn;
            s_dd += dd * dd;
            s_nd += dn * dd;
        }
        let inv = 1.0 / (n - 1) as f64;
        s_nn *= inv;
        s_dd *= inv;
        s_nd *= inv;
        let var = (s_nn - 2.0 * r * s_nd + r * r * s_dd) / (n as f64 * den_mean * den_mean);
        var.max(0.0).sqrt()
    };
    RatioEstimate {
        ratio: r,
        se,
        num_mean,
        den_mean,
        samples: n,
    }
}

/// Pearson chi-square p-value for independence in a 2x2 contingency table
/// `counts[a][b]` of joint indicator outcomes. Returns `None` when a
/// marginal is empty, in which case independence cannot be rejected.
pub fn chi_square_2x2(counts: [[u64; 2]; 2]) -> Option<f64> {
    let a = counts[0][0] as f64;
    let b = counts[0][1] as f64;
    let c = counts[1][0] as f64;
    let d = counts[1][1] as f64;
    let n = a + b + c + d;
    let row0 = a + b;
    let row1 = c + d;
    let col0 = a + c;
    let col1 = b + d;
    if row0 == 0.0 || row1 == 0.0 || col0 == 0.0 || col1 == 0.0 {
        return None;
    }
    let diff = a * d - b * c;
    let stat = n * diff * diff / (row0 * row1 * col0 * col1);
    let dist = ChiSquared::new(1.0).expect("1 degree of freedom");
    Some(1.0 - dist.cdf(stat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_hand_values() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((sample_variance(&xs) - 5.0 / 3.0).abs() < 1e-12);
        assert!((standard_error(&xs) - (5.0 / 12.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn paired_ratio_is_exact_on_constant_pairs() {
        let num = [2.0, 2.0, 2.0];
        let den = [4.0, 4.0, 4.0];
        let est = paired_ratio(&num, &den);
        assert_eq!(est.ratio, 0.5);
        assert_eq!(est.se, 0.0);
    }

    #[test]
    fn paired_ratio_covariance_shrinks_se() {
        // num = den/2 exactly: the ratio is deterministic even though both
        // series vary, so the delta-method variance collapses to zero.
        let den = [2.0, 4.0, 6.0, 8.0];
        let num = [1.0, 2.0, 3.0, 4.0];
        let est = paired_ratio(&num, &den);
        assert!((est.ratio - 0.5).abs() < 1e-12);
        assert!(est.se < 1e-12, "se = {}", est.se);

        // Independent-looking noise keeps a positive se.
        let noisy_num = [1.0, 3.0, 2.0, 4.0];
        let est2 = paired_ratio(&noisy_num, &den);
        assert!(est2.se > 0.0);
    }

    #[test]
    fn chi_square_detects_dependence_and_tolerates_degeneracy() {
        // Perfectly dependent: indicator b == indicator a.
        let dependent = [[50, 0], [0, 50]];
        let p = chi_square_2x2(dependent).unwrap();
        assert!(p < 1e-6);

        // Balanced independent-looking table: statistic 0, p-value 1.
        let independent = [[25, 25], [25, 25]];
        let p = chi_square_2x2(independent).unwrap();
        assert!((p - 1.0).abs() < 1e-12);

        // Degenerate marginal: one indicator never fires.
        assert!(chi_square_2x2([[100, 0], [0, 0]]).is_none());
    }
}
