use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided standard normal quantile for a confidence level in (0, 1).
pub fn z_for(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// A Monte Carlo proportion with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub samples: u64,
    pub mean: f64,
    /// Half-width of the Wilson score interval at `confidence`.
    pub ci_half_width: f64,
    pub confidence: f64,
}

impl Estimate {
    pub fn new(successes: u64, samples: u64, confidence: f64) -> Self {
        assert!(successes <= samples, "more successes than samples");
        assert!(samples > 0, "an estimate needs at least one sample");
        let n = samples as f64;
        let mean = successes as f64 / n;
        let z = z_for(confidence);
        let z2 = z * z;
        let half = z / (1.0 + z2 / n) * (mean * (1.0 - mean) / n + z2 / (4.0 * n * n)).sqrt();
        Estimate {
            successes,
            samples,
            mean,
            ci_half_width: half,
            confidence,
        }
    }

    /// Centre of the Wilson interval (not the raw mean).
    pub fn wilson_center(&self) -> f64 {
        let n = self.samples as f64;
        let z2 = z_for(self.confidence).powi(2);
        (self.mean + z2 / (2.0 * n)) / (1.0 + z2 / n)
    }

    pub fn interval(&self) -> (f64, f64) {
        let c = self.wilson_center();
        (
            (c - self.ci_half_width).max(0.0),
            (c + self.ci_half_width).min(1.0),
        )
    }

    /// True if `x` lies outside the Wilson interval.
    pub fn excludes(&self, x: f64) -> bool {
        let (lo, hi) = self.interval();
        x < lo || x > hi
    }

    /// Plain binomial standard error `sqrt(mean (1 - mean) / n)`.
    pub fn std_error(&self) -> f64 {
        (self.mean * (1.0 - self.mean) / self.samples as f64).sqrt()
    }

    pub fn with_confidence(&self, confidence: f64) -> Estimate {
        Estimate::new(self.successes, self.samples, confidence)
    }
}

/// Difference `P(A) - P(B)` of two events observed on the same samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedDifference {
    pub samples: u64,
    /// Samples where A held and B did not.
    pub a_only: u64,
    /// Samples where B held and A did not.
    pub b_only: u64,
    pub mean: f64,
    /// Normal-approximation half-width at `confidence`.
    pub ci_half_width: f64,
    pub confidence: f64,
}

impl PairedDifference {
    pub fn new(samples: u64, a_only: u64, b_only: u64, confidence: f64) -> Self {
        assert!(a_only + b_only <= samples);
        let n = samples as f64;
        let mean = (a_only as f64 - b_only as f64) / n;
        let second = (a_only + b_only) as f64 / n;
        let var = (second - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        PairedDifference {
            samples,
            a_only,
            b_only,
            mean,
            ci_half_width: z_for(confidence) * (var / n).sqrt(),
            confidence,
        }
    }

    pub fn excludes_zero(&self) -> bool {
        self.mean.abs() > self.ci_half_width
    }
}
