//! Strictly positive probability vectors, likelihood-ratio ranges, and
//! reproducible Dirichlet sampling of simplex points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as RandDistribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::kahan_sum;

/// Absolute tolerance on |sum - 1| accepted by [`Distribution::validate`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Floor applied to sampled entries so every draw stays strictly positive.
pub const SAMPLE_FLOOR: f64 = 1e-12;

/// A point in the interior of the probability simplex: every entry is
/// strictly positive and the entries sum to 1 within [`SUM_TOLERANCE`].
///
/// Construction goes through [`Distribution::validate`] or
/// [`Distribution::sample`]; the inner vector is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Check every simplex invariant and wrap the values.
    ///
    /// The input is never renormalized: a vector that fails the sum check is
    /// rejected, not repaired.
    pub fn validate(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort { len: values.len() });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value <= 0.0 {
                return Err(Error::NonPositiveEntry { index, value });
            }
        }
        let sum = kahan_sum(values);
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumMismatch {
                sum,
                tolerance: SUM_TOLERANCE,
            });
        }
        Ok(Self {
            probs: values.to_vec(),
        })
    }

    /// Uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDimension { n });
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Draw from a symmetric Dirichlet with the given concentration.
    ///
    /// Deterministic for a fixed `(n, seed, concentration)` triple. Entries
    /// are floored at [`SAMPLE_FLOOR`] and renormalized, so the result always
    /// passes [`Distribution::validate`].
    pub fn sample(n: usize, seed: u64, concentration: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDimension { n });
        }
        assert!(
            concentration > 0.0 && concentration.is_finite(),
            "concentration must be a positive real"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = Gamma::new(concentration, 1.0).expect("valid gamma parameters");
        let mut draws: Vec<f64> = (0..n).map(|_| gamma.sample(&mut rng)).collect();
        let total = kahan_sum(&draws);
        if total > 0.0 {
            for value in &mut draws {
                *value /= total;
            }
        } else {
            // All draws underflowed to zero (tiny concentration); the floor
            // below turns this into a uniform vector.
            draws.fill(0.0);
        }
        for value in &mut draws {
            if *value < SAMPLE_FLOOR {
                *value = SAMPLE_FLOOR;
            }
        }
        let total = kahan_sum(&draws);
        for value in &mut draws {
            *value /= total;
        }
        Ok(Self { probs: draws })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Empirical bounds `0 < r <= p_i/q_i <= R` on the likelihood ratios, with
/// the convention `r <= 1 <= R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    /// Lower ratio bound `r`.
    pub lower: f64,
    /// Upper ratio bound `R`.
    pub upper: f64,
}

impl RatioRange {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let valid = lower > 0.0
            && lower <= 1.0
            && upper >= 1.0
            && upper.is_finite()
            && lower <= upper;
        if !valid {
            return Err(Error::InvalidRange { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// True when `r == R == 1`, i.e. the two distributions coincide.
    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Extract the empirical ratio range of a pair of distributions.
///
/// The minimum ratio is clamped to <= 1 and the maximum to >= 1; widening a
/// ratio range never invalidates a bound, and the clamp keeps every theorem
/// hypothesis satisfied.
pub fn ratio_range(p: &Distribution, q: &Distribution) -> Result<RatioRange> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        let ratio = pi / qi;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    RatioRange::new(min_ratio.min(1.0), max_ratio.max(1.0))
}
