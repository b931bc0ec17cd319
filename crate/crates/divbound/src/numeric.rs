//! Summation helpers shared by the measure kernels.

const PAIRWISE_BASE: usize = 32;

/// Compensated (Kahan) summation, used for the simplex sum check so the
/// tolerance stays meaningful at large n.
pub(crate) fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for &v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Pairwise (tree) summation; bounds rounding error growth to O(log n).
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BASE {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Sum of `term(p_i, q_i)` over a pair of equal-length slices.
/// Falls back to plain accumulation below the pairwise cutoff.
pub(crate) fn sum_terms<F>(p: &[f64], q: &[f64], term: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    debug_assert_eq!(p.len(), q.len());
    if p.len() <= PAIRWISE_BASE {
        p.iter().zip(q).map(|(&a, &b)| term(a, b)).sum()
    } else {
        let terms: Vec<f64> = p.iter().zip(q).map(|(&a, &b)| term(a, b)).collect();
        pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_handles_small_increments() {
        let mut values = vec![1.0];
        values.extend(std::iter::repeat(1e-16).take(10_000));
        let naive: f64 = values.iter().sum();
        let compensated = kahan_sum(&values);
        assert_eq!(naive, 1.0); // the naive sum drops every increment
        assert!((compensated - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn pairwise_matches_exact_on_uniform() {
        let values = vec![0.125f64; 1024];
        assert_eq!(pairwise_sum(&values), 128.0);
    }
}
