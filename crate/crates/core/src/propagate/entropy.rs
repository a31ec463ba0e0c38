use std::collections::HashSet;

/// Coordinates rounded to the nearest multiple of `epsilon`, as integer
/// multiples.
pub fn quantize(v: &[f64], epsilon: f64) -> Vec<i64> {
    v.iter().map(|x| (x / epsilon).round() as i64).collect()
}

/// `log₂` of the number of distinct quantized vectors: the entropy of the
/// quantized outputs when every sample is equally likely.
pub fn quantized_entropy(samples: &[Vec<f64>], epsilon: f64) -> f64 {
    assert!(epsilon > 0.0, "epsilon must be positive");
    assert!(!samples.is_empty(), "need at least one sample");
    let distinct: HashSet<Vec<i64>> = samples.iter().map(|s| quantize(s, epsilon)).collect();
    (distinct.len() as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_distinct_vectors_give_two_bits() {
        let s = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        assert_eq!(quantized_entropy(&s, 1e-6), 2.0);
    }

    #[test]
    fn collapsed_outputs_give_zero_bits() {
        let s = vec![vec![1e-9, -2e-9], vec![3e-10, 1e-9], vec![0.0, 0.0]];
        assert_eq!(quantized_entropy(&s, 1e-6), 0.0);
    }

    #[test]
    fn rounding_is_to_nearest() {
        assert_eq!(quantize(&[0.49, 0.51, -0.51, -0.0], 1.0), vec![0, 1, -1, 0]);
    }
}
