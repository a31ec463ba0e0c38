use crate::error::{Error, Result};
use crate::graph_core::DenseMatrix;
use crate::spectral::svd;

/// Splits `a = U S Vᵀ` into `groups` matrices `Aₖ = U Sₖ Vᵀ`, where singular
/// index `j` (descending) lands in group `j mod groups`. With `groups = n`
/// each piece carries exactly one singular value.
pub fn spectral_split(a: &DenseMatrix, groups: usize) -> Result<Vec<DenseMatrix>> {
    if !a.is_square() {
        return Err(Error::domain(format!("spectral_split needs a square matrix, got {:?}", a.shape())));
    }
    let n = a.rows();
    if groups == 0 || groups > n {
        return Err(Error::domain(format!("group count must lie in [1, {n}], got {groups}")));
    }
    if groups == 1 {
        return Ok(vec![a.clone()]);
    }
    let f = svd(a)?;
    Ok((0..groups)
        .map(|k| {
            let mut piece = DenseMatrix::zeros(n, n);
            for j in (k..n).step_by(groups) {
                let s = f.sigma[j];
                if s == 0.0 {
                    continue;
                }
                for r in 0..n {
                    let ur = f.u[(r, j)] * s;
                    if ur == 0.0 {
                        continue;
                    }
                    for c in 0..n {
                        piece[(r, c)] += ur * f.v[(c, j)];
                    }
                }
            }
            piece
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::singular_values;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_group_returns_input() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(spectral_split(&a, 1).unwrap(), vec![a]);
    }

    #[test]
    fn pieces_sum_to_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = DenseMatrix::random_uniform(6, 6, &mut rng);
        for groups in [2, 3, 6] {
            let pieces = spectral_split(&a, groups).unwrap();
            let sum = pieces.iter().skip(1).fold(pieces[0].clone(), |acc, p| &acc + p);
            assert!(sum.max_abs_diff(&a) < 1e-9);
        }
    }

    #[test]
    fn diagonal_splits_into_single_entries() {
        let a = DenseMatrix::from_diag(&[3.0, 2.0, 1.0]);
        let pieces = spectral_split(&a, 3).unwrap();
        for (k, expect) in [3.0, 2.0, 1.0].iter().enumerate() {
            let mut d = [0.0; 3];
            d[k] = *expect;
            assert!(pieces[k].max_abs_diff(&DenseMatrix::from_diag(&d)) < 1e-12);
        }
    }

    #[test]
    fn each_piece_has_its_own_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = DenseMatrix::random_uniform(5, 5, &mut rng);
        let sigma = singular_values(&a).unwrap();
        let pieces = spectral_split(&a, 2).unwrap();
        let top = singular_values(&pieces[0]).unwrap();
        assert!((top[0] - sigma[0]).abs() < 1e-9);
        assert!((top[1] - sigma[2]).abs() < 1e-9);
        assert!((top[2] - sigma[4]).abs() < 1e-9);
        assert!(top[3].abs() < 1e-9);
        assert!(spectral_split(&a, 0).is_err());
        assert!(spectral_split(&a, 6).is_err());
    }
}
