use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::graph_core::{dot, DenseMatrix};
use crate::spectral::spectral_extremes;

/// Orthonormal columns from modified Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DenseMatrix {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut ok = true;
        for j in 0..d {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj = dot(&done[i], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * q;
                }
            }
            let norm = dot(&cols[j], &cols[j]).sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= norm);
        }
        if ok {
            return DenseMatrix::from_fn(d, d, |i, j| cols[j][i]);
        }
    }
}

/// `m` scaled so its largest singular value equals `target`.
pub fn rescale_to_norm(m: &DenseMatrix, target: f64) -> Result<DenseMatrix> {
    let (max, _) = spectral_extremes(m)?;
    Ok(if max == 0.0 { m.clone() } else { m.scale(target / max) })
}
