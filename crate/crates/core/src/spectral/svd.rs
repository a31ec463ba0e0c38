//! One-sided (Hestenes) Jacobi SVD.
//!
//! Column pairs of a working copy are rotated until every pair is
//! numerically orthogonal; the column norms are then the singular values.

use crate::error::{Error, Result};
use crate::graph_core::{dot, DenseMatrix};

/// Largest `min(rows, cols)` accepted by [`svd`].
pub const MAX_SVD_DIM: usize = 2048;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(σ) Vᵀ`: `u` is `rows × r`, `v` is `cols × r`,
/// `r = min(rows, cols)`, `sigma` is descending. For square input both
/// factors are orthogonal.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
    pub sweeps: usize,
}

impl SvdResult {
    pub fn max(&self) -> f64 {
        self.sigma[0]
    }

    pub fn min(&self) -> f64 {
        *self.sigma.last().unwrap()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let scaled = DenseMatrix::from_fn(self.u.rows(), self.u.cols(), |i, j| {
            self.u[(i, j)] * self.sigma[j]
        });
        scaled.matmul_t(&self.v)
    }
}

pub fn svd(m: &DenseMatrix) -> Result<SvdResult> {
    if m.rows().min(m.cols()) > MAX_SVD_DIM {
        return Err(Error::domain(format!(
            "svd limited to min dimension {MAX_SVD_DIM}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        let t = jacobi_tall(&m.transpose())?;
        Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            sweeps: t.sweeps,
        })
    }
}

pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    svd(m).map(|r| r.sigma)
}

/// `(largest, smallest)` singular value.
pub fn spectral_extremes(m: &DenseMatrix) -> Result<(f64, f64)> {
    svd(m).map(|r| (r.max(), r.min()))
}

fn jacobi_tall(m: &DenseMatrix) -> Result<SvdResult> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = f64::EPSILON * (rows as f64).sqrt();
    // Columns this small are numerically zero; rotating them only churns
    // rounding noise.
    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);

    let mut sweeps = 0;
    let mut converged = cols < 2;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "jacobi svd did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        converged = true;
        for i in 0..cols - 1 {
            for j in i + 1..cols {
                let alpha = dot(&a[i], &a[i]);
                let beta = dot(&a[j], &a[j]);
                let gamma = dot(&a[i], &a[j]);
                if gamma == 0.0
                    || alpha.min(beta) <= negligible
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
    }

    let mut order: Vec<(f64, usize)> = a
        .iter()
        .enumerate()
        .map(|(j, col)| (dot(col, col).sqrt(), j))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let sigma: Vec<f64> = order.iter().map(|&(s, _)| s).collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("non-finite singular value".into()));
    }
    let cutoff = sigma[0] * f64::EPSILON * rows as f64;

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut deficient = Vec::new();
    for (k, &(s, j)) in order.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            u_cols.push(a[j].iter().map(|x| x / s).collect());
        } else {
            u_cols.push(vec![0.0; rows]);
            deficient.push(k);
        }
    }
    complete_orthonormal(&mut u_cols, &deficient);

    let u = DenseMatrix::from_fn(rows, cols, |i, k| u_cols[k][i]);
    let v = DenseMatrix::from_fn(cols, cols, |i, k| v[order[k].1][i]);
    Ok(SvdResult { u, sigma, v, sweeps })
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
        let xi = *x;
        let yj = *y;
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Fills the columns listed in `missing` with unit vectors orthogonal to
/// every other column, using modified Gram-Schmidt on the standard basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let dim = cols[0].len();
    let mut candidate = 0;
    for &k in missing {
        loop {
            assert!(candidate < dim, "cannot complete orthonormal basis");
            let mut e = vec![0.0; dim];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (idx, col) in cols.iter().enumerate() {
                    if idx == k {
                        continue;
                    }
                    let proj = dot(&e, col);
                    for (x, c) in e.iter_mut().zip(col) {
                        *x -= proj * c;
                    }
                }
            }
            let norm = dot(&e, &e).sqrt();
            if norm > 1e-6 {
                cols[k] = e.into_iter().map(|x| x / norm).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthogonality_error(q: &DenseMatrix) -> f64 {
        q.t_matmul(q).max_abs_diff(&DenseMatrix::identity(q.cols()))
    }

    fn check_invariants(m: &DenseMatrix) {
        let r = svd(m).unwrap();
        let scale = m.max_abs().max(1.0);
        assert!(r.reconstruct().max_abs_diff(m) < 1e-8 * scale);
        assert!(orthogonality_error(&r.u) < 1e-8);
        assert!(orthogonality_error(&r.v) < 1e-8);
        assert!(r.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.sigma.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn diagonal_input() {
        let r = svd(&DenseMatrix::from_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(r.sigma, vec![3.0, 1.0]);
        let r = svd(&DenseMatrix::from_diag(&[1.0, -4.0, 2.0])).unwrap();
        assert_eq!(r.sigma, vec![4.0, 2.0, 1.0]);
    }

    #[test]
    fn orthogonal_input_has_unit_singular_values() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let q = DenseMatrix::from_rows(&[&[c, -s, 0.0], &[s, c, 0.0], &[0.0, 0.0, 1.0]]);
        let r = svd(&q).unwrap();
        assert!(r.sigma.iter().all(|x| (x - 1.0).abs() < 1e-10));
    }

    #[test]
    fn invariants_on_random_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (r, c) in [(1, 1), (5, 5), (7, 3), (3, 7), (12, 12), (1, 4)] {
            check_invariants(&DenseMatrix::random_uniform(r, c, &mut rng));
        }
    }

    #[test]
    fn rank_deficient_input_still_has_orthogonal_factors() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], &[1.0, 0.0, 1.0]]);
        check_invariants(&m);
        let r = svd(&m).unwrap();
        assert!(r.sigma[2].abs() < 1e-12);
        check_invariants(&DenseMatrix::zeros(3, 3));
    }
}
