//! Dense complex matrices and the numeric helpers the rest of the crate
//! leans on: relative Frobenius comparison, inversion, singular values and
//! Hermitian eigendecomposition.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::Result;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.norm()
}

/// Relative Frobenius residual of `a` against `b`, with a floor of 1 on the
/// reference scale so that comparisons near zero stay absolute.
pub fn rel_residual(a: &CMat, b: &CMat) -> f64 {
    let scale = fro(a).max(fro(b)).max(1.0);
    (a - b).norm() / scale
}

pub fn approx_eq(a: &CMat, b: &CMat, eps: f64) -> bool {
    a.shape() == b.shape() && rel_residual(a, b) <= eps
}

pub fn residual_from_identity(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    rel_residual(m, &identity(m.nrows()))
}

pub fn is_identity(m: &CMat, eps: f64) -> bool {
    residual_from_identity(m) <= eps
}

/// Smallest singular value, zero for empty matrices.
pub fn sigma_min(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sv = m.clone().singular_values();
    sv.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Inverse, refusing matrices with a singular value at or below `eps_sing`.
pub fn inverse(m: &CMat, eps_sing: f64) -> Result<CMat> {
    let smin = sigma_min(m);
    if smin <= eps_sing {
        return Err(Error::Singular { sigma_min: smin });
    }
    m.clone()
        .try_inverse()
        .ok_or(Error::Singular { sigma_min: smin })
}

/// Square matrix with independent real and imaginary parts uniform in [-1, 1].
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random Hermitian matrix, used to sample commutant elements.
pub fn random_hermitian(n: usize, seed: u64) -> CMat {
    let r = random_matrix(n, n, seed);
    (&r + r.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigendecomposition of a Hermitian matrix. Returns eigenvalues in
/// ascending order with the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Orthonormal basis of the column space, via modified Gram-Schmidt with a
/// rank cutoff relative to the largest column.
pub fn column_space_basis(m: &CMat, cutoff: f64) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let scale = m
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    for col in m.column_iter() {
        let mut v: DVector<C64> = col.into_owned();
        for b in &basis {
            let coeff = b.dotc(&v);
            v -= b * coeff;
        }
        // second pass for numerical orthogonality
        for b in &basis {
            let coeff = b.dotc(&v);
            v -= b * coeff;
        }
        let n = v.norm();
        if n > cutoff * scale {
            basis.push(v / C64::new(n, 0.0));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = random_matrix(4, 4, 7);
        let inv = inverse(&m, 1e-12).unwrap();
        assert!(is_identity(&(&m * &inv), 1e-10));
        assert!(is_identity(&(&inv * &m), 1e-10));
    }

    #[test]
    fn sigma_min_detects_singular() {
        let mut m = identity(3);
        m[(2, 2)] = C64::new(0.0, 0.0);
        assert!(sigma_min(&m) < 1e-14);
        assert!(inverse(&m, 1e-8).is_err());
        assert!(sigma_min(&identity(3)) > 0.99);
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let h = random_hermitian(5, 3);
        let (vals, vecs) = hermitian_eigen(&h);
        // columns orthonormal
        assert!(is_identity(&(vecs.adjoint() * &vecs), 1e-10));
        // H = V diag(vals) V^*
        let d = CMat::from_fn(5, 5, |i, j| {
            if i == j {
                C64::new(vals[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let rebuilt = &vecs * d * vecs.adjoint();
        assert!(approx_eq(&rebuilt, &h, 1e-10));
        // ascending order
        for i in 1..5 {
            assert!(vals[i] >= vals[i - 1]);
        }
    }

    #[test]
    fn column_space_basis_finds_rank() {
        let mut m = zeros(4, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(0.0, 2.0);
        // third column dependent on the first
        m[(0, 2)] = C64::new(-3.0, 0.0);
        let basis = column_space_basis(&m, 1e-9);
        assert_eq!(basis.len(), 2);
    }
}
