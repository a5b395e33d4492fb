//! Random matrices used by tests, the acceptance suite and the CLI.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Mat7, Vec7};

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix (Gram-Schmidt on a Gaussian matrix).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    loop {
        let g = gaussian_matrix(rng, n);
        let mut q = DMatrix::<f64>::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut c = g.column(j).into_owned();
            for _ in 0..2 {
                for k in 0..j {
                    let qk = q.column(k).into_owned();
                    c -= &qk * qk.dot(&c);
                }
            }
            let nrm = c.norm();
            if nrm < 1e-6 {
                ok = false;
                break;
            }
            q.set_column(j, &(c / nrm));
        }
        if ok {
            return q;
        }
    }
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> nalgebra::DVector<f64> {
    loop {
        let v = nalgebra::DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let nrm = v.norm();
        if nrm > 1e-6 {
            return v / nrm;
        }
    }
}

pub fn to_mat7(m: &DMatrix<f64>) -> Mat7 {
    Mat7::from_fn(|r, c| m[(r, c)])
}

pub fn to_dmatrix(m: &Mat7) -> DMatrix<f64> {
    DMatrix::from_fn(7, 7, |r, c| m[(r, c)])
}

/// `Q^T diag(values) Q` for a random orthogonal `Q`.
pub fn random_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64; 7]) -> Mat7 {
    let q = to_mat7(&random_orthogonal(rng, 7));
    let d = Mat7::from_diagonal(&Vec7::from_column_slice(values));
    let m = q.transpose() * d * q;
    (m + m.transpose()) * 0.5
}

/// Random positive definite matrix with eigenvalues in `[lo, hi]`.
pub fn random_pds<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Mat7 {
    let vals: [f64; 7] = std::array::from_fn(|_| rng.random_range(lo..hi));
    random_with_spectrum(rng, &vals)
}
