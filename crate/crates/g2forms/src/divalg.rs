//! Eight-dimensional flexible quadratic division algebras `R x R^7` built from
//! a positive definite symmetric `delta` through the dissident map
//! `eta(v, w) = delta (delta v x delta w)`.

use nalgebra::{SMatrix, SVector};
use rand::Rng;

use crate::cayley::G2Element;
use crate::normalform::{is_conjugate_with, Tolerances};
use crate::symeig::jacobi;
use crate::vecprod7::cross;
use crate::{Error, Mat7, Result, Vec7};

pub type Vec8 = SVector<f64, 8>;
pub type Mat8 = SMatrix<f64, 8, 8>;

/// Relative threshold on the smallest eigenvalue for positive definiteness.
const PDS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DissidentMapSpec {
    delta: Mat7,
}

impl DissidentMapSpec {
    pub fn new(delta: Mat7) -> Result<Self> {
        let asym = (delta - delta.transpose()).amax();
        if !(asym <= 1e-10 * delta.amax().max(1.0)) {
            return Err(Error::NotSymmetric(asym));
        }
        let d = nalgebra::DMatrix::from_fn(7, 7, |r, c| delta[(r, c)]);
        let (vals, _) = jacobi(&d)?;
        let low = vals[0];
        if !(low > PDS_TOL * vals[6].abs().max(1.0)) {
            return Err(Error::NotPositiveDefinite(low));
        }
        Ok(DissidentMapSpec {
            delta: (delta + delta.transpose()) * 0.5,
        })
    }

    pub fn delta(&self) -> &Mat7 {
        &self.delta
    }
}

pub fn eta(spec: &DissidentMapSpec, v: &Vec7, w: &Vec7) -> Vec7 {
    let d = &spec.delta;
    d * cross(&(d * v), &(d * w))
}

/// Multiplication on `R x R^7` by structure constants: `(x y)_k = sum c[k](i, j) x_i y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra8 {
    pub c: [Mat8; 8],
}

impl Algebra8 {
    /// `(a, v)(b, w) = (ab - <v, w>, a w + b v + eta(v, w))` for an
    /// anti-symmetric bilinear `eta`.
    pub fn from_eta<F: Fn(&Vec7, &Vec7) -> Vec7>(eta: F) -> Self {
        let mut c = [Mat8::zeros(); 8];
        c[0][(0, 0)] = 1.0;
        for i in 0..7 {
            c[i + 1][(0, i + 1)] = 1.0;
            c[i + 1][(i + 1, 0)] = 1.0;
            c[0][(i + 1, i + 1)] = -1.0;
        }
        for i in 0..7 {
            for j in 0..7 {
                let p = eta(&crate::basis(i), &crate::basis(j));
                for k in 0..7 {
                    c[k + 1][(i + 1, j + 1)] = p[k];
                }
            }
        }
        Algebra8 { c }
    }

    pub fn mul(&self, x: &Vec8, y: &Vec8) -> Vec8 {
        Vec8::from_fn(|k, _| x.dot(&(self.c[k] * y)))
    }

    /// Matrix of `y -> a y`.
    pub fn left(&self, a: &Vec8) -> Mat8 {
        Mat8::from_fn(|k, j| (0..8).map(|i| a[i] * self.c[k][(i, j)]).sum())
    }

    /// Matrix of `y -> y a`.
    pub fn right(&self, a: &Vec8) -> Mat8 {
        Mat8::from_fn(|k, i| (0..8).map(|j| self.c[k][(i, j)] * a[j]).sum())
    }

    pub fn associator(&self, x: &Vec8, y: &Vec8, z: &Vec8) -> Vec8 {
        self.mul(&self.mul(x, y), z) - self.mul(x, &self.mul(y, z))
    }
}

pub fn unit() -> Vec8 {
    let mut e = Vec8::zeros();
    e[0] = 1.0;
    e
}

pub fn build_algebra(spec: &DissidentMapSpec) -> Algebra8 {
    Algebra8::from_eta(|v, w| eta(spec, v, w))
}

fn random_vec8<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    let v = crate::sample::random_unit(rng, 8);
    Vec8::from_column_slice(v.as_slice())
}

/// Largest `|x(yx) - (xy)x| / (|x|^2 |y|)` over random unit samples is at most `tol`.
pub fn check_flexible<R: Rng + ?Sized>(a: &Algebra8, rng: &mut R, samples: usize, tol: f64) -> bool {
    (0..samples).all(|_| {
        let x = random_vec8(rng);
        let y = random_vec8(rng);
        let l = a.mul(&x, &a.mul(&y, &x));
        let r = a.mul(&a.mul(&x, &y), &x);
        (l - r).norm() <= tol
    })
}

/// `|det L_a|` and `|det R_a|` exceed `tol` for every sampled unit `a`.
pub fn check_division<R: Rng + ?Sized>(a: &Algebra8, rng: &mut R, samples: usize, tol: f64) -> bool {
    (0..samples).all(|_| {
        let x = random_vec8(rng);
        a.left(&x).determinant().abs() > tol && a.right(&x).determinant().abs() > tol
    })
}

/// `(a, v) -> (a, sigma v)`.
pub fn lift(sigma: &Mat7) -> Mat8 {
    let mut m = Mat8::zeros();
    m[(0, 0)] = 1.0;
    m.view_mut((1, 1), (7, 7)).copy_from(sigma);
    m
}

/// Largest `|h(xy) - h(x)h(y)|` over random unit pairs, `h` the lift of `sigma`
/// from `a` to `b`.
pub fn morphism_defect<R: Rng + ?Sized>(
    a: &Algebra8,
    b: &Algebra8,
    sigma: &Mat7,
    rng: &mut R,
    samples: usize,
) -> f64 {
    let h = lift(sigma);
    (0..samples)
        .map(|_| {
            let x = random_vec8(rng);
            let y = random_vec8(rng);
            (h * a.mul(&x, &y) - b.mul(&(h * x), &(h * y))).norm()
        })
        .fold(0.0, f64::max)
}

/// `Some(sigma)` in G2 whose lift is an isomorphism from the algebra of `s1`
/// onto that of `s2`.
pub fn are_isomorphic(s1: &DissidentMapSpec, s2: &DissidentMapSpec) -> Result<Option<G2Element>> {
    are_isomorphic_with(s1, s2, &Tolerances::default())
}

pub fn are_isomorphic_with(
    s1: &DissidentMapSpec,
    s2: &DissidentMapSpec,
    tol: &Tolerances,
) -> Result<Option<G2Element>> {
    // g^T d1 g = d2 gives eta2(g^T v, g^T w) = g^T eta1(v, w)
    Ok(is_conjugate_with(&s1.delta, &s2.delta, tol)?.map(|g| g.inverse()))
}
