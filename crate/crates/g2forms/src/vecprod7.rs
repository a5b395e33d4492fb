//! The vector product on R^7 and the m-map of an oriented 3-dimensional
//! subspace.
//!
//! Coordinates are taken with respect to the frame of the standard Cayley
//! triple `(e1, e2, e4)`, so that `e1..e7` play the roles of
//! `u, v, uv, z, uz, vz, (uv)z`.

use crate::{Error, Result, Vec7};

/// `TABLE[i][j] = ±(k+1)` encodes `e_{i+1} e_{j+1} = ±e_{k+1}`; 0 on the diagonal.
const TABLE: [[i8; 7]; 7] = [
    [0, 3, -2, 5, -4, -7, 6],
    [-3, 0, 1, 6, 7, -4, -5],
    [2, -1, 0, 7, -6, 5, -4],
    [-5, -6, -7, 0, 1, 2, 3],
    [4, -7, 6, -1, 0, -3, 2],
    [7, 4, -5, -2, 3, 0, -1],
    [-6, 5, 4, -3, -2, 1, 0],
];

/// Product of two standard basis vectors as `(sign, index)`; `None` when `i == j`.
pub fn basis_product(i: usize, j: usize) -> Option<(f64, usize)> {
    let t = TABLE[i][j];
    if t == 0 {
        None
    } else {
        Some((f64::from(t.signum()), (t.unsigned_abs() - 1) as usize))
    }
}

pub fn cross(x: &Vec7, y: &Vec7) -> Vec7 {
    let mut out = Vec7::zeros();
    for i in 0..7 {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..7 {
            if let Some((s, k)) = basis_product(i, j) {
                out[k] += s * x[i] * y[j];
            }
        }
    }
    out
}

/// An oriented 3-dimensional subspace, stored as a positively oriented
/// orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedSubspace3 {
    basis: [Vec7; 3],
}

impl OrientedSubspace3 {
    pub fn new(b1: Vec7, b2: Vec7, b3: Vec7) -> Result<Self> {
        let b = [b1, b2, b3];
        let mut dev: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((b[i].dot(&b[j]) - target).abs());
            }
        }
        if dev > 1e-10 {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { basis: b })
    }

    /// Gram-Schmidt on a spanning triple, keeping the input order.
    pub fn from_spanning(a: &Vec7, b: &Vec7, c: &Vec7) -> Result<Self> {
        let mut out: Vec<Vec7> = Vec::with_capacity(3);
        for v in [a, b, c] {
            let mut w = *v;
            for q in &out {
                w -= q * q.dot(&w);
            }
            let n = w.norm();
            if n < 1e-12 * v.norm().max(1.0) {
                return Err(Error::NotOrthonormal(n));
            }
            out.push(w / n);
        }
        Ok(Self {
            basis: [out[0], out[1], out[2]],
        })
    }

    pub fn basis(&self) -> &[Vec7; 3] {
        &self.basis
    }

    pub fn reversed(&self) -> Self {
        Self {
            basis: [self.basis[1], self.basis[0], self.basis[2]],
        }
    }

    pub fn project(&self, v: &Vec7) -> Vec7 {
        self.basis.iter().map(|b| b * b.dot(v)).sum()
    }

    fn coords(&self, v: &Vec7) -> [f64; 3] {
        [
            self.basis[0].dot(v),
            self.basis[1].dot(v),
            self.basis[2].dot(v),
        ]
    }
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// `m(v) = |v| e f` where `(e, f, v/|v|)` is a positively oriented
/// orthonormal basis of `S`.
pub fn m_map(s: &OrientedSubspace3, v: &Vec7) -> Result<Vec7> {
    let n = v.norm();
    let off = (v - s.project(v)).norm();
    if off > 1e-9 * n {
        return Err(Error::NotInSubspace(off));
    }
    if n == 0.0 {
        return Ok(Vec7::zeros());
    }
    let vh = s.project(v) / n;
    // first basis vector least aligned with v seeds e
    let seed = s
        .basis
        .iter()
        .min_by(|a, b| a.dot(&vh).abs().total_cmp(&b.dot(&vh).abs()))
        .copied()
        .unwrap_or(s.basis[0]);
    let e = (seed - vh * vh.dot(&seed)).normalize();
    let mut f = {
        let b = s
            .basis
            .iter()
            .map(|b| b - vh * vh.dot(b) - e * e.dot(b))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_else(Vec7::zeros);
        b.normalize()
    };
    if det3(s.coords(&e), s.coords(&f), s.coords(&vh)) < 0.0 {
        f = -f;
    }
    Ok(cross(&e, &f) * n)
}

/// The two orbit invariants of an oriented 3-space: `<S, m(v)>` and the
/// vector `v m(v)`, both independent of the unit vector `v` in `S`.
pub fn s_invariants(s: &OrientedSubspace3) -> (f64, Vec7) {
    let [b1, b2, b3] = s.basis;
    let alignment = b1.dot(&cross(&b2, &b3)).abs();
    let axis = cross(&b1, &cross(&b2, &b3));
    (alignment, axis)
}

/// `S` closed under the product, tested at one unit vector.
pub fn is_closed(s: &OrientedSubspace3, tol: f64) -> bool {
    let mb = cross(&s.basis[1], &s.basis[2]);
    (mb - s.project(&mb)).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis;

    #[test]
    fn table_is_antisymmetric_and_closed() {
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(TABLE[i][j], -TABLE[j][i]);
                if i != j {
                    let k = (TABLE[i][j].unsigned_abs() - 1) as usize;
                    assert!(k != i && k != j);
                }
            }
        }
    }

    #[test]
    fn worked_products() {
        assert_eq!(cross(&basis(0), &basis(1)), basis(2));
        assert_eq!(cross(&basis(5), &basis(6)), -basis(0));
        assert_eq!(cross(&basis(3), &basis(3)), Vec7::zeros());
    }

    #[test]
    fn m_map_examples() {
        let s = OrientedSubspace3::new(basis(0), basis(1), basis(2)).unwrap();
        assert!((m_map(&s, &basis(2)).unwrap() - basis(2)).norm() < 1e-15);
        assert!((m_map(&s, &basis(0)).unwrap() - basis(0)).norm() < 1e-15);
        let t = OrientedSubspace3::new(basis(0), basis(1), basis(3)).unwrap();
        assert!((m_map(&t, &basis(3)).unwrap() - basis(2)).norm() < 1e-15);
        assert!((m_map(&t, &basis(1)).unwrap() + basis(4)).norm() < 1e-15);
        assert_eq!(m_map(&t, &Vec7::zeros()).unwrap(), Vec7::zeros());
        assert!(matches!(
            m_map(&t, &basis(6)),
            Err(Error::NotInSubspace(_))
        ));
    }

    #[test]
    fn invariants_examples() {
        let s = OrientedSubspace3::new(basis(0), basis(1), basis(2)).unwrap();
        let (a, x) = s_invariants(&s);
        assert_eq!(a, 1.0);
        assert_eq!(x, Vec7::zeros());
        let t = OrientedSubspace3::new(basis(0), basis(1), basis(3)).unwrap();
        let (a, x) = s_invariants(&t);
        assert_eq!(a, 0.0);
        assert_eq!(x, -basis(6));
        let at_e1 = cross(&basis(0), &m_map(&t, &basis(0)).unwrap());
        assert_eq!(at_e1, -basis(6));
        assert!(is_closed(&s, 1e-12));
        assert!(!is_closed(&t, 1e-12));
    }
}
