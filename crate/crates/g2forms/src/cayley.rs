//! Cayley triples, their frames, and explicit elements of G2.

use crate::vecprod7::cross;
use crate::{basis, Error, Mat7, Result, Vec7};
use rand::Rng;
use rand_distr::StandardNormal;

/// `(u, v, z)` with `{u, v, uv, z}` orthonormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CayleyTriple {
    pub u: Vec7,
    pub v: Vec7,
    pub z: Vec7,
}

impl CayleyTriple {
    pub fn new(u: Vec7, v: Vec7, z: Vec7) -> Result<Self> {
        let c = Self { u, v, z };
        let dev = c.deviation();
        if dev > 1e-9 {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(c)
    }

    pub fn standard() -> Self {
        Self {
            u: basis(0),
            v: basis(1),
            z: basis(3),
        }
    }

    /// Largest deviation of the Gram matrix of `{u, v, uv, z}` from the identity.
    pub fn deviation(&self) -> f64 {
        let w = [self.u, self.v, cross(&self.u, &self.v), self.z];
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let t = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((w[i].dot(&w[j]) - t).abs());
            }
        }
        dev
    }

    /// Triple with the signs of `u`, `v`, `z` changed by `s`.
    pub fn with_signs(&self, s: [f64; 3]) -> Self {
        Self {
            u: self.u * s[0],
            v: self.v * s[1],
            z: self.z * s[2],
        }
    }
}

/// Frame `(u, v, uv, z, uz, vz, (uv)z)` as the columns of a 7x7 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame7 {
    pub columns: Mat7,
}

pub fn frame(c: &CayleyTriple) -> Result<Frame7> {
    let dev = c.deviation();
    if dev > 1e-9 {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(frame_unchecked(c))
}

pub(crate) fn frame_unchecked(c: &CayleyTriple) -> Frame7 {
    let uv = cross(&c.u, &c.v);
    let cols = [
        c.u,
        c.v,
        uv,
        c.z,
        cross(&c.u, &c.z),
        cross(&c.v, &c.z),
        cross(&uv, &c.z),
    ];
    Frame7 {
        columns: Mat7::from_columns(&cols),
    }
}

/// Extend an orthonormal pair to a triple; `z` is the normalised projection
/// of `seed` onto `{u, v, uv}^⊥`, or the standard basis vector with the largest
/// projection when the seed is missing or too short.
pub fn complete_to_triple(u: &Vec7, v: &Vec7, seed: Option<&Vec7>) -> Result<CayleyTriple> {
    let dev = (u.norm() - 1.0)
        .abs()
        .max((v.norm() - 1.0).abs())
        .max(u.dot(v).abs());
    if dev > 1e-9 {
        return Err(Error::NotOrthonormal(dev));
    }
    let uv = cross(u, v);
    let proj = |x: &Vec7| x - u * u.dot(x) - v * v.dot(x) - uv * uv.dot(x);
    let z = match seed.map(proj) {
        Some(p) if p.norm() >= 1e-6 => p.normalize(),
        _ => {
            let mut best = proj(&basis(0));
            for k in 1..7 {
                let p = proj(&basis(k));
                if p.norm() > best.norm() + 1e-12 {
                    best = p;
                }
            }
            best.normalize()
        }
    };
    CayleyTriple::new(*u, *v, z)
}

/// An orthogonal 7x7 matrix known to preserve the vector product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Element {
    pub matrix: Mat7,
}

impl G2Element {
    pub fn identity() -> Self {
        Self {
            matrix: Mat7::identity(),
        }
    }

    pub fn compose(&self, other: &G2Element) -> G2Element {
        G2Element {
            matrix: self.matrix * other.matrix,
        }
    }

    pub fn inverse(&self) -> G2Element {
        G2Element {
            matrix: self.matrix.transpose(),
        }
    }
}

/// The unique automorphism taking `c` to `c2`.
pub fn g2_between(c: &CayleyTriple, c2: &CayleyTriple) -> Result<G2Element> {
    let f = frame(c)?;
    let f2 = frame(c2)?;
    Ok(G2Element {
        matrix: f2.columns * f.columns.transpose(),
    })
}

/// The element mapping the standard triple to `c`, i.e. the frame matrix.
pub fn g2_from_triple(c: &CayleyTriple) -> Result<G2Element> {
    Ok(G2Element {
        matrix: frame(c)?.columns,
    })
}

fn random_unit_in_complement<R: Rng + ?Sized>(rng: &mut R, against: &[Vec7]) -> Vec7 {
    loop {
        let mut x = Vec7::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        for q in against {
            x -= q * q.dot(&x);
        }
        let n = x.norm();
        if n > 1e-3 {
            return x / n;
        }
    }
}

pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> CayleyTriple {
    let u = random_unit_in_complement(rng, &[]);
    let v = random_unit_in_complement(rng, &[u]);
    let uv = cross(&u, &v);
    let z = random_unit_in_complement(rng, &[u, v, uv]);
    CayleyTriple { u, v, z }
}

pub fn random_g2<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    G2Element {
        matrix: frame_unchecked(&random_triple(rng)).columns,
    }
}

pub fn is_automorphism(g: &Mat7) -> bool {
    automorphism_defect(g) <= 1e-8
}

/// Max of the orthogonality defect and the product defect over basis pairs.
pub fn automorphism_defect(g: &Mat7) -> f64 {
    let orth = (g.transpose() * g - Mat7::identity()).amax();
    let mut prod: f64 = 0.0;
    for i in 0..7 {
        for j in (i + 1)..7 {
            let gi = g.column(i).into_owned();
            let gj = g.column(j).into_owned();
            let lhs = g * cross(&basis(i), &basis(j));
            prod = prod.max((lhs - cross(&gi, &gj)).amax());
        }
    }
    orth.max(prod)
}

/// `F^T delta F` for the frame `F` of `c`: the matrix of `delta` in the basis `b_c`.
pub fn conjugate_repr(delta: &Mat7, c: &CayleyTriple) -> Result<Mat7> {
    let asym = (delta - delta.transpose()).amax();
    if asym > 1e-10 * delta.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let f = frame(c)?.columns;
    let m = f.transpose() * delta * f;
    Ok((m + m.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_frame_is_identity() {
        let f = frame(&CayleyTriple::standard()).unwrap();
        assert_eq!(f.columns, Mat7::identity());
    }

    #[test]
    fn swapped_triple_frame() {
        let c = CayleyTriple::new(basis(1), basis(0), basis(3)).unwrap();
        let f = frame(&c).unwrap().columns;
        assert_eq!(f.column(2).into_owned(), -basis(2));
        assert_eq!(f.column(4).into_owned(), basis(5));
    }

    #[test]
    fn completion_examples() {
        let c = complete_to_triple(&basis(0), &basis(1), Some(&basis(3))).unwrap();
        assert_eq!(c.z, basis(3));
        let seed = basis(3) + basis(2);
        let c = complete_to_triple(&basis(0), &basis(1), Some(&seed)).unwrap();
        assert!((c.z - basis(3)).norm() < 1e-15);
        let c = complete_to_triple(&basis(0), &basis(1), None).unwrap();
        assert_eq!(c.z, basis(3));
        assert!(complete_to_triple(&basis(0), &(basis(0) + basis(1)), None).is_err());
    }

    #[test]
    fn minus_identity_is_not_automorphism() {
        assert!(is_automorphism(&Mat7::identity()));
        assert!(!is_automorphism(&(-Mat7::identity())));
    }

    #[test]
    fn signed_permutation_between_swapped_triples() {
        let g = g2_between(
            &CayleyTriple::standard(),
            &CayleyTriple::new(basis(1), basis(0), basis(3)).unwrap(),
        )
        .unwrap();
        assert!(g.matrix.iter().all(|x| *x == 0.0 || x.abs() == 1.0));
        assert!(is_automorphism(&g.matrix));
    }

    #[test]
    fn conjugate_repr_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_triple(&mut rng);
        let r = conjugate_repr(&Mat7::identity(), &c).unwrap();
        assert!((r - Mat7::identity()).amax() < 1e-14);
        let d = Mat7::from_diagonal(&Vec7::from_fn(|i, _| (i + 1) as f64));
        assert_eq!(conjugate_repr(&d, &CayleyTriple::standard()).unwrap(), d);
        let d2 = Mat7::from_diagonal(&Vec7::from_fn(|i, _| if i == 0 { 2.0 } else { 1.0 }));
        let c2 = complete_to_triple(&basis(1), &basis(0), None).unwrap();
        assert!((conjugate_repr(&d2, &c2).unwrap()[(0, 0)] - 1.0).abs() < 1e-15);
        let mut asym = Mat7::identity();
        asym[(0, 1)] = 1.0;
        assert!(conjugate_repr(&asym, &c).is_err());
    }
}
