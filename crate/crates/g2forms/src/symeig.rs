//! Symmetric eigendecomposition by cyclic Jacobi rotations, clustering of
//! eigenvalues into eigenpairs, and the fifteen multiplicity types of a
//! symmetric endomorphism of R^7.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Mat7, Result, Vec7};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and orthonormal eigenvectors as columns.
pub fn jacobi(a: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence(0));
    }
    let norm = a.norm();
    let asym = (a - a.transpose()).amax();
    if !(asym <= 1e-10 * norm.max(1.0)) {
        return Err(Error::NotSymmetric(asym));
    }
    let mut m = (a + a.transpose()) * 0.5;
    let mut q = DMatrix::<f64>::identity(n, n);
    let off = |m: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > 1e-13 * norm {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = m[(p, r)];
                if apr == 0.0 {
                    continue;
                }
                let theta = (m[(r, r)] - m[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkr = m[(k, r)];
                    m[(k, p)] = c * mkp - s * mkr;
                    m[(k, r)] = s * mkp + c * mkr;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mrk = m[(r, k)];
                    m[(p, k)] = c * mpk - s * mrk;
                    m[(r, k)] = s * mpk + c * mrk;
                }
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let vals = DVector::from_iterator(n, idx.iter().map(|&i| m[(i, i)]));
    let vecs = DMatrix::from_fn(n, n, |r, c| q[(r, idx[c])]);
    Ok((vals, vecs))
}

/// One of the fifteen partitions of 7 into eigenspace dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    T7,
    T16,
    T25,
    T34,
    T115,
    T124,
    T133,
    T223,
    T1114,
    T1123,
    T1222,
    T11113,
    T11122,
    T111112,
    T1111111,
}

impl TypeTag {
    pub const ALL: [TypeTag; 15] = [
        TypeTag::T7,
        TypeTag::T16,
        TypeTag::T25,
        TypeTag::T34,
        TypeTag::T115,
        TypeTag::T124,
        TypeTag::T133,
        TypeTag::T223,
        TypeTag::T1114,
        TypeTag::T1123,
        TypeTag::T1222,
        TypeTag::T11113,
        TypeTag::T11122,
        TypeTag::T111112,
        TypeTag::T1111111,
    ];

    /// Multiplicities in ascending order.
    pub fn parts(self) -> &'static [usize] {
        match self {
            TypeTag::T7 => &[7],
            TypeTag::T16 => &[1, 6],
            TypeTag::T25 => &[2, 5],
            TypeTag::T34 => &[3, 4],
            TypeTag::T115 => &[1, 1, 5],
            TypeTag::T124 => &[1, 2, 4],
            TypeTag::T133 => &[1, 3, 3],
            TypeTag::T223 => &[2, 2, 3],
            TypeTag::T1114 => &[1, 1, 1, 4],
            TypeTag::T1123 => &[1, 1, 2, 3],
            TypeTag::T1222 => &[1, 2, 2, 2],
            TypeTag::T11113 => &[1, 1, 1, 1, 3],
            TypeTag::T11122 => &[1, 1, 1, 2, 2],
            TypeTag::T111112 => &[1, 1, 1, 1, 1, 2],
            TypeTag::T1111111 => &[1, 1, 1, 1, 1, 1, 1],
        }
    }

    pub fn from_multiplicities(mults: &[usize]) -> Option<TypeTag> {
        let mut m = mults.to_vec();
        m.sort_unstable();
        TypeTag::ALL.into_iter().find(|t| t.parts() == m.as_slice())
    }

    pub fn parse(s: &str) -> Option<TypeTag> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Option<Vec<usize>> = inner.split(',').map(|p| p.trim().parse().ok()).collect();
        Self::from_multiplicities(&parts?)
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub multiplicity: usize,
    pub basis: Vec<Vec7>,
}

impl EigenPair {
    pub fn projector(&self) -> Mat7 {
        self.basis.iter().map(|b| b * b.transpose()).sum()
    }

    pub fn project(&self, v: &Vec7) -> Vec7 {
        self.basis.iter().map(|b| b * b.dot(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure {
    pub pairs: Vec<EigenPair>,
    pub type_tag: TypeTag,
    /// Smallest distance between consecutive distinct eigenvalues.
    pub min_gap: f64,
    /// Largest spread of raw eigenvalues merged into a single eigenpair.
    pub max_spread: f64,
    pub scale: f64,
}

impl EigenStructure {
    /// Eigenpairs of the given multiplicity, in ascending order of value.
    pub fn with_multiplicity(&self, m: usize) -> Vec<&EigenPair> {
        self.pairs.iter().filter(|p| p.multiplicity == m).collect()
    }

    pub fn reconstruct(&self) -> Mat7 {
        self.pairs.iter().map(|p| p.projector() * p.value).sum()
    }
}

pub fn eigen_decompose(a: &Mat7, cluster_tol: f64) -> Result<EigenStructure> {
    let d = DMatrix::from_fn(7, 7, |r, c| a[(r, c)]);
    let (vals, vecs) = jacobi(&d)?;
    let scale = a.norm().max(1.0);
    let tol = cluster_tol * scale;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..7 {
        match groups.last_mut() {
            Some(g) if vals[i] - vals[*g.last().unwrap()] <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut pairs = Vec::new();
    let mut max_spread: f64 = 0.0;
    for g in &groups {
        let value = g.iter().map(|&i| vals[i]).sum::<f64>() / g.len() as f64;
        max_spread = max_spread.max(vals[*g.last().unwrap()] - vals[g[0]]);
        let basis = g
            .iter()
            .map(|&i| Vec7::from_fn(|r, _| vecs[(r, i)]))
            .collect();
        pairs.push(EigenPair {
            value,
            multiplicity: g.len(),
            basis,
        });
    }
    let min_gap = pairs
        .windows(2)
        .map(|w| w[1].value - w[0].value)
        .fold(f64::INFINITY, f64::min);
    let mults: Vec<usize> = pairs.iter().map(|p| p.multiplicity).collect();
    let type_tag = TypeTag::from_multiplicities(&mults).expect("multiplicities sum to 7");
    Ok(EigenStructure {
        pairs,
        type_tag,
        min_gap,
        max_spread,
        scale,
    })
}

pub fn classify_type(e: &EigenStructure) -> TypeTag {
    let mults: Vec<usize> = e.pairs.iter().map(|p| p.multiplicity).collect();
    TypeTag::from_multiplicities(&mults).expect("multiplicities sum to 7")
}

/// `|P_W v|` for `W` given by an orthonormal basis.
pub fn proj_norm(w: &[Vec7], v: &Vec7) -> f64 {
    w.iter().map(|b| b.dot(v).powi(2)).sum::<f64>().sqrt()
}
