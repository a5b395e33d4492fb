//! The normal form of a symmetric endomorphism of R^7 under conjugation by
//! G2, and the conjugacy test built on it.
//!
//! For each eigenvalue type a Cayley triple is constructed from the
//! eigenspaces (up to the signs of `u`, `v`, `z`). Every sign variant is
//! fitted against the canonical layout of that type; the variant whose
//! parameters lie in the cross-section is returned. Eigenvalues are labelled
//! in ascending order within each multiplicity class; for seven simple
//! eigenvalues the largest one plays the role of `mu`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::cayley::{complete_to_triple, frame_unchecked, CayleyTriple, G2Element};
use crate::orthoparam::{
    compose, factorize, in_k, in_k_prime, in_k_prime_multi, orthogonality_defect, parametrize_sym,
    reduce_rows, sym_from_tau, DiagSpec, TauTuple, ANGLE_TOL,
};
use crate::symeig::{eigen_decompose, jacobi, EigenStructure, TypeTag, DEFAULT_CLUSTER_TOL};
use crate::vecprod7::{cross, is_closed, m_map, OrientedSubspace3};
use crate::{Error, Mat7, Result, Vec7};

/// A frame whose matrix differs from its rebuilt canonical form by more than
/// this (relative to the scale of the input) does not have the layout.
const STRUCT_TOL: f64 = 1e-7;
/// Canonical matrices closer than this (relative) are considered equal.
const SAME_TOL: f64 = 1e-7;
/// Raw angles this close to a boundary value raise the stability warning.
const NEAR_TOL: f64 = 1e-6;
/// Singular values below this span kernels in the triple constructions.
const KERNEL_TOL: f64 = 1e-6;
/// Closedness of a 3-dimensional eigenspace under the product.
const CLOSED_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub cluster_tol: f64,
    pub snap_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            snap_tol: 1e-9,
        }
    }
}

// ---------------------------------------------------------------- blocks

pub fn r_block(a: f64) -> DMatrix<f64> {
    let (s, c) = a.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

pub fn s_block(a: f64, b: f64) -> DMatrix<f64> {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    DMatrix::from_row_slice(
        3,
        3,
        &[ca, -cb * sa, sb * sa, sa, cb * ca, -sb * ca, 0.0, sb, cb],
    )
}

pub fn t_block(a: f64, b: f64, g: f64) -> DMatrix<f64> {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sg, cg) = g.sin_cos();
    DMatrix::from_row_slice(
        5,
        5,
        &[
            ca, 0.0, -sa * cb, sa * sb * cg, -sa * sb * sg, //
            0.0, 1.0, 0.0, 0.0, 0.0, //
            sa, 0.0, ca * cb, -ca * sb * cg, ca * sb * sg, //
            0.0, 0.0, sb, cb * cg, -cb * sg, //
            0.0, 0.0, 0.0, sg, cg,
        ],
    )
}

/// `U_{X, alpha}` for a 4x4 matrix `X` with first row `x`.
pub fn u_block(x: &DMatrix<f64>, a: f64) -> DMatrix<f64> {
    let (sa, ca) = a.sin_cos();
    let mut u = DMatrix::zeros(5, 5);
    let cols = [0usize, 2, 3, 4];
    for (k, &c) in cols.iter().enumerate() {
        u[(0, c)] = -x[(0, k)] * sa;
        u[(1, c)] = x[(0, k)] * ca;
        for r in 1..4 {
            u[(r + 1, c)] = x[(r, k)];
        }
    }
    u[(0, 1)] = ca;
    u[(1, 1)] = sa;
    u
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockParams {
    R(f64),
    S(f64, f64),
    T(f64, f64, f64),
    U { x: DMatrix<f64>, alpha: f64 },
}

pub fn canonical_block(p: &BlockParams) -> Result<DMatrix<f64>> {
    let finite = |v: &[f64]| {
        if v.iter().all(|a| a.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParams("non-finite angle".into()))
        }
    };
    match p {
        BlockParams::R(a) => {
            finite(&[*a])?;
            Ok(r_block(*a))
        }
        BlockParams::S(a, b) => {
            finite(&[*a, *b])?;
            Ok(s_block(*a, *b))
        }
        BlockParams::T(a, b, g) => {
            finite(&[*a, *b, *g])?;
            Ok(t_block(*a, *b, *g))
        }
        BlockParams::U { x, alpha } => {
            finite(&[*alpha])?;
            if x.nrows() != 4 || x.ncols() != 4 {
                return Err(Error::InvalidParams("X must be 4x4".into()));
            }
            let dev = orthogonality_defect(x);
            if dev > 1e-8 {
                return Err(Error::NotOrthogonal(dev));
            }
            Ok(u_block(x, *alpha))
        }
    }
}

// ---------------------------------------------------------------- results

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalParams {
    pub type_tag: TypeTag,
    /// Which set of a multi-set cross-section the form lies in (1-based).
    pub case: u8,
    pub angles: Vec<(&'static str, f64)>,
    /// Parameters of an orthogonal block given by polar coordinates.
    pub tau_block: Option<TauTuple>,
    /// Eigenvalues in the labelled order of the cross-section.
    pub eigenvalues: Vec<f64>,
}

impl CanonicalParams {
    pub fn angle(&self, name: &str) -> Option<f64> {
        self.angles.iter().find(|(n, _)| *n == name).map(|p| p.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormResult {
    pub canonical: Mat7,
    pub params: CanonicalParams,
    /// `g` with `g^T delta g` equal to `canonical`.
    pub witness: G2Element,
    /// Set when a parameter sits within `1e-6` of a case boundary or no
    /// frame produced parameters inside the cross-section.
    pub near_boundary: bool,
    pub residual: f64,
}

// ---------------------------------------------------------------- helpers

fn sub(m: &Mat7, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

fn put(m: &mut Mat7, idx: &[usize], b: &DMatrix<f64>) {
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(i, j)] = b[(r, c)];
        }
    }
}

/// `Q^T diag(vals) Q`.
fn conj_diag(q: &DMatrix<f64>, vals: &[f64]) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(vals));
    let b = q.transpose() * d * q;
    (&b + b.transpose()) * 0.5
}

fn diag7(vals: &[f64]) -> Mat7 {
    Mat7::from_diagonal(&Vec7::from_column_slice(vals))
}

fn project(w: &[Vec7], v: &Vec7) -> Vec7 {
    w.iter().map(|b| b * b.dot(v)).sum()
}

/// Unit vectors `x` in `span(domain)` ordered by `|P_target f(x)|`, ascending.
fn kernel(domain: &[Vec7], f: impl Fn(&Vec7) -> Vec7, target: &[Vec7]) -> Vec<(f64, Vec7)> {
    let d = domain.len();
    let images: Vec<Vec7> = domain.iter().map(&f).collect();
    let k = DMatrix::from_fn(target.len(), d, |t, i| target[t].dot(&images[i]));
    let g = k.transpose() * k;
    let Ok((vals, vecs)) = jacobi(&g) else {
        return Vec::new();
    };
    (0..d)
        .map(|c| {
            let x: Vec7 = (0..d).map(|i| domain[i] * vecs[(i, c)]).sum();
            (vals[c].max(0.0).sqrt(), x.normalize())
        })
        .collect()
}

/// Orthonormal basis of `span(e) ∩ against^⊥`.
fn span_minus(e: &[Vec7], against: &[Vec7]) -> Vec<Vec7> {
    let mut p: Mat7 = e.iter().map(|b| b * b.transpose()).sum();
    let mut q: Vec<Vec7> = Vec::new();
    for a in against {
        let mut w = project(e, a);
        for x in &q {
            w -= x * x.dot(&w);
        }
        if w.norm() > 1e-9 {
            q.push(w.normalize());
        }
    }
    for x in &q {
        p -= x * x.transpose();
    }
    let pd = DMatrix::from_fn(7, 7, |r, c| p[(r, c)]);
    let Ok((vals, vecs)) = jacobi(&pd) else {
        return Vec::new();
    };
    (0..7)
        .rev()
        .filter(|&c| vals[c] > 0.5)
        .map(|c| Vec7::from_fn(|r, _| vecs[(r, c)]))
        .collect()
}

fn triple(u: &Vec7, v: &Vec7, z: &Vec7) -> Option<CayleyTriple> {
    let u = u.normalize();
    let v = (v - u * u.dot(v)).normalize();
    complete_to_triple(&u, &v, Some(z)).ok()
}

fn eig_near(blk: &DMatrix<f64>, value: f64, count: usize) -> Option<Vec<DVector<f64>>> {
    let (vals, vecs) = jacobi(blk).ok()?;
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| (vals[a] - value).abs().total_cmp(&(vals[b] - value).abs()));
    Some(idx[..count].iter().map(|&i| vecs.column(i).into_owned()).collect())
}

/// Angle snapped to `{0, pi/2, pi}`; flags values close to, but not on, them.
/// Snaps closer than this are round-off and do not raise the boundary warning.
const SILENT_SNAP: f64 = 1e-10;

fn settle(raw: f64, snap_tol: f64, near: &mut bool) -> f64 {
    for t in [0.0, FRAC_PI_2, PI] {
        let d = (raw - t).abs();
        if d < snap_tol {
            if d > SILENT_SNAP {
                *near = true;
            }
            return t;
        }
        if d > SILENT_SNAP && d < NEAR_TOL {
            *near = true;
        }
    }
    raw
}

fn is_zero(a: f64) -> bool {
    a.abs() <= ANGLE_TOL
}

fn is_half(a: f64) -> bool {
    (a - FRAC_PI_2).abs() <= ANGLE_TOL
}

/// `[0, pi/2]`
fn closed_q(a: f64) -> bool {
    a >= -ANGLE_TOL && a <= FRAC_PI_2 + ANGLE_TOL
}

/// `]0, pi/2]`
fn left_open_q(a: f64) -> bool {
    a > ANGLE_TOL && a <= FRAC_PI_2 + ANGLE_TOL
}

/// `]0, pi/2[`
fn open_q(a: f64) -> bool {
    a > ANGLE_TOL && a < FRAC_PI_2 - ANGLE_TOL
}

/// `alpha` in `[0, pi)` with `R_alpha^{-1} diag(a, b) R_alpha` on coordinates `(i, j)`.
fn fit_r(m: &Mat7, i: usize, j: usize, a: f64, b: f64) -> f64 {
    let d = a - b;
    let two = (-2.0 * m[(i, j)] / d).atan2((m[(i, i)] - m[(j, j)]) / d);
    (two / 2.0).rem_euclid(PI)
}

/// Settled angle defined modulo `pi`, so `pi` itself folds back to `0`.
fn settle_mod_pi(raw: f64, snap_tol: f64, near: &mut bool) -> f64 {
    let a = settle(raw, snap_tol, near);
    if a == PI {
        0.0
    } else {
        a
    }
}

/// Settled `(alpha, beta)` in `[0, pi)^2` for `S^{-1} diag(a, b, c) S` with
/// distinct values.
fn fit_s3(
    blk: &DMatrix<f64>,
    vals: [f64; 3],
    snap_tol: f64,
    near: &mut bool,
) -> Option<(f64, f64)> {
    let r3 = eig_near(blk, vals[2], 1)?.remove(0);
    let beta = settle_mod_pi(r3[1].atan2(r3[2]).rem_euclid(PI), snap_tol, near);
    let (sb, cb) = beta.sin_cos();
    let r1 = eig_near(blk, vals[0], 1)?.remove(0);
    let alpha = (-cb * r1[1] + sb * r1[2]).atan2(r1[0]).rem_euclid(PI);
    Some((settle_mod_pi(alpha, snap_tol, near), beta))
}

/// Settled `(alpha, beta)` in `[0, pi] x [0, pi)` for `S^{-1} diag(a, b, b) S`.
/// `beta` is zero whenever `alpha` is `0` or `pi`.
fn fit_s_abb(blk: &DMatrix<f64>, a: f64, snap_tol: f64, near: &mut bool) -> Option<(f64, f64)> {
    let mut x = eig_near(blk, a, 1)?.remove(0);
    let eps = 1e-12;
    let flip = if x[2].abs() > eps {
        x[2] < 0.0
    } else if x[1].abs() > eps {
        x[1] > 0.0
    } else {
        x[0] < 0.0
    };
    if flip {
        x = -x;
    }
    let alpha = settle(x[1].hypot(x[2]).atan2(x[0]), snap_tol, near);
    if alpha == 0.0 || alpha == PI || x[1].hypot(x[2]) <= eps {
        return Some((alpha, 0.0));
    }
    let beta = settle(x[2].atan2(-x[1]).rem_euclid(PI), snap_tol, near);
    if beta == PI {
        // x[2] is negligible and x[1] > 0: the flipped vector has beta = 0
        return Some((PI - alpha, 0.0));
    }
    Some((alpha, beta))
}

/// Readings `(alpha, beta, gamma)` of `T^{-1} diag(nu, nu, l3, mu, mu) T` from
/// the `l3` eigenline. Both signs of the line are read when its first entry
/// vanishes.
fn fit_t(blk: &DMatrix<f64>, l3: f64) -> Option<Vec<(f64, f64, f64)>> {
    let x = eig_near(blk, l3, 1)?.remove(0);
    let eps = 1e-12;
    let read = |x: &DVector<f64>| {
        let rest = x[2].hypot(x[3].hypot(x[4]));
        let alpha = x[0].atan2(rest);
        let beta = if rest > eps {
            x[3].hypot(x[4]).atan2(x[2])
        } else {
            0.0
        };
        let gamma = if x[3].hypot(x[4]) > eps {
            x[4].atan2(-x[3])
        } else {
            0.0
        };
        (alpha, beta, gamma)
    };
    if x[0].abs() > 1e-9 {
        Some(vec![read(&(&x * x[0].signum()))])
    } else {
        Some(vec![read(&x), read(&-&x)])
    }
}

// ---------------------------------------------------------------- layouts

/// Canonical layout of one cross-section, with the labelled eigenvalues.
#[derive(Debug, Clone)]
enum Layout {
    Diag([f64; 7]),
    /// `diag(h0, h1, R(a, b; alpha), b I_3)`.
    Big4 { head: [f64; 2], a: f64, b: f64 },
    /// `diag(h I_2, R(a0, a1; alpha), mid, R(b0, b1; theta))`.
    Two3 { h: f64, a: [f64; 2], mid: f64, b: [f64; 2] },
    /// `diag(nu I_2, R(nu, mu; alpha), S(mu, lam, kap; theta, phi))`.
    F1123 { kap: f64, lam: f64, mu: f64, nu: f64 },
    /// `diag(lam, S(lam, kap, mu; alpha, beta), S(mu, nu, nu; theta, phi))`.
    F1222 { kap: f64, lam: f64, mu: f64, nu: f64 },
    /// `diag(l1, l2, l3, mu, S(mu, nu, nu; alpha, beta))`.
    S11122 { l: [f64; 3], mu: f64, nu: f64 },
    /// `diag(l1, l2, T(nu, nu, l3, mu, mu; alpha, beta, gamma))`.
    T11122 { l: [f64; 3], mu: f64, nu: f64 },
    /// `diag(h0, h1, ., at_z, ., ., .)` with the block on `(uv, uz, vz, (uv)z)`
    /// equal to `c(r(tau))` for `tau` in `K_{1,2,3}(d)` (or `K'`).
    KBlock { case: u8, head: [f64; 2], at_z: f64, d: DiagSpec, prime: bool },
    /// `diag(h0, h1, U^{-1} diag(l3, l4, rest) U)` with `U = U_{X, alpha}`.
    UBlock { head: [f64; 2], l3: f64, l4: f64, rest: DiagSpec },
}

struct Fitted {
    canonical: Mat7,
    angles: Vec<(&'static str, f64)>,
    tau: Option<TauTuple>,
    case: u8,
    in_set: bool,
    /// Several in-set frames of one orbit are expected; the engine keeps the
    /// lexicographically largest.
    lex: bool,
    near: bool,
}

const BIG_IDX: [usize; 2] = [2, 3];
const TAIL3: [usize; 3] = [4, 5, 6];
const MID3: [usize; 3] = [1, 2, 3];
const K_IDX: [usize; 4] = [2, 4, 5, 6];
const LAST5: [usize; 5] = [2, 3, 4, 5, 6];

/// Angle set for type (1,2,2,2). Second-case tuples need `sin(theta) sin(phi) != 0`
/// since `(uv)z` in the `nu` eigenspace characterises the third case, and the
/// third case admits `beta = pi/2`. Third-case tuples with `theta = 0` repeat
/// first-case tuples with `phi = 0`.
fn in_l_sets(a: f64, b: f64, t: f64, p: f64) -> bool {
    let l1 = is_zero(a) && closed_q(b) && is_half(t) && closed_q(p);
    let phi_ok = p > ANGLE_TOL;
    let l2_open = open_q(a) && open_q(b) && open_q(t) && phi_ok && p < PI - ANGLE_TOL;
    let l2_half = left_open_q(a)
        && left_open_q(b)
        && left_open_q(t)
        && (is_half(a) || is_half(b) || is_half(t))
        && phi_ok
        && closed_q(p);
    let l3 = is_half(a) && left_open_q(b) && left_open_q(t) && is_zero(p);
    l1 || l2_open || l2_half || l3
}

impl Layout {
    fn fit(&self, m: &Mat7, tol: &Tolerances) -> Option<Fitted> {
        let mut near = false;
        let snap = tol.snap_tol;
        let mut out = Fitted {
            canonical: Mat7::zeros(),
            angles: Vec::new(),
            tau: None,
            case: 1,
            in_set: true,
            lex: false,
            near: false,
        };
        match self {
            Layout::Diag(d) => out.canonical = diag7(d),
            Layout::Big4 { head, a, b } => {
                let al = settle_mod_pi(fit_r(m, 2, 3, *a, *b), snap, &mut near);
                let mut c = diag7(&[head[0], head[1], 0.0, 0.0, *b, *b, *b]);
                put(&mut c, &BIG_IDX, &conj_diag(&r_block(al), &[*a, *b]));
                out.canonical = c;
                out.angles = vec![("alpha", al)];
                out.in_set = closed_q(al);
            }
            Layout::Two3 { h, a, mid, b } => {
                let al = settle_mod_pi(fit_r(m, 2, 3, a[0], a[1]), snap, &mut near);
                let th = settle_mod_pi(fit_r(m, 5, 6, b[0], b[1]), snap, &mut near);
                let mut c = diag7(&[*h, *h, 0.0, 0.0, *mid, 0.0, 0.0]);
                put(&mut c, &BIG_IDX, &conj_diag(&r_block(al), a));
                put(&mut c, &[5, 6], &conj_diag(&r_block(th), b));
                out.canonical = c;
                out.angles = vec![("alpha", al), ("theta", th)];
                out.in_set = (left_open_q(al) && closed_q(th)) || (is_zero(al) && is_zero(th));
            }
            Layout::F1123 { kap, lam, mu, nu } => {
                let al = settle_mod_pi(fit_r(m, 2, 3, *nu, *mu), snap, &mut near);
                let (th, ph) = fit_s3(&sub(m, &TAIL3), [*mu, *lam, *kap], snap, &mut near)?;
                let mut c = diag7(&[*nu, *nu, 0.0, 0.0, 0.0, 0.0, 0.0]);
                put(&mut c, &BIG_IDX, &conj_diag(&r_block(al), &[*nu, *mu]));
                put(&mut c, &TAIL3, &conj_diag(&s_block(th, ph), &[*mu, *lam, *kap]));
                out.canonical = c;
                out.angles = vec![("alpha", al), ("theta", th), ("phi", ph)];
                out.in_set = (left_open_q(al) && closed_q(th) && left_open_q(ph))
                    || (left_open_q(al) && is_zero(th) && is_zero(ph))
                    || (is_zero(al) && is_zero(th) && is_zero(ph));
            }
            Layout::F1222 { kap, lam, mu, nu } => {
                let (al, be) = fit_s3(&sub(m, &MID3), [*lam, *kap, *mu], snap, &mut near)?;
                let (th, ph) = fit_s_abb(&sub(m, &TAIL3), *mu, snap, &mut near)?;
                let mut c = diag7(&[*lam, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
                put(&mut c, &MID3, &conj_diag(&s_block(al, be), &[*lam, *kap, *mu]));
                put(&mut c, &TAIL3, &conj_diag(&s_block(th, ph), &[*mu, *nu, *nu]));
                out.canonical = c;
                out.angles = vec![("alpha", al), ("beta", be), ("theta", th), ("phi", ph)];
                out.in_set = in_l_sets(al, be, th, ph);
            }
            Layout::S11122 { l, mu, nu } => {
                let (al, be) = fit_s_abb(&sub(m, &TAIL3), *mu, snap, &mut near)?;
                let mut c = diag7(&[l[0], l[1], l[2], *mu, 0.0, 0.0, 0.0]);
                put(&mut c, &TAIL3, &conj_diag(&s_block(al, be), &[*mu, *nu, *nu]));
                out.canonical = c;
                out.angles = vec![("alpha", al), ("beta", be)];
                out.in_set = closed_q(al) && closed_q(be);
            }
            Layout::T11122 { l, mu, nu } => {
                let in_t = |a: f64, b: f64, g: f64| {
                    closed_q(a) && a < FRAC_PI_2 - ANGLE_TOL && closed_q(b) && closed_q(g)
                };
                let mut reads = Vec::new();
                for (a0, b0, g0) in fit_t(&sub(m, &LAST5), l[2])? {
                    let mut nr = false;
                    let al = settle(a0, snap, &mut nr);
                    let be = if al == FRAC_PI_2 {
                        0.0
                    } else {
                        settle(b0, snap, &mut nr)
                    };
                    let ga = if al == FRAC_PI_2 || be == 0.0 || be == PI {
                        0.0
                    } else {
                        settle(g0, snap, &mut nr)
                    };
                    reads.push((al, be, ga, nr));
                }
                let k = reads.iter().position(|r| in_t(r.0, r.1, r.2)).unwrap_or(0);
                let (al, be, ga, nr) = reads[k];
                near |= nr;
                let mut c = diag7(&[l[0], l[1], 0.0, 0.0, 0.0, 0.0, 0.0]);
                put(
                    &mut c,
                    &LAST5,
                    &conj_diag(&t_block(al, be, ga), &[*nu, *nu, l[2], *mu, *mu]),
                );
                out.canonical = c;
                out.case = 3;
                out.angles = vec![("alpha", al), ("beta", be), ("gamma", ga)];
                out.in_set = in_t(al, be, ga);
            }
            Layout::KBlock {
                case,
                head,
                at_z,
                d,
                prime,
            } => {
                let tau = parametrize_sym(&sub(m, &K_IDX), d, tol.cluster_tol).ok()?;
                for b in &tau.blocks {
                    for &a in b {
                        settle(a, 0.0, &mut near);
                    }
                }
                let mut c = diag7(&[head[0], head[1], 0.0, *at_z, 0.0, 0.0, 0.0]);
                put(&mut c, &K_IDX, &sym_from_tau(&tau, d));
                out.canonical = c;
                out.case = *case;
                // flipping u, v or z flips one column of the block, so the
                // frames form a full sign orbit with no intersection rule
                out.in_set = if *prime {
                    in_k_prime(&tau, d)
                } else {
                    in_k(&tau, d)
                };
                out.lex = true;
                out.tau = Some(tau);
            }
            Layout::UBlock { head, l3, l4, rest } => {
                let blk = sub(m, &LAST5);
                let mut r3 = eig_near(&blk, *l3, 1)?.remove(0);
                if r3[0] > 0.0 {
                    r3 = -r3;
                }
                if r3[0].abs() < 1e-12 {
                    return None;
                }
                let off = (r3.norm_squared() - r3[1] * r3[1]).max(0.0).sqrt();
                let al = settle(off.atan2(r3[1]), snap, &mut near);
                let sa = al.sin();
                if sa < 1e-9 {
                    return None;
                }
                let mut x = DMatrix::zeros(4, 4);
                for (k, &c) in [0usize, 2, 3, 4].iter().enumerate() {
                    x[(0, k)] = -r3[c] / sa;
                }
                let mut row = 1;
                for (&v, &s) in rest.values.iter().zip(&rest.mults) {
                    for e in eig_near(&blk, v, s)? {
                        for (k, &c) in [0usize, 2, 3, 4].iter().enumerate() {
                            x[(row, k)] = e[c];
                        }
                        row += 1;
                    }
                }
                if orthogonality_defect(&x) > 1e-6 {
                    return None;
                }
                let mut pattern = vec![1];
                pattern.extend(&rest.mults);
                let pd = DiagSpec::pattern(&pattern);
                let tau = factorize(&reduce_rows(&x, &pd)).ok()?;
                for b in &tau.blocks {
                    for &a in b {
                        settle(a, 0.0, &mut near);
                    }
                }
                let xr = compose(&tau);
                let mut vals = vec![*l3, *l4];
                for (&v, &s) in rest.values.iter().zip(&rest.mults) {
                    vals.extend(std::iter::repeat_n(v, s));
                }
                let mut c = diag7(&[head[0], head[1], 0.0, 0.0, 0.0, 0.0, 0.0]);
                put(&mut c, &LAST5, &conj_diag(&u_block(&xr, al), &vals));
                out.canonical = c;
                out.case = 2;
                out.angles = vec![("alpha", al)];
                // u and v flip the columns of vz and uz; z flips uv only at pi/2
                if is_half(al) {
                    out.in_set = in_k_prime(&tau, &pd);
                    out.lex = true;
                } else {
                    out.in_set = open_q(al) && in_k_prime_multi(&tau, &pd, &[2, 3]);
                }
                out.tau = Some(tau);
            }
        }
        out.near = near;
        Some(out)
    }
}

// ---------------------------------------------------------------- triples

fn oriented(x: &[Vec7]) -> Option<OrientedSubspace3> {
    OrientedSubspace3::new(x[0], x[1], x[2]).ok()
}

fn kernel_vectors(k: &[(f64, Vec7)]) -> Vec<Vec7> {
    k.iter()
        .enumerate()
        .filter(|(i, (s, _))| *i == 0 || *s <= KERNEL_TOL)
        .map(|(_, p)| p.1)
        .collect()
}

/// `u, v` given; `S = span(u, v, e)` and `U = S^⊥`.
fn big4_triple(u: &Vec7, v: &Vec7, e: &Vec7, big: &[Vec7]) -> Option<CayleyTriple> {
    let uv = cross(u, v);
    let c = uv.dot(e).abs().min(1.0);
    if (1.0 - c * c).sqrt() > 1e-9 {
        triple(u, v, &(-e))
    } else {
        triple(u, v, &big[0])
    }
}

/// Triple with `u, v` in `x`, `(uv, z)` a rotation of a pair in `x × y`, and
/// `uz` in `y` (`uz_in_y`) or in `z`.
fn lemma_triples(x: &[Vec7], y: &[Vec7], z: &[Vec7], uz_in_y: bool) -> Vec<CayleyTriple> {
    let Some(s) = oriented(x) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if is_closed(&s, CLOSED_TOL) {
        let zv = y[0];
        let k = kernel(x, |w| cross(w, &zv), z);
        if uz_in_y {
            out.extend(triple(&k[0].1, &k[1].1, &zv));
        } else {
            let v = k[0].1;
            if let Some(u) = span_minus(x, &[v]).first() {
                out.extend(triple(u, &v, &zv));
            }
        }
        return out;
    }
    let m = |w: &Vec7| m_map(&s, w).unwrap_or_else(|_| Vec7::zeros());
    for xv in kernel_vectors(&kernel(x, m, z)) {
        let mx = m(&xv);
        // the component of m(x) in x is along x itself
        let c = xv.dot(&mx);
        let e = if c < 0.0 { -xv } else { xv };
        let f = -project(y, &mx);
        if f.norm() < 1e-12 {
            continue;
        }
        let zv = e * f.norm() + f.normalize() * c.abs();
        let dom = span_minus(x, &[xv]);
        let target = if uz_in_y { z } else { y };
        let u = kernel(&dom, |w| cross(w, &zv), target)[0].1;
        if let Some(v) = span_minus(x, &[u, xv]).first() {
            let v = if cross(&u, v).dot(&mx) < 0.0 { -v } else { *v };
            out.extend(triple(&u, &v, &zv));
        }
    }
    out
}

fn triples_1123(kap: &[Vec7], lam: &[Vec7], mu: &[Vec7], nu: &[Vec7]) -> Vec<CayleyTriple> {
    let Some(s) = oriented(nu) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let lk: Vec<Vec7> = lam.iter().chain(kap).copied().collect();
    if is_closed(&s, CLOSED_TOL) {
        let zv = mu[0];
        let mk: Vec<Vec7> = mu.iter().chain(kap).copied().collect();
        let u = kernel(nu, |w| cross(w, &zv), &lk)[0].1;
        let v = kernel(nu, |w| cross(w, &zv), &mk)[0].1;
        out.extend(triple(&u, &v, &zv));
        return out;
    }
    let m = |w: &Vec7| m_map(&s, w).unwrap_or_else(|_| Vec7::zeros());
    for xv in kernel_vectors(&kernel(nu, m, &lk)) {
        let mx = m(&xv);
        let zv = xv - mx * xv.dot(&mx);
        if zv.norm() < 1e-12 {
            continue;
        }
        let dom = span_minus(nu, &[xv]);
        for target in [lam, kap] {
            let u = kernel(&dom, |w| cross(w, &zv), target)[0].1;
            if let Some(v) = span_minus(nu, &[u, xv]).first() {
                let v = if cross(&u, v).dot(&mx) < 0.0 { -v } else { *v };
                out.extend(triple(&u, &v, &zv));
            }
        }
    }
    out
}

fn triples_1222(kap: &[Vec7], lam: &[Vec7], mu: &[Vec7], nu: &[Vec7]) -> Vec<CayleyTriple> {
    let sb: Vec<Vec7> = kap.iter().chain(lam).copied().collect();
    let Some(s) = oriented(&sb) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let from_z = |zv: &Vec7, out: &mut Vec<CayleyTriple>| {
        let u = kernel(lam, |w| cross(w, zv), mu)[0].1;
        if let Some(v) = span_minus(lam, &[u]).first() {
            out.extend(triple(&u, v, zv));
        }
    };
    if is_closed(&s, CLOSED_TOL) {
        from_z(&mu[0], &mut out);
        return out;
    }
    let m = |w: &Vec7| m_map(&s, w).unwrap_or_else(|_| Vec7::zeros());
    let k = kap[0];
    let mk = m(&k);
    let zk = k - mk * k.dot(&mk);
    if zk.norm() > 1e-12 {
        from_z(&zk.normalize(), &mut out);
    }
    let kv = kernel_vectors(&kernel(&sb, m, nu));
    let mut es = kv.clone();
    if kv.len() > 1 {
        es.extend(span_minus(&kv, kap));
    }
    for e in es {
        let Some(u) = span_minus(lam, &[e]).first().copied() else {
            continue;
        };
        let Some(v) = span_minus(&sb, &[e, u]).first().copied() else {
            continue;
        };
        let uv = cross(&u, &v);
        let zv = e - uv * e.dot(&uv);
        if zv.norm() > 1e-12 {
            out.extend(triple(&u, &v, &zv));
        }
    }
    out
}

struct Plan {
    labels: Vec<f64>,
    candidates: Vec<(CayleyTriple, Layout)>,
}

fn plan(es: &EigenStructure) -> Plan {
    let by = |m: usize| -> Vec<(f64, Vec<Vec7>)> {
        es.with_multiplicity(m)
            .into_iter()
            .map(|p| (p.value, p.basis.clone()))
            .collect()
    };
    let ones = by(1);
    let labels: Vec<f64>;
    let mut cands: Vec<(CayleyTriple, Layout)> = Vec::new();
    let mut push = |c: Option<CayleyTriple>, l: &Layout| {
        if let Some(c) = c {
            cands.push((c, l.clone()));
        }
    };
    match es.type_tag {
        TypeTag::T7 => {
            let l = es.pairs[0].value;
            labels = vec![l];
            push(Some(CayleyTriple::standard()), &Layout::Diag([l; 7]));
        }
        TypeTag::T16 | TypeTag::T25 | TypeTag::T115 => {
            let (head, tail): (Vec<(f64, Vec<Vec7>)>, (f64, Vec<Vec7>)) = match es.type_tag {
                TypeTag::T16 => (ones.clone(), by(6)[0].clone()),
                TypeTag::T25 => (by(2), by(5)[0].clone()),
                _ => (ones.clone(), by(5)[0].clone()),
            };
            let hb: Vec<Vec7> = head.iter().flat_map(|p| p.1.clone()).collect();
            let mut d = [tail.0; 7];
            let mut k = 0;
            for p in &head {
                for _ in 0..p.1.len() {
                    d[k] = p.0;
                    k += 1;
                }
            }
            labels = head.iter().map(|p| p.0).chain([tail.0]).collect();
            let v = if hb.len() > 1 { hb[1] } else { tail.1[0] };
            push(triple(&hb[0], &v, &tail.1[tail.1.len() - 1]), &Layout::Diag(d));
        }
        TypeTag::T1114 | TypeTag::T124 | TypeTag::T34 => {
            let big = by(4)[0].clone();
            let (u, v, e, head, a) = match es.type_tag {
                TypeTag::T1114 => {
                    labels = vec![ones[0].0, ones[1].0, ones[2].0, big.0];
                    (ones[0].1[0], ones[1].1[0], ones[2].1[0], [ones[0].0, ones[1].0], ones[2].0)
                }
                TypeTag::T124 => {
                    let two = by(2)[0].clone();
                    labels = vec![ones[0].0, two.0, big.0];
                    (two.1[0], two.1[1], ones[0].1[0], [two.0, two.0], ones[0].0)
                }
                _ => {
                    let three = by(3)[0].clone();
                    labels = vec![three.0, big.0];
                    (three.1[0], three.1[1], three.1[2], [three.0, three.0], three.0)
                }
            };
            let lay = Layout::Big4 { head, a, b: big.0 };
            push(big4_triple(&u, &v, &e, &big.1), &lay);
        }
        TypeTag::T133 => {
            let threes = by(3);
            let (l, mu, nu) = (&ones[0], &threes[0], &threes[1]);
            labels = vec![l.0, mu.0, nu.0];
            let lay = Layout::Two3 {
                h: mu.0,
                a: [mu.0, nu.0],
                mid: nu.0,
                b: [nu.0, l.0],
            };
            for c in lemma_triples(&mu.1, &nu.1, &l.1, true) {
                push(Some(c), &lay);
            }
        }
        TypeTag::T223 => {
            let twos = by(2);
            let (l, mu, nu) = (&twos[0], &twos[1], &by(3)[0]);
            labels = vec![l.0, mu.0, nu.0];
            let lay = Layout::Two3 {
                h: nu.0,
                a: [nu.0, l.0],
                mid: mu.0,
                b: [l.0, mu.0],
            };
            for c in lemma_triples(&nu.1, &l.1, &mu.1, false) {
                push(Some(c), &lay);
            }
        }
        TypeTag::T1123 => {
            let (kap, lam, mu, nu) = (&ones[0], &ones[1], &by(2)[0], &by(3)[0]);
            labels = vec![kap.0, lam.0, mu.0, nu.0];
            let lay = Layout::F1123 {
                kap: kap.0,
                lam: lam.0,
                mu: mu.0,
                nu: nu.0,
            };
            for c in triples_1123(&kap.1, &lam.1, &mu.1, &nu.1) {
                push(Some(c), &lay);
            }
        }
        TypeTag::T1222 => {
            let twos = by(2);
            let (kap, lam, mu, nu) = (&ones[0], &twos[0], &twos[1], &twos[2]);
            labels = vec![kap.0, lam.0, mu.0, nu.0];
            let lay = Layout::F1222 {
                kap: kap.0,
                lam: lam.0,
                mu: mu.0,
                nu: nu.0,
            };
            for c in triples_1222(&kap.1, &lam.1, &mu.1, &nu.1) {
                push(Some(c), &lay);
            }
        }
        TypeTag::T11122 => {
            let twos = by(2);
            let (mu, nu) = (&twos[0], &twos[1]);
            let l = [ones[0].0, ones[1].0, ones[2].0];
            labels = vec![l[0], l[1], l[2], mu.0, nu.0];
            let (u, v) = (ones[0].1[0], ones[1].1[0]);
            let uv = cross(&u, &v);
            push(
                triple(&u, &v, &mu.1[0]),
                &Layout::S11122 { l, mu: mu.0, nu: nu.0 },
            );
            let d = DiagSpec {
                values: vec![mu.0, l[2], nu.0],
                mults: vec![1, 1, 2],
            };
            if let Some(z) = span_minus(&mu.1, &[uv]).first() {
                push(
                    triple(&u, &v, z),
                    &Layout::KBlock {
                        case: 2,
                        head: [l[0], l[1]],
                        at_z: mu.0,
                        d,
                        prime: true,
                    },
                );
            }
            if let Some(z) = span_minus(&nu.1, &[uv]).first() {
                push(triple(&u, &v, z), &Layout::T11122 { l, mu: mu.0, nu: nu.0 });
            }
        }
        TypeTag::T11113 | TypeTag::T111112 | TypeTag::T1111111 => {
            let (lams, mu): (Vec<(f64, Vec<Vec7>)>, (f64, Vec<Vec7>)) = match es.type_tag {
                TypeTag::T1111111 => (ones[..6].to_vec(), ones[6].clone()),
                TypeTag::T111112 => (ones.clone(), by(2)[0].clone()),
                _ => (ones.clone(), by(3)[0].clone()),
            };
            labels = lams.iter().map(|p| p.0).chain([mu.0]).collect();
            let (u, v) = (lams[0].1[0], lams[1].1[0]);
            let uv = cross(&u, &v);
            let mut values: Vec<f64> = lams[3..].iter().map(|p| p.0).collect();
            let mut mults = vec![1; values.len()];
            values.push(mu.0);
            mults.push(mu.1.len());
            let head = [lams[0].0, lams[1].0];
            push(
                triple(&u, &v, &lams[2].1[0]),
                &Layout::KBlock {
                    case: 1,
                    head,
                    at_z: lams[2].0,
                    d: DiagSpec {
                        values: values.clone(),
                        mults: mults.clone(),
                    },
                    prime: false,
                },
            );
            let e = [lams[2].1[0], lams[3].1[0]];
            if let Some(z) = span_minus(&e, &[uv]).first() {
                push(
                    triple(&u, &v, z),
                    &Layout::UBlock {
                        head,
                        l3: lams[2].0,
                        l4: lams[3].0,
                        rest: DiagSpec {
                            values: values[1..].to_vec(),
                            mults: mults[1..].to_vec(),
                        },
                    },
                );
            }
        }
    }
    Plan {
        labels,
        candidates: cands,
    }
}

// ---------------------------------------------------------------- engine

const SIGNS: [[f64; 3]; 8] = [
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [-1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
    [-1.0, -1.0, -1.0],
];

/// Row-major comparison of the upper triangles; differences below `tol` tie.
fn lex_cmp(a: &Mat7, b: &Mat7, tol: f64) -> Ordering {
    for i in 0..7 {
        for j in i..7 {
            let d = a[(i, j)] - b[(i, j)];
            if d.abs() > tol {
                return if d > 0.0 { Ordering::Greater } else { Ordering::Less };
            }
        }
    }
    Ordering::Equal
}

pub fn normal_form(delta: &Mat7) -> Result<NormalFormResult> {
    normal_form_with(delta, &Tolerances::default())
}

/// A frame fitted against the layout of the cross-section.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedFrame {
    pub canonical: Mat7,
    pub case: u8,
    pub angles: Vec<(&'static str, f64)>,
    pub in_set: bool,
    pub residual: f64,
    pub triple: CayleyTriple,
    pub tau: Option<TauTuple>,
}

/// Every sign variant of every constructed triple whose matrix has the
/// canonical layout, for diagnostics.
pub fn fitted_frames(delta: &Mat7, tol: &Tolerances) -> Result<Vec<FittedFrame>> {
    let (fits, scale, _, _) = fit_all(delta, tol)?;
    Ok(fits
        .into_iter()
        .filter(|f| f.1 <= STRUCT_TOL * scale)
        .map(|(f, r, c)| FittedFrame {
            canonical: f.canonical,
            case: f.case,
            angles: f.angles,
            in_set: f.in_set,
            residual: r,
            triple: c,
            tau: f.tau,
        })
        .collect())
}

type Fits = (Vec<(Fitted, f64, CayleyTriple)>, f64, Vec<f64>, TypeTag);

fn fit_all(delta: &Mat7, tol: &Tolerances) -> Result<Fits> {
    let asym = (delta - delta.transpose()).amax();
    if !(asym <= 1e-10 * delta.amax().max(1.0)) {
        return Err(Error::NotSymmetric(asym));
    }
    let es = eigen_decompose(delta, tol.cluster_tol)?;
    let limit = 10.0 * tol.cluster_tol * es.scale;
    if es.min_gap < limit {
        return Err(Error::DegenerateSpectrum {
            gap: es.min_gap,
            limit,
        });
    }
    let scale = es.scale;
    let plan = plan(&es);
    let sym = (delta + delta.transpose()) * 0.5;
    let mut fits: Vec<(Fitted, f64, CayleyTriple)> = Vec::new();
    for (c, layout) in &plan.candidates {
        for s in SIGNS {
            let cs = c.with_signs(s);
            let f = frame_unchecked(&cs).columns;
            let m = f.transpose() * sym * f;
            let m = (m + m.transpose()) * 0.5;
            if let Some(fit) = layout.fit(&m, tol) {
                let r = (fit.canonical - m).norm();
                fits.push((fit, r, cs));
            }
        }
    }
    Ok((fits, scale, plan.labels, es.type_tag))
}

pub fn normal_form_with(delta: &Mat7, tol: &Tolerances) -> Result<NormalFormResult> {
    let (fits, scale, labels, type_tag) = fit_all(delta, tol)?;
    let best_residual = fits.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    let valid: Vec<&(Fitted, f64, CayleyTriple)> =
        fits.iter().filter(|f| f.1 <= STRUCT_TOL * scale).collect();
    if valid.is_empty() {
        return Err(Error::NoNormalForm(best_residual));
    }
    let in_set: Vec<&(Fitted, f64, CayleyTriple)> =
        valid.iter().copied().filter(|f| f.0.in_set).collect();
    let same = SAME_TOL * scale;
    let pool = if in_set.is_empty() { &valid } else { &in_set };
    let mut chosen = pool[0];
    let mut distinct = false;
    for f in &pool[1..] {
        match lex_cmp(&f.0.canonical, &chosen.0.canonical, same) {
            Ordering::Greater => {
                distinct |= !(f.0.lex && chosen.0.lex);
                chosen = f;
            }
            Ordering::Less => distinct |= !(f.0.lex && chosen.0.lex),
            Ordering::Equal if f.1 < chosen.1 => chosen = f,
            Ordering::Equal => {}
        }
    }
    let (fit, residual, c) = chosen;
    let near = fit.near || in_set.is_empty() || distinct;
    Ok(NormalFormResult {
        canonical: fit.canonical,
        params: CanonicalParams {
            type_tag,
            case: fit.case,
            angles: fit.angles.clone(),
            tau_block: fit.tau.clone(),
            eigenvalues: labels,
        },
        witness: G2Element {
            matrix: frame_unchecked(c).columns,
        },
        near_boundary: near,
        residual: *residual,
    })
}

/// `M` equals its own normal form within `1e-8` (relative).
pub fn in_cross_section(m: &Mat7) -> bool {
    match normal_form(m) {
        Ok(r) => (r.canonical - m).norm() <= 1e-8 * m.norm().max(1.0),
        Err(_) => false,
    }
}

/// `Some(g)` with `g^T a g = b` when `a` and `b` are conjugate under G2.
pub fn is_conjugate(a: &Mat7, b: &Mat7) -> Result<Option<G2Element>> {
    is_conjugate_with(a, b, &Tolerances::default())
}

pub fn is_conjugate_with(a: &Mat7, b: &Mat7, tol: &Tolerances) -> Result<Option<G2Element>> {
    let na = normal_form_with(a, tol)?;
    let nb = normal_form_with(b, tol)?;
    if na.params.type_tag != nb.params.type_tag {
        return Ok(None);
    }
    let d = (na.canonical - nb.canonical).norm();
    if d <= 1e-6 * a.norm().max(1.0) {
        Ok(Some(na.witness.compose(&nb.witness.inverse())))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------- sampling

/// Distinct eigenvalues with gaps of at least `0.1`, in the labelled order
/// of the cross-section for `tag`.
pub fn sample_labels<R: Rng + ?Sized>(rng: &mut R, tag: TypeTag) -> Vec<f64> {
    let parts = tag.parts();
    let mut vals: Vec<f64> = Vec::with_capacity(parts.len());
    let mut x = rng.random_range(-2.0..-1.0);
    for _ in parts {
        vals.push(x);
        x += rng.random_range(0.1..0.9);
    }
    for i in (1..vals.len()).rev() {
        vals.swap(i, rng.random_range(0..=i));
    }
    let mut i = 0;
    while i < parts.len() {
        let j = (i..parts.len()).find(|&j| parts[j] != parts[i]).unwrap_or(parts.len());
        vals[i..j].sort_by(f64::total_cmp);
        i = j;
    }
    vals
}

/// Angle from one of the pieces `0`, `pi/2`, or the interior of `]0, pi/2[`
/// kept `0.01` away from both ends.
fn pick<R: Rng + ?Sized>(rng: &mut R, pieces: &[u8]) -> f64 {
    match pieces[rng.random_range(0..pieces.len())] {
        0 => 0.0,
        1 => FRAC_PI_2,
        _ => rng.random_range(0.01..FRAC_PI_2 - 0.01),
    }
}

fn k_clean(r: &NormalFormResult) -> bool {
    if r.near_boundary {
        return false;
    }
    r.params.tau_block.as_ref().is_none_or(|t| {
        t.blocks.iter().flatten().all(|&a| {
            [0.0, FRAC_PI_2, PI]
                .iter()
                .all(|b| (a - b).abs() < 1e-12 || (a - b).abs() >= 1e-3)
        })
    })
}

/// A random canonical matrix of type `tag`, with parameters inside the
/// cross-section and at least `1e-3` away from interior case boundaries.
pub fn sample_canonical<R: Rng + ?Sized>(rng: &mut R, tag: TypeTag) -> Mat7 {
    loop {
        let l = sample_labels(rng, tag);
        let mut c: Mat7;
        let r = |c: &mut Mat7, idx: &[usize], a: f64, v: &[f64]| {
            put(c, idx, &conj_diag(&r_block(a), v))
        };
        let sb = |c: &mut Mat7, idx: &[usize], a: f64, b: f64, v: &[f64]| {
            put(c, idx, &conj_diag(&s_block(a, b), v))
        };
        match tag {
            TypeTag::T7 => return diag7(&[l[0]; 7]),
            TypeTag::T16 => return diag7(&[l[0], l[1], l[1], l[1], l[1], l[1], l[1]]),
            TypeTag::T25 => return diag7(&[l[0], l[0], l[1], l[1], l[1], l[1], l[1]]),
            TypeTag::T115 => return diag7(&[l[0], l[1], l[2], l[2], l[2], l[2], l[2]]),
            TypeTag::T1114 | TypeTag::T124 | TypeTag::T34 => {
                let (h, a, b) = match tag {
                    TypeTag::T1114 => ([l[0], l[1]], l[2], l[3]),
                    TypeTag::T124 => ([l[1], l[1]], l[0], l[2]),
                    _ => ([l[0], l[0]], l[0], l[1]),
                };
                c = diag7(&[h[0], h[1], 0.0, 0.0, b, b, b]);
                r(&mut c, &BIG_IDX, pick(rng, &[0, 1, 2]), &[a, b]);
            }
            TypeTag::T133 | TypeTag::T223 => {
                let (h, a, mid, b) = if tag == TypeTag::T133 {
                    (l[1], [l[1], l[2]], l[2], [l[2], l[0]])
                } else {
                    (l[2], [l[2], l[0]], l[1], [l[0], l[1]])
                };
                let (al, th) = if rng.random_bool(0.2) {
                    (0.0, 0.0)
                } else {
                    (pick(rng, &[1, 2]), pick(rng, &[0, 1, 2]))
                };
                c = diag7(&[h, h, 0.0, 0.0, mid, 0.0, 0.0]);
                r(&mut c, &BIG_IDX, al, &a);
                r(&mut c, &[5, 6], th, &b);
            }
            TypeTag::T1123 => {
                let (kap, lam, mu, nu) = (l[0], l[1], l[2], l[3]);
                let (al, th, ph) = match rng.random_range(0..3) {
                    0 => (0.0, 0.0, 0.0),
                    1 => (pick(rng, &[1, 2]), 0.0, 0.0),
                    _ => (pick(rng, &[1, 2]), pick(rng, &[0, 1, 2]), pick(rng, &[1, 2])),
                };
                c = diag7(&[nu, nu, 0.0, 0.0, 0.0, 0.0, 0.0]);
                r(&mut c, &BIG_IDX, al, &[nu, mu]);
                sb(&mut c, &TAIL3, th, ph, &[mu, lam, kap]);
            }
            TypeTag::T1222 => {
                let (kap, lam, mu, nu) = (l[0], l[1], l[2], l[3]);
                let open = |rng: &mut R| pick(rng, &[2]);
                let (a, b, t, p) = match rng.random_range(0..4) {
                    0 => (0.0, pick(rng, &[0, 1, 2]), FRAC_PI_2, pick(rng, &[0, 1, 2])),
                    1 => {
                        let p = if rng.random_bool(0.3) {
                            FRAC_PI_2
                        } else {
                            rng.random_range(0.01..PI - 0.01)
                        };
                        (open(rng), open(rng), open(rng), p)
                    }
                    2 => {
                        let mut v = [pick(rng, &[1, 2]), pick(rng, &[1, 2]), pick(rng, &[1, 2])];
                        v[rng.random_range(0..3)] = FRAC_PI_2;
                        (v[0], v[1], v[2], pick(rng, &[1, 2]))
                    }
                    _ => (FRAC_PI_2, pick(rng, &[1, 2]), pick(rng, &[1, 2]), 0.0),
                };
                c = diag7(&[lam, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
                sb(&mut c, &MID3, a, b, &[lam, kap, mu]);
                sb(&mut c, &TAIL3, t, p, &[mu, nu, nu]);
            }
            TypeTag::T11122 => {
                let (mu, nu) = (l[3], l[4]);
                match rng.random_range(0..3) {
                    0 => {
                        let a = pick(rng, &[0, 1, 2]);
                        let b = if a == 0.0 { 0.0 } else { pick(rng, &[0, 1, 2]) };
                        c = diag7(&[l[0], l[1], l[2], mu, 0.0, 0.0, 0.0]);
                        sb(&mut c, &TAIL3, a, b, &[mu, nu, nu]);
                    }
                    1 => {
                        let q = crate::sample::random_orthogonal(rng, 4);
                        c = diag7(&[l[0], l[1], 0.0, mu, 0.0, 0.0, 0.0]);
                        put(&mut c, &K_IDX, &conj_diag(&q, &[mu, l[2], nu, nu]));
                        match normal_form(&c) {
                            Ok(res) if k_clean(&res) && res.params.case == 2 => {
                                return res.canonical
                            }
                            _ => continue,
                        }
                    }
                    _ => {
                        let a = pick(rng, &[0, 2]);
                        let b = pick(rng, &[0, 1, 2]);
                        let g = if b == 0.0 { 0.0 } else { pick(rng, &[0, 1, 2]) };
                        c = diag7(&[l[0], l[1], 0.0, 0.0, 0.0, 0.0, 0.0]);
                        put(&mut c, &LAST5, &conj_diag(&t_block(a, b, g), &[nu, nu, l[2], mu, mu]));
                    }
                }
            }
            TypeTag::T11113 | TypeTag::T111112 | TypeTag::T1111111 => {
                let k = match tag {
                    TypeTag::T11113 => 4,
                    TypeTag::T111112 => 5,
                    _ => 6,
                };
                let mu = l[k];
                let mut d4: Vec<f64> = l[3..k].to_vec();
                d4.extend(std::iter::repeat_n(mu, 7 - k));
                if rng.random_bool(0.5) {
                    let q = crate::sample::random_orthogonal(rng, 4);
                    c = diag7(&[l[0], l[1], 0.0, l[2], 0.0, 0.0, 0.0]);
                    put(&mut c, &K_IDX, &conj_diag(&q, &d4));
                } else {
                    let x = crate::sample::random_orthogonal(rng, 4);
                    let a = pick(rng, &[1, 2]);
                    let mut vals = vec![l[2]];
                    vals.extend(&d4);
                    c = diag7(&[l[0], l[1], 0.0, 0.0, 0.0, 0.0, 0.0]);
                    put(&mut c, &LAST5, &conj_diag(&u_block(&x, a), &vals));
                }
                match normal_form(&c) {
                    Ok(res) if k_clean(&res) => return res.canonical,
                    _ => continue,
                }
            }
        }
        return c;
    }
}
