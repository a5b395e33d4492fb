//! Polar coordinates on spheres, the factorisation of orthogonal matrices
//! into a product of rotations `R(tau^n) ... R(tau^1)`, and the sets of
//! angle tuples that pick one representative per coset of the centraliser
//! of a diagonal matrix, or per orbit of coordinate sign changes.
//!
//! Row and column indices in the set predicates (`N(i, j)`, `P(i, j)`, the
//! index lists of `K_i`) are 1-based, matching the usual matrix notation.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};

use crate::symeig::jacobi;
use crate::{Error, Result};

pub const DEFAULT_SNAP_TOL: f64 = 1e-9;
/// Tolerance of angle comparisons and of `sigma` sign tests.
pub const ANGLE_TOL: f64 = 1e-9;
/// Entries below this are treated as zero when reducing to the cross-section.
pub const ZERO_TOL: f64 = 1e-9;

fn snap(a: f64, tol: f64) -> f64 {
    for t in [0.0, FRAC_PI_2, PI] {
        if (a - t).abs() < tol {
            return t;
        }
    }
    a
}

fn is_half(a: f64) -> bool {
    (a - FRAC_PI_2).abs() <= ANGLE_TOL
}

fn is_zero_or_pi(a: f64) -> bool {
    a.abs() <= ANGLE_TOL || (a - PI).abs() <= ANGLE_TOL
}

/// Polar coordinates `(tau_1, ..., tau_m)` of a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCoords(pub Vec<f64>);

impl PolarCoords {
    pub fn is_valid(&self) -> bool {
        let t = &self.0;
        let m = t.len();
        if m == 0 {
            return false;
        }
        let ranged = t[..m - 1].iter().all(|a| (-ANGLE_TOL..=PI + ANGLE_TOL).contains(a));
        let last = is_zero_or_pi(t[m - 1]);
        let zeroing = (1..m).all(|i| !is_zero_or_pi(t[i - 1]) || t[i].abs() <= ANGLE_TOL);
        ranged && last && zeroing
    }
}

/// `(tau^1, ..., tau^n)` with `tau^m` polar coordinates in dimension `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauTuple {
    pub blocks: Vec<Vec<f64>>,
}

impl TauTuple {
    pub fn zeros(n: usize) -> Self {
        Self {
            blocks: (1..=n).map(|m| vec![0.0; m]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    /// `tau^m_k`, both 1-based.
    pub fn at(&self, m: usize, k: usize) -> f64 {
        self.blocks[m - 1][k - 1]
    }

    pub fn is_valid(&self) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, b)| b.len() == i + 1 && PolarCoords(b.clone()).is_valid())
    }

    pub fn max_abs_diff(&self, other: &TauTuple) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Block-diagonal `diag(l_1 I_{s_1}, ..., l_k I_{s_k})` with distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagSpec {
    pub values: Vec<f64>,
    pub mults: Vec<usize>,
}

impl DiagSpec {
    pub fn new(values: Vec<f64>, mults: Vec<usize>) -> Result<Self> {
        if values.len() != mults.len() || mults.iter().any(|&s| s == 0) {
            return Err(Error::InvalidParams("values and multiplicities differ".into()));
        }
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                if values[i] == values[j] {
                    return Err(Error::InvalidParams("repeated diagonal value".into()));
                }
            }
        }
        Ok(Self { values, mults })
    }

    /// A pattern of block sizes with placeholder values `1, 2, ...`.
    pub fn pattern(mults: &[usize]) -> Self {
        Self {
            values: (1..=mults.len()).map(|v| v as f64).collect(),
            mults: mults.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.mults.iter().sum()
    }

    /// 1-based inclusive row ranges of the blocks.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut o = 0;
        for &s in &self.mults {
            out.push((o + 1, o + s));
            o += s;
        }
        out
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self
            .values
            .iter()
            .zip(&self.mults)
            .flat_map(|(&v, &s)| std::iter::repeat_n(v, s))
            .collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }
}

pub fn polar(v: &DVector<f64>) -> Result<PolarCoords> {
    polar_with(v, DEFAULT_SNAP_TOL)
}

pub fn polar_with(v: &DVector<f64>, snap_tol: f64) -> Result<PolarCoords> {
    let nrm = v.norm();
    if (nrm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(nrm));
    }
    Ok(PolarCoords(polar_raw(v, snap_tol)))
}

fn polar_raw(v: &DVector<f64>, snap_tol: f64) -> Vec<f64> {
    let n = v.len();
    let mut tau = vec![0.0; n];
    let mut w: Vec<f64> = v.iter().copied().collect();
    for i in 0..n.saturating_sub(1) {
        let tail = w[i + 1..].iter().map(|x| x * x).sum::<f64>().sqrt();
        let t = snap(tail.atan2(w[i]), snap_tol);
        tau[i] = t;
        if t == 0.0 || t == PI {
            return tau;
        }
        for x in &mut w[i + 1..] {
            *x /= tail;
        }
    }
    tau[n - 1] = if w[n - 1] >= 0.0 { 0.0 } else { PI };
    tau
}

pub fn unpolar(tau: &[f64]) -> DVector<f64> {
    let m = tau.len();
    let mut out = DVector::zeros(m);
    let mut scale = 1.0;
    for k in 0..m {
        out[k] = scale * tau[k].cos();
        scale *= tau[k].sin();
    }
    out
}

/// `R~(tau)`, an `m x m` orthogonal matrix with first column `p^{-1}(tau)`.
pub fn r_tilde(tau: &[f64]) -> DMatrix<f64> {
    let m = tau.len();
    let t1 = tau[0];
    if t1 == 0.0 {
        return DMatrix::identity(m, m);
    }
    if t1 == PI {
        let mut r = DMatrix::identity(m, m);
        r[(0, 0)] = -1.0;
        return r;
    }
    let y = unpolar(&tau[1..]);
    let (s, c) = t1.sin_cos();
    let mut r = DMatrix::zeros(m, m);
    r[(0, 0)] = c;
    for k in 1..m {
        r[(0, k)] = -s * y[k - 1];
        r[(k, 0)] = s * y[k - 1];
        for l in 1..m {
            let id = if k == l { 1.0 } else { 0.0 };
            r[(k, l)] = id - (1.0 - c) * y[k - 1] * y[l - 1];
        }
    }
    r
}

/// `R(tau) = diag(I_{n-m}, R~(tau))`.
pub fn rotation_r(tau: &[f64], n: usize) -> DMatrix<f64> {
    let m = tau.len();
    let mut r = DMatrix::identity(n, n);
    r.view_mut((n - m, n - m), (m, m)).copy_from(&r_tilde(tau));
    r
}

/// `R(tau^n) ... R(tau^1)`.
pub fn compose(tau: &TauTuple) -> DMatrix<f64> {
    let n = tau.n();
    let mut t = DMatrix::identity(n, n);
    for m in (1..=n).rev() {
        t *= rotation_r(&tau.blocks[m - 1], n);
    }
    t
}

pub fn orthogonality_defect(t: &DMatrix<f64>) -> f64 {
    let n = t.nrows();
    (t.transpose() * t - DMatrix::<f64>::identity(n, n)).amax()
}

pub fn factorize(t: &DMatrix<f64>) -> Result<TauTuple> {
    factorize_with(t, DEFAULT_SNAP_TOL)
}

pub fn factorize_with(t: &DMatrix<f64>, snap_tol: f64) -> Result<TauTuple> {
    let n = t.nrows();
    let dev = orthogonality_defect(t);
    if t.ncols() != n || dev > 1e-8 {
        return Err(Error::NotOrthogonal(dev));
    }
    let mut blocks = vec![Vec::new(); n];
    let mut w = t.clone();
    for k in 0..n {
        let m = n - k;
        let col: DVector<f64> = w.view((k, k), (m, 1)).column(0).into_owned();
        let col = &col / col.norm();
        let tau = polar_raw(&col, snap_tol);
        w = rotation_r(&tau, n).transpose() * w;
        blocks[m - 1] = tau;
    }
    Ok(TauTuple { blocks })
}

/// `sigma_tau(i, j)` for `i < j`.
pub fn sigma(tau: &TauTuple, i: usize, j: usize) -> Result<f64> {
    let n = tau.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::IndexOutOfRange(format!("sigma({i}, {j}) with n = {n}")));
    }
    Ok(sigma_raw(tau, i, j))
}

fn sigma_raw(tau: &TauTuple, i: usize, j: usize) -> f64 {
    let n = tau.n();
    let a = n - j + 1;
    let b = n - i + 1;
    let mut s = 0.0;
    let mut prod = 1.0;
    for r in 1..=(n - j + 1) {
        s += prod * tau.at(a, r).cos() * tau.at(b, j - i + r).cos();
        prod *= tau.at(a, r).sin() * tau.at(b, j - i + r).sin();
    }
    s
}

/// Membership in `N(i, j)`.
pub fn in_n(tau: &TauTuple, i: usize, j: usize) -> bool {
    let n = tau.n();
    if i >= j {
        let m = n - j + 1;
        is_half(tau.at(m, i - j + 1)) || (1..=(i - j)).any(|k| is_zero_or_pi(tau.at(m, k)))
    } else {
        sigma_raw(tau, i, j).abs() <= ANGLE_TOL
    }
}

/// Membership in `P(i, j)`.
pub fn in_p(tau: &TauTuple, i: usize, j: usize) -> bool {
    let n = tau.n();
    if i >= j {
        tau.at(n - j + 1, i - j + 1) <= FRAC_PI_2 + ANGLE_TOL
    } else {
        sigma_raw(tau, i, j) <= ANGLE_TOL
    }
}

/// Membership in the coset cross-section `K(D)`.
///
/// Both implications are imposed on every row of each block (the second one
/// only from the second row of a block on, where a previous row exists) and
/// for every column `j` in `1..=n`.
pub fn in_k(tau: &TauTuple, d: &DiagSpec) -> bool {
    let n = tau.n();
    for (a, b) in d.blocks() {
        for i in a..=b {
            for j in 1..=n {
                let pre = (1..j).all(|t| in_n(tau, i, t));
                if !pre {
                    break;
                }
                if !in_p(tau, i, j) {
                    return false;
                }
                if i > a && !in_n(tau, i, j) && (1..j).all(|h| in_n(tau, i - 1, h)) {
                    return false;
                }
            }
        }
    }
    true
}

/// `K'(D)`: `K(D)` with the first angle of `tau^n` different from `pi/2`,
/// i.e. a nonzero top-left entry of `r(tau)`.
pub fn in_k_prime(tau: &TauTuple, d: &DiagSpec) -> bool {
    in_k(tau, d) && !is_half(tau.at(tau.n(), 1))
}

/// `L_i(tau)`: positions of nonzero coordinates of `p^{-1}(tau^{n+1-i})`.
pub fn l_set(tau: &TauTuple, i: usize) -> Vec<usize> {
    let n = tau.n();
    let top = n + 1 - i;
    (1..=top)
        .filter(|&m| !is_half(tau.at(top, m)) && (m == 1 || !is_zero_or_pi(tau.at(top, m - 1))))
        .collect()
}

/// `K_i(tau)`: the members of `L_i` whose row has zeros left of column `i`.
pub fn k_set(tau: &TauTuple, i: usize) -> Vec<usize> {
    l_set(tau, i)
        .into_iter()
        .filter(|&m| (1..i).all(|t| in_n(tau, i - 1 + m, t)))
        .collect()
}

/// `K_i(D)`: the sign-change cross-section for the `i`-th coordinate.
pub fn in_k_i(tau: &TauTuple, d: &DiagSpec, i: usize) -> bool {
    in_k(tau, d) && k_i_condition(tau, i)
}

fn k_i_condition(tau: &TauTuple, i: usize) -> bool {
    let n = tau.n();
    let l = l_set(tau, i);
    let k = k_set(tau, i);
    if let Some(&first) = l.iter().find(|m| !k.contains(m)) {
        return tau.at(n + 1 - i, first) < FRAC_PI_2 - ANGLE_TOL;
    }
    if l.len() <= 1 {
        return true;
    }
    let r_check = i - 1 + l[0];
    match ((i + 1)..=n).find(|&m| !in_n(tau, r_check, m)) {
        Some(t) => in_p(tau, r_check, t),
        // every later entry of the row vanishes; no sign left to fix
        None => true,
    }
}

/// `K_{i_1, ..., i_l}(D)`: intersection of the single-index sets.
pub fn in_k_multi(tau: &TauTuple, d: &DiagSpec, idx: &[usize]) -> bool {
    in_k(tau, d) && idx.iter().all(|&i| k_i_condition(tau, i))
}

pub fn in_k_prime_multi(tau: &TauTuple, d: &DiagSpec, idx: &[usize]) -> bool {
    in_k_prime(tau, d) && idx.iter().all(|&i| k_i_condition(tau, i))
}

/// The regions accepted by [`membership`]; indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    N(usize, usize),
    P(usize, usize),
    K(DiagSpec),
    KPrime(DiagSpec),
    KI(DiagSpec, usize),
    KMulti(DiagSpec, Vec<usize>),
    KPrimeMulti(DiagSpec, Vec<usize>),
}

pub fn membership(tau: &TauTuple, region: &Region) -> Result<bool> {
    let n = tau.n();
    let check = |i: usize| -> Result<()> {
        if i == 0 || i > n {
            Err(Error::IndexOutOfRange(format!("index {i} with n = {n}")))
        } else {
            Ok(())
        }
    };
    let check_d = |d: &DiagSpec| -> Result<()> {
        if d.n() != n {
            Err(Error::IndexOutOfRange(format!("diagonal of size {} with n = {n}", d.n())))
        } else {
            Ok(())
        }
    };
    Ok(match region {
        Region::N(i, j) => {
            check(*i)?;
            check(*j)?;
            in_n(tau, *i, *j)
        }
        Region::P(i, j) => {
            check(*i)?;
            check(*j)?;
            in_p(tau, *i, *j)
        }
        Region::K(d) => {
            check_d(d)?;
            in_k(tau, d)
        }
        Region::KPrime(d) => {
            check_d(d)?;
            in_k_prime(tau, d)
        }
        Region::KI(d, i) => {
            check_d(d)?;
            check(*i)?;
            in_k_i(tau, d, *i)
        }
        Region::KMulti(d, idx) => {
            check_d(d)?;
            idx.iter().try_for_each(|&i| check(i))?;
            in_k_multi(tau, d, idx)
        }
        Region::KPrimeMulti(d, idx) => {
            check_d(d)?;
            idx.iter().try_for_each(|&i| check(i))?;
            in_k_prime_multi(tau, d, idx)
        }
    })
}

/// Row-echelon representative of the coset `C(D) T`: within every block of
/// rows, each row starts with a positive entry strictly right of the first
/// entry of the previous row of that block.
pub fn reduce_rows(t: &DMatrix<f64>, d: &DiagSpec) -> DMatrix<f64> {
    let n = t.nrows();
    let mut t = t.clone();
    for (a, b) in d.blocks() {
        let (lo, hi) = (a - 1, b);
        let mut k = lo;
        for c in 0..n {
            if k >= hi {
                break;
            }
            let col: DVector<f64> = t.view((k, c), (hi - k, 1)).column(0).into_owned();
            let nr = col.norm();
            if nr < ZERO_TOL {
                for r in k..hi {
                    t[(r, c)] = 0.0;
                }
                continue;
            }
            let mut v = col.clone();
            v[0] -= nr;
            let vn = v.norm();
            if vn > 1e-14 {
                v /= vn;
                let rows = t.view((k, 0), (hi - k, n)).into_owned();
                let upd = &v * (v.transpose() * &rows) * 2.0;
                let new_rows = rows - upd;
                t.view_mut((k, 0), (hi - k, n)).copy_from(&new_rows);
            }
            t[(k, c)] = nr;
            for r in (k + 1)..hi {
                t[(r, c)] = 0.0;
            }
            k += 1;
        }
    }
    t
}

/// `(tau, N)` with `N` in the centraliser of `D` and `N T = r(tau)`.
pub fn reduce_to_cross_section(t: &DMatrix<f64>, d: &DiagSpec) -> Result<(TauTuple, DMatrix<f64>)> {
    let dev = orthogonality_defect(t);
    if dev > 1e-8 || t.nrows() != d.n() {
        return Err(Error::NotOrthogonal(dev));
    }
    let s = reduce_rows(t, d);
    let tau = factorize(&s)?;
    let nmat = &s * t.transpose();
    Ok((tau, nmat))
}

/// Orthogonal `T` with `T^T D T = A`, rows ordered as the diagonal of `D`.
pub fn eigenvector_rows(a: &DMatrix<f64>, d: &DiagSpec, cluster_tol: f64) -> Result<DMatrix<f64>> {
    let n = d.n();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::SpectrumMismatch(format!("expected {n}x{n}")));
    }
    let (vals, vecs) = jacobi(a)?;
    let scale = a.norm().max(1.0);
    let tol = cluster_tol * scale;
    let mut used = vec![false; n];
    let mut t = DMatrix::zeros(n, n);
    let mut row = 0;
    for (&value, &s) in d.values.iter().zip(&d.mults) {
        let hits: Vec<usize> = (0..n)
            .filter(|&i| !used[i] && (vals[i] - value).abs() <= tol)
            .collect();
        if hits.len() != s {
            return Err(Error::SpectrumMismatch(format!(
                "eigenvalue {value} expected with multiplicity {s}, found {}",
                hits.len()
            )));
        }
        for i in hits {
            used[i] = true;
            t.set_row(row, &vecs.column(i).transpose());
            row += 1;
        }
    }
    Ok(t)
}

/// The unique `tau` in `K(D)` with `r(tau)^T D r(tau) = A`.
pub fn parametrize_sym(a: &DMatrix<f64>, d: &DiagSpec, cluster_tol: f64) -> Result<TauTuple> {
    let t = eigenvector_rows(a, d, cluster_tol)?;
    Ok(reduce_to_cross_section(&t, d)?.0)
}

/// `c(r(tau)) = r(tau)^T D r(tau)`.
pub fn sym_from_tau(tau: &TauTuple, d: &DiagSpec) -> DMatrix<f64> {
    let t = compose(tau);
    let b = t.transpose() * d.matrix() * &t;
    (&b + b.transpose()) * 0.5
}

/// `Sigma_i B Sigma_i` for 1-based `i`.
pub fn sign_action(b: &DMatrix<f64>, i: usize) -> DMatrix<f64> {
    let mut out = b.clone();
    let n = b.nrows();
    for k in 0..n {
        if k != i - 1 {
            out[(i - 1, k)] = -out[(i - 1, k)];
            out[(k, i - 1)] = -out[(k, i - 1)];
        }
    }
    out
}
