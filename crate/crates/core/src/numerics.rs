//! Small dense complex linear algebra.
//!
//! Everything here is sized for density matrices of a few dozen orbitals:
//! a row-major [`CMatrix`], a cyclic Jacobi eigensolver for Hermitian
//! matrices ([`eigh`]) and a one-sided Jacobi SVD ([`svd_small`]). Both
//! solvers use a fixed sweep order so identical inputs give identical bits.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest Hermitian matrix accepted by [`eigh`].
pub const EIGH_MAX_DIM: usize = 64;
/// Largest dimension (rows or columns) accepted by [`svd_small`].
pub const SVD_MAX_DIM: usize = 8;

const MAX_SWEEPS: usize = 100;

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum `|H - H†|` entry accepted as Hermitian.
    pub hermiticity: f64,
    /// Relative off-diagonal norm at which Jacobi sweeps stop.
    pub convergence: f64,
    /// Default tolerance for asserted identities (reconstructions, round trips).
    pub assertion: f64,
    /// Maximum norm deviation accepted at public density-matrix entry points.
    pub normalization: f64,
    /// Relative gap below which two eigenvalues are treated as degenerate.
    pub degeneracy: f64,
    /// Default tolerance for representability condition checks.
    pub check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-8,
            convergence: 1e-13,
            assertion: 1e-10,
            normalization: 1e-8,
            degeneracy: 1e-7,
            check: 1e-8,
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|H_ij - conj(H_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap();
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                if f == ZERO {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ conj(a_i) b_i`
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Hermitian eigendecomposition with eigenvalues sorted non-increasing.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, aligned with `values`.
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(values) V†`
    pub fn reconstruct(&self) -> CMatrix {
        let lam = CMatrix::from_diag(&self.values);
        self.vectors.matmul(&lam).matmul(&self.vectors.adjoint())
    }
}

/// Singular value decomposition `X = U diag(Σ) V†`.
#[derive(Debug, Clone)]
pub struct SVDResult {
    /// `m × m` unitary.
    pub u: CMatrix,
    /// `min(m, n)` non-negative values, non-increasing.
    pub singulars: Vec<f64>,
    /// `n × n` unitary.
    pub v: CMatrix,
}

impl SVDResult {
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut sigma = CMatrix::zeros(m, n);
        for (k, &s) in self.singulars.iter().enumerate() {
            sigma[(k, k)] = C64::new(s, 0.0);
        }
        self.u.matmul(&sigma).matmul(&self.v.adjoint())
    }
}

/// 2×2 unitary `G` (acting on coordinates p, q) such that `G† A G` has a zero
/// (p, q) entry, for the Hermitian block `[[app, apq], [conj(apq), aqq]]`.
///
/// Returns `(c, s, phase)` with `G = [[c, s], [-s·phase, c·phase]]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let h = apq.norm();
    let phase = if h > 0.0 { (apq / h).conj() } else { ONE };
    let theta = (aqq - app) / (2.0 * h);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

/// Replace columns p, q of `m` by `m·G`.
fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * phase * s;
        m[(k, q)] = mp * s + mq * phase * c;
    }
}

/// Replace rows p, q of `m` by `G†·m`.
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let pc = phase.conj();
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * pc * s;
        m[(q, k)] = mp * s + mq * pc * c;
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Rotate each column so its first non-negligible component is real positive.
fn fix_column_phases(v: &mut CMatrix) {
    for j in 0..v.cols() {
        let Some(lead) = (0..v.rows()).map(|i| v[(i, j)]).find(|z| z.norm() > 1e-12) else {
            continue;
        };
        let ph = (lead / lead.norm()).conj();
        for i in 0..v.rows() {
            v[(i, j)] *= ph;
        }
    }
}

/// Stable permutation sorting `keys` non-increasing.
fn descending_order(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]));
    order
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn eigh(h: &CMatrix) -> Result<EigenDecomposition> {
    eigh_with(h, &Tolerances::default())
}

pub fn eigh_with(h: &CMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::Shape(format!(
            "eigh needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    if n > EIGH_MAX_DIM {
        return Err(Error::Shape(format!(
            "eigh supports up to {EIGH_MAX_DIM}x{EIGH_MAX_DIM}, got {n}x{n}"
        )));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = h.hermiticity_residual();
    if herm > tol.hermiticity {
        return Err(Error::NotHermitian(herm));
    }

    // Work on the exactly Hermitian part.
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= tol.convergence * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.norm() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (c, s, phase) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                    rotate_columns(&mut a, p, q, c, s, phase);
                    rotate_rows(&mut a, p, q, c, s, phase);
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)].im = 0.0;
                    a[(q, q)].im = 0.0;
                    rotate_columns(&mut v, p, q, c, s, phase);
                }
            }
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let order = descending_order(&raw);
    let values = order.iter().map(|&k| raw[k]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    fix_column_phases(&mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

/// Complete the first `k` orthonormal columns of `u` to a full unitary.
fn complete_basis(u: &mut CMatrix, k: usize) {
    let m = u.rows();
    let mut filled = k;
    for e in 0..m {
        if filled == m {
            break;
        }
        let mut cand = vec![ZERO; m];
        cand[e] = ONE;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for j in 0..filled {
                let col = u.column(j);
                let ov = vdot(&col, &cand);
                for i in 0..m {
                    cand[i] -= col[i] * ov;
                }
            }
        }
        let nrm = vec_norm(&cand);
        if nrm > 1e-6 {
            for x in cand.iter_mut() {
                *x /= nrm;
            }
            u.set_column(filled, &cand);
            filled += 1;
        }
    }
}

/// SVD of a small complex matrix by one-sided Jacobi (implicit Jacobi on `X†X`).
pub fn svd_small(x: &CMatrix) -> Result<SVDResult> {
    svd_small_with(x, &Tolerances::default())
}

pub fn svd_small_with(x: &CMatrix, tol: &Tolerances) -> Result<SVDResult> {
    let (m, n) = (x.rows(), x.cols());
    if m == 0 || n == 0 || m > SVD_MAX_DIM || n > SVD_MAX_DIM {
        return Err(Error::Shape(format!(
            "svd_small supports 1..={SVD_MAX_DIM} rows and columns, got {m}x{n}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }

    let mut w = x.clone();
    let mut v = CMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let cp = w.column(p);
                let cq = w.column(q);
                let alpha = vdot(&cp, &cp).re;
                let beta = vdot(&cq, &cq).re;
                let gamma = vdot(&cp, &cq);
                if gamma.norm() <= tol.convergence * (alpha * beta).sqrt() || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&w.column(j))).collect();
    let order = descending_order(&norms);
    let v = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let k = m.min(n);
    let smax = norms[order[0]];
    let cutoff = f64::EPSILON * smax * (m.max(n) as f64);

    let mut u = CMatrix::zeros(m, m);
    let mut singulars = Vec::with_capacity(k);
    let mut kept = 0;
    for (slot, &j) in order.iter().take(k).enumerate() {
        let s = norms[j];
        if s > cutoff && s > 0.0 {
            let col: Vec<C64> = w.column(j).iter().map(|z| z / s).collect();
            u.set_column(slot, &col);
            singulars.push(s);
            kept += 1;
        } else {
            singulars.push(0.0);
        }
    }
    complete_basis(&mut u, kept);
    Ok(SVDResult { u, singulars, v })
}
