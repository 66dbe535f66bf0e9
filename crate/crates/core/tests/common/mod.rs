//! First-quantized reference implementation used as a test oracle.
//!
//! A state is held as a full antisymmetric tensor `T[i1, ..., in]` over
//! `r^n` entries, normalized so that `Σ |T|² = 1`. Nothing here touches the
//! library's combinadic ranking, sign rules, partial traces or compound
//! matrices; only the sorted-orbital lookup of individual amplitudes is shared.

#![allow(dead_code)]

use nrep_core::fermion::{DetIndex, FermionState};
use nrep_core::numerics::{CMatrix, C64};
use rand::Rng;
use rand_distr::StandardNormal;

pub struct Tensor {
    pub n: usize,
    pub r: usize,
    pub data: Vec<C64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Digits of `flat` in base `r`, most significant first.
fn digits(mut flat: usize, n: usize, r: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = flat % r;
        flat /= r;
    }
    d
}

fn flat_index(idx: &[usize], r: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * r + i)
}

/// Sign of the permutation sorting `idx`, or 0 if an index repeats.
fn sort_sign(idx: &[usize]) -> (i32, Vec<usize>) {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // bubble sort counts transpositions directly
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return (0, v);
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return (0, v);
    }
    (sign, v)
}

impl Tensor {
    pub fn len(n: usize, r: usize) -> usize {
        r.pow(n as u32)
    }

    pub fn from_state(psi: &FermionState) -> Self {
        let (n, r) = (psi.n(), psi.r());
        let scale = 1.0 / factorial(n).sqrt();
        let data = (0..Self::len(n, r))
            .map(|flat| {
                let (sign, sorted) = sort_sign(&digits(flat, n, r));
                if sign == 0 {
                    return C64::new(0.0, 0.0);
                }
                let det = DetIndex::new(sorted.iter().map(|i| i + 1).collect()).unwrap();
                psi.amplitude(&det).unwrap() * (sign as f64 * scale)
            })
            .collect();
        Self { n, r, data }
    }

    pub fn to_state(&self) -> FermionState {
        let mut terms = Vec::new();
        let scale = factorial(self.n).sqrt();
        for flat in 0..self.data.len() {
            let d = digits(flat, self.n, self.r);
            if d.windows(2).all(|w| w[0] < w[1]) {
                terms.push((d.iter().map(|i| i + 1).collect::<Vec<_>>(), self.data[flat] * scale));
            }
        }
        FermionState::from_terms(self.n, self.r, &terms).unwrap()
    }

    /// `γ_pq = n Σ_rest T[p, rest] conj(T[q, rest])`
    pub fn rdm(&self) -> CMatrix {
        let block = Self::len(self.n - 1, self.r);
        let k = self.n as f64;
        CMatrix::from_fn(self.r, self.r, |p, q| {
            (0..block)
                .map(|rest| self.data[p * block + rest] * self.data[q * block + rest].conj())
                .sum::<C64>()
                * k
        })
    }

    /// Apply `U` on every tensor factor.
    pub fn apply(&self, u: &CMatrix) -> Self {
        let mut data = self.data.clone();
        let r = self.r;
        for mode in 0..self.n {
            let stride = r.pow((self.n - 1 - mode) as u32);
            let mut next = vec![C64::new(0.0, 0.0); data.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                let i = (flat / stride) % r;
                let base = flat - i * stride;
                *out = (0..r).map(|j| u[(i, j)] * data[base + j * stride]).sum();
            }
            data = next;
        }
        Self { n: self.n, r, data }
    }

    /// Slice with the first index fixed to `p` (0-based). Under this
    /// normalization it is the tensor of the partial inner product with orbital `p`.
    pub fn first_slice(&self, p: usize) -> Self {
        let block = Self::len(self.n - 1, self.r);
        Self {
            n: self.n - 1,
            r: self.r,
            data: self.data[p * block..(p + 1) * block].to_vec(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        (0..self.data.len()).all(|flat| {
            let d = digits(flat, self.n, self.r);
            (0..self.n.saturating_sub(1)).all(|k| {
                let mut s = d.clone();
                s.swap(k, k + 1);
                (self.data[flat] + self.data[flat_index(&s, self.r)]).norm() <= tol
            })
        })
    }
}

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(r: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(r);
    while cols.len() < r {
        let mut v: Vec<C64> = (0..r).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_fn(r, r, |i, j| cols[j][i])
}

/// Eigenvalues of a 2×2 Hermitian matrix in closed form, descending.
pub fn eig2(m: &CMatrix) -> [f64; 2] {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [mid + rad, mid - rad]
}

/// Range of the top eigenvalue of `diag(a) + U diag(b) U†` over `trials`
/// Haar-random `U`. With matching traces, `c` is attainable exactly when
/// `c1` lies in this range.
pub fn weyl_orbit_range<R: Rng>(a: [f64; 2], b: [f64; 2], trials: usize, rng: &mut R) -> (f64, f64) {
    let da = CMatrix::from_diag(&a);
    let db = CMatrix::from_diag(&b);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..trials {
        let u = haar_unitary(2, rng);
        let c = da.add(&u.matmul(&db).matmul(&u.adjoint()));
        let top = eig2(&c)[0];
        lo = lo.min(top);
        hi = hi.max(top);
    }
    (lo, hi)
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
