//! Antisymmetric N-particle states over R orthonormal orbitals.
//!
//! A state is a dense amplitude vector over Slater determinants, stored in
//! lexicographic order of their (1-based, strictly increasing) orbital lists.
//! Determinants are handled internally as `u64` occupation masks, which
//! limits the orbital count to 64.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigh, CMatrix, EigenDecomposition, Tolerances, C64, ONE, ZERO};

/// Default limit on `C(r, n)`.
pub const DEFAULT_DIM_CAP: usize = 100_000;
/// Determinants are bitmasks.
pub const MAX_ORBITALS: usize = 64;

/// 1-based orbital label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitalIndex(usize);

impl OrbitalIndex {
    pub fn new(value: usize, r: usize) -> Result<Self> {
        if value == 0 || value > r {
            return Err(Error::Input(format!("orbital index {value} outside [1, {r}]")));
        }
        Ok(Self(value))
    }

    pub fn get(self) -> usize {
        self.0
    }

    fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for OrbitalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Strictly increasing list of 1-based orbitals labelling one Slater determinant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DetIndex(Vec<usize>);

impl DetIndex {
    /// Validates ordering only; see [`DetIndex::check`] for the `(n, r)` fit.
    pub fn new(orbitals: Vec<usize>) -> Result<Self> {
        if orbitals.iter().any(|&o| o == 0 || o > MAX_ORBITALS) {
            return Err(Error::InvalidDeterminant {
                orbitals,
                reason: format!("orbitals must lie in [1, {MAX_ORBITALS}]"),
            });
        }
        if orbitals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDeterminant {
                orbitals,
                reason: "orbitals must be strictly increasing".into(),
            });
        }
        Ok(Self(orbitals))
    }

    /// Sort an arbitrary orbital list, returning the canonical index and the
    /// parity of the sorting permutation (`None` when an orbital repeats).
    pub fn from_unordered(orbitals: &[usize]) -> Result<Option<(Self, f64)>> {
        let mut v = orbitals.to_vec();
        let mut sign = 1.0;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
        Ok(Some((Self::new(v)?, sign)))
    }

    pub fn check(&self, n: usize, r: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidDeterminant {
                orbitals: self.0.clone(),
                reason: format!("expected {n} orbitals"),
            });
        }
        if self.0.last().is_some_and(|&o| o > r) {
            return Err(Error::InvalidDeterminant {
                orbitals: self.0.clone(),
                reason: format!("orbital exceeds r = {r}"),
            });
        }
        Ok(())
    }

    pub fn orbitals(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub(crate) fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &o| m | (1u64 << (o - 1)))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
    }
}

impl TryFrom<Vec<usize>> for DetIndex {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DetIndex> for Vec<usize> {
    fn from(d: DetIndex) -> Self {
        d.0
    }
}

impl fmt::Display for DetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, o) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "]")
    }
}

/// Exact binomial coefficient; saturates at `u128::MAX`.
pub fn binomial(r: usize, n: usize) -> u128 {
    if n > r {
        return 0;
    }
    let k = n.min(r - n);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((r - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_dims(n: usize, r: usize, cap: usize) -> Result<usize> {
    if n == 0 || n > r {
        return Err(Error::InvalidDimensions { n, r });
    }
    if r > MAX_ORBITALS {
        return Err(Error::Shape(format!(
            "at most {MAX_ORBITALS} orbitals supported, got {r}"
        )));
    }
    let dim = binomial(r, n);
    if dim > cap as u128 {
        return Err(Error::CapExceeded { n, r, dim, cap });
    }
    Ok(dim as usize)
}

/// Lexicographic enumeration of all `n`-subsets of `[1, r]`.
pub fn basis_index(n: usize, r: usize) -> Result<Vec<DetIndex>> {
    basis_index_with_cap(n, r, DEFAULT_DIM_CAP)
}

pub fn basis_index_with_cap(n: usize, r: usize, cap: usize) -> Result<Vec<DetIndex>> {
    check_dims(n, r, cap)?;
    Ok(basis_masks(n, r).into_iter().map(DetIndex::from_mask).collect())
}

/// Lexicographic masks; dimensions must already be validated.
pub(crate) fn basis_masks(n: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(binomial(r, n) as usize);
    let mut c: Vec<usize> = (0..n).collect();
    loop {
        out.push(c.iter().fold(0u64, |m, &b| m | (1u64 << b)));
        // advance to the next combination
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < r - n + i {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..n {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Position of `mask` in the lexicographic basis of `n`-subsets of `r` orbitals.
pub(crate) fn rank(mask: u64, n: usize, r: usize) -> usize {
    let mut idx = 0u128;
    let mut prev: isize = -1;
    let mut i = 0;
    for b in 0..r {
        if mask >> b & 1 == 1 {
            for j in (prev + 1) as usize..b {
                idx += binomial(r - 1 - j, n - 1 - i);
            }
            prev = b as isize;
            i += 1;
        }
    }
    idx as usize
}

/// `(-1)^(number of occupied orbitals in `mask` below bit `bit`)`.
#[inline]
pub(crate) fn position_sign(bit: u32, mask: u64) -> f64 {
    let below = mask & ((1u64 << bit) - 1);
    if below.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Antisymmetric state: `n` fermions in `r` orbitals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionState {
    n: usize,
    r: usize,
    amplitudes: Vec<C64>,
}

impl FermionState {
    /// Norm is not checked here; unnormalized states are legitimate intermediates.
    pub fn new(n: usize, r: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_cap(n, r, amplitudes, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n: usize, r: usize, amplitudes: Vec<C64>, cap: usize) -> Result<Self> {
        let dim = check_dims(n, r, cap)?;
        if amplitudes.len() != dim {
            return Err(Error::Shape(format!(
                "expected {dim} amplitudes for (n={n}, r={r}), got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, r, amplitudes })
    }

    pub fn zero(n: usize, r: usize) -> Result<Self> {
        let dim = check_dims(n, r, DEFAULT_DIM_CAP)?;
        Ok(Self {
            n,
            r,
            amplitudes: vec![ZERO; dim],
        })
    }

    /// Build from `(orbitals, amplitude)` terms. Orbital lists may be in any
    /// order; the permutation parity is absorbed into the stored amplitude.
    /// Repeated terms accumulate.
    pub fn from_terms(n: usize, r: usize, terms: &[(Vec<usize>, C64)]) -> Result<Self> {
        let mut s = Self::zero(n, r)?;
        for (orbs, amp) in terms {
            let Some((det, sign)) = DetIndex::from_unordered(orbs)? else {
                return Err(Error::InvalidDeterminant {
                    orbitals: orbs.clone(),
                    reason: "repeated orbital".into(),
                });
            };
            det.check(n, r)?;
            let k = rank(det.mask(), n, r);
            s.amplitudes[k] += amp * sign;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn basis(&self) -> Vec<DetIndex> {
        basis_masks(self.n, self.r)
            .into_iter()
            .map(DetIndex::from_mask)
            .collect()
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        basis_masks(self.n, self.r)
    }

    pub fn index_of(&self, det: &DetIndex) -> Result<usize> {
        det.check(self.n, self.r)?;
        Ok(rank(det.mask(), self.n, self.r))
    }

    pub fn amplitude(&self, det: &DetIndex) -> Result<C64> {
        Ok(self.amplitudes[self.index_of(det)?])
    }

    /// Amplitude of an orbital list in any order, with permutation sign applied.
    pub fn amplitude_unordered(&self, orbitals: &[usize]) -> Result<C64> {
        match DetIndex::from_unordered(orbitals)? {
            None => Ok(ZERO),
            Some((det, sign)) => Ok(self.amplitude(&det)? * sign),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(self.scaled(C64::new(1.0 / nrm, 0.0)))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            n: self.n,
            r: self.r,
            amplitudes: self.amplitudes.iter().map(|z| z * s).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::StateMismatch {
                n1: self.n,
                r1: self.r,
                n2: other.n,
                r2: other.r,
            });
        }
        Ok(())
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            n: self.n,
            r: self.r,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest entrywise amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}

/// Single Slater determinant with unit amplitude.
pub fn slater(orbitals: &DetIndex, n: usize, r: usize) -> Result<FermionState> {
    orbitals.check(n, r)?;
    let mut s = FermionState::zero(n, r)?;
    let k = rank(orbitals.mask(), n, r);
    s.amplitudes[k] = ONE;
    Ok(s)
}

/// Convenience wrapper taking a plain orbital list.
pub fn slater_of(orbitals: &[usize], n: usize, r: usize) -> Result<FermionState> {
    slater(&DetIndex::new(orbitals.to_vec())?, n, r)
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &FermionState, b: &FermionState) -> Result<C64> {
    a.same_shape(b)?;
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// Contract orbital `p` against the first particle slot: the coefficient on
/// each (n-1)-set `J` is `sign(p, J)·x[J ∪ {p}] / √n`.
pub fn partial_inner(p: OrbitalIndex, psi: &FermionState) -> Result<FermionState> {
    if psi.n < 2 {
        return Err(Error::TooFewParticles { need: 2, have: psi.n });
    }
    if p.get() > psi.r {
        return Err(Error::Input(format!("orbital {p} outside [1, {}]", psi.r)));
    }
    let mut out = FermionState::zero(psi.n - 1, psi.r)?;
    let bit = p.bit();
    let scale = 1.0 / (psi.n as f64).sqrt();
    for (mask, amp) in psi.masks().into_iter().zip(&psi.amplitudes) {
        if mask & bit == 0 || *amp == ZERO {
            continue;
        }
        let rest = mask & !bit;
        let k = rank(rest, psi.n - 1, psi.r);
        out.amplitudes[k] = amp * (position_sign(p.get() as u32 - 1, rest) * scale);
    }
    Ok(out)
}

/// Partial inner product with a general orbital vector `φ`: `Σ_p conj(φ_p)·partial_inner(p, Ψ)`.
pub fn contract_orbital(phi: &[C64], psi: &FermionState) -> Result<FermionState> {
    if phi.len() != psi.r {
        return Err(Error::Shape(format!(
            "orbital vector has length {}, state has r = {}",
            phi.len(),
            psi.r
        )));
    }
    if psi.n < 2 {
        return Err(Error::TooFewParticles { need: 2, have: psi.n });
    }
    let mut out = FermionState::zero(psi.n - 1, psi.r)?;
    let scale = 1.0 / (psi.n as f64).sqrt();
    for (mask, amp) in psi.masks().into_iter().zip(&psi.amplitudes) {
        if *amp == ZERO {
            continue;
        }
        for (p, c) in phi.iter().enumerate() {
            let bit = 1u64 << p;
            if mask & bit == 0 || *c == ZERO {
                continue;
            }
            let rest = mask & !bit;
            let k = rank(rest, psi.n - 1, psi.r);
            out.amplitudes[k] += c.conj() * amp * (position_sign(p as u32, rest) * scale);
        }
    }
    Ok(out)
}

/// Antisymmetrized product `A(φ ⊗ Φ)`: coefficient on `I` is
/// `Σ_{p∈I} sign(p, I∖p)·φ_p·Φ[I∖p]`. Unit norm whenever `φ` is a unit vector
/// and `Φ` is normalized with no weight on `φ`.
pub fn wedge(phi: &[C64], state: &FermionState) -> Result<FermionState> {
    if phi.len() != state.r {
        return Err(Error::Shape(format!(
            "orbital vector has length {}, state has r = {}",
            phi.len(),
            state.r
        )));
    }
    let mut out = FermionState::zero(state.n + 1, state.r)?;
    for (mask, amp) in state.masks().into_iter().zip(&state.amplitudes) {
        if *amp == ZERO {
            continue;
        }
        for (p, c) in phi.iter().enumerate() {
            let bit = 1u64 << p;
            if mask & bit != 0 || *c == ZERO {
                continue;
            }
            let k = rank(mask | bit, state.n + 1, state.r);
            out.amplitudes[k] += c * amp * position_sign(p as u32, mask);
        }
    }
    Ok(out)
}

/// `γ_pq = n·⟨partial_inner(q, Ψ), partial_inner(p, Ψ)⟩` with no normalization check.
///
/// For a single-particle state this degenerates to `ψ ψ†`.
pub fn rdm_matrix(psi: &FermionState) -> CMatrix {
    let r = psi.r;
    let mut g = CMatrix::zeros(r, r);
    if psi.n == 1 {
        for p in 0..r {
            for q in 0..r {
                g[(p, q)] = psi.amplitudes[p] * psi.amplitudes[q].conj();
            }
        }
        return g;
    }
    // γ_pq = Σ_{J ∌ p,q} sign(p,J) sign(q,J) x[J+p] conj(x[J+q])
    let masks = psi.masks();
    for (mask, amp) in masks.iter().zip(&psi.amplitudes) {
        if *amp == ZERO {
            continue;
        }
        for p in 0..r {
            let pb = 1u64 << p;
            if mask & pb == 0 {
                continue;
            }
            let rest = mask & !pb;
            let sp = position_sign(p as u32, rest);
            for q in 0..r {
                let qb = 1u64 << q;
                if rest & qb != 0 {
                    continue;
                }
                let other = rest | qb;
                let xq = psi.amplitudes[rank(other, psi.n, r)];
                if xq == ZERO {
                    continue;
                }
                g[(p, q)] += amp * xq.conj() * (sp * position_sign(q as u32, rest));
            }
        }
    }
    g
}

/// One-particle reduced density matrix of a normalized state (trace `n`).
pub fn one_rdm(psi: &FermionState) -> Result<OneRDM> {
    let tol = Tolerances::default();
    let nrm = psi.norm();
    if (nrm - 1.0).abs() > tol.normalization {
        return Err(Error::NotNormalized(nrm));
    }
    OneRDM::new(psi.n, rdm_matrix(psi))
}

/// Apply a one-particle basis change: orbital `j` maps to `Σ_i U_ij e_i`,
/// so each new coefficient is `x'_I = Σ_J det(U[I, J])·x_J`.
pub fn rotate(psi: &FermionState, u: &CMatrix) -> Result<FermionState> {
    if u.rows() != psi.r || u.cols() != psi.r {
        return Err(Error::Shape(format!(
            "rotation must be {}x{}, got {}x{}",
            psi.r,
            psi.r,
            u.rows(),
            u.cols()
        )));
    }
    let res = u.unitarity_residual();
    if res > Tolerances::default().hermiticity {
        return Err(Error::NotUnitary(res));
    }
    let n = psi.n;
    let masks = psi.masks();
    let orbs: Vec<Vec<usize>> = masks
        .iter()
        .map(|&m| (0..psi.r).filter(|b| m >> b & 1 == 1).collect())
        .collect();
    let sources: Vec<(usize, C64)> = psi
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != ZERO)
        .map(|(j, z)| (j, *z))
        .collect();
    let amplitudes = orbs
        .iter()
        .map(|rows| {
            sources
                .iter()
                .map(|&(j, x)| {
                    let cols = &orbs[j];
                    let minor = CMatrix::from_fn(n, n, |a, b| u[(rows[a], cols[b])]);
                    minor.det() * x
                })
                .sum()
        })
        .collect();
    Ok(FermionState {
        n,
        r: psi.r,
        amplitudes,
    })
}

/// Hermitian PSD `r × r` matrix with trace `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneRDM {
    n: usize,
    matrix: CMatrix,
}

impl OneRDM {
    pub fn new(n: usize, matrix: CMatrix) -> Result<Self> {
        Self::new_with(n, matrix, &Tolerances::default())
    }

    pub fn new_with(n: usize, matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidRdm("matrix is not square".into()));
        }
        let herm = matrix.hermiticity_residual();
        if herm > tol.hermiticity {
            return Err(Error::InvalidRdm(format!("Hermiticity residual {herm:.3e}")));
        }
        let tr = matrix.trace();
        if (tr.re - n as f64).abs() > tol.normalization || tr.im.abs() > tol.normalization {
            return Err(Error::InvalidRdm(format!("trace {tr} differs from n = {n}")));
        }
        let min = eigh(&matrix)?.values.last().copied().unwrap_or(0.0);
        if min < -tol.normalization {
            return Err(Error::InvalidRdm(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        eigh(&self.matrix)
    }

    /// Natural occupation numbers, non-increasing.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.eigen()?.values, self.n)
    }
}

/// `I - γ`: the hole density matrix for `r - n` holes.
pub fn particle_hole_rdm(gamma: &OneRDM) -> Result<OneRDM> {
    let r = gamma.r();
    let hole = CMatrix::identity(r).sub(&gamma.matrix);
    OneRDM::new(r - gamma.n, hole)
}

/// Occupation numbers with their particle count.
///
/// No ordering or Pauli constraint is enforced on construction so that
/// checkers can report on invalid input; [`Spectrum::sorted`] produces the
/// canonical non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    #[serde(rename = "lambdas")]
    values: Vec<f64>,
    n: usize,
}

impl Spectrum {
    pub fn new(values: Vec<f64>, n: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values, n })
    }

    /// Stable sort into non-increasing order.
    pub fn sorted(mut values: Vec<f64>, n: usize) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values, n)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest deviation between two equal-length spectra compared as sorted multisets.
    pub fn multiset_distance(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let mut a = self.values.clone();
        let mut b = other.values.clone();
        a.sort_by(|x, y| y.total_cmp(x));
        b.sort_by(|x, y| y.total_cmp(x));
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn orb(p: usize) -> OrbitalIndex {
        OrbitalIndex::new(p, 64).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = basis_index(3, 6).unwrap();
        assert_eq!(b.len(), 20);
        assert_eq!(b[0].orbitals(), &[1, 2, 3]);
        assert_eq!(b[1].orbitals(), &[1, 2, 4]);
        assert_eq!(b[19].orbitals(), &[4, 5, 6]);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis_index(2, 6).unwrap().len(), 15);
        assert_eq!(basis_index(5, 8).unwrap().len(), 56);
        assert_eq!(basis_index(6, 6).unwrap().len(), 1);
    }

    #[test]
    fn basis_errors() {
        assert!(matches!(basis_index(4, 3), Err(Error::InvalidDimensions { .. })));
        assert!(matches!(basis_index(0, 3), Err(Error::InvalidDimensions { .. })));
        assert!(matches!(basis_index(10, 30), Err(Error::CapExceeded { .. })));
        assert!(matches!(basis_index_with_cap(3, 6, 19), Err(Error::CapExceeded { .. })));
        assert!(basis_index_with_cap(3, 6, 20).is_ok());
    }

    #[test]
    fn rank_inverts_enumeration() {
        for (n, r) in [(1, 4), (2, 6), (3, 6), (3, 7), (5, 8), (4, 10)] {
            for (k, m) in basis_masks(n, r).into_iter().enumerate() {
                assert_eq!(rank(m, n, r), k, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn det_index_validation() {
        assert!(DetIndex::new(vec![1, 3, 2]).is_err());
        assert!(DetIndex::new(vec![0, 1]).is_err());
        assert!(DetIndex::new(vec![1, 1]).is_err());
        let d = DetIndex::new(vec![2, 5]).unwrap();
        assert!(d.check(3, 6).is_err());
        assert!(d.check(2, 4).is_err());
        assert!(d.check(2, 5).is_ok());
        let (d, s) = DetIndex::from_unordered(&[6, 5, 3]).unwrap().unwrap();
        assert_eq!((d.orbitals(), s), (&[3, 5, 6][..], -1.0));
        let (d, s) = DetIndex::from_unordered(&[6, 2, 4]).unwrap().unwrap();
        assert_eq!((d.orbitals(), s), (&[2, 4, 6][..], 1.0));
        assert!(DetIndex::from_unordered(&[1, 2, 1]).unwrap().is_none());
    }

    #[test]
    fn slater_unit_vectors() {
        let s = slater_of(&[1, 2, 3], 3, 6).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);
        assert_eq!(s.norm(), 1.0);
        let s = slater_of(&[4, 5, 6], 3, 6).unwrap();
        assert_eq!(s.amplitudes()[19], ONE);
        let s = slater_of(&[1, 2], 2, 6).unwrap();
        let g = one_rdm(&s).unwrap();
        assert_eq!(g.matrix().clone(), CMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(slater_of(&[1, 2, 7], 3, 6).is_err());
        assert!(slater_of(&[1, 2], 3, 6).is_err());
    }

    #[test]
    fn inner_products() {
        let a = slater_of(&[1, 2, 3], 3, 6).unwrap();
        let b = slater_of(&[1, 2, 4], 3, 6).unwrap();
        assert_eq!(inner(&a, &a).unwrap(), ONE);
        assert_eq!(inner(&a, &b).unwrap(), ZERO);
        let (x, y) = (C64::new(0.6, 0.2), C64::new(-0.1, 0.7));
        let mix = a.combine(x, &b, y).unwrap();
        assert!((inner(&mix, &a).unwrap() - x.conj()).norm() < 1e-15);
        let other = slater_of(&[1, 2], 2, 6).unwrap();
        assert!(matches!(inner(&a, &other), Err(Error::StateMismatch { .. })));
    }

    #[test]
    fn partial_inner_signs() {
        let s = slater_of(&[1, 2, 3], 3, 6).unwrap();
        let k = 1.0 / 3f64.sqrt();
        let p1 = partial_inner(orb(1), &s).unwrap();
        assert!(
            p1.max_abs_diff(&slater_of(&[2, 3], 2, 6).unwrap().scaled(c(k)))
                .unwrap()
                < 1e-15
        );
        let p2 = partial_inner(orb(2), &s).unwrap();
        assert!(
            p2.max_abs_diff(&slater_of(&[1, 3], 2, 6).unwrap().scaled(c(-k)))
                .unwrap()
                < 1e-15
        );
        let p3 = partial_inner(orb(3), &s).unwrap();
        assert!(
            p3.max_abs_diff(&slater_of(&[1, 2], 2, 6).unwrap().scaled(c(k)))
                .unwrap()
                < 1e-15
        );
        let p4 = partial_inner(orb(4), &s).unwrap();
        assert_eq!(p4.norm(), 0.0);
        // γ_11 = N·‖partial_inner(1, Ψ)‖²
        assert!((3.0 * p1.norm_sqr() - 1.0).abs() < 1e-15);
        let one = slater_of(&[2], 1, 6).unwrap();
        assert!(matches!(
            partial_inner(orb(2), &one),
            Err(Error::TooFewParticles { .. })
        ));
    }

    #[test]
    fn wedge_inverts_contraction_on_occupied_orbital() {
        let psi = FermionState::from_terms(3, 6, &[(vec![1, 2, 3], c(0.6)), (vec![1, 4, 5], c(0.8))]).unwrap();
        let mut e1 = vec![ZERO; 6];
        e1[0] = ONE;
        let rem = contract_orbital(&e1, &psi).unwrap().scaled(c(3f64.sqrt()));
        let back = wedge(&e1, &rem).unwrap();
        assert!(back.max_abs_diff(&psi).unwrap() < 1e-15);
        assert!((rem.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rdm_of_two_determinant_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = FermionState::from_terms(3, 6, &[(vec![1, 2, 3], c(h)), (vec![1, 4, 5], c(h))]).unwrap();
        let g = one_rdm(&psi).unwrap();
        let want = CMatrix::from_diag(&[1.0, 0.5, 0.5, 0.5, 0.5, 0.0]);
        assert!(g.matrix().max_abs_diff(&want) < 1e-15);
        assert_eq!(g.spectrum().unwrap().n(), 3);
    }

    #[test]
    fn one_rdm_rejects_unnormalized() {
        let s = slater_of(&[1, 2, 3], 3, 6).unwrap().scaled(c(1.1));
        assert!(matches!(one_rdm(&s), Err(Error::NotNormalized(_))));
        // within tolerance is accepted
        let s = slater_of(&[1, 2, 3], 3, 6).unwrap().scaled(c(1.0 + 1e-10));
        assert!(one_rdm(&s).is_ok());
    }

    #[test]
    fn rotate_identity_and_permutation() {
        let psi = FermionState::from_terms(3, 6, &[(vec![1, 2, 3], c(0.6)), (vec![2, 4, 6], c(0.8))]).unwrap();
        let same = rotate(&psi, &CMatrix::identity(6)).unwrap();
        assert!(same.max_abs_diff(&psi).unwrap() < 1e-15);

        let mut perm = CMatrix::zeros(6, 6);
        for (i, j) in [(3, 0), (1, 1), (2, 2), (0, 3), (4, 4), (5, 5)] {
            perm[(i, j)] = ONE;
        }
        let s = rotate(&slater_of(&[1, 2, 3], 3, 6).unwrap(), &perm).unwrap();
        let target = slater_of(&[2, 3, 4], 3, 6).unwrap();
        let ov = inner(&target, &s).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-15);
        // [4,2,3] → [2,3,4] is two transpositions
        assert!((ov - ONE).norm() < 1e-15);
    }

    #[test]
    fn rotate_rejects_non_unitary() {
        let psi = slater_of(&[1, 2], 2, 3).unwrap();
        let m = CMatrix::identity(3).scale(c(2.0));
        assert!(matches!(rotate(&psi, &m), Err(Error::NotUnitary(_))));
        assert!(matches!(rotate(&psi, &CMatrix::identity(4)), Err(Error::Shape(_))));
    }

    #[test]
    fn particle_hole_examples() {
        let g = one_rdm(&slater_of(&[1, 2, 3], 3, 6).unwrap()).unwrap();
        let h = particle_hole_rdm(&g).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.matrix().clone(), CMatrix::from_diag(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]));

        let g = OneRDM::new(3, CMatrix::from_diag(&[0.9, 0.8, 0.7, 0.3, 0.2, 0.1])).unwrap();
        let h = particle_hole_rdm(&g).unwrap();
        let want = CMatrix::from_diag(&[0.1, 0.2, 0.3, 0.7, 0.8, 0.9]);
        assert!(h.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn rdm_validation() {
        assert!(OneRDM::new(2, CMatrix::from_diag(&[1.0, 0.5])).is_err());
        assert!(OneRDM::new(1, CMatrix::from_diag(&[1.5, -0.5])).is_err());
        let mut m = CMatrix::from_diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1);
        assert!(OneRDM::new(1, m).is_err());
    }

    #[test]
    fn spectrum_helpers() {
        let s = Spectrum::sorted(vec![0.1, 0.9, 0.5], 1).unwrap();
        assert_eq!(s.values(), &[0.9, 0.5, 0.1]);
        assert!(s.is_sorted());
        assert!(!Spectrum::new(vec![0.1, 0.9], 1).unwrap().is_sorted());
        assert!(Spectrum::new(vec![], 1).is_err());
        assert!(Spectrum::new(vec![f64::NAN], 1).is_err());
        let t = Spectrum::new(vec![0.5, 0.9, 0.1], 1).unwrap();
        assert_eq!(s.multiset_distance(&t), 0.0);
    }
}
