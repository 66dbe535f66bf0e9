use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermion::{
    contract_orbital, one_rdm, partial_inner, rdm_matrix, wedge, FermionState, OrbitalIndex, Spectrum,
};
use crate::numerics::{vec_norm, CMatrix, EigenDecomposition, Tolerances, C64};

/// `Ψ = √λ1·A(φ1 ⊗ Φ1) + √(1-λ1)·Φ2` with φ1 the top natural orbital.
#[derive(Debug, Clone)]
pub struct SplitDecomposition {
    /// Top natural orbital, in the original one-particle basis.
    pub phi1: Vec<C64>,
    pub lambda1: f64,
    /// Normalized (N-1)-particle remainder attached to φ1.
    pub remainder: FermionState,
    /// Normalized N-particle component with no weight on φ1; `None` when λ1 = 1.
    pub complement: Option<FermionState>,
    /// `‖⟨φ1, Φ2⟩_1‖` and `‖⟨Φ1, Φ2⟩_{2..N}‖`; zero when Φ2 is absent.
    pub strong_orth_residuals: [f64; 2],
    pub reconstruction_residual: f64,
    /// Sorted occupations of the parent state.
    pub spectrum: Spectrum,
    /// Natural orbitals of the parent state (columns aligned with `spectrum`).
    pub eigen: EigenDecomposition,
}

impl SplitDecomposition {
    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    /// Reassemble the parent state from its parts.
    pub fn reconstruct(&self) -> Result<FermionState> {
        let first = wedge(&self.phi1, &self.remainder)?.scaled(C64::new(self.lambda1.sqrt(), 0.0));
        match &self.complement {
            None => Ok(first),
            Some(phi2) => first.combine(
                C64::new(1.0, 0.0),
                phi2,
                C64::new((1.0 - self.lambda1).max(0.0).sqrt(), 0.0),
            ),
        }
    }

    /// Max-entry residual of `γ = λ1|φ1⟩⟨φ1| + λ1 γ1 + (1-λ1) γ2` where γ1, γ2
    /// are the density matrices of the remainder and the complement.
    pub fn density_residual(&self, gamma: &CMatrix) -> f64 {
        let r = self.phi1.len();
        let proj = CMatrix::from_fn(r, r, |p, q| self.phi1[p] * self.phi1[q].conj());
        let l1 = C64::new(self.lambda1, 0.0);
        let mut model = proj.scale(l1).add(&rdm_matrix(&self.remainder).scale(l1));
        if let Some(phi2) = &self.complement {
            model = model.add(&rdm_matrix(phi2).scale(C64::new(1.0 - self.lambda1, 0.0)));
        }
        model.max_abs_diff(gamma)
    }
}

/// `v_p = ⟨Φ1, partial_inner(p, Φ2)⟩`: the contraction of an (N-1)-particle
/// state against particles 2..N of an N-particle state.
pub fn cross_contraction(phi1: &FermionState, phi2: &FermionState) -> Result<Vec<C64>> {
    if phi1.r() != phi2.r() || phi1.n() + 1 != phi2.n() {
        return Err(Error::StateMismatch {
            n1: phi1.n(),
            r1: phi1.r(),
            n2: phi2.n(),
            r2: phi2.r(),
        });
    }
    (1..=phi2.r())
        .map(|p| {
            let part = partial_inner(OrbitalIndex::new(p, phi2.r())?, phi2)?;
            crate::fermion::inner(phi1, &part)
        })
        .collect()
}

/// Split a normalized state along its top natural orbital.
///
/// A degenerate top occupation below 1 makes φ1 ambiguous and is rejected.
/// When λ1 = 1 every occupied orbital factors out, so the solver's choice is
/// used and the complement is reported absent.
pub fn coleman_split(psi: &FermionState, tol: &Tolerances) -> Result<SplitDecomposition> {
    if psi.n() < 2 {
        return Err(Error::TooFewParticles { need: 2, have: psi.n() });
    }
    let gamma = one_rdm(psi)?;
    let eigen = gamma.eigen()?;
    let spectrum = Spectrum::new(eigen.values.clone(), psi.n())?;
    let l = spectrum.values();
    let lambda1 = l[0].min(1.0);
    if lambda1 <= tol.check {
        return Err(Error::NotApplicable(format!("top occupation {lambda1:.3e} is zero")));
    }
    let phi1 = eigen.vector(0);
    let n = psi.n() as f64;

    let remainder = contract_orbital(&phi1, psi)?.scaled(C64::new((n / lambda1).sqrt(), 0.0));
    let attached = wedge(&phi1, &remainder)?.scaled(C64::new(lambda1.sqrt(), 0.0));
    let rest = psi.combine(C64::new(1.0, 0.0), &attached, C64::new(-1.0, 0.0))?;
    let complement_absent = rest.norm() <= tol.assertion;
    if !complement_absent && l.len() > 1 && l[0] - l[1] <= tol.degeneracy * l[0] {
        return Err(Error::Degenerate(format!(
            "top occupation {:.12} is degenerate with {:.12}; the split orbital is ambiguous",
            l[0], l[1]
        )));
    }

    let (complement, strong_orth_residuals) = if complement_absent {
        (None, [0.0, 0.0])
    } else {
        let phi2 = rest.normalized()?;
        let r1 = contract_orbital(&phi1, &phi2)?.norm();
        let r2 = vec_norm(&cross_contraction(&remainder, &phi2)?);
        (Some(phi2), [r1, r2])
    };

    let mut split = SplitDecomposition {
        phi1,
        lambda1,
        remainder,
        complement,
        strong_orth_residuals,
        reconstruction_residual: 0.0,
        spectrum,
        eigen,
    };
    split.reconstruction_residual = split.reconstruct()?.max_abs_diff(psi)?;
    Ok(split)
}

/// Occupation relations read off the split in the natural-orbital basis:
/// for every natural orbital k ≥ 2, `λ_k = λ1·n_k(Φ1) + (1-λ1)·n_k(Φ2)`,
/// where `n_k` is the occupation of orbital k in each component.
#[derive(Debug, Clone, Serialize)]
pub struct EigenRelations {
    /// `|λ_k - λ1 n_k(Φ1) - (1-λ1) n_k(Φ2)|` for k = 2..R.
    pub residuals: Vec<f64>,
    /// `n_k(Φ1)` for k = 2..R.
    pub remainder_occupations: Vec<f64>,
    /// `n_k(Φ2)` for k = 2..R (zeros when Φ2 is absent).
    pub complement_occupations: Vec<f64>,
    /// Max-entry residual of the full density-matrix decomposition.
    pub density_residual: f64,
}

impl EigenRelations {
    pub fn worst(&self) -> f64 {
        self.residuals.iter().copied().fold(self.density_residual, f64::max)
    }
}

pub fn eigen_relations(psi: &FermionState, split: &SplitDecomposition) -> Result<EigenRelations> {
    let gamma = one_rdm(psi)?;
    let occupation = |m: &CMatrix, k: usize| {
        let v = split.eigen.vector(k);
        crate::numerics::vdot(&v, &m.matvec(&v)).re
    };
    let g1 = rdm_matrix(&split.remainder);
    let g2 = split.complement.as_ref().map(rdm_matrix);
    let l1 = split.lambda1;
    let mut residuals = Vec::new();
    let mut remainder_occupations = Vec::new();
    let mut complement_occupations = Vec::new();
    for k in 1..psi.r() {
        let o1 = occupation(&g1, k);
        let o2 = g2.as_ref().map_or(0.0, |g| occupation(g, k));
        residuals.push((split.spectrum.values()[k] - l1 * o1 - (1.0 - l1) * o2).abs());
        remainder_occupations.push(o1);
        complement_occupations.push(o2);
    }
    Ok(EigenRelations {
        residuals,
        remainder_occupations,
        complement_occupations,
        density_residual: split.density_residual(gamma.matrix()),
    })
}
