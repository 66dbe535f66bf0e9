use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermion::{one_rdm, rotate, FermionState, Spectrum};
use crate::numerics::{CMatrix, Tolerances, C64};

/// Natural orbitals paired by complementary occupation: `{1,6}, {2,5}, {3,4}`.
/// Bit `a`, `b`, `c` of a coefficient key picks the second member of each pair.
pub const PAIR_ORBITALS: [[usize; 2]; 3] = [[1, 6], [2, 5], [3, 4]];

/// A three-fermion, six-orbital state expressed in its natural-orbital basis.
#[derive(Debug, Clone)]
pub struct NaturalForm {
    /// `x_abc` at index `4a + 2b + c`: amplitude of the determinant
    /// `[f_a, g_b, h_c]` taken in that display order (one orbital from each pair).
    pub coefficients: [C64; 8],
    /// Norm of the amplitudes on the remaining twelve determinants.
    pub leakage: f64,
    pub spectrum: Spectrum,
    /// Natural orbitals as columns, ordered by descending occupation.
    pub orbitals: CMatrix,
    /// The state rewritten in the natural-orbital basis.
    pub state: FermionState,
}

impl NaturalForm {
    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> C64 {
        self.coefficients[4 * a + 2 * b + c]
    }
}

#[derive(Serialize)]
struct Coefficient {
    key: String,
    re: f64,
    im: f64,
}

impl Serialize for NaturalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<Coefficient> = (0..8)
            .map(|k| Coefficient {
                key: format!("x{}{}{}", k >> 2 & 1, k >> 1 & 1, k & 1),
                re: self.coefficients[k].re,
                im: self.coefficients[k].im,
            })
            .collect();
        let mut st = s.serialize_struct("NaturalForm", 3)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.serialize_field("leakage", &self.leakage)?;
        st.serialize_field("lambdas", self.spectrum.values())?;
        st.end()
    }
}

/// Rotate a (3, 6) state into its natural-orbital basis and read off the
/// eight amplitudes that take one orbital from each complementary pair.
///
/// Any pair of occupations closer than the degeneracy tolerance makes the
/// basis ambiguous and is reported as an error.
pub fn natural_form(psi: &FermionState, tol: &Tolerances) -> Result<NaturalForm> {
    if psi.n() != 3 || psi.r() != 6 {
        return Err(Error::NotApplicable(format!(
            "natural form is defined for (n=3, r=6), got (n={}, r={})",
            psi.n(),
            psi.r()
        )));
    }
    let gamma = one_rdm(psi)?;
    let eigen = gamma.eigen()?;
    let l = &eigen.values;
    let scale = l[0].abs().max(f64::MIN_POSITIVE);
    if let Some(k) = (0..5).find(|&k| l[k] - l[k + 1] <= tol.degeneracy * scale) {
        return Err(Error::Degenerate(format!(
            "occupations {} and {} coincide ({:.12} vs {:.12}); perturb the state or fix a basis by hand",
            k + 1,
            k + 2,
            l[k],
            l[k + 1]
        )));
    }
    let state = rotate(psi, &eigen.vectors.adjoint())?;

    let mut coefficients = [C64::new(0.0, 0.0); 8];
    for (k, slot) in coefficients.iter_mut().enumerate() {
        let orbs = [
            PAIR_ORBITALS[0][k >> 2 & 1],
            PAIR_ORBITALS[1][k >> 1 & 1],
            PAIR_ORBITALS[2][k & 1],
        ];
        *slot = state.amplitude_unordered(&orbs)?;
    }
    let one_per_pair = |orbs: &[usize]| {
        PAIR_ORBITALS
            .iter()
            .all(|pair| orbs.iter().filter(|o| pair.contains(o)).count() == 1)
    };
    let leakage = state
        .basis()
        .iter()
        .zip(state.amplitudes())
        .filter(|(det, _)| !one_per_pair(det.orbitals()))
        .map(|(_, z)| z.norm_sqr())
        .sum::<f64>()
        .sqrt();

    Ok(NaturalForm {
        coefficients,
        leakage,
        spectrum: Spectrum::new(l.clone(), 3)?,
        orbitals: eigen.vectors,
        state,
    })
}
