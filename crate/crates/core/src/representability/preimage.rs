use serde::Serialize;

use super::{check_bd, check_two_rep};
use crate::error::{Error, Result};
use crate::fermion::{FermionState, Spectrum};
use crate::numerics::C64;

/// Squared moduli of the four amplitudes in the three-fermion pre-image
/// `â[1,2,3] + b̂[1,4,5] + ŝ[6,2,4] + t̂[6,5,3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreimageCoefficients {
    pub a2: f64,
    pub b2: f64,
    pub s2: f64,
    pub t2: f64,
}

impl PreimageCoefficients {
    /// Invert the occupation map for a sorted spectrum satisfying the
    /// Borland-Dennis equalities. Values may be slightly negative.
    pub fn from_spectrum(l: &[f64; 6]) -> Self {
        Self {
            a2: 0.5 * (l[1] + l[2] - l[5]),
            b2: 0.5 * (l[0] - l[1] + l[3]),
            s2: 0.5 * (l[1] - l[2] + l[5]),
            t2: 0.5 * (l[5] - l[1] + l[2]),
        }
    }

    /// Occupations of orbitals 1..6 produced by these moduli.
    pub fn occupations(&self) -> [f64; 6] {
        let Self { a2, b2, s2, t2 } = *self;
        [a2 + b2, a2 + s2, a2 + t2, b2 + s2, b2 + t2, s2 + t2]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a2, self.b2, self.s2, self.t2]
    }
}

/// Explicit pre-image for a Borland-Dennis-admissible spectrum.
///
/// Canonical-order amplitudes are real and non-negative; relative to the
/// display order `[6,5,3]` the last term therefore carries a minus sign.
pub fn construct_bd_preimage(spec: &Spectrum, tol: f64) -> Result<(PreimageCoefficients, FermionState)> {
    let report = check_bd(spec, tol)?;
    if !report.pass {
        return Err(Error::BdViolation(format!(
            "equality residuals {:?}, inequality slack {:.3e}",
            report.equality_residuals, report.inequality_slack
        )));
    }
    let l: [f64; 6] = spec.values().try_into().expect("length checked");
    let raw = PreimageCoefficients::from_spectrum(&l);
    if let Some(bad) = raw.as_array().iter().find(|&&x| x < -tol) {
        // only t2 can go negative for sorted input, and then the inequality fails
        return Err(Error::BdViolation(format!("negative squared modulus {bad:.3e}")));
    }
    let c = PreimageCoefficients {
        a2: raw.a2.max(0.0),
        b2: raw.b2.max(0.0),
        s2: raw.s2.max(0.0),
        t2: raw.t2.max(0.0),
    };
    let amp = |x: f64| C64::new(x.sqrt(), 0.0);
    let state = FermionState::from_terms(
        3,
        6,
        &[
            (vec![1, 2, 3], amp(c.a2)),
            (vec![1, 4, 5], amp(c.b2)),
            (vec![2, 4, 6], amp(c.s2)),
            (vec![3, 5, 6], amp(c.t2)),
        ],
    )?
    .normalized()?;
    Ok((c, state))
}

/// Two-particle pre-image `Σ_k e^{iθ_k} √λ_{2k} [2k-1, 2k]` over the non-zero pairs.
pub fn construct_two_preimage(spec: &Spectrum, phases: &[f64], tol: f64) -> Result<FermionState> {
    let report = check_two_rep(spec, tol)?;
    if !report.pass {
        return Err(Error::PairingFailure(format!("pair residuals {:?}", report.residuals)));
    }
    let r = spec.len();
    let pairs: Vec<f64> = spec
        .values()
        .chunks(2)
        .filter(|c| c[0] > tol)
        .map(|c| 0.5 * (c[0] + c.get(1).copied().unwrap_or(0.0)))
        .collect();
    if phases.len() != pairs.len() {
        return Err(Error::Input(format!(
            "expected {} phases (one per occupied pair), got {}",
            pairs.len(),
            phases.len()
        )));
    }
    let terms: Vec<(Vec<usize>, C64)> = pairs
        .iter()
        .zip(phases)
        .enumerate()
        .map(|(k, (&lam, &theta))| (vec![2 * k + 1, 2 * k + 2], C64::from_polar(lam.sqrt(), theta)))
        .collect();
    FermionState::from_terms(2, r, &terms)?.normalized()
}
