//! Representability conditions on natural occupation numbers, and the
//! constructions that go with them.
//!
//! The spectrum checks take a sorted [`Spectrum`] and an explicit tolerance.
//! Constructors and decompositions live in the submodules and are re-exported
//! here.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fermion::Spectrum;

mod natural;
mod preimage;
mod split;
mod weyl;

pub use natural::{natural_form, NaturalForm, PAIR_ORBITALS};
pub use preimage::{construct_bd_preimage, construct_two_preimage, PreimageCoefficients};
pub use split::{coleman_split, cross_contraction, eigen_relations, EigenRelations, SplitDecomposition};
pub use weyl::{check_weyl_2x2, weyl_blocks, WeylBlocks};

/// Outcome of a single named condition check.
///
/// Residuals are oriented so that a value above the tolerance is a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn from_residuals(check: &str, residuals: Vec<f64>, tol: f64) -> Self {
        let pass = residuals.iter().all(|&r| r <= tol);
        Self {
            check: check.to_string(),
            pass,
            residuals,
            notes: Vec::new(),
        }
    }

    pub fn worst(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Borland-Dennis report for a sorted six-entry spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BDReport {
    /// `|λ_k + λ_{7-k} - 1|` for k = 1, 2, 3.
    pub equality_residuals: [f64; 3],
    /// `λ3 + 1 - λ1 - λ2`; negative means the inequality fails.
    pub inequality_slack: f64,
    pub pass: bool,
}

impl BDReport {
    /// `max(equality residuals, -slack, 0)`
    pub fn worst(&self) -> f64 {
        self.equality_residuals
            .iter()
            .copied()
            .fold((-self.inequality_slack).max(0.0), f64::max)
    }
}

impl Serialize for BDReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BDReport", 4)?;
        st.serialize_field("check", "bd")?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("residuals", &self.equality_residuals)?;
        st.serialize_field("slack", &self.inequality_slack)?;
        st.end()
    }
}

fn require_sorted(spec: &Spectrum) -> Result<()> {
    if spec.is_sorted() {
        Ok(())
    } else {
        Err(Error::Unsorted)
    }
}

/// `|λ_{2k-1} - λ_{2k}|` over consecutive pairs; a trailing unpaired value
/// contributes itself.
pub fn pairing_residuals(values: &[f64]) -> Vec<f64> {
    values
        .chunks(2)
        .map(|c| match c {
            [a, b] => (a - b).abs(),
            [a] => a.abs(),
            _ => unreachable!(),
        })
        .collect()
}

/// Pauli bounds `0 ≤ λ ≤ 1` and trace `Σλ = N`.
pub fn check_pauli(spec: &Spectrum, tol: f64) -> Result<CheckReport> {
    require_sorted(spec)?;
    let vals = spec.values();
    let below = (-vals[vals.len() - 1]).max(0.0);
    let above = (vals[0] - 1.0).max(0.0);
    let trace = (spec.sum() - spec.n() as f64).abs();
    Ok(CheckReport::from_residuals("pauli", vec![below.max(above), trace], tol))
}

/// Borland-Dennis equalities `λ_k + λ_{7-k} = 1` and inequality `λ1 + λ2 ≤ λ3 + 1`.
pub fn check_bd(spec: &Spectrum, tol: f64) -> Result<BDReport> {
    if spec.len() != 6 {
        return Err(Error::InvalidSpectrum(format!(
            "Borland-Dennis check needs 6 occupations, got {}",
            spec.len()
        )));
    }
    require_sorted(spec)?;
    let l = spec.values();
    let equality_residuals = [
        (l[0] + l[5] - 1.0).abs(),
        (l[1] + l[4] - 1.0).abs(),
        (l[2] + l[3] - 1.0).abs(),
    ];
    let inequality_slack = l[2] + 1.0 - l[0] - l[1];
    let pass = equality_residuals.iter().all(|&r| r <= tol) && inequality_slack >= -tol;
    Ok(BDReport {
        equality_residuals,
        inequality_slack,
        pass,
    })
}

/// Two-particle pure-state representability: non-zero occupations come in equal pairs.
pub fn check_two_rep(spec: &Spectrum, tol: f64) -> Result<CheckReport> {
    if spec.n() != 2 {
        return Err(Error::InvalidSpectrum(format!(
            "two-particle check needs n = 2, got n = {}",
            spec.n()
        )));
    }
    require_sorted(spec)?;
    let nonzero: Vec<f64> = spec.values().iter().copied().filter(|&x| x > tol).collect();
    Ok(CheckReport::from_residuals("two_rep", pairing_residuals(&nonzero), tol))
}

/// Rank `N + 2` with `N` odd: `λ1 = 1` and the remaining occupations pair up.
pub fn check_rank_n_plus_2(spec: &Spectrum, n: usize, tol: f64) -> Result<CheckReport> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidSpectrum(format!("rank N+2 check needs odd N, got {n}")));
    }
    if spec.len() != n + 2 {
        return Err(Error::InvalidSpectrum(format!(
            "rank N+2 check needs {} occupations, got {}",
            n + 2,
            spec.len()
        )));
    }
    require_sorted(spec)?;
    let l = spec.values();
    let mut residuals = vec![(l[0] - 1.0).abs()];
    residuals.extend(pairing_residuals(&l[1..]));
    Ok(CheckReport::from_residuals("rank_n_plus_2", residuals, tol))
}
