//! JSON file formats for states and spectra.
//!
//! State file:
//! `{"n":3,"r":6,"amplitudes":[{"orbitals":[1,2,3],"re":0.7,"im":0.0}, ...]}`
//! with 1-based, strictly increasing orbitals; omitted determinants are zero.
//!
//! Spectrum file: `{"n":3,"lambdas":[0.9,0.8,0.7,0.3,0.2,0.1]}` (`n` optional).

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{DetIndex, FermionState};
use crate::numerics::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub orbitals: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub r: usize,
    pub amplitudes: Vec<AmplitudeEntry>,
}

impl StateFile {
    pub fn from_state(psi: &FermionState) -> Self {
        let amplitudes = psi
            .basis()
            .into_iter()
            .zip(psi.amplitudes())
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(det, z)| AmplitudeEntry {
                orbitals: det.orbitals().to_vec(),
                re: z.re,
                im: z.im,
            })
            .collect();
        Self {
            n: psi.n(),
            r: psi.r(),
            amplitudes,
        }
    }

    pub fn to_state(&self) -> Result<FermionState> {
        let mut psi = FermionState::zero(self.n, self.r)?;
        let mut seen = BTreeSet::new();
        let mut amps = psi.amplitudes().to_vec();
        for entry in &self.amplitudes {
            let det = DetIndex::new(entry.orbitals.clone())?;
            det.check(self.n, self.r)?;
            if !seen.insert(det.clone()) {
                return Err(Error::Input(format!("determinant {det} listed twice")));
            }
            amps[psi.index_of(&det)?] = C64::new(entry.re, entry.im);
        }
        psi = FermionState::new(self.n, self.r, amps)?;
        Ok(psi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub lambdas: Vec<f64>,
}

pub fn parse_state(text: &str) -> Result<FermionState> {
    serde_json::from_str::<StateFile>(text)?.to_state()
}

pub fn state_to_json(psi: &FermionState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from_state(psi))?)
}

pub fn read_state(path: impl AsRef<Path>) -> Result<FermionState> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn write_state(path: impl AsRef<Path>, psi: &FermionState) -> Result<()> {
    let mut text = state_to_json(psi)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn parse_spectrum_file(text: &str) -> Result<SpectrumFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_spectrum_file(path: impl AsRef<Path>) -> Result<SpectrumFile> {
    parse_spectrum_file(&fs::read_to_string(path)?)
}
