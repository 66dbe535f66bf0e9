//! Seeded Monte-Carlo campaigns over random pure states.
//!
//! Sample `i` of a campaign with seed `s` is drawn from its own ChaCha stream
//! seeded with `s ^ i`, so a campaign gives the same report whether samples
//! run serially or in parallel, and any single sample can be replayed alone.

use std::fmt;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{
    binomial, contract_orbital, one_rdm, partial_inner, rdm_matrix, FermionState, OrbitalIndex, DEFAULT_DIM_CAP,
};
use crate::io::write_state;
use crate::numerics::{eigh, vdot, vec_norm, CMatrix, Tolerances, C64};
use crate::representability::{check_bd, pairing_residuals, SplitDecomposition};

/// Top occupation of the complement must be this close to 1 to serve as g1.
pub const UNIT_OCCUPATION_TOL: f64 = 1e-6;

/// Normalized complex Gaussian amplitudes (unitarily invariant measure).
pub fn random_state(n: usize, r: usize, seed: u64) -> Result<FermionState> {
    let dim = binomial(r, n);
    if n == 0 || n > r {
        return Err(Error::InvalidDimensions { n, r });
    }
    if dim > DEFAULT_DIM_CAP as u128 {
        return Err(Error::CapExceeded {
            n,
            r,
            dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    FermionState::new(n, r, amps)?.normalized()
}

/// Seed of sample `index` within a campaign.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    BdNecessity,
    HoleDuality,
    Conjecture,
}

impl CampaignKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::BdNecessity => "bd_necessity",
            Self::HoleDuality => "hole_duality",
            Self::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for CampaignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n: usize,
    pub r: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
}

impl CampaignConfig {
    pub fn new(n: usize, r: usize, samples: u64, seed: u64) -> Self {
        Self {
            n,
            r,
            samples,
            seed,
            tolerance: Tolerances::default().check,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Input("a campaign needs at least one sample".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::Input(format!("invalid tolerance {}", self.tolerance)));
        }
        if self.n == 0 || self.n > self.r {
            return Err(Error::InvalidDimensions { n: self.n, r: self.r });
        }
        let dim = binomial(self.r, self.n);
        if dim > DEFAULT_DIM_CAP as u128 {
            return Err(Error::CapExceeded {
                n: self.n,
                r: self.r,
                dim,
                cap: DEFAULT_DIM_CAP,
            });
        }
        Ok(())
    }
}

/// Per-sample result of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleOutcome {
    /// Campaign statistic (see each campaign).
    pub statistic: f64,
    /// Quantity compared against the tolerance.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationPayload {
    pub index: u64,
    /// Seed that regenerates the offending state via [`random_state`].
    pub sample_seed: u64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: CampaignKind,
    pub n: usize,
    pub r: usize,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub violations: u64,
    pub worst_residual: f64,
    pub stat: Stat,
    /// False when the dimensions fall outside the theorem the campaign tests.
    pub applicable: bool,
    /// Conjecture campaign only: `max |λ1 + λR - 1|`, reported and never asserted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub violation_payloads: Vec<ViolationPayload>,
}

fn sorted_occupations(psi: &FermionState) -> Result<Vec<f64>> {
    Ok(one_rdm(psi)?.spectrum()?.values().to_vec())
}

/// Evaluate one sample of a campaign.
pub fn evaluate_sample(kind: CampaignKind, psi: &FermionState) -> Result<SampleOutcome> {
    let l = sorted_occupations(psi)?;
    match kind {
        CampaignKind::BdNecessity => {
            let spec = crate::fermion::Spectrum::new(l, psi.n())?;
            let worst = check_bd(&spec, 0.0)?.worst();
            Ok(SampleOutcome {
                statistic: worst,
                residual: worst,
            })
        }
        CampaignKind::HoleDuality => {
            let worst = if psi.n().is_multiple_of(2) {
                pairing_residuals(&l).into_iter().fold(0.0, f64::max)
            } else {
                pairing_residuals(&l[1..])
                    .into_iter()
                    .fold((l[0] - 1.0).abs(), f64::max)
            };
            Ok(SampleOutcome {
                statistic: worst,
                residual: worst,
            })
        }
        CampaignKind::Conjecture => {
            let sum = l[0] + l[l.len() - 1];
            Ok(SampleOutcome {
                statistic: sum,
                residual: (sum - 1.0).max(0.0),
            })
        }
    }
}

/// Regenerate and evaluate a single sample from its seed.
pub fn replay(kind: CampaignKind, n: usize, r: usize, sample_seed: u64) -> Result<SampleOutcome> {
    evaluate_sample(kind, &random_state(n, r, sample_seed)?)
}

fn run_campaign(
    kind: CampaignKind,
    cfg: &CampaignConfig,
    applicable: bool,
    notes: Vec<String>,
) -> Result<CampaignReport> {
    cfg.validate()?;
    let outcomes: Vec<SampleOutcome> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| replay(kind, cfg.n, cfg.r, sample_seed(cfg.seed, i)))
        .collect::<Result<_>>()?;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut worst_residual = 0.0f64;
    let mut max_gap = 0.0f64;
    let mut violation_payloads = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        min = min.min(o.statistic);
        max = max.max(o.statistic);
        sum += o.statistic;
        worst_residual = worst_residual.max(o.residual);
        max_gap = max_gap.max((o.statistic - 1.0).abs());
        if o.residual > cfg.tolerance {
            violation_payloads.push(ViolationPayload {
                index: i as u64,
                sample_seed: sample_seed(cfg.seed, i as u64),
                residual: o.residual,
            });
        }
    }
    Ok(CampaignReport {
        campaign: kind,
        n: cfg.n,
        r: cfg.r,
        samples: cfg.samples,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        violations: violation_payloads.len() as u64,
        worst_residual,
        stat: Stat {
            min,
            max,
            mean: sum / outcomes.len() as f64,
        },
        applicable,
        max_gap: (kind == CampaignKind::Conjecture).then_some(max_gap),
        notes,
        violation_payloads,
    })
}

/// Borland-Dennis necessity on random three-fermion, six-orbital states.
///
/// Statistic: `max(equality residuals, max(0, -inequality slack))` per sample.
pub fn campaign_bd_necessity(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.n != 3 || cfg.r != 6 {
        return Err(Error::NotApplicable(format!(
            "Borland-Dennis campaign needs (n=3, r=6), got (n={}, r={})",
            cfg.n, cfg.r
        )));
    }
    run_campaign(CampaignKind::BdNecessity, cfg, true, Vec::new())
}

/// Pairing structure of the spectrum: for even `n`, all occupations pair up
/// (two-particle case); for odd `n`, `λ1 = 1` and the rest pair up (rank `n + 2`).
///
/// Dimensions outside `n = 2` or `r = n + 2` with `n` odd still run, but the
/// report is marked not applicable and large statistics are expected.
pub fn campaign_hole_duality(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let applicable = cfg.n == 2 || (cfg.n % 2 == 1 && cfg.r == cfg.n + 2);
    let mut notes = Vec::new();
    if !applicable {
        notes.push(format!(
            "(n={}, r={}) is outside the pairing theorems (n = 2, or n odd with r = n + 2); violations are expected",
            cfg.n, cfg.r
        ));
    }
    run_campaign(CampaignKind::HoleDuality, cfg, applicable, notes)
}

/// `λ1 + λR` on random states. Only the proven bound `λ1 + λR ≤ 1` counts
/// as a violation; the gap to equality is reported in `max_gap`.
pub fn campaign_conjecture(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let applicable = cfg.n % 2 == 1 && cfg.r == cfg.n + 3;
    let mut notes =
        vec!["violations count lambda1 + lambdaR > 1 + tolerance only; max_gap is informational".to_string()];
    if !applicable {
        notes.push(format!(
            "(n={}, r={}) is not of the form n odd, r = n + 3",
            cfg.n, cfg.r
        ));
    }
    run_campaign(CampaignKind::Conjecture, cfg, applicable, notes)
}

pub fn run(kind: CampaignKind, cfg: &CampaignConfig) -> Result<CampaignReport> {
    match kind {
        CampaignKind::BdNecessity => campaign_bd_necessity(cfg),
        CampaignKind::HoleDuality => campaign_hole_duality(cfg),
        CampaignKind::Conjecture => campaign_conjecture(cfg),
    }
}

/// Write each violating state to `dir` as a state file, returning the paths.
pub fn write_anomalies(report: &CampaignReport, dir: &Path, limit: usize) -> Result<Vec<PathBuf>> {
    if report.violation_payloads.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir)?;
    report
        .violation_payloads
        .iter()
        .take(limit)
        .map(|v| {
            let psi = random_state(report.n, report.r, v.sample_seed)?;
            let path = dir.join(format!(
                "{}_seed{}_sample{}.json",
                report.campaign, report.seed, v.index
            ));
            write_state(&path, &psi)?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Evaluated,
    /// λ1 = 1: there is no complement to probe.
    SkippedFullyOccupied,
}

/// Strong-orthogonality probe for `n` odd, `r = n + 3`.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeRecord {
    pub status: ProbeStatus,
    pub lambda1: f64,
    /// Occupation of g1 in the complement (expected 1).
    pub g1_occupation: f64,
    /// The complement has more than one unit occupation, so g1 is not unique.
    pub g1_ambiguous: bool,
    /// `‖⟨g1, Φ1⟩_1‖`
    pub g1_overlap: f64,
    /// `‖γ g1 - (1-λ1) g1‖`
    pub eigen_residual: f64,
    /// `|⟨g1, γ g1⟩ + λ1 - 1|`
    pub gp_residual: f64,
    /// `|λR - (1-λ1)|`: is `1-λ1` the smallest occupation?
    pub smallest_residual: f64,
}

impl ProbeRecord {
    pub fn worst(&self) -> f64 {
        self.g1_overlap
            .max(self.eigen_residual)
            .max(self.gp_residual)
            .max(self.smallest_residual)
    }
}

fn unit_occupation_orbital(phi2: &FermionState) -> Result<(Vec<C64>, f64, bool)> {
    let e = eigh(&rdm_matrix(phi2))?;
    let top = e.values[0];
    if (top - 1.0).abs() > UNIT_OCCUPATION_TOL {
        return Err(Error::Anomaly(format!(
            "complement has no unit occupation (largest {top:.12})"
        )));
    }
    let ambiguous = e.values.len() > 1 && (e.values[1] - 1.0).abs() <= UNIT_OCCUPATION_TOL;
    Ok((e.vector(0), top, ambiguous))
}

fn split_for(psi: &FermionState, tol: &Tolerances) -> Result<SplitDecomposition> {
    crate::representability::coleman_split(psi, tol)
}

/// Locate the unit-occupation orbital g1 of the complement Φ2 and measure how
/// far it is from being strongly orthogonal to Φ1 and an eigenvector of γ.
pub fn probe_strong_orthogonality(psi: &FermionState, tol: &Tolerances) -> Result<ProbeRecord> {
    if psi.n().is_multiple_of(2) || psi.r() != psi.n() + 3 || psi.n() < 3 {
        return Err(Error::NotApplicable(format!(
            "probe needs n odd (≥ 3) and r = n + 3, got (n={}, r={})",
            psi.n(),
            psi.r()
        )));
    }
    let split = split_for(psi, tol)?;
    let Some(phi2) = &split.complement else {
        return Ok(ProbeRecord {
            status: ProbeStatus::SkippedFullyOccupied,
            lambda1: split.lambda1,
            g1_occupation: 0.0,
            g1_ambiguous: false,
            g1_overlap: 0.0,
            eigen_residual: 0.0,
            gp_residual: 0.0,
            smallest_residual: 0.0,
        });
    };
    let (g1, occ, ambiguous) = unit_occupation_orbital(phi2)?;
    let gamma = one_rdm(psi)?;
    let l1 = split.lambda1;
    let g_g1 = gamma.matrix().matvec(&g1);
    let eig_res: Vec<C64> = g_g1.iter().zip(&g1).map(|(a, b)| a - b * (1.0 - l1)).collect();
    let expectation = vdot(&g1, &g_g1).re;
    let l = split.spectrum.values();
    Ok(ProbeRecord {
        status: ProbeStatus::Evaluated,
        lambda1: l1,
        g1_occupation: occ,
        g1_ambiguous: ambiguous,
        g1_overlap: contract_orbital(&g1, &split.remainder)?.norm(),
        eigen_residual: vec_norm(&eig_res),
        gp_residual: (expectation + l1 - 1.0).abs(),
        smallest_residual: (l[l.len() - 1] - (1.0 - l1)).abs(),
    })
}

/// Residuals of `γ - λ1|φ1⟩⟨φ1| - (1-λ1)|g1⟩⟨g1| = XX† + YY†` with
/// `⟨Φ1, G1⟩ = Tr XY† = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstrainedWeylRecord {
    /// Max-entry residual of the matrix identity.
    pub residual: f64,
    /// `|Tr XY†|`
    pub trace_xy: f64,
}

/// `M[p, J] = √(n)·partial_inner(p, Φ)_J`, so `M M† = rdm(Φ)`; for a
/// single-particle state `M` is the amplitude column.
fn first_index_matrix(phi: &FermionState) -> Result<CMatrix> {
    if phi.n() == 1 {
        return Ok(CMatrix::from_fn(phi.r(), 1, |p, _| phi.amplitudes()[p]));
    }
    let k = (phi.n() as f64).sqrt();
    let rows: Vec<Vec<C64>> = (1..=phi.r())
        .map(|p| {
            Ok(partial_inner(OrbitalIndex::new(p, phi.r())?, phi)?
                .amplitudes()
                .iter()
                .map(|z| z * k)
                .collect())
        })
        .collect::<Result<_>>()?;
    CMatrix::from_rows(&rows)
}

pub fn verify_constrained_weyl(
    psi: &FermionState,
    split: &SplitDecomposition,
    tol: &Tolerances,
) -> Result<ConstrainedWeylRecord> {
    let Some(phi2) = &split.complement else {
        return Err(Error::NotApplicable("λ1 = 1: no complement".into()));
    };
    if split.strong_orth_residuals.iter().any(|&r| r > tol.check) {
        return Err(Error::NotApplicable(format!(
            "strong orthogonality residuals {:?} exceed {}",
            split.strong_orth_residuals, tol.check
        )));
    }
    let (g1, _, _) = unit_occupation_orbital(phi2)?;
    let n = psi.n() as f64;
    let g_state = contract_orbital(&g1, phi2)?.scaled(C64::new(n.sqrt(), 0.0));

    let l1 = split.lambda1;
    let x = first_index_matrix(&split.remainder)?.scale(C64::new(l1.sqrt(), 0.0));
    let y = first_index_matrix(&g_state)?.scale(C64::new((1.0 - l1).sqrt(), 0.0));

    let r = psi.r();
    let gamma = one_rdm(psi)?;
    let outer = |v: &[C64], w: f64| CMatrix::from_fn(r, r, |p, q| v[p] * v[q].conj() * w);
    let lhs = gamma.matrix().sub(&outer(&split.phi1, l1)).sub(&outer(&g1, 1.0 - l1));
    let rhs = x.matmul(&x.adjoint()).add(&y.matmul(&y.adjoint()));
    Ok(ConstrainedWeylRecord {
        residual: lhs.max_abs_diff(&rhs),
        trace_xy: x.matmul(&y.adjoint()).trace().norm(),
    })
}
