use serde::Serialize;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::numerics::{svd_small, CMatrix, Tolerances, C64};

/// 2×2 block structure of a state in eight-coefficient natural form.
///
/// `S` holds the amplitudes with the first orbital of pair {1,6}, `T` those
/// with the second; rows index pair {2,5}, columns pair {3,4}.
#[derive(Debug, Clone)]
pub struct WeylBlocks {
    pub s_matrix: CMatrix,
    pub t_matrix: CMatrix,
    /// `[[Tr SS†, Tr ST†], [Tr TS†, Tr TT†]]`: density block on orbitals {1,6}.
    pub w1: CMatrix,
    /// `SS† + TT†`: density block on orbitals {2,5}.
    pub w2: CMatrix,
    /// `S†S + T†T`: density block on orbitals {3,4} (up to transposition).
    pub w3: CMatrix,
    /// Larger eigenvalue of `SS†`.
    pub sigma: f64,
    /// Larger eigenvalue of `TT†`.
    pub tau: f64,
}

impl WeylBlocks {
    /// Occupations implied by the block diagonals, in natural order λ1..λ6.
    pub fn implied_lambdas(&self) -> [f64; 6] {
        [
            self.w1[(0, 0)].re,
            self.w2[(0, 0)].re,
            self.w3[(0, 0)].re,
            self.w3[(1, 1)].re,
            self.w2[(1, 1)].re,
            self.w1[(1, 1)].re,
        ]
    }

    /// Largest off-diagonal modulus across W1, W2, W3.
    pub fn off_diagonal(&self) -> f64 {
        [&self.w1, &self.w2, &self.w3]
            .iter()
            .map(|w| w[(0, 1)].norm().max(w[(1, 0)].norm()))
            .fold(0.0, f64::max)
    }

    /// Slacks of `σ + τ ≥ λ2`, `λ1 - σ + τ ≥ λ4`, `σ + λ6 - τ ≥ λ4`
    /// (non-negative when the inequality holds).
    pub fn chained_slacks(&self) -> [f64; 3] {
        let l = self.implied_lambdas();
        let (s, t) = (self.sigma, self.tau);
        [s + t - l[1], l[0] - s + t - l[3], s + l[5] - t - l[3]]
    }

    /// How far σ, τ fall outside `[0, λ1]` and `[0, λ6]`.
    pub fn parameter_excess(&self) -> f64 {
        let l = self.implied_lambdas();
        let out = |x: f64, hi: f64| (-x).max(x - hi).max(0.0);
        out(self.sigma, l[0]).max(out(self.tau, l[5]))
    }
}

#[derive(Serialize)]
struct WeylBlocksJson {
    implied_lambdas: [f64; 6],
    sigma: f64,
    tau: f64,
    off_diagonal: f64,
    chained_slacks: [f64; 3],
}

impl Serialize for WeylBlocks {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeylBlocksJson {
            implied_lambdas: self.implied_lambdas(),
            sigma: self.sigma,
            tau: self.tau,
            off_diagonal: self.off_diagonal(),
            chained_slacks: self.chained_slacks(),
        }
        .serialize(s)
    }
}

fn top_singular_sqr(m: &CMatrix) -> Result<f64> {
    let s = svd_small(m)?.singulars[0];
    Ok(s * s)
}

/// Assemble S, T and the W blocks from coefficients keyed `x_abc` at `4a + 2b + c`.
pub fn weyl_blocks(coeffs: &[C64; 8], tol: &Tolerances) -> Result<WeylBlocks> {
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.normalization {
        return Err(Error::NotNormalized(norm));
    }
    let s_matrix = CMatrix::from_fn(2, 2, |b, c| coeffs[2 * b + c]);
    let t_matrix = CMatrix::from_fn(2, 2, |b, c| coeffs[4 + 2 * b + c]);
    let sd = s_matrix.adjoint();
    let td = t_matrix.adjoint();
    let tr = |a: &CMatrix, b: &CMatrix| a.matmul(b).trace();
    let w1 = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => tr(&s_matrix, &sd),
        (0, 1) => tr(&s_matrix, &td),
        (1, 0) => tr(&t_matrix, &sd),
        _ => tr(&t_matrix, &td),
    });
    let w2 = s_matrix.matmul(&sd).add(&t_matrix.matmul(&td));
    let w3 = sd.matmul(&s_matrix).add(&td.matmul(&t_matrix));
    let sigma = top_singular_sqr(&s_matrix)?;
    let tau = top_singular_sqr(&t_matrix)?;
    Ok(WeylBlocks {
        s_matrix,
        t_matrix,
        w1,
        w2,
        w3,
        sigma,
        tau,
    })
}

/// Weyl's inequalities for `C = A + B` with 2×2 Hermitian summands:
/// `a1 + b1 ≥ c1`, `a2 + b1 ≥ c2`, `a1 + b2 ≥ c2`. With matching traces
/// these are also sufficient.
pub fn check_weyl_2x2(a: [f64; 2], b: [f64; 2], c: [f64; 2], tol: f64) -> Result<CheckReport> {
    for (name, p) in [("a", a), ("b", b), ("c", c)] {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(Error::NonFinite);
        }
        if p[0] < p[1] {
            return Err(Error::Input(format!(
                "pair {name} = {p:?} is not sorted non-increasing"
            )));
        }
    }
    let trace_gap = a[0] + a[1] + b[0] + b[1] - c[0] - c[1];
    if trace_gap.abs() > tol {
        return Err(Error::Input(format!("traces differ by {trace_gap:.3e}")));
    }
    let residuals = vec![c[0] - a[0] - b[0], c[1] - a[1] - b[0], c[1] - a[0] - b[1]];
    let pass = residuals.iter().all(|&r| r <= tol);
    Ok(CheckReport {
        check: "weyl_2x2".into(),
        pass,
        residuals,
        notes: Vec::new(),
    })
}
