//! Entanglement negativity and the optimal positive/negative split of a
//! Hermitian operator.
//!
//! Negativity is read off the Hermitian eigendecomposition of the partial
//! transpose, so one pass yields the negativity, the logarithmic negativity,
//! the full spectrum and (through [`optimal_decomposition`]) the split
//! `A = a₊ρ⁺ − a₋ρ⁻`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, column, eigh, outer, trace, CMatrix};
use crate::state::{schmidt, DensityMatrix, PureState};

/// Partial-transpose eigenvalues below `-NEGATIVE_CUTOFF` count as negative;
/// those in `[-NEGATIVE_CUTOFF, 0)` are clamped to zero.
pub const NEGATIVE_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct NegativityResult {
    pub negativity: f64,
    pub log_negativity: f64,
    pub negative_eigenvalue_sum: f64,
    /// Spectrum of the partial transpose, descending.
    pub spectrum: Vec<f64>,
    /// Transposed subsystems.
    pub part: Vec<usize>,
    /// The other side of the cut.
    pub rest: Vec<usize>,
}

pub fn log_negativity(negativity: f64) -> f64 {
    (1.0 + 2.0 * negativity).log2()
}

/// Negativity between `part` and the remaining subsystems of `rho`.
pub fn negativity(rho: &DensityMatrix, part: &[usize]) -> Result<NegativityResult> {
    let dims = rho.dims();
    let part = dims.check_subset(part)?;
    if part.is_empty() || part.len() == dims.len() {
        return Err(Error::Partition(format!(
            "part {part:?} must be a nonempty proper subset of {} subsystems",
            dims.len()
        )));
    }
    let pt = linalg::partial_transpose(rho.matrix(), dims, &part)?;
    let spectrum: Vec<f64> = eigh(&pt)?
        .values
        .into_iter()
        .map(|x| {
            if (-NEGATIVE_CUTOFF..0.0).contains(&x) {
                0.0
            } else {
                x
            }
        })
        .collect();
    let negative_eigenvalue_sum: f64 = spectrum.iter().filter(|&&x| x < 0.0).sum();
    let n = negative_eigenvalue_sum.abs();
    Ok(NegativityResult {
        negativity: n,
        log_negativity: log_negativity(n),
        negative_eigenvalue_sum,
        spectrum,
        rest: dims.complement(&part),
        part,
    })
}

/// `Σ_{i<j} √(p_i p_j)`, the negativity of a pure state with Schmidt
/// coefficients `p`.
pub fn pure_negativity_from_schmidt(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Contract(format!(
            "Schmidt coefficients must be positive: {p:?}"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Contract(format!(
            "Schmidt coefficients sum to {total}, not 1"
        )));
    }
    let roots: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    let mut sum = 0.0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            sum += roots[i] * roots[j];
        }
    }
    Ok(sum)
}

/// Negativity of a pure state across `part | rest` via its Schmidt spectrum.
pub fn pure_negativity(psi: &PureState, part: &[usize]) -> Result<f64> {
    pure_negativity_from_schmidt(&schmidt(psi, part)?.coefficients)
}

/// `A = a₊ρ⁺ − a₋ρ⁻` with `ρ±` unit-trace, positive and mutually orthogonal.
/// A side with no eigenvalues of that sign has weight 0 and no matrix.
#[derive(Clone, Debug)]
pub struct OptimalDecomposition {
    pub a_plus: f64,
    pub a_minus: f64,
    pub rho_plus: Option<CMatrix>,
    pub rho_minus: Option<CMatrix>,
}

impl OptimalDecomposition {
    pub fn reconstruct(&self, n: usize) -> CMatrix {
        let mut out = CMatrix::zeros(n, n);
        if let Some(p) = &self.rho_plus {
            out += p.scale(self.a_plus);
        }
        if let Some(m) = &self.rho_minus {
            out -= m.scale(self.a_minus);
        }
        out
    }

    /// `tr(ρ⁺ρ⁻)`, zero when either side is absent.
    pub fn overlap(&self) -> f64 {
        match (&self.rho_plus, &self.rho_minus) {
            (Some(p), Some(m)) => trace(&(p * m)).re,
            _ => 0.0,
        }
    }
}

pub fn optimal_decomposition(h: &CMatrix) -> Result<OptimalDecomposition> {
    let scale = h.norm();
    if scale == 0.0 {
        return Err(Error::Degenerate(
            "the zero matrix has no optimal decomposition".into(),
        ));
    }
    let eig = eigh(h)?;
    let n = h.nrows();
    let zero = NEGATIVE_CUTOFF * eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut plus = CMatrix::zeros(n, n);
    let mut minus = CMatrix::zeros(n, n);
    let (mut a_plus, mut a_minus) = (0.0, 0.0);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() <= zero {
            continue;
        }
        let projector = outer(&column(&eig.vectors, k));
        if lambda > 0.0 {
            a_plus += lambda;
            plus += projector.scale(lambda);
        } else {
            a_minus -= lambda;
            minus += projector.scale(-lambda);
        }
    }
    let normalize = |m: CMatrix, a: f64| (a > 0.0).then(|| m.unscale(a));
    Ok(OptimalDecomposition {
        rho_plus: normalize(plus, a_plus),
        rho_minus: normalize(minus, a_minus),
        a_plus,
        a_minus,
    })
}

/// The quantities tied together by the optimality equivalences, each
/// computed along an independent route where possible.
#[derive(Clone, Debug, Serialize)]
pub struct OptimalityReport {
    /// `‖A‖₁` from singular values.
    pub trace_norm: f64,
    pub weight_sum: f64,
    /// `(‖A‖₁ − tr A)/2`, the absolute sum of negative eigenvalues.
    pub negativity: f64,
    pub a_minus: f64,
    pub overlap: f64,
    pub reconstruction_error: f64,
}

pub fn optimality_report(h: &CMatrix, d: &OptimalDecomposition) -> Result<OptimalityReport> {
    let trace_norm = linalg::trace_norm(h)?;
    Ok(OptimalityReport {
        trace_norm,
        weight_sum: d.a_plus + d.a_minus,
        negativity: (trace_norm - trace(h).re) / 2.0,
        a_minus: d.a_minus,
        overlap: d.overlap(),
        reconstruction_error: (d.reconstruct(h.nrows()) - h).norm(),
    })
}
