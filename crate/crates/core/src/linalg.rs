//! Dense complex tensor primitives over composite Hilbert spaces.
//!
//! Every composite index is row-major with subsystem 0 most significant:
//! for dims `[d0, d1, d2]` the digit tuple `(i0, i1, i2)` maps to
//! `(i0 * d1 + i1) * d2 + i2`. All other modules rely on this convention.
//!
//! Matrices are `nalgebra` storage. Eigen-, singular-value and QR
//! decompositions are delegated to `faer`; this module adds the Hermiticity
//! contract, descending order and the subsystem index arithmetic
//! (permutation, partial trace, partial transpose).

use faer::{Mat, MatRef, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative Frobenius tolerance for eigen/SVD reconstructions.
pub const EPS_EIG: f64 = 1e-10;
/// Relative Frobenius tolerance on `‖m − m†‖` accepted by [`eigh`].
pub const EPS_HERM: f64 = 1e-10;

/// Subsystem dimensions of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension(
                "at least one subsystem is required".into(),
            ));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Dimension(format!("subsystem {pos} has dimension 0")));
        }
        Ok(Self(dims))
    }

    /// Single-subsystem label for a plain `n`-dimensional space.
    pub fn flat(n: usize) -> Self {
        Self(vec![n.max(1)])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.0[k + 1];
        }
        strides
    }

    /// Digit tuple of a composite index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            out[k] = index % self.0[k];
            index /= self.0[k];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Dimensions of the listed subsystems, in the listed order.
    pub fn select(&self, subsystems: &[usize]) -> Dims {
        Dims(subsystems.iter().map(|&k| self.0[k]).collect())
    }

    pub fn complement(&self, subsystems: &[usize]) -> Vec<usize> {
        (0..self.0.len())
            .filter(|k| !subsystems.contains(k))
            .collect()
    }

    /// Merge consecutive runs of subsystems. `sizes` gives how many
    /// subsystems go into each group; amplitudes are unaffected.
    pub fn grouped(&self, sizes: &[usize]) -> Result<Dims> {
        if sizes.iter().sum::<usize>() != self.0.len() {
            return Err(Error::Dimension(format!(
                "grouping {sizes:?} does not cover {} subsystems",
                self.0.len()
            )));
        }
        let mut out = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &n in sizes {
            out.push(self.0[start..start + n].iter().product());
            start += n;
        }
        Dims::new(out)
    }

    /// Validate a subsystem set and return it sorted.
    pub fn check_subset(&self, subsystems: &[usize]) -> Result<Vec<usize>> {
        let mut set = subsystems.to_vec();
        set.sort_unstable();
        if set.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Partition(format!(
                "repeated subsystem in {subsystems:?}"
            )));
        }
        if let Some(&k) = set.iter().find(|&&k| k >= self.0.len()) {
            return Err(Error::Partition(format!(
                "subsystem {k} out of range for {} subsystems",
                self.0.len()
            )));
        }
        Ok(set)
    }

    fn check_permutation(&self, perm: &[usize]) -> Result<()> {
        let sorted = self.check_subset(perm)?;
        if sorted.len() != self.0.len() {
            return Err(Error::Partition(format!(
                "{perm:?} is not a permutation of {} subsystems",
                self.0.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn check_square(m: &CMatrix, dims: &Dims) -> Result<()> {
    if !m.is_square() || m.nrows() != dims.total() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix does not match dims {dims} (total {})",
            m.nrows(),
            m.ncols(),
            dims.total()
        )));
    }
    Ok(())
}

/// Row-major reshape of a flat slice into a `rows x cols` matrix.
pub fn reshape(data: &[C64], rows: usize, cols: usize) -> CMatrix {
    debug_assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |r, c| data[r * cols + c])
}

/// Row-major flattening, inverse of [`reshape`].
pub fn flatten(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Map from input composite index to output composite index when the
/// subsystems are reordered so that output subsystem `t` is input `perm[t]`.
fn permutation_map(dims: &Dims, perm: &[usize]) -> Vec<usize> {
    let out_dims = dims.select(perm);
    let out_strides = out_dims.strides();
    (0..dims.total())
        .map(|i| {
            let digits = dims.digits(i);
            perm.iter()
                .zip(&out_strides)
                .map(|(&src, &stride)| digits[src] * stride)
                .sum()
        })
        .collect()
}

/// Reorder the subsystems of a vector: output subsystem `t` is input
/// subsystem `perm[t]`.
pub fn permute_vector(v: &[C64], dims: &Dims, perm: &[usize]) -> Result<(Vec<C64>, Dims)> {
    dims.check_permutation(perm)?;
    if v.len() != dims.total() {
        return Err(Error::Dimension(format!(
            "vector of length {} does not match dims {dims}",
            v.len()
        )));
    }
    let map = permutation_map(dims, perm);
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (i, &j) in map.iter().enumerate() {
        out[j] = v[i];
    }
    Ok((out, dims.select(perm)))
}

/// Reorder the subsystems of an operator on both sides.
pub fn permute_operator(m: &CMatrix, dims: &Dims, perm: &[usize]) -> Result<(CMatrix, Dims)> {
    dims.check_permutation(perm)?;
    check_square(m, dims)?;
    let map = permutation_map(dims, perm);
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok((out, dims.select(perm)))
}

/// Trace out every subsystem not listed in `keep`. The kept subsystems
/// appear in ascending order in the result.
pub fn partial_trace(m: &CMatrix, dims: &Dims, keep: &[usize]) -> Result<CMatrix> {
    check_square(m, dims)?;
    let keep = dims.check_subset(keep)?;
    let traced = dims.complement(&keep);
    let perm: Vec<usize> = keep.iter().chain(&traced).copied().collect();
    let (p, _) = permute_operator(m, dims, &perm)?;
    let dk = dims.select(&keep).total();
    let dt = dims.select(&traced).total();
    Ok(CMatrix::from_fn(dk, dk, |r, c| {
        (0..dt).map(|t| p[(r * dt + t, c * dt + t)]).sum()
    }))
}

/// Reduced density matrix of the pure state `v` on the kept subsystems,
/// computed as `M M†` with `M` the (kept x traced) reshaping.
pub fn partial_trace_pure(v: &[C64], dims: &Dims, keep: &[usize]) -> Result<CMatrix> {
    let keep = dims.check_subset(keep)?;
    let traced = dims.complement(&keep);
    let perm: Vec<usize> = keep.iter().chain(&traced).copied().collect();
    let (p, _) = permute_vector(v, dims, &perm)?;
    let dk = dims.select(&keep).total();
    let dt = p.len() / dk;
    let mat = reshape(&p, dk, dt);
    Ok(&mat * mat.adjoint())
}

/// Transpose the indices of the subsystems in `part`, leaving the rest.
pub fn partial_transpose(m: &CMatrix, dims: &Dims, part: &[usize]) -> Result<CMatrix> {
    check_square(m, dims)?;
    let part = dims.check_subset(part)?;
    let n = m.nrows();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| dims.digits(i)).collect();
    let mut out = CMatrix::zeros(n, n);
    let mut dr = vec![0; dims.len()];
    let mut dc = vec![0; dims.len()];
    for c in 0..n {
        for r in 0..n {
            dr.copy_from_slice(&digits[r]);
            dc.copy_from_slice(&digits[c]);
            for &k in &part {
                std::mem::swap(&mut dr[k], &mut dc[k]);
            }
            out[(dims.index(&dr), dims.index(&dc))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Apply `op` (shape `new_dim x block_dim`) to the consecutive subsystems
/// `start..start + len` of `v`, replacing them with one subsystem of
/// dimension `op.nrows()`.
pub fn apply_block(
    v: &[C64],
    dims: &Dims,
    start: usize,
    len: usize,
    op: &CMatrix,
) -> Result<(Vec<C64>, Dims)> {
    if len == 0 || start + len > dims.len() {
        return Err(Error::Partition(format!(
            "block {start}..{} out of range for {dims}",
            start + len
        )));
    }
    let s = dims.as_slice();
    let left: usize = s[..start].iter().product();
    let block: usize = s[start..start + len].iter().product();
    let right: usize = s[start + len..].iter().product();
    if op.ncols() != block || v.len() != dims.total() {
        return Err(Error::Dimension(format!(
            "operator with {} columns cannot act on a block of dimension {block}",
            op.ncols()
        )));
    }
    let new = op.nrows();
    let mut out = vec![C64::new(0.0, 0.0); left * new * right];
    for l in 0..left {
        for b in 0..block {
            for r in 0..right {
                let x = v[(l * block + b) * right + r];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for n in 0..new {
                    out[(l * new + n) * right + r] += op[(n, b)] * x;
                }
            }
        }
    }
    let mut new_dims = s[..start].to_vec();
    new_dims.push(new);
    new_dims.extend_from_slice(&s[start + len..]);
    Ok((out, Dims::new(new_dims)?))
}

/// Relative Frobenius deviation `‖m − m†‖ / ‖m‖` (0 for the zero matrix).
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct EigResult {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: CMatrix,
}

impl EigResult {
    pub fn reconstruct(&self) -> CMatrix {
        let lambda = CMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| C64::new(x, 0.0)),
        ));
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

pub fn eigh(m: &CMatrix) -> Result<EigResult> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = hermitian_deviation(m);
    if deviation > EPS_HERM {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: EPS_HERM,
        });
    }
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = to_faer(&sym)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence(n))?;
    // faer returns ascending order
    let values = (0..n).rev().map(|k| eig.S()[k].re).collect();
    let u = eig.U();
    let vectors = CMatrix::from_fn(n, n, |r, c| u[(r, n - 1 - c)]);
    Ok(EigResult { values, vectors })
}

/// Thin SVD `m = U diag(σ) V†`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let sigma = CMatrix::from_fn(k, k, |r, c| {
            if r == c {
                C64::new(self.singular_values[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &self.u * sigma * self.v.adjoint()
    }
}

pub fn svd(m: &CMatrix) -> Result<Svd> {
    let decomposed = to_faer(m)
        .thin_svd()
        .map_err(|_| Error::NoConvergence(m.nrows().min(m.ncols())))?;
    let k = m.nrows().min(m.ncols());
    let (u, v) = (decomposed.U(), decomposed.V());
    Ok(Svd {
        u: from_faer(u),
        singular_values: (0..k).map(|i| decomposed.S()[i].re).collect(),
        v: from_faer(v),
    })
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    to_faer(m)
        .singular_values()
        .map_err(|_| Error::NoConvergence(m.nrows().min(m.ncols())))
}

/// Orthonormal columns spanning the columns of a full-rank `m` (thin `Q`).
pub fn thin_q(m: &CMatrix) -> CMatrix {
    from_faer(to_faer(m).qr().compute_thin_Q().as_ref())
}

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// `tr √(X†X)`, the sum of singular values.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Multiply a column by a unit phase so that its largest-magnitude entry is
/// real and positive. Returns the phase that was applied.
pub fn fix_phase(m: &mut CMatrix, col: usize) -> C64 {
    let mut best = 0;
    let mut best_abs = -1.0;
    for r in 0..m.nrows() {
        let a = m[(r, col)].norm();
        if a > best_abs + 1e-14 {
            best = r;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return C64::new(1.0, 0.0);
    }
    let z = m[(best, col)];
    let phase = z.conj() / z.norm();
    for r in 0..m.nrows() {
        m[(r, col)] *= phase;
    }
    phase
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn column(m: &CMatrix, c: usize) -> Vec<C64> {
    m.column(c).iter().copied().collect()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Outer product `|v⟩⟨v|`.
pub fn outer(v: &[C64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj())
}
