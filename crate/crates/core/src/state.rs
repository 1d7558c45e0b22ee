//! Pure states, density matrices, Schmidt decompositions and state builders.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    self, column, eigh, fix_phase, hermitian_deviation, kron_vec, outer, permute_vector, reshape,
    svd, trace, vec_norm, CMatrix, Dims, C64,
};
use crate::rng::{complex_normal_vec, rng_for};

/// Allowed deviation of `‖ψ‖` from 1 for a constructed [`PureState`].
pub const NORM_TOL: f64 = 1e-12;
/// Allowed deviation of `tr ρ` from 1 and of the smallest eigenvalue below 0.
pub const DENSITY_TOL: f64 = 1e-10;
/// Schmidt coefficients with `σ ≤ SCHMIDT_CUTOFF · σ_max` are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
    dims: Dims,
}

impl PureState {
    /// Wrap already-normalized amplitudes.
    pub fn new(amps: Vec<C64>, dims: Dims) -> Result<Self> {
        check_len(&amps, &dims)?;
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amps, dims })
    }

    /// Normalize arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>, dims: Dims) -> Result<Self> {
        check_len(&amps, &dims)?;
        let norm = vec_norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps, dims })
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn into_parts(self) -> (Vec<C64>, Dims) {
        (self.amps, self.dims)
    }

    /// Reinterpret consecutive subsystems as single parties.
    pub fn regroup(&self, sizes: &[usize]) -> Result<PureState> {
        Ok(PureState {
            amps: self.amps.clone(),
            dims: self.dims.grouped(sizes)?,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: outer(&self.amps),
            dims: self.dims.clone(),
        }
    }

    /// `tr` over every subsystem not in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.dims.check_subset(keep)?;
        let matrix = linalg::partial_trace_pure(&self.amps, &self.dims, &keep)?;
        Ok(DensityMatrix {
            matrix,
            dims: self.dims.select(&keep),
        })
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims: Vec<usize> = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        PureState {
            amps: kron_vec(&self.amps, &other.amps),
            dims: Dims::new(dims).expect("concatenated dims are valid"),
        }
    }
}

fn check_len(amps: &[C64], dims: &Dims) -> Result<()> {
    if amps.len() != dims.total() {
        return Err(Error::Dimension(format!(
            "{} amplitudes for dims {dims} (expected {})",
            amps.len(),
            dims.total()
        )));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Contract("non-finite amplitude".into()));
    }
    Ok(())
}

pub fn to_density(psi: &PureState) -> DensityMatrix {
    psi.to_density()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Dims,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, dims: Dims) -> Result<Self> {
        Self::with_tolerance(matrix, dims, DENSITY_TOL)
    }

    /// Validate with a custom tolerance on trace, Hermiticity and positivity.
    pub fn with_tolerance(matrix: CMatrix, dims: Dims, tol: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != dims.total() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix does not match dims {dims}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Contract("non-finite matrix entry".into()));
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > tol.max(linalg::EPS_HERM) {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::Contract(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let min = eigh(&matrix)?.values.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::Contract(format!(
                "density matrix has eigenvalue {min} < 0"
            )));
        }
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.dims.check_subset(keep)?;
        let matrix = linalg::partial_trace(&self.matrix, &self.dims, &keep)?;
        Ok(DensityMatrix {
            matrix,
            dims: self.dims.select(&keep),
        })
    }
}

/// `ψ = Σ √p_i |L_i⟩ ⊗ |R_i⟩` across a bipartition.
#[derive(Clone, Debug, Serialize)]
pub struct SchmidtDecomposition {
    /// Descending, strictly positive, summing to 1.
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub left: CMatrix,
    #[serde(skip)]
    pub right: CMatrix,
    pub left_subsystems: Vec<usize>,
    pub right_subsystems: Vec<usize>,
    pub left_dims: Dims,
    pub right_dims: Dims,
    pub threshold: f64,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuild the state with subsystems ordered left block first.
    pub fn reconstruct(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.left.nrows() * self.right.nrows()];
        for (i, p) in self.coefficients.iter().enumerate() {
            let w = p.sqrt();
            let l = column(&self.left, i);
            let r = column(&self.right, i);
            for (o, x) in out.iter_mut().zip(kron_vec(&l, &r)) {
                *o += x * w;
            }
        }
        out
    }
}

/// Schmidt decomposition of `psi` with `left` as the first block. Arbitrary
/// subsets are handled by permuting `left` to the front (ascending order)
/// before reshaping.
pub fn schmidt(psi: &PureState, left: &[usize]) -> Result<SchmidtDecomposition> {
    let dims = psi.dims();
    let left = dims.check_subset(left)?;
    if left.is_empty() || left.len() == dims.len() {
        return Err(Error::Partition(format!(
            "cut {left:?} must be a nonempty proper subset of {} subsystems",
            dims.len()
        )));
    }
    let right = dims.complement(&left);
    let perm: Vec<usize> = left.iter().chain(&right).copied().collect();
    let (permuted, _) = permute_vector(psi.amps(), dims, &perm)?;
    let left_dims = dims.select(&left);
    let right_dims = dims.select(&right);
    let (dl, dr) = (left_dims.total(), right_dims.total());
    let decomposed = svd(&reshape(&permuted, dl, dr))?;

    let sigma_max = decomposed.singular_values.first().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return Err(Error::Degenerate(
            "zero state has no Schmidt decomposition".into(),
        ));
    }
    let rank = decomposed
        .singular_values
        .iter()
        .take_while(|&&s| s > SCHMIDT_CUTOFF * sigma_max)
        .count();
    let kept = &decomposed.singular_values[..rank];
    let total: f64 = kept.iter().map(|s| s * s).sum();
    let coefficients = kept.iter().map(|s| s * s / total).collect();

    // M = Σ σ_i u_i v_i†, so the right Schmidt vector is conj(v_i).
    let mut l = decomposed.u.columns(0, rank).into_owned();
    let mut r = decomposed.v.columns(0, rank).map(|z| z.conj());
    for i in 0..rank {
        let phase = fix_phase(&mut l, i);
        let inv = phase.conj();
        for k in 0..r.nrows() {
            r[(k, i)] *= inv;
        }
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left: l,
        right: r,
        left_subsystems: left,
        right_subsystems: right,
        left_dims,
        right_dims,
        threshold: SCHMIDT_CUTOFF,
    })
}

pub fn haar_random_pure(dims: &Dims, seed: u64) -> PureState {
    haar_random_pure_with(&mut rng_for(seed, 0), dims)
}

/// Normalized iid standard complex Gaussian amplitudes (Haar-uniform on the
/// unit sphere).
pub fn haar_random_pure_with<R: Rng + ?Sized>(rng: &mut R, dims: &Dims) -> PureState {
    let amps = complex_normal_vec(rng, dims.total());
    PureState::normalized(amps, dims.clone()).expect("Gaussian draw is nonzero almost surely")
}

/// Random `rows x cols` isometry (`cols ≤ rows`), `V†V = I`.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Result<CMatrix> {
    if cols > rows {
        return Err(Error::Dimension(format!(
            "no {rows}x{cols} isometry exists"
        )));
    }
    let g = CMatrix::from_vec(rows, cols, complex_normal_vec(rng, rows * cols));
    Ok(linalg::thin_q(&g))
}

fn basis(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Maximally entangled state `Σ_i |ii⟩/√d` on `[d, d]`.
pub fn bell(d: usize) -> Result<PureState> {
    ghz(d, 2)
}

/// `Σ_i |i…i⟩/√m` on `parties` copies of `C^m`.
pub fn ghz(m: usize, parties: usize) -> Result<PureState> {
    if m < 2 || parties < 2 {
        return Err(Error::Dimension(format!(
            "ghz needs m ≥ 2 and ≥ 2 parties, got {m}, {parties}"
        )));
    }
    let dims = Dims::new(vec![m; parties])?;
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    for i in 0..m {
        amps[dims.index(&vec![i; parties])] = C64::new(1.0, 0.0);
    }
    PureState::normalized(amps, dims)
}

/// Single-excitation state `(|10…0⟩ + |01…0⟩ + … )/√k` over `dims`
/// (level 1 is the excitation, every dim must be ≥ 2).
pub fn w_state(dims: &Dims) -> Result<PureState> {
    if dims.len() < 2 || dims.as_slice().iter().any(|&d| d < 2) {
        return Err(Error::Dimension(format!(
            "w state needs ≥ 2 parties of dim ≥ 2, got {dims}"
        )));
    }
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    for k in 0..dims.len() {
        let mut digits = vec![0; dims.len()];
        digits[k] = 1;
        amps[dims.index(&digits)] = C64::new(1.0, 0.0);
    }
    PureState::normalized(amps, dims.clone())
}

/// `|0…0⟩` with the given dims.
pub fn zero_state(dims: &Dims) -> PureState {
    PureState {
        amps: basis(dims.total(), 0),
        dims: dims.clone(),
    }
}

/// Product of independent Haar-random local states.
pub fn random_product(dims: &Dims, seed: u64) -> PureState {
    let mut rng = rng_for(seed, 0);
    let mut out: Option<PureState> = None;
    for &d in dims.as_slice() {
        let factor = haar_random_pure_with(&mut rng, &Dims::flat(d));
        out = Some(match out {
            None => factor,
            Some(acc) => acc.tensor(&factor),
        });
    }
    let (amps, _) = out.expect("dims is nonempty").into_parts();
    PureState {
        amps,
        dims: dims.clone(),
    }
}

/// `|Ψ_{AB1}⟩ ⊗ |Ψ_{B2C}⟩` pushed into `B` through an isometry, together
/// with the ground-truth pieces.
#[derive(Clone, Debug)]
pub struct EmbeddedProduct {
    pub state: PureState,
    pub ab1: PureState,
    pub b2c: PureState,
    /// `d_B x (d_B1 · d_B2)` isometry.
    pub embedding: CMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddedSpec {
    pub d_a: usize,
    pub d_b1: usize,
    pub d_b2: usize,
    pub d_c: usize,
    /// Extra dimensions of `B` outside the image of the embedding.
    pub d_b_extra: usize,
}

impl EmbeddedSpec {
    pub fn d_b(&self) -> usize {
        self.d_b1 * self.d_b2 + self.d_b_extra
    }

    /// Split a given `d_B` as `2 · ⌊d_B/2⌋ + rest` when `d_B ≥ 4`, otherwise
    /// put all of `B` into `B1`.
    pub fn for_dims(d_a: usize, d_b: usize, d_c: usize) -> Self {
        let (d_b1, d_b2) = default_split(d_b);
        Self {
            d_a,
            d_b1,
            d_b2,
            d_c,
            d_b_extra: d_b - d_b1 * d_b2,
        }
    }
}

fn default_split(d: usize) -> (usize, usize) {
    if d >= 4 {
        (2, d / 2)
    } else {
        (d, 1)
    }
}

pub fn embedded_product(spec: EmbeddedSpec, seed: u64) -> Result<EmbeddedProduct> {
    let mut rng = rng_for(seed, 0);
    let ab1 = haar_random_pure_with(&mut rng, &Dims::new(vec![spec.d_a, spec.d_b1])?);
    let b2c = haar_random_pure_with(&mut rng, &Dims::new(vec![spec.d_b2, spec.d_c])?);
    let embedding = random_isometry(&mut rng, spec.d_b(), spec.d_b1 * spec.d_b2)?;
    let joint = ab1.tensor(&b2c);
    let (amps, _) = linalg::apply_block(joint.amps(), joint.dims(), 1, 2, &embedding)?;
    let state = PureState::normalized(amps, Dims::new(vec![spec.d_a, spec.d_b(), spec.d_c])?)?;
    Ok(EmbeddedProduct {
        state,
        ab1,
        b2c,
        embedding,
    })
}

/// `|Ψ_{A1A2'}⟩ ⊗ |Ψ_{A2''A3'}⟩ ⊗ … ⊗ |Ψ_{A(n-1)''An}⟩` with each interior
/// party embedded into its full space.
#[derive(Clone, Debug)]
pub struct ChainProduct {
    pub state: PureState,
    pub factors: Vec<PureState>,
    /// One isometry per interior party.
    pub embeddings: Vec<CMatrix>,
}

/// `splits[k]` gives `(d', d'')` for interior party `k + 1`, with
/// `d' · d'' ≤ dims[k + 1]`.
pub fn chain_product(dims: &Dims, splits: &[(usize, usize)], seed: u64) -> Result<ChainProduct> {
    let n = dims.len();
    if n < 2 || splits.len() != n - 2 {
        return Err(Error::Dimension(format!(
            "{n} parties need {} interior splits, got {}",
            n.saturating_sub(2),
            splits.len()
        )));
    }
    let mut rng = rng_for(seed, 0);
    let mut bond_dims = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let left = if k == 0 { dims.get(0) } else { splits[k - 1].1 };
        let right = if k == n - 2 {
            dims.get(n - 1)
        } else {
            splits[k].0
        };
        bond_dims.push((left, right));
    }
    let factors: Vec<PureState> = bond_dims
        .iter()
        .map(|&(l, r)| Ok(haar_random_pure_with(&mut rng, &Dims::new(vec![l, r])?)))
        .collect::<Result<_>>()?;
    let embeddings: Vec<CMatrix> = splits
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| random_isometry(&mut rng, dims.get(k + 1), a * b))
        .collect::<Result<_>>()?;
    let state = assemble_chain(&factors, &embeddings)?;
    if state.dims() != dims {
        return Err(Error::Dimension(format!(
            "chain assembled to {} not {dims}",
            state.dims()
        )));
    }
    Ok(ChainProduct {
        state,
        factors,
        embeddings,
    })
}

/// Default interior splits used by the `chain` named state.
pub fn default_chain_splits(dims: &Dims) -> Vec<(usize, usize)> {
    let s = dims.as_slice();
    if s.len() < 3 {
        return Vec::new();
    }
    s[1..s.len() - 1]
        .iter()
        .map(|&d| default_split(d))
        .collect()
}

/// Tensor the chain factors together and apply each interior embedding to
/// its adjacent `(d', d'')` pair.
pub fn assemble_chain(factors: &[PureState], embeddings: &[CMatrix]) -> Result<PureState> {
    if factors.is_empty() || embeddings.len() + 1 != factors.len() {
        return Err(Error::Dimension(format!(
            "{} factors need {} embeddings",
            factors.len(),
            factors.len().saturating_sub(1)
        )));
    }
    let mut joint = factors[0].clone();
    for f in &factors[1..] {
        joint = joint.tensor(f);
    }
    let (mut amps, mut dims) = joint.into_parts();
    for (k, v) in embeddings.iter().enumerate() {
        // after k merges, the pair for interior party k+1 starts at k+1
        let (a, d) = linalg::apply_block(&amps, &dims, k + 1, 2, v)?;
        amps = a;
        dims = d;
    }
    PureState::normalized(amps, dims)
}

/// Built-in states reachable by name (CLI `--state`).
pub fn named_state(name: &str, dims: Option<&Dims>, seed: u64) -> Result<PureState> {
    let default = |v: Vec<usize>| Dims::new(v).expect("static dims");
    let dims = |d: Vec<usize>| dims.cloned().unwrap_or_else(|| default(d));
    match name {
        "bell" => {
            let d = dims(vec![2, 2]);
            if d.len() != 2 || d.get(0) != d.get(1) {
                return Err(Error::Dimension(format!("bell needs [d,d], got {d}")));
            }
            bell(d.get(0))
        }
        "ghz" => {
            let d = dims(vec![2, 2, 2]);
            let m = d.get(0);
            if d.as_slice().iter().any(|&x| x != m) {
                return Err(Error::Dimension(format!("ghz needs equal dims, got {d}")));
            }
            ghz(m, d.len())
        }
        "w" => w_state(&dims(vec![2, 2, 2])),
        "zero" => Ok(zero_state(&dims(vec![2, 2, 2]))),
        "product" => Ok(random_product(&dims(vec![2, 2, 2]), seed)),
        "haar" => Ok(haar_random_pure(&dims(vec![2, 2, 2]), seed)),
        "embedded" => {
            let d = dims(vec![2, 4, 2]);
            if d.len() != 3 {
                return Err(Error::Dimension(format!(
                    "embedded needs 3 parties, got {d}"
                )));
            }
            Ok(embedded_product(EmbeddedSpec::for_dims(d.get(0), d.get(1), d.get(2)), seed)?.state)
        }
        "chain" => {
            let d = dims(vec![2, 4, 4, 2]);
            Ok(chain_product(&d, &default_chain_splits(&d), seed)?.state)
        }
        other => Err(Error::UnknownState(other.to_string())),
    }
}

pub const NAMED_STATES: &[&str] = &[
    "bell", "ghz", "w", "zero", "product", "haar", "embedded", "chain",
];
