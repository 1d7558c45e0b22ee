//! Detecting and executing the split `|Ψ_ABC⟩ = |Ψ_AB1⟩ ⊗ |Ψ_B2C⟩`.
//!
//! A tripartite pure state factorizes through some decomposition
//! `H_B ≅ (H_B1 ⊗ H_B2) ⊕ H_B⊥` exactly when tracing out `C` leaves the
//! `A`-negativity unchanged. [`check_disentangling`] compares the two
//! negativities; [`factorize`] builds the split constructively:
//!
//! 1. Schmidt-decompose across `A|BC` (`p_i`, `φ_A^i`, `φ_BC^i`), and pick
//!    orthonormal supports `φ_B^j` of `ρ_B` and `φ_C^k` of `ρ_C`, the latter
//!    being the eigenbasis of `ρ_C` with eigenvalues `q_k`.
//! 2. Expand `φ_BC^i = Σ_jk T^i_jk φ_B^j φ_C^k`.
//! 3. When `Σ_a T^i*_am T^j_an = δ_ij C_mn`, the vectors
//!    `ψ_B^ik = Σ_j T^i_jk φ_B^j / √q_k` are orthonormal and become the
//!    product basis `|i⟩_B1 |k⟩_B2` of the embedded factor space.
//!
//! `H_B⊥` is never materialized: the embedding `V` maps into all of `H_B`
//! and its column span is the support of `ρ_B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, apply_block, column, diff_norm, kron, reshape, CMatrix, Dims, C64};
use crate::negativity::{negativity, pure_negativity_from_schmidt};
use crate::state::{assemble_chain, schmidt, PureState};

/// Default absolute tolerance on `|N^{A|BC} − N^{A|B}|`.
pub const DEFAULT_TOL: f64 = 1e-9;
/// A factorization whose reconstruction is worse than this is rejected.
pub const RECONSTRUCTION_TOL: f64 = 1e-6;

/// Coefficients `T^i_jk` with the bases they refer to.
#[derive(Clone, Debug)]
pub struct TTensor {
    pub r_a: usize,
    pub r_b: usize,
    pub r_c: usize,
    /// Row-major over `(i, j, k)`.
    entries: Vec<C64>,
    /// `A|BC` Schmidt coefficients.
    pub p: Vec<f64>,
    /// Eigenvalues of `ρ_C` on its support, descending.
    pub q: Vec<f64>,
    /// `d_A x r_A`.
    pub phi_a: CMatrix,
    /// `d_B x r_B`, spans the support of `ρ_B`.
    pub phi_b: CMatrix,
    /// `d_C x r_C`, eigenvectors of `ρ_C`.
    pub phi_c: CMatrix,
}

impl TTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.entries[(i * self.r_b + j) * self.r_c + k]
    }

    /// `T^i` as an `r_B x r_C` matrix.
    pub fn slice(&self, i: usize) -> CMatrix {
        CMatrix::from_fn(self.r_b, self.r_c, |j, k| self.get(i, j, k))
    }

    /// `G^{ij}_{mn} = Σ_a T^i*_am T^j_an`.
    pub fn gram(&self, i: usize, j: usize) -> CMatrix {
        self.slice(i).adjoint() * self.slice(j)
    }

    /// Average of the diagonal blocks `G^{ii}`.
    pub fn coupling(&self) -> CMatrix {
        let mut c = CMatrix::zeros(self.r_c, self.r_c);
        for i in 0..self.r_a {
            c += self.gram(i, i);
        }
        c.unscale(self.r_a as f64)
    }

    /// Largest deviation of `Σ_ab T^i*_ab T^j_ab` from `δ_ij`.
    pub fn unitarity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.r_a {
            for j in 0..self.r_a {
                let inner: C64 = self
                    .slice(i)
                    .iter()
                    .zip(self.slice(j).iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn require_three(psi: &PureState) -> Result<(usize, usize, usize)> {
    let d = psi.dims();
    if d.len() != 3 {
        return Err(Error::Dimension(format!("expected 3 subsystems, got {d}")));
    }
    Ok((d.get(0), d.get(1), d.get(2)))
}

pub fn extract_t_tensor(psi: &PureState) -> Result<TTensor> {
    let (_, d_b, d_c) = require_three(psi)?;
    let sa = schmidt(psi, &[0])?;
    let sb = schmidt(psi, &[1])?;
    let sc = schmidt(psi, &[2])?;
    let (r_a, r_b, r_c) = (sa.rank(), sb.rank(), sc.rank());
    if r_a == 0 || r_b == 0 || r_c == 0 {
        return Err(Error::Degenerate("a marginal has empty support".into()));
    }
    let phi_c_conj = sc.left.map(|z| z.conj());
    let mut entries = Vec::with_capacity(r_a * r_b * r_c);
    for i in 0..r_a {
        let bc = reshape(&column(&sa.right, i), d_b, d_c);
        let t = sb.left.adjoint() * bc * &phi_c_conj;
        for j in 0..r_b {
            for k in 0..r_c {
                entries.push(t[(j, k)]);
            }
        }
    }
    Ok(TTensor {
        r_a,
        r_b,
        r_c,
        entries,
        p: sa.coefficients,
        q: sc.coefficients,
        phi_a: sa.left,
        phi_b: sb.left,
        phi_c: sc.left,
    })
}

/// `max_{i,j,m,n} |G^{ij}_{mn} − δ_ij C_mn|` with `C` the mean diagonal
/// block. Zero exactly when the factorization condition holds.
pub fn check_condition(t: &TTensor) -> f64 {
    let c = t.coupling();
    let mut worst: f64 = 0.0;
    for i in 0..t.r_a {
        for j in 0..t.r_a {
            let g = t.gram(i, j);
            let diff = if i == j { g - &c } else { g };
            worst = diff.iter().fold(worst, |w, z| w.max(z.norm()));
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct DisentanglingVerdict {
    pub n_abc: f64,
    pub n_ab: f64,
    /// `n_abc − n_ab`.
    pub gap: f64,
    pub holds: bool,
    pub tolerance: f64,
    pub condition_residual: f64,
}

pub fn check_disentangling(psi: &PureState, tol: f64) -> Result<DisentanglingVerdict> {
    require_three(psi)?;
    if !(tol > 0.0) {
        return Err(Error::Contract(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n_abc = pure_negativity_from_schmidt(&schmidt(psi, &[0])?.coefficients)?;
    let n_ab = negativity(&psi.reduced(&[0, 1])?, &[0])?.negativity;
    let gap = n_abc - n_ab;
    if gap < -tol {
        return Err(Error::Inconsistent(format!(
            "N(A|B) = {n_ab} exceeds N(A|BC) = {n_abc} by more than {tol}"
        )));
    }
    let condition_residual = check_condition(&extract_t_tensor(psi)?);
    Ok(DisentanglingVerdict {
        n_abc,
        n_ab,
        gap,
        holds: gap.abs() <= tol,
        tolerance: tol,
        condition_residual,
    })
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub verdict: DisentanglingVerdict,
    /// Schmidt coefficients of `Ψ_AB1`.
    pub p: Vec<f64>,
    /// Eigenvalues of `ρ_C` on its support; Schmidt coefficients of `Ψ_B2C`.
    pub q: Vec<f64>,
    /// `C_mn` in the eigenbasis of `ρ_C`.
    pub coupling: CMatrix,
    pub b1_dim: usize,
    pub b2_dim: usize,
    /// `d_B x (b1_dim · b2_dim)` isometry; column `i · b2_dim + k` is `ψ_B^{ik}`.
    pub embedding: CMatrix,
    /// On dims `[d_A, b1_dim]`.
    pub ab1: PureState,
    /// On dims `[b2_dim, d_C]`.
    pub b2c: PureState,
    pub reconstruction_residual: f64,
    /// `‖V†V − I‖_F`.
    pub isometry_residual: f64,
}

impl FactorizationResult {
    /// `(I_A ⊗ V ⊗ I_C)(Ψ_AB1 ⊗ Ψ_B2C)`.
    pub fn reconstruct(&self) -> Result<Vec<C64>> {
        let joint = self.ab1.tensor(&self.b2c);
        Ok(apply_block(joint.amps(), joint.dims(), 1, 2, &self.embedding)?.0)
    }
}

pub fn factorize(psi: &PureState, tol: f64) -> Result<FactorizationResult> {
    let verdict = check_disentangling(psi, tol)?;
    if !verdict.holds {
        return Err(Error::NotFactorizable(Box::new(verdict)));
    }
    let (d_a, d_b, d_c) = require_three(psi)?;
    let t = extract_t_tensor(psi)?;
    let (r_a, r_c) = (t.r_a, t.r_c);

    let mut embedding = CMatrix::zeros(d_b, r_a * r_c);
    for i in 0..r_a {
        // columns k of φ_B T^i are the unnormalized ψ_B^{ik}
        let tilde = &t.phi_b * t.slice(i);
        for k in 0..r_c {
            let norm = t.q[k].sqrt();
            for b in 0..d_b {
                embedding[(b, i * r_c + k)] = tilde[(b, k)] / norm;
            }
        }
    }

    let mut ab1 = Vec::with_capacity(d_a * r_a);
    for a in 0..d_a {
        for i in 0..r_a {
            ab1.push(t.phi_a[(a, i)] * t.p[i].sqrt());
        }
    }
    let mut b2c = Vec::with_capacity(r_c * d_c);
    for k in 0..r_c {
        for c in 0..d_c {
            b2c.push(t.phi_c[(c, k)] * t.q[k].sqrt());
        }
    }
    let n = r_a * r_c;
    let mut result = FactorizationResult {
        verdict,
        coupling: t.coupling(),
        b1_dim: r_a,
        b2_dim: r_c,
        isometry_residual: (embedding.adjoint() * &embedding - CMatrix::identity(n, n)).norm(),
        embedding,
        ab1: PureState::normalized(ab1, Dims::new(vec![d_a, r_a])?)?,
        b2c: PureState::normalized(b2c, Dims::new(vec![r_c, d_c])?)?,
        p: t.p,
        q: t.q,
        reconstruction_residual: f64::NAN,
    };
    result.reconstruction_residual = diff_norm(&result.reconstruct()?, psi.amps());
    if !(result.reconstruction_residual <= RECONSTRUCTION_TOL) {
        return Err(Error::Inconsistent(format!(
            "negativities agree within {tol} but the factorization misses by {:.3e}",
            result.reconstruction_residual
        )));
    }
    Ok(result)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductMarginalReport {
    /// `N^{A|C}` of `ρ_AC`.
    pub n_ac: f64,
    /// `‖ρ_AC − ρ_A ⊗ ρ_C‖_F`.
    pub product_residual: f64,
}

/// For a state passing [`check_disentangling`], `ρ_AC` must be the product
/// of its marginals and so carry no negativity.
pub fn corollary4_check(psi: &PureState, tol: f64) -> Result<ProductMarginalReport> {
    let verdict = check_disentangling(psi, tol)?;
    if !verdict.holds {
        return Err(Error::Contract(format!(
            "A-C marginal check needs the disentangling condition (gap {:.3e})",
            verdict.gap
        )));
    }
    let rho_ac = psi.reduced(&[0, 2])?;
    let rho_a = psi.reduced(&[0])?;
    let rho_c = psi.reduced(&[2])?;
    let product = kron(rho_a.matrix(), rho_c.matrix());
    Ok(ProductMarginalReport {
        n_ac: negativity(&rho_ac, &[0])?.negativity,
        product_residual: (rho_ac.matrix() - product).norm(),
    })
}

/// Outcome of iterated factorization along a chain `A_1 A_2 … A_n`.
#[derive(Clone, Debug)]
pub struct ChainResult {
    /// Verdict for cut `i` (left block `A_1..A_i`), in order, stopping at
    /// the first failing cut.
    pub verdicts: Vec<DisentanglingVerdict>,
    /// `Ψ_{A1A2'}`, `Ψ_{A2''A3'}`, …; on failure only those found so far.
    pub factors: Vec<PureState>,
    /// Isometry for each interior party that was split.
    pub embeddings: Vec<CMatrix>,
    /// 1-based index of the first failing cut.
    pub failed_cut: Option<usize>,
    /// The unfactorized tail when the chain stops early.
    pub remainder: Option<PureState>,
    /// `‖ψ − reassembled chain‖` when complete.
    pub residual: Option<f64>,
}

impl ChainResult {
    pub fn complete(&self) -> bool {
        self.failed_cut.is_none()
    }
}

/// View `psi` as `(A_1..A_i) | A_{i+1} | (A_{i+2}..A_n)`, with a trivial
/// third party when the right block is empty.
fn cut_view(psi: &PureState, i: usize) -> Result<PureState> {
    let n = psi.dims().len();
    let rest = n - i - 1;
    if rest == 0 {
        let mut dims = psi.dims().grouped(&[i, 1])?.as_slice().to_vec();
        dims.push(1);
        return PureState::new(psi.amps().to_vec(), Dims::new(dims)?);
    }
    psi.regroup(&[i, 1, rest])
}

pub fn chain_factorize(psi: &PureState, tol: f64) -> Result<ChainResult> {
    let n = psi.dims().len();
    if n < 2 {
        return Err(Error::Dimension(format!(
            "chain needs ≥ 2 parties, got {}",
            psi.dims()
        )));
    }
    let mut out = ChainResult {
        verdicts: Vec::new(),
        factors: Vec::new(),
        embeddings: Vec::new(),
        failed_cut: None,
        remainder: None,
        residual: None,
    };
    let mut current = psi.clone();
    for i in 1..n {
        let verdict = check_disentangling(&cut_view(psi, i)?, tol)?;
        let holds = verdict.holds;
        out.verdicts.push(verdict);
        if !holds {
            out.failed_cut = Some(i);
            out.remainder = Some(current);
            return Ok(out);
        }
        if i == n - 1 {
            out.factors.push(current.clone());
            break;
        }
        let split = match factorize(&current.regroup(&[1, 1, n - i - 1])?, tol) {
            Ok(f) => f,
            Err(Error::NotFactorizable(_)) => {
                out.failed_cut = Some(i);
                out.remainder = Some(current);
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        let mut tail_dims = vec![split.b2_dim];
        tail_dims.extend_from_slice(&psi.dims().as_slice()[i + 1..]);
        let (tail, _) = split.b2c.clone().into_parts();
        current = PureState::new(tail, Dims::new(tail_dims)?)?;
        out.factors.push(split.ab1);
        out.embeddings.push(split.embedding);
    }
    let rebuilt = assemble_chain(&out.factors, &out.embeddings)?;
    out.residual = Some(linalg::diff_norm(rebuilt.amps(), psi.amps()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{
        bell, embedded_product, ghz, haar_random_pure, random_product, zero_state, EmbeddedSpec,
    };

    fn dims(v: &[usize]) -> Dims {
        Dims::new(v.to_vec()).unwrap()
    }

    fn product3() -> PureState {
        random_product(&dims(&[2, 3, 2]), 8)
    }

    /// Direct evaluation of `Σ_a T^i*_am T^j_an − δ_ij C_mn` from the
    /// entry accessor, independent of the slice/gram route.
    fn brute_residual(t: &TTensor) -> f64 {
        let mut c = vec![C64::new(0.0, 0.0); t.r_c * t.r_c];
        for i in 0..t.r_a {
            for m in 0..t.r_c {
                for n in 0..t.r_c {
                    for a in 0..t.r_b {
                        c[m * t.r_c + n] += t.get(i, a, m).conj() * t.get(i, a, n) / t.r_a as f64;
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..t.r_a {
            for j in 0..t.r_a {
                for m in 0..t.r_c {
                    for n in 0..t.r_c {
                        let mut s = C64::new(0.0, 0.0);
                        for a in 0..t.r_b {
                            s += t.get(i, a, m).conj() * t.get(j, a, n);
                        }
                        if i == j {
                            s -= c[m * t.r_c + n];
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn t_tensor_of_product_state() {
        let t = extract_t_tensor(&zero_state(&dims(&[2, 2, 2]))).unwrap();
        assert_eq!((t.r_a, t.r_b, t.r_c), (1, 1, 1));
        assert!((t.get(0, 0, 0).norm() - 1.0).abs() < 1e-12);
        assert!(check_condition(&t) < 1e-12);
    }

    #[test]
    fn t_tensor_of_ghz() {
        let t = extract_t_tensor(&ghz(2, 3).unwrap()).unwrap();
        assert_eq!((t.r_a, t.r_b, t.r_c), (2, 2, 2));
        assert!(t.unitarity_residual() < 1e-9);
        let r = check_condition(&t);
        assert!(r > 0.1, "residual {r}");
        assert!((r - brute_residual(&t)).abs() < 1e-12);
    }

    #[test]
    fn t_tensor_of_random_state_is_row_orthonormal() {
        let t = extract_t_tensor(&haar_random_pure(&dims(&[3, 3, 3]), 2)).unwrap();
        assert!(t.unitarity_residual() < 1e-9);
        assert!((check_condition(&t) - brute_residual(&t)).abs() < 1e-12);
        assert!(extract_t_tensor(&haar_random_pure(&dims(&[2, 2]), 2)).is_err());
    }

    #[test]
    fn embedded_fixture_satisfies_condition() {
        let e = embedded_product(EmbeddedSpec::for_dims(2, 4, 2), 21).unwrap();
        let t = extract_t_tensor(&e.state).unwrap();
        assert!(check_condition(&t) < 1e-10);
        assert!(brute_residual(&t) < 1e-10);
        let c = t.coupling();
        for m in 0..t.r_c {
            for n in 0..t.r_c {
                let expect = if m == n { t.q[m] } else { 0.0 };
                assert!((c[(m, n)] - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn a_product_state_has_vacuous_condition() {
        let a = zero_state(&dims(&[2]));
        let bc = haar_random_pure(&dims(&[3, 2]), 4);
        let psi = a.tensor(&bc);
        let t = extract_t_tensor(&psi).unwrap();
        assert_eq!(t.r_a, 1);
        assert!(check_condition(&t) < 1e-12);
    }

    #[test]
    fn verdicts_for_reference_states() {
        let e = embedded_product(EmbeddedSpec::for_dims(2, 4, 2), 3).unwrap();
        let v = check_disentangling(&e.state, DEFAULT_TOL).unwrap();
        assert!(v.holds && v.gap.abs() < 1e-10);

        let v = check_disentangling(&ghz(2, 3).unwrap(), DEFAULT_TOL).unwrap();
        assert!(!v.holds);
        assert!((v.n_abc - 0.5).abs() < 1e-12 && v.n_ab.abs() < 1e-12);
        assert!((v.gap - 0.5).abs() < 1e-10);

        let v = check_disentangling(&product3(), DEFAULT_TOL).unwrap();
        assert!(v.holds && v.n_abc == 0.0 && v.n_ab == 0.0);

        assert!(check_disentangling(&product3(), 0.0).is_err());
    }

    #[test]
    fn factorize_embedded_fixture_recovers_ground_truth() {
        let e = embedded_product(EmbeddedSpec::for_dims(2, 4, 2), 17).unwrap();
        let f = factorize(&e.state, DEFAULT_TOL).unwrap();
        assert!(f.reconstruction_residual < 1e-9);
        assert!(f.isometry_residual < 1e-9);
        assert!((f.q.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let truth_p = schmidt(&e.ab1, &[0]).unwrap().coefficients;
        let truth_q = schmidt(&e.b2c, &[0]).unwrap().coefficients;
        assert_eq!(f.p.len(), truth_p.len());
        for (a, b) in f.p.iter().zip(&truth_p) {
            assert!((a - b).abs() < 1e-9);
        }
        for (a, b) in f.q.iter().zip(&truth_q) {
            assert!((a - b).abs() < 1e-9);
        }
        // the recovered subspace equals the true image of the embedding
        let proj_true = &e.embedding * e.embedding.adjoint();
        let proj_found = &f.embedding * f.embedding.adjoint();
        assert!((proj_true - proj_found).norm() < 1e-9);
    }

    #[test]
    fn factorize_bell_times_local() {
        let psi = bell(2).unwrap().tensor(&zero_state(&dims(&[2])));
        let f = factorize(&psi, DEFAULT_TOL).unwrap();
        assert_eq!((f.b1_dim, f.b2_dim), (2, 1));
        assert_eq!(f.q.len(), 1);
        assert!((f.q[0] - 1.0).abs() < 1e-12);
        assert!((f.b2c.amps()[0].norm() - 1.0).abs() < 1e-12);
        assert!(f.reconstruction_residual < 1e-12);
    }

    #[test]
    fn factorize_refuses_ghz() {
        match factorize(&ghz(2, 3).unwrap(), DEFAULT_TOL) {
            Err(Error::NotFactorizable(v)) => assert!((v.gap - 0.5).abs() < 1e-10),
            other => panic!("expected NotFactorizable, got {other:?}"),
        }
    }

    #[test]
    fn product_marginal_checks() {
        let e = embedded_product(EmbeddedSpec::for_dims(3, 4, 2), 9).unwrap();
        let r = corollary4_check(&e.state, DEFAULT_TOL).unwrap();
        assert!(r.n_ac < 1e-10 && r.product_residual < 1e-9);

        let r = corollary4_check(&product3(), DEFAULT_TOL).unwrap();
        assert_eq!(r.n_ac, 0.0);

        // ρ_AC = (I/2) ⊗ |0⟩⟨0|
        let psi = bell(2).unwrap().tensor(&zero_state(&dims(&[2])));
        let r = corollary4_check(&psi, DEFAULT_TOL).unwrap();
        assert_eq!(r.n_ac, 0.0);
        let rho_ac = psi.reduced(&[0, 2]).unwrap();
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(0.5, 0.0);
        expect[(2, 2)] = C64::new(0.5, 0.0);
        assert!((rho_ac.matrix() - expect).norm() < 1e-15);

        assert!(matches!(
            corollary4_check(&ghz(2, 3).unwrap(), DEFAULT_TOL),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn chain_of_two_is_trivial() {
        let psi = haar_random_pure(&dims(&[2, 3]), 1);
        let c = chain_factorize(&psi, DEFAULT_TOL).unwrap();
        assert!(c.complete());
        assert_eq!(c.factors.len(), 1);
        assert_eq!(c.verdicts.len(), 1);
        assert!(c.residual.unwrap() < 1e-12);
    }

    #[test]
    fn chain_fixture_factorizes() {
        let d = dims(&[2, 4, 4, 2]);
        let fx =
            crate::state::chain_product(&d, &crate::state::default_chain_splits(&d), 31).unwrap();
        let c = chain_factorize(&fx.state, DEFAULT_TOL).unwrap();
        assert!(c.complete(), "{:?}", c.verdicts);
        assert_eq!(c.factors.len(), 3);
        assert!(c.residual.unwrap() < 1e-8);
        for (found, truth) in c.factors.iter().zip(&fx.factors) {
            let a = schmidt(found, &[0]).unwrap().coefficients;
            let b = schmidt(truth, &[0]).unwrap().coefficients;
            assert_eq!(a.len(), b.len());
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
        }
    }

    #[test]
    fn chain_ghz_fails_first_cut() {
        let c = chain_factorize(&ghz(2, 4).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(c.failed_cut, Some(1));
        assert!(c.factors.is_empty());
        assert!(c.remainder.is_some());
    }

    #[test]
    fn negativity_moves_into_ab1_factor() {
        let e = embedded_product(EmbeddedSpec::for_dims(3, 4, 3), 12).unwrap();
        let f = factorize(&e.state, DEFAULT_TOL).unwrap();
        let n_ab1 = negativity(&f.ab1.to_density(), &[0]).unwrap().negativity;
        assert!((f.verdict.n_abc - n_ab1).abs() < 1e-9);
    }
}
