//! Entanglement negativity of multipartite states, detection and
//! construction of the `|Ψ_AB1⟩ ⊗ |Ψ_B2C⟩` factorization, and numerical
//! monogamy experiments for squared negativity.
//!
//! Composite indices are row-major with subsystem 0 most significant.

// `!(x > 0.0)` guards reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod disentangle;
pub mod error;
pub mod io;
pub mod linalg;
pub mod monogamy;
pub mod negativity;
pub mod plot;
pub mod rng;
pub mod state;

pub use disentangle::{
    chain_factorize, check_condition, check_disentangling, corollary4_check, extract_t_tensor,
    factorize, ChainResult, DisentanglingVerdict, FactorizationResult, ProductMarginalReport,
    TTensor,
};
pub use error::{Error, Result};
pub use linalg::{CMatrix, Dims, C64};
pub use monogamy::{
    generalized_check, generalized_scan, haar_scan, monogamy_check, saturation_sampler,
    violation_search_unsquared, GeneralizedRecord, HaarScan, MetropolisChain, MonogamyRecord,
    RecordKind, SamplerConfig, ScanSummary,
};
pub use negativity::{
    negativity, optimal_decomposition, pure_negativity, pure_negativity_from_schmidt,
    NegativityResult, OptimalDecomposition,
};
pub use state::{
    haar_random_pure, named_state, schmidt, DensityMatrix, PureState, SchmidtDecomposition,
};
