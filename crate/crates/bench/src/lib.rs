//! Inputs shared by the benchmarks.

use negent_core::state::{embedded_product, EmbeddedSpec};
use negent_core::{haar_random_pure, Dims, PureState, SamplerConfig};

pub fn tripartite(m: usize, seed: u64) -> PureState {
    haar_random_pure(&Dims::new(vec![m; 3]).expect("m ≥ 1"), seed)
}

/// An embedded product state with `d_A = d_B1 = d_B2 = d_C = d`.
pub fn factorizable(d: usize, seed: u64) -> PureState {
    let spec = EmbeddedSpec {
        d_a: d,
        d_b1: d,
        d_b2: d,
        d_c: d,
        d_b_extra: 0,
    };
    embedded_product(spec, seed).expect("valid spec").state
}

/// A cold chain that emits one record per proposal after a single burn-in
/// step.
pub fn sampler_config(m: usize, proposals: u64) -> SamplerConfig {
    SamplerConfig {
        m,
        steps: proposals + 1,
        burn_in: 1,
        stride: 1,
        ..Default::default()
    }
}
