#![allow(dead_code)]

use negent_core::linalg::{apply_block, CMatrix, Dims};
use negent_core::rng::rng_for;
use negent_core::state::random_isometry;
use negent_core::PureState;

pub fn dims(d: &[usize]) -> Dims {
    Dims::new(d.to_vec()).unwrap()
}

pub fn random_unitary(d: usize, seed: u64) -> CMatrix {
    random_isometry(&mut rng_for(seed, 77), d, d).unwrap()
}

/// Apply `u` to subsystem `k` of `psi`.
pub fn apply_local(psi: &PureState, k: usize, u: &CMatrix) -> PureState {
    let (amps, d) = apply_block(psi.amps(), psi.dims(), k, 1, u).unwrap();
    PureState::normalized(amps, d).unwrap()
}

/// `U_1 ⊗ U_2 ⊗ …` with independent Haar unitaries derived from `seed`.
pub fn apply_local_unitaries(psi: &PureState, seed: u64) -> PureState {
    let mut out = psi.clone();
    for k in 0..psi.dims().len() {
        out = apply_local(
            &out,
            k,
            &random_unitary(
                psi.dims().get(k),
                seed.wrapping_mul(31).wrapping_add(k as u64),
            ),
        );
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}
