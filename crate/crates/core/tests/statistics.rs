mod common;

use common::{apply_local, dims, ks_statistic, random_unitary};
use negent_core::monogamy::MetropolisChain;
use negent_core::{haar_random_pure, saturation_sampler, schmidt, MonogamyRecord, SamplerConfig};

/// Critical two-sample KS distance at α = 0.001 for equal sizes `n`.
fn ks_critical(n: usize) -> f64 {
    1.95 * (2.0 / n as f64).sqrt()
}

#[test]
fn p_max_distribution_is_local_unitary_invariant() {
    for m in [2, 3] {
        let d = dims(&[m, m, m]);
        let fixed: Vec<_> = (0..3).map(|k| random_unitary(m, 500 + k)).collect();
        let plain: Vec<f64> = (0..1000)
            .map(|s| {
                schmidt(&haar_random_pure(&d, s), &[0])
                    .unwrap()
                    .coefficients[0]
            })
            .collect();
        let rotated: Vec<f64> = (0..1000)
            .map(|s| {
                let mut psi = haar_random_pure(&d, 1_000_000 + s);
                for (k, u) in fixed.iter().enumerate() {
                    psi = apply_local(&psi, k, u);
                }
                schmidt(&psi, &[0]).unwrap().coefficients[0]
            })
            .collect();
        let ks = ks_statistic(&plain, &rotated);
        assert!(ks < ks_critical(1000), "m={m}: KS {ks}");
    }
}

#[test]
fn ks_statistic_detects_a_shift() {
    let a: Vec<f64> = (0..1000).map(|k| k as f64 / 1000.0).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
    assert!((ks_statistic(&a, &b) - 0.2).abs() < 2e-3);
    assert_eq!(ks_statistic(&a, &a), 0.0);
}

/// Per-component means of `|ψ_k|²` and `|ψ_k|⁴`.
fn moments<'a>(
    states: impl Iterator<Item = &'a [negent_core::C64]>,
    dim: usize,
) -> (Vec<f64>, Vec<f64>) {
    let (mut m2, mut m4, mut n) = (vec![0.0; dim], vec![0.0; dim], 0.0);
    for amps in states {
        for (k, a) in amps.iter().enumerate() {
            let p = a.norm_sqr();
            m2[k] += p;
            m4[k] += p * p;
        }
        n += 1.0;
    }
    (
        m2.iter().map(|x| x / n).collect(),
        m4.iter().map(|x| x / n).collect(),
    )
}

#[test]
fn flat_objective_chain_matches_haar_moments() {
    let cfg = SamplerConfig {
        m: 2,
        steps: 41_000,
        burn_in: 1_000,
        stride: 20,
        sigma: 1.0,
        seed: 3,
        ..Default::default()
    };
    let mut chain = MetropolisChain::new(cfg, |_: &MonogamyRecord| 0.0).unwrap();
    let mut samples = Vec::new();
    while let Some(r) = chain.next() {
        r.unwrap();
        samples.push(chain.current().amps().to_vec());
    }
    assert_eq!(chain.acceptance_rate(), 1.0);
    assert_eq!(samples.len(), 2000);

    let dim = 8.0;
    let (m2, m4) = moments(samples.iter().map(|v| v.as_slice()), 8);
    // oracle: for Haar states E|ψ_k|² = 1/D and E|ψ_k|⁴ = 2/(D(D+1))
    let fourth = 2.0 / (dim * (dim + 1.0));
    for k in 0..8 {
        assert!(
            (m2[k] - 1.0 / dim).abs() < 0.025,
            "component {k}: {}",
            m2[k]
        );
        assert!(
            (m4[k] - fourth).abs() < 0.3 * fourth,
            "component {k}: {}",
            m4[k]
        );
    }

    let d = dims(&[2, 2, 2]);
    let haar: Vec<_> = (0..2000)
        .map(|s| haar_random_pure(&d, s).amps().to_vec())
        .collect();
    let (h2, h4) = moments(haar.iter().map(|v| v.as_slice()), 8);
    for k in 0..8 {
        assert!((h2[k] - 1.0 / dim).abs() < 0.015);
        assert!((h4[k] - fourth).abs() < 0.2 * fourth);
    }
}

#[test]
fn hot_chain_accepts_almost_everything() {
    let cfg = SamplerConfig {
        m: 2,
        steps: 3_000,
        temperature: 1e9,
        seed: 4,
        ..Default::default()
    };
    let mut chain = saturation_sampler(cfg).unwrap();
    for r in chain.by_ref() {
        r.unwrap();
    }
    assert!(
        chain.acceptance_rate() > 0.999,
        "{}",
        chain.acceptance_rate()
    );
}

#[test]
fn cold_chain_acceptance_is_strictly_between_zero_and_one() {
    let cfg = SamplerConfig {
        m: 3,
        steps: 3_000,
        seed: 5,
        ..Default::default()
    };
    let mut chain = saturation_sampler(cfg).unwrap();
    let emitted = chain.by_ref().count();
    assert_eq!(emitted, 200);
    let rate = chain.acceptance_rate();
    assert!(rate > 0.0 && rate < 1.0, "{rate}");
}
