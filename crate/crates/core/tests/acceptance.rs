//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use negent_core::io::write_records;
use negent_core::linalg::{eigh, partial_transpose, CMatrix, Dims};
use negent_core::monogamy::{quantile, HaarScan, SamplerConfig};
use negent_core::negativity::optimality_report;
use negent_core::rng::{complex_normal_vec, rng_for};
use negent_core::state::{
    chain_product, default_chain_splits, embedded_product, ghz, w_state, EmbeddedSpec,
};
use negent_core::{
    chain_factorize, check_disentangling, corollary4_check, factorize, generalized_check,
    haar_random_pure, haar_scan, monogamy_check, optimal_decomposition, saturation_sampler,
    schmidt, violation_search_unsquared, Error, MonogamyRecord, Result,
};

const TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn dims(d: &[usize]) -> Dims {
    Dims::new(d.to_vec()).unwrap()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Sorted multiset `{p_i} ∪ {±√(p_i p_j)}_{i<j}` padded with zeros to `n`.
fn expected_spectrum(p: &[f64], n: usize) -> Vec<f64> {
    let mut out = p.to_vec();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let s = (p[i] * p[j]).sqrt();
            out.push(s);
            out.push(-s);
        }
    }
    out.resize(n, 0.0);
    sorted_desc(out)
}

fn c1_spectrum() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for m in [2, 3, 4] {
        let d = dims(&[m, m, m]);
        for seed in 0..200 {
            let psi = haar_random_pure(&d, 1000 + seed);
            let p = schmidt(&psi, &[0])?.coefficients;
            let pt = partial_transpose(psi.to_density().matrix(), &d, &[0])?;
            let got = eigh(&pt)?.values;
            let want = expected_spectrum(&p, got.len());
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).abs());
            }
        }
    }
    verdict(worst <= 1e-9, format!("600 states, max |Δλ| = {worst:.2e}"))
}

fn random_hermitian(n: usize, seed: u64) -> CMatrix {
    let g = CMatrix::from_row_slice(n, n, &complex_normal_vec(&mut rng_for(seed, 0), n * n));
    (&g + g.adjoint()).unscale(2.0)
}

fn c2_lemma2() -> Result<Verdict> {
    let (mut norm_err, mut neg_err, mut overlap) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..100 {
        let h = random_hermitian(16, 2000 + seed);
        let d = optimal_decomposition(&h)?;
        let r = optimality_report(&h, &d)?;
        norm_err = norm_err.max((r.trace_norm - r.weight_sum).abs() / r.trace_norm);
        neg_err = neg_err.max((r.negativity - r.a_minus).abs());
        overlap = overlap.max(r.overlap.abs());
    }
    verdict(
        norm_err <= 1e-9 && neg_err <= 1e-9 && overlap <= 1e-10,
        format!("rel ‖A‖₁ err {norm_err:.2e}, |N − a₋| {neg_err:.2e}, tr(ρ⁺ρ⁻) {overlap:.2e}"),
    )
}

/// 100 fixtures cycling through every `(dA, dB1, dB2, dC) ∈ {2,3}⁴`, with
/// and without spare room in `B`.
fn fixture_specs() -> Vec<(EmbeddedSpec, u64)> {
    (0..100u64)
        .map(|k| {
            let c = k % 16;
            let pick = |bit: u64| if c >> bit & 1 == 1 { 3 } else { 2 };
            let spec = EmbeddedSpec {
                d_a: pick(0),
                d_b1: pick(1),
                d_b2: pick(2),
                d_c: pick(3),
                d_b_extra: ((k / 16) % 2) as usize,
            };
            (spec, 3000 + k)
        })
        .collect()
}

fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted_desc(a.to_vec()), sorted_desc(b.to_vec()));
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn c3_forward() -> Result<Verdict> {
    let (mut held, mut cond, mut resid, mut spec_err) = (0, 0.0f64, 0.0f64, 0.0f64);
    for (spec, seed) in fixture_specs() {
        let fx = embedded_product(spec, seed)?;
        let f = factorize(&fx.state, TOL)?;
        held += f.verdict.holds as usize;
        cond = cond.max(f.verdict.condition_residual);
        resid = resid.max(f.reconstruction_residual);
        let p_true = schmidt(&fx.ab1, &[0])?.coefficients;
        let q_true = schmidt(&fx.b2c, &[1])?.coefficients;
        spec_err = spec_err
            .max(spectrum_distance(&f.p, &p_true))
            .max(spectrum_distance(&f.q, &q_true));
    }
    verdict(
        held == 100 && cond < 1e-9 && resid < 1e-9 && spec_err <= 1e-9,
        format!(
            "holds {held}/100, condition {cond:.2e}, residual {resid:.2e}, spectra {spec_err:.2e}"
        ),
    )
}

fn c4_converse() -> Result<Verdict> {
    let g = ghz(2, 3)?;
    let v = check_disentangling(&g, TOL)?;
    let ghz_ok = (v.gap - 0.5).abs() <= 1e-10
        && matches!(factorize(&g, TOL), Err(Error::NotFactorizable(_)));
    let d = dims(&[2, 2, 2]);
    let mut false_pos = 0;
    for seed in 0..1000 {
        if check_disentangling(&haar_random_pure(&d, 4000 + seed), TOL)?.holds {
            false_pos += 1;
        }
    }
    verdict(
        ghz_ok && false_pos == 0,
        format!(
            "GHZ gap {:.12}, not factorizable {ghz_ok}; Haar false positives {false_pos}/1000",
            v.gap
        ),
    )
}

fn c5_product_marginal() -> Result<Verdict> {
    let (mut n_ac, mut resid) = (0.0f64, 0.0f64);
    for (spec, seed) in fixture_specs() {
        let r = corollary4_check(&embedded_product(spec, seed)?.state, TOL)?;
        n_ac = n_ac.max(r.n_ac);
        resid = resid.max(r.product_residual);
    }
    verdict(
        n_ac < 1e-9 && resid < 1e-9,
        format!("max N(A|C) {n_ac:.2e}, max ‖ρ_AC − ρ_A⊗ρ_C‖_F {resid:.2e}"),
    )
}

fn c6_chain() -> Result<Verdict> {
    let shapes: [&[usize]; 4] = [&[2, 4, 4, 2], &[3, 4, 6, 2], &[2, 6, 4, 3], &[2, 5, 5, 2]];
    let (mut complete, mut worst) = (0, 0.0f64);
    for k in 0..20u64 {
        let d = dims(shapes[(k % 4) as usize]);
        let fx = chain_product(&d, &default_chain_splits(&d), 5000 + k)?;
        let r = chain_factorize(&fx.state, TOL)?;
        if r.complete() {
            complete += 1;
            worst = worst.max(r.residual.unwrap_or(f64::INFINITY));
        }
    }
    let g = chain_factorize(&ghz(2, 4)?, TOL)?;
    verdict(
        complete == 20 && worst < 1e-8 && g.failed_cut == Some(1),
        format!(
            "complete {complete}/20, max residual {worst:.2e}; 4-qubit GHZ fails at cut {:?}",
            g.failed_cut
        ),
    )
}

fn chain_records(m: usize, samples: u64, seed: u64) -> Result<Vec<MonogamyRecord>> {
    let base = SamplerConfig::default();
    let cfg = SamplerConfig {
        m,
        seed,
        steps: SamplerConfig::steps_for(base.burn_in, base.stride, samples),
        ..base
    };
    saturation_sampler(cfg)?.collect()
}

fn c7_squared() -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for m in [2, 3, 4] {
        let recs = haar_scan(m, 10_000, 7000 + m as u64)?;
        let v = recs.iter().filter(|r| r.is_violation()).count();
        let lo = recs.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        parts.push(format!("haar m={m}: {v} (min {lo:.2e})"));
        violations += v;
        min_slack = min_slack.min(lo);
    }
    for m in [2, 3] {
        let recs = chain_records(m, 10_000, 7100 + m as u64)?;
        let v = recs.iter().filter(|r| r.is_violation()).count();
        let lo = recs.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        parts.push(format!("chain m={m}: {v} of {} (min {lo:.2e})", recs.len()));
        violations += v;
        min_slack = min_slack.min(lo);
    }
    verdict(violations == 0 && min_slack >= -1e-10, parts.join("; "))
}

fn c8_generalized() -> Result<Verdict> {
    let d = dims(&[2, 2, 2, 2]);
    let (mut violations, mut lo) = (0, f64::INFINITY);
    for s in 0..10_000u64 {
        let r = generalized_check(&haar_random_pure(&d, 8_000_000 + s))?;
        lo = lo.min(r.slack);
        violations += (r.slack < -1e-10) as usize;
    }
    verdict(
        violations == 0,
        format!("{violations}/10000 violations, min slack {lo:.2e}"),
    )
}

fn c9_unsquared() -> Result<Verdict> {
    let w = monogamy_check(&w_state(&dims(&[2, 2, 2]))?)?;
    let best = violation_search_unsquared(2, 1000, 9000)?;
    verdict(
        w.unsquared_slack < 0.0 && best.unsquared_slack < 0.0,
        format!(
            "W unsquared_slack {:+.6}; search min {:+.6} at step {}",
            w.unsquared_slack, best.unsquared_slack, best.step
        ),
    )
}

fn c10_sampler() -> Result<Verdict> {
    let chain: Vec<f64> = chain_records(3, 10_000, 7103)?
        .iter()
        .map(|r| r.slack)
        .collect();
    let haar: Vec<f64> = haar_scan(3, 10_000, 7003)?
        .iter()
        .map(|r| r.slack)
        .collect();
    let median = quantile(&chain, 0.5).unwrap();
    let p10 = quantile(&haar, 0.1).unwrap();
    verdict(
        median < p10,
        format!("chain median {median:.4e} vs Haar p10 {p10:.4e}"),
    )
}

fn render(seed: u64) -> Result<(Vec<u8>, String)> {
    let mut records = Vec::new();
    HaarScan::new(3, 500, seed)?.run(4, |r| {
        records.push(r.clone());
        Ok(())
    })?;
    records.extend(chain_records(2, 200, seed)?);
    let csv = write_records(Vec::new(), &records)?;
    Ok((csv, negent_core::plot::monogamy_svg(&records)))
}

fn c11_reproducible() -> Result<Verdict> {
    let (csv_a, svg_a) = render(11)?;
    let (csv_b, svg_b) = render(11)?;
    let (csv_c, _) = render(12)?;
    verdict(
        csv_a == csv_b && svg_a == svg_b && csv_a != csv_c,
        format!(
            "csv {} bytes identical {}, svg {} bytes identical {}, other seed differs {}",
            csv_a.len(),
            csv_a == csv_b,
            svg_a.len(),
            svg_a == svg_b,
            csv_a != csv_c
        ),
    )
}

type Criterion = (&'static str, fn() -> Result<Verdict>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("pure-state partial-transpose spectrum", c1_spectrum),
        ("optimal decomposition equivalences", c2_lemma2),
        ("disentangling forward direction", c3_forward),
        ("disentangling negative controls", c4_converse),
        ("product A-C marginal", c5_product_marginal),
        ("chain factorization", c6_chain),
        ("squared monogamy", c7_squared),
        ("generalized four-qubit monogamy", c8_generalized),
        ("un-squared monogamy fails", c9_unsquared),
        ("sampler concentrates near saturation", c10_sampler),
        ("byte-identical reruns", c11_reproducible),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !pass as usize;
        println!(
            "{} {:>2}. {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
