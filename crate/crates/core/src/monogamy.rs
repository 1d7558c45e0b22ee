//! Monogamy of squared negativity: per-state checks, seeded Haar scans and
//! a Metropolis chain that drifts toward the saturation line
//! `N²(A|BC) = N²(A|B) + N²(A|C)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Dims, C64};
use crate::negativity::{negativity, pure_negativity};
use crate::rng::{complex_normal_vec, rng_for, StateRng};
use crate::state::{haar_random_pure_with, PureState};

/// Records with `slack` below this count as violations.
pub const VIOLATION_THRESHOLD: f64 = -1e-10;

const SCAN_CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Haar,
    Chain,
}

impl std::fmt::Display for RecordKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RecordKind::Haar => "haar",
            RecordKind::Chain => "chain",
        })
    }
}

/// Both sides of the squared and un-squared monogamy relations for one
/// tripartite state. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogamyRecord {
    pub kind: RecordKind,
    pub seed: u64,
    pub step: u64,
    /// Local dimension of `A`.
    pub m: usize,
    pub n_abc_sq: f64,
    pub n_ab_sq: f64,
    pub n_ac_sq: f64,
    /// `n_abc_sq − n_ab_sq − n_ac_sq`.
    pub slack: f64,
    /// `N(A|BC) − N(A|B) − N(A|C)`.
    pub unsquared_slack: f64,
}

impl MonogamyRecord {
    pub fn recomputed_slack(&self) -> f64 {
        self.n_abc_sq - self.n_ab_sq - self.n_ac_sq
    }

    pub fn is_violation(&self) -> bool {
        self.slack < VIOLATION_THRESHOLD
    }

    fn with_provenance(mut self, kind: RecordKind, seed: u64, step: u64) -> Self {
        self.kind = kind;
        self.seed = seed;
        self.step = step;
        self
    }
}

pub fn monogamy_check(psi: &PureState) -> Result<MonogamyRecord> {
    let d = psi.dims();
    if d.len() != 3 {
        return Err(Error::Dimension(format!(
            "monogamy check needs 3 subsystems, got {d}"
        )));
    }
    let n_abc = pure_negativity(psi, &[0])?;
    let n_ab = negativity(&psi.reduced(&[0, 1])?, &[0])?.negativity;
    let n_ac = negativity(&psi.reduced(&[0, 2])?, &[0])?.negativity;
    let (n_abc_sq, n_ab_sq, n_ac_sq) = (n_abc * n_abc, n_ab * n_ab, n_ac * n_ac);
    Ok(MonogamyRecord {
        kind: RecordKind::Haar,
        seed: 0,
        step: 0,
        m: d.get(0),
        n_abc_sq,
        n_ab_sq,
        n_ac_sq,
        slack: n_abc_sq - n_ab_sq - n_ac_sq,
        unsquared_slack: n_abc - n_ab - n_ac,
    })
}

/// `N²(A|B_1…B_n)` against `Σ_i N²(A|B_i)`; `A` is subsystem 0.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedRecord {
    pub n_a_rest_sq: f64,
    pub n_a_bi_sq: Vec<f64>,
    pub slack: f64,
}

pub fn generalized_check(psi: &PureState) -> Result<GeneralizedRecord> {
    let parties = psi.dims().len();
    if parties < 3 {
        return Err(Error::Dimension(format!(
            "generalized check needs ≥ 3 subsystems, got {}",
            psi.dims()
        )));
    }
    let n_rest = pure_negativity(psi, &[0])?;
    let n_a_bi_sq = (1..parties)
        .map(|b| Ok(negativity(&psi.reduced(&[0, b])?, &[0])?.negativity.powi(2)))
        .collect::<Result<Vec<f64>>>()?;
    let n_a_rest_sq = n_rest * n_rest;
    Ok(GeneralizedRecord {
        slack: n_a_rest_sq - n_a_bi_sq.iter().sum::<f64>(),
        n_a_rest_sq,
        n_a_bi_sq,
    })
}

/// `count` Haar-random states on `parties` copies of `C^dim`, state `step`
/// drawn from ChaCha20 stream `step` of `seed`. Results are in step order.
pub fn generalized_scan(
    parties: usize,
    dim: usize,
    count: u64,
    seed: u64,
) -> Result<Vec<GeneralizedRecord>> {
    if dim < 2 {
        return Err(Error::Dimension(format!(
            "local dimension must be ≥ 2, got {dim}"
        )));
    }
    let dims = Dims::new(vec![dim; parties])?;
    (0..count)
        .into_par_iter()
        .map(|step| generalized_check(&haar_random_pure_with(&mut rng_for(seed, step), &dims)))
        .collect()
}

/// Running statistics over a record stream.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub count: u64,
    pub min_slack: Option<f64>,
    pub min_unsquared_slack: Option<f64>,
    pub violations: u64,
    pub unsquared_violations: u64,
}

impl ScanSummary {
    pub fn observe(&mut self, r: &MonogamyRecord) {
        self.count += 1;
        self.min_slack = Some(self.min_slack.map_or(r.slack, |m| m.min(r.slack)));
        self.min_unsquared_slack = Some(
            self.min_unsquared_slack
                .map_or(r.unsquared_slack, |m| m.min(r.unsquared_slack)),
        );
        if r.is_violation() {
            self.violations += 1;
        }
        if r.unsquared_slack < VIOLATION_THRESHOLD {
            self.unsquared_violations += 1;
        }
    }
}

/// Haar-random tripartite states on `[m, m, m]`. Record `step` is drawn
/// from ChaCha20 stream `step` of `seed`, so any record can be regenerated
/// alone and the output does not depend on the worker count.
#[derive(Clone, Copy, Debug)]
pub struct HaarScan {
    pub m: usize,
    pub count: u64,
    pub seed: u64,
}

impl HaarScan {
    pub fn new(m: usize, count: u64, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension(format!(
                "local dimension must be ≥ 2, got {m}"
            )));
        }
        Ok(Self { m, count, seed })
    }

    pub fn dims(&self) -> Dims {
        Dims::new(vec![self.m; 3]).expect("m ≥ 2")
    }

    pub fn state(&self, step: u64) -> PureState {
        haar_random_pure_with(&mut rng_for(self.seed, step), &self.dims())
    }

    pub fn record(&self, step: u64) -> Result<MonogamyRecord> {
        Ok(monogamy_check(&self.state(step))?.with_provenance(RecordKind::Haar, self.seed, step))
    }

    /// Sequential record stream.
    pub fn records(&self) -> impl Iterator<Item = Result<MonogamyRecord>> + '_ {
        (0..self.count).map(move |s| self.record(s))
    }

    /// Evaluate on `workers` threads (0 = rayon default) in bounded chunks,
    /// handing records to `sink` in step order.
    pub fn run<F>(&self, workers: usize, mut sink: F) -> Result<ScanSummary>
    where
        F: FnMut(&MonogamyRecord) -> Result<()>,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Contract(format!("cannot start worker pool: {e}")))?;
        let mut summary = ScanSummary::default();
        let mut start = 0u64;
        while start < self.count {
            let end = (start + SCAN_CHUNK as u64).min(self.count);
            let chunk: Vec<Result<MonogamyRecord>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|s| self.record(s))
                    .collect()
            });
            for r in chunk {
                let r = r?;
                summary.observe(&r);
                sink(&r)?;
            }
            start = end;
        }
        Ok(summary)
    }
}

pub fn haar_scan(m: usize, count: u64, seed: u64) -> Result<Vec<MonogamyRecord>> {
    let mut out = Vec::with_capacity(count as usize);
    HaarScan::new(m, count, seed)?.run(0, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// The Haar record with the most negative `unsquared_slack`.
pub fn violation_search_unsquared(m: usize, count: u64, seed: u64) -> Result<MonogamyRecord> {
    let mut best: Option<MonogamyRecord> = None;
    HaarScan::new(m, count, seed)?.run(0, |r| {
        if best
            .as_ref()
            .is_none_or(|b| r.unsquared_slack < b.unsquared_slack)
        {
            best = Some(r.clone());
        }
        Ok(())
    })?;
    best.ok_or_else(|| Error::Contract("violation search needs count ≥ 1".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub m: usize,
    /// Total proposals, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    /// Emit every `stride`-th state after burn-in.
    pub stride: u64,
    /// Proposal step size.
    pub sigma: f64,
    pub temperature: f64,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            m: 3,
            steps: 11_000,
            burn_in: 1_000,
            stride: 10,
            sigma: 0.05,
            temperature: 1e-3,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        if self.m < 2 {
            return fail(format!("m must be ≥ 2, got {}", self.m));
        }
        if self.steps <= self.burn_in {
            return fail(format!(
                "steps ({}) must exceed burn-in ({})",
                self.steps, self.burn_in
            ));
        }
        if self.stride == 0 {
            return fail("stride must be ≥ 1".into());
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return fail(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.temperature > 0.0) {
            return fail(format!(
                "temperature must be positive, got {}",
                self.temperature
            ));
        }
        Ok(())
    }

    /// Number of records the chain will emit.
    pub fn emitted(&self) -> u64 {
        (self.steps - self.burn_in) / self.stride
    }

    /// Smallest `steps` that emits `samples` records.
    pub fn steps_for(burn_in: u64, stride: u64, samples: u64) -> u64 {
        burn_in + stride * samples
    }
}

/// Metropolis chain over pure states on `[m, m, m]`.
///
/// Proposal: `ψ' = normalize(ψ + σ η)` with `η` iid standard complex
/// normal. Acceptance: `min(1, exp((E(ψ) − E(ψ'))/T))`, one uniform draw per
/// step. The whole chain comes from ChaCha20 stream 0 of the seed.
pub struct MetropolisChain<F> {
    cfg: SamplerConfig,
    energy: F,
    rng: StateRng,
    current: PureState,
    record: MonogamyRecord,
    current_energy: f64,
    step: u64,
    accepted: u64,
}

impl<F: Fn(&MonogamyRecord) -> f64> MetropolisChain<F> {
    pub fn new(cfg: SamplerConfig, energy: F) -> Result<Self> {
        cfg.validate()?;
        let mut rng = rng_for(cfg.seed, 0);
        let dims = Dims::new(vec![cfg.m; 3])?;
        let current = haar_random_pure_with(&mut rng, &dims);
        let record = monogamy_check(&current)?;
        let current_energy = energy(&record);
        Ok(Self {
            cfg,
            energy,
            rng,
            current,
            record,
            current_energy,
            step: 0,
            accepted: 0,
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn current(&self) -> &PureState {
        &self.current
    }

    /// Fraction of proposals accepted so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.step == 0 {
            0.0
        } else {
            self.accepted as f64 / self.step as f64
        }
    }

    fn advance(&mut self) -> Result<()> {
        let noise = complex_normal_vec(&mut self.rng, self.current.amps().len());
        let proposal: Vec<C64> = self
            .current
            .amps()
            .iter()
            .zip(noise)
            .map(|(a, z)| a + z * self.cfg.sigma)
            .collect();
        let u: f64 = self.rng.random();
        self.step += 1;
        let proposal = PureState::normalized(proposal, self.current.dims().clone())?;
        let record = monogamy_check(&proposal)?;
        let e = (self.energy)(&record);
        if u < ((self.current_energy - e) / self.cfg.temperature).exp() {
            self.current = proposal;
            self.record = record;
            self.current_energy = e;
            self.accepted += 1;
        }
        Ok(())
    }
}

impl<F: Fn(&MonogamyRecord) -> f64> Iterator for MetropolisChain<F> {
    type Item = Result<MonogamyRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.step < self.cfg.steps {
            if let Err(e) = self.advance() {
                self.step = self.cfg.steps;
                return Some(Err(e));
            }
            if self.step > self.cfg.burn_in
                && (self.step - self.cfg.burn_in).is_multiple_of(self.cfg.stride)
            {
                let r = self.record.clone().with_provenance(
                    RecordKind::Chain,
                    self.cfg.seed,
                    self.step,
                );
                return Some(Ok(r));
            }
        }
        None
    }
}

/// Energy of the saturation-line sampler: the distance `slack ≥ 0` above the
/// line.
pub fn slack_energy(r: &MonogamyRecord) -> f64 {
    r.slack
}

pub type SaturationSampler = MetropolisChain<fn(&MonogamyRecord) -> f64>;

pub fn saturation_sampler(cfg: SamplerConfig) -> Result<SaturationSampler> {
    MetropolisChain::new(cfg, slack_energy as fn(&MonogamyRecord) -> f64)
}

/// Empirical `q`-quantile (nearest-rank on the sorted sample).
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((q * (v.len() - 1) as f64).round() as usize).min(v.len() - 1);
    Some(v[idx])
}
