//! File formats: state JSON, the monogamy CSV and factorization JSON.
//!
//! State JSON is `{"dims": [d1, …], "amps": [[re, im], …]}` for a pure state
//! or `{"dims": [...], "rho": [[[re, im], …], …]}` (row-major rows) for a
//! density matrix. Amplitudes and matrix entries follow the global index
//! convention: subsystem 0 is the most significant digit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::disentangle::{ChainResult, DisentanglingVerdict, FactorizationResult};
use crate::error::{Error, Result};
use crate::linalg::{trace, vec_norm, CMatrix, Dims, C64};
use crate::monogamy::MonogamyRecord;
use crate::state::{DensityMatrix, PureState};

/// Inputs further than this from unit norm/trace are rejected unless the
/// caller asks for renormalization.
pub const INPUT_NORM_TOL: f64 = 1e-8;

pub const CSV_HEADER: [&str; 9] = [
    "kind",
    "seed",
    "step",
    "m",
    "n_abc_sq",
    "n_ab_sq",
    "n_ac_sq",
    "slack",
    "unsquared_slack",
];

type Pair = [f64; 2];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amps: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Vec<Pair>>>,
}

#[derive(Clone, Debug)]
pub enum StateInput {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateInput {
    pub fn dims(&self) -> &Dims {
        match self {
            StateInput::Pure(p) => p.dims(),
            StateInput::Mixed(m) => m.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateInput::Pure(p) => p.to_density(),
            StateInput::Mixed(m) => m.clone(),
        }
    }
}

fn to_c(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn to_pair(z: &C64) -> Pair {
    [z.re, z.im]
}

pub fn parse_state(text: &str, renormalize: bool) -> Result<StateInput> {
    let raw: StateJson = serde_json::from_str(text)?;
    let dims = Dims::new(raw.dims)?;
    match (raw.amps, raw.rho) {
        (Some(amps), None) => {
            let amps: Vec<C64> = amps.iter().map(to_c).collect();
            if amps.len() != dims.total() {
                return Err(Error::Dimension(format!(
                    "{} amplitudes for dims {dims}",
                    amps.len()
                )));
            }
            let norm = vec_norm(&amps);
            if !renormalize && (norm - 1.0).abs() > INPUT_NORM_TOL {
                return Err(Error::Parse(format!(
                    "state norm {norm} differs from 1 by more than {INPUT_NORM_TOL:e}"
                )));
            }
            if (norm - 1.0).abs() <= crate::state::NORM_TOL {
                return Ok(StateInput::Pure(PureState::new(amps, dims)?));
            }
            Ok(StateInput::Pure(PureState::normalized(amps, dims)?))
        }
        (None, Some(rows)) => {
            let n = dims.total();
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!(
                    "rho must be {n}x{n} for dims {dims}"
                )));
            }
            let mut m = CMatrix::from_fn(n, n, |r, c| to_c(&rows[r][c]));
            let tr = trace(&m).re;
            if renormalize {
                if !(tr > 0.0) {
                    return Err(Error::Parse(format!("cannot renormalize trace {tr}")));
                }
                m.unscale_mut(tr);
            }
            Ok(StateInput::Mixed(DensityMatrix::with_tolerance(
                m,
                dims,
                INPUT_NORM_TOL,
            )?))
        }
        (Some(_), Some(_)) => Err(Error::Parse("give either `amps` or `rho`, not both".into())),
        (None, None) => Err(Error::Parse("state file needs `amps` or `rho`".into())),
    }
}

pub fn read_state<R: Read>(mut reader: R, renormalize: bool) -> Result<StateInput> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_state(&text, renormalize)
}

pub fn state_json(psi: &PureState) -> StateJson {
    StateJson {
        dims: psi.dims().as_slice().to_vec(),
        amps: Some(psi.amps().iter().map(to_pair).collect()),
        rho: None,
    }
}

pub fn density_json(rho: &DensityMatrix) -> StateJson {
    let m = rho.matrix();
    StateJson {
        dims: rho.dims().as_slice().to_vec(),
        amps: None,
        rho: Some(
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| to_pair(&m[(r, c)])).collect())
                .collect(),
        ),
    }
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn columns(m: &CMatrix) -> Vec<Vec<Pair>> {
    (0..m.ncols())
        .map(|c| m.column(c).iter().map(to_pair).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationJson {
    pub b1_dim: usize,
    pub b2_dim: usize,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Columns of `V : H_B1 ⊗ H_B2 → H_B`, column `i · b2_dim + k`.
    pub embedding: Vec<Vec<Pair>>,
    pub ab1: StateJson,
    pub b2c: StateJson,
    pub reconstruction_residual: f64,
    pub isometry_residual: f64,
    pub verdict: DisentanglingVerdict,
}

impl From<&FactorizationResult> for FactorizationJson {
    fn from(f: &FactorizationResult) -> Self {
        Self {
            b1_dim: f.b1_dim,
            b2_dim: f.b2_dim,
            p: f.p.clone(),
            q: f.q.clone(),
            embedding: columns(&f.embedding),
            ab1: state_json(&f.ab1),
            b2c: state_json(&f.b2c),
            reconstruction_residual: f.reconstruction_residual,
            isometry_residual: f.isometry_residual,
            verdict: f.verdict.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainJson {
    pub complete: bool,
    pub failed_cut: Option<usize>,
    pub verdicts: Vec<DisentanglingVerdict>,
    pub factors: Vec<StateJson>,
    pub embeddings: Vec<Vec<Vec<Pair>>>,
    pub residual: Option<f64>,
}

impl From<&ChainResult> for ChainJson {
    fn from(c: &ChainResult) -> Self {
        Self {
            complete: c.complete(),
            failed_cut: c.failed_cut,
            verdicts: c.verdicts.clone(),
            factors: c.factors.iter().map(state_json).collect(),
            embeddings: c.embeddings.iter().map(columns).collect(),
            residual: c.residual,
        }
    }
}

/// Floats in the CSV carry 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Incremental writer for the monogamy CSV.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        inner.write_record(CSV_HEADER)?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &MonogamyRecord) -> Result<()> {
        self.inner.write_record([
            r.kind.to_string(),
            r.seed.to_string(),
            r.step.to_string(),
            r.m.to_string(),
            format_float(r.n_abc_sq),
            format_float(r.n_ab_sq),
            format_float(r.n_ac_sq),
            format_float(r.slack),
            format_float(r.unsquared_slack),
        ])?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
    }
}

pub fn write_records<W: Write>(w: W, records: &[MonogamyRecord]) -> Result<W> {
    let mut out = RecordWriter::new(w)?;
    for r in records {
        out.write(r)?;
    }
    out.finish()
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<MonogamyRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "CSV header {:?} does not match {}",
            header.iter().collect::<Vec<_>>(),
            CSV_HEADER.join(",")
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
