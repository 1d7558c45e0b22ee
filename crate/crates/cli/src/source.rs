//! Where a state comes from (`--state NAME` or `--file PATH`) and how a cut
//! is written on the command line.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use negent_core::io::{parse_state, StateInput};
use negent_core::state::{named_state, NAMED_STATES};
use negent_core::{Dims, PureState};

#[derive(Args, Clone, Debug)]
pub struct StateArgs {
    /// Built-in state: bell, ghz, w, zero, product, haar, embedded, chain.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub state: Option<String>,
    /// State JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Comma-separated local dimensions for a built-in state.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<Dims>,
    /// Seed for random built-in states.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rescale a file state to unit norm or trace instead of rejecting it.
    #[arg(long)]
    pub renormalize: bool,
}

pub struct Loaded {
    pub state: StateInput,
    /// Input file, if any, for the run manifest.
    pub file: Option<PathBuf>,
}

impl StateArgs {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(path) = &self.file {
            if self.dims.is_some() {
                bail!("--dims applies to built-in states only; a state file carries its own dims");
            }
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read state file {}", path.display()))?;
            let state = parse_state(&text, self.renormalize)
                .with_context(|| format!("invalid state file {}", path.display()))?;
            return Ok(Loaded {
                state,
                file: Some(path.clone()),
            });
        }
        let name = self
            .state
            .as_deref()
            .expect("clap requires --state or --file");
        let psi = builtin(name, self.dims.as_ref(), self.seed)?;
        Ok(Loaded {
            state: StateInput::Pure(psi),
            file: None,
        })
    }

    pub fn load_pure(&self) -> Result<(PureState, Option<PathBuf>)> {
        let loaded = self.load()?;
        match loaded.state {
            StateInput::Pure(psi) => Ok((psi, loaded.file)),
            StateInput::Mixed(_) => bail!("this command needs a pure state, got a density matrix"),
        }
    }
}

pub fn builtin(name: &str, dims: Option<&Dims>, seed: u64) -> Result<PureState> {
    if !NAMED_STATES.contains(&name) {
        bail!(
            "unknown state `{name}`; expected one of {}",
            NAMED_STATES.join(", ")
        );
    }
    Ok(named_state(name, dims, seed)?)
}

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let dims = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad dimension `{t}`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dims::new(dims).map_err(|e| e.to_string())
}

/// A bipartition `A|B` of some of the subsystems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = |v: &[usize]| {
            v.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", side(&self.a), side(&self.b))
    }
}

/// `"0|12"` (one digit per subsystem) or `"0,1|2,10"`.
pub fn parse_cut(s: &str) -> Result<Cut, String> {
    let (a, b) = s
        .split_once('|')
        .ok_or_else(|| format!("cut `{s}` needs the form A|B"))?;
    let side = |t: &str| -> Result<Vec<usize>, String> {
        let t = t.trim();
        if t.is_empty() {
            return Err(format!("cut `{s}` has an empty side"));
        }
        let parts: Vec<&str> = if t.contains(',') {
            t.split(',').map(str::trim).collect()
        } else {
            t.char_indices()
                .map(|(i, c)| &t[i..i + c.len_utf8()])
                .collect()
        };
        parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| format!("bad subsystem `{p}` in cut `{s}`"))
            })
            .collect()
    };
    let cut = Cut {
        a: side(a)?,
        b: side(b)?,
    };
    let mut all: Vec<usize> = cut.a.iter().chain(&cut.b).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(format!("cut `{s}` repeats a subsystem"));
    }
    Ok(cut)
}

impl Cut {
    /// Subsystem 0 against everything else.
    pub fn first_vs_rest(n: usize) -> Self {
        Cut {
            a: vec![0],
            b: (1..n).collect(),
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if let Some(k) = self.a.iter().chain(&self.b).find(|&&k| k >= n) {
            bail!("cut {self} names subsystem {k} but the state has {n}");
        }
        Ok(())
    }

    /// Subsystems kept after tracing out the unlisted ones, in ascending
    /// order, and the positions of `A` among them.
    pub fn kept_and_part(&self) -> (Vec<usize>, Vec<usize>) {
        let mut kept: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        kept.sort_unstable();
        let part = self
            .a
            .iter()
            .map(|k| kept.iter().position(|x| x == k).unwrap())
            .collect();
        (kept, part)
    }
}
