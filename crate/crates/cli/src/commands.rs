use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use negent_core::io::{
    format_float, read_records, state_json, write_json, ChainJson, FactorizationJson, RecordWriter,
};
use negent_core::monogamy::VIOLATION_THRESHOLD;
use negent_core::plot::monogamy_svg;
use negent_core::{
    chain_factorize, factorize, generalized_scan, negativity as negativity_of, saturation_sampler,
    DisentanglingVerdict, Error, HaarScan, MonogamyRecord, SamplerConfig, ScanSummary,
};
use serde::Serialize;

use crate::manifest::{file_digest, manifest_path, RunManifest};
use crate::source::{builtin, Cut};
use crate::{
    DisentangleArgs, GeneralizedArgs, NegativityArgs, ReportArgs, RerunArgs, SampleArgs, ScanArgs,
    SearchArgs, StateCmdArgs, Status,
};

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct NegativityReport {
    cut: String,
    negativity: f64,
    log_negativity: f64,
    negative_eigenvalue_sum: f64,
    spectrum: Vec<f64>,
}

pub fn negativity(a: &NegativityArgs) -> Result<Status> {
    let loaded = a.source.load()?;
    let n = loaded.state.dims().len();
    ensure!(
        n >= 2,
        "negativity needs at least two subsystems, got dims {}",
        loaded.state.dims()
    );
    let cut = a.cut.clone().unwrap_or_else(|| Cut::first_vs_rest(n));
    cut.check(n)?;
    let (kept, part) = cut.kept_and_part();
    let mut rho = loaded.state.to_density();
    if kept.len() < n {
        rho = rho.reduced(&kept)?;
    }
    let r = negativity_of(&rho, &part)?;
    let report = NegativityReport {
        cut: cut.to_string(),
        negativity: r.negativity,
        log_negativity: r.log_negativity,
        negative_eigenvalue_sum: r.negative_eigenvalue_sum,
        spectrum: r.spectrum,
    };
    if a.json {
        write_json(io::stdout().lock(), &report)?;
    } else {
        println!("cut: {}", report.cut);
        println!("negativity: {:?}", report.negativity);
        println!("log_negativity: {:?}", report.log_negativity);
        println!("spectrum: {}", join(&report.spectrum));
    }
    Ok(Status::Done)
}

fn print_verdict(prefix: &str, v: &DisentanglingVerdict) {
    println!("{prefix}n_abc: {:?}", v.n_abc);
    println!("{prefix}n_ab: {:?}", v.n_ab);
    println!("{prefix}gap: {:?}", v.gap);
    println!("{prefix}condition_residual: {:?}", v.condition_residual);
    println!("{prefix}holds: {}", v.holds);
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write_json(&mut w, value)?;
    w.flush()?;
    Ok(())
}

pub fn disentangle(a: &DisentangleArgs, argv: &[String]) -> Result<Status> {
    let (psi, input) = a.source.load_pure()?;
    let mut manifest = RunManifest::new("disentangle", argv, vec![a.source.seed]);
    if let Some(path) = &input {
        manifest.input(path)?;
    }
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }

    if a.chain {
        let r = chain_factorize(&psi, a.tol)?;
        let json = ChainJson::from(&r);
        if a.json {
            write_json(io::stdout().lock(), &json)?;
        } else {
            for (k, v) in r.verdicts.iter().enumerate() {
                println!("cut {}:", k + 1);
                print_verdict("  ", v);
            }
            match (r.failed_cut, r.residual) {
                (Some(cut), _) => println!("chain stops at cut {cut}"),
                (None, Some(res)) => println!("reconstruction_residual: {res:?}"),
                (None, None) => {}
            }
        }
        if !r.complete() {
            return Ok(Status::Negative);
        }
        if let Some(dir) = &a.out_dir {
            let path = dir.join("chain.json");
            write_json_file(&path, &json)?;
            manifest.output(&path)?;
            for (k, f) in r.factors.iter().enumerate() {
                let path = dir.join(format!("factor_{}.json", k + 1));
                write_json_file(&path, &state_json(f))?;
                manifest.output(&path)?;
            }
            manifest.write(&dir.join("manifest.json"))?;
        }
        return Ok(Status::Done);
    }

    match factorize(&psi, a.tol) {
        Ok(f) => {
            let json = FactorizationJson::from(&f);
            if a.json {
                write_json(io::stdout().lock(), &json)?;
            } else {
                print_verdict("", &f.verdict);
                println!("b1_dim: {}", f.b1_dim);
                println!("b2_dim: {}", f.b2_dim);
                println!("reconstruction_residual: {:?}", f.reconstruction_residual);
            }
            if let Some(dir) = &a.out_dir {
                let files = [
                    ("psi_ab1.json", serde_json::to_value(state_json(&f.ab1))?),
                    ("psi_b2c.json", serde_json::to_value(state_json(&f.b2c))?),
                    ("factorization.json", serde_json::to_value(&json)?),
                ];
                for (name, value) in files {
                    let path = dir.join(name);
                    write_json_file(&path, &value)?;
                    manifest.output(&path)?;
                }
                manifest.write(&dir.join("manifest.json"))?;
            }
            Ok(Status::Done)
        }
        Err(Error::NotFactorizable(v)) => {
            if a.json {
                write_json(io::stdout().lock(), &v)?;
            } else {
                print_verdict("", &v);
            }
            Ok(Status::Negative)
        }
        Err(e) => Err(e.into()),
    }
}

fn print_summary(s: &ScanSummary, to_stderr: bool) {
    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:?}"));
    let lines = [
        format!("records: {}", s.count),
        format!("violations: {}", s.violations),
        format!("min slack: {}", opt(s.min_slack)),
        format!("unsquared violations: {}", s.unsquared_violations),
        format!("min unsquared slack: {}", opt(s.min_unsquared_slack)),
    ];
    for line in lines {
        if to_stderr {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

/// Stream records into a CSV file (plus manifest) or stdout.
fn write_dataset<F>(out: Option<&Path>, manifest: RunManifest, produce: F) -> Result<ScanSummary>
where
    F: FnOnce(&mut dyn FnMut(&MonogamyRecord) -> negent_core::Result<()>) -> Result<ScanSummary>,
{
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = RecordWriter::new(BufWriter::new(file))?;
            let summary = produce(&mut |r| w.write(r))?;
            w.finish()?.flush()?;
            let mut manifest = manifest;
            manifest.output(path)?;
            manifest.write(&manifest_path(path))?;
            print_summary(&summary, false);
            Ok(summary)
        }
        None => {
            let mut w = RecordWriter::new(BufWriter::new(io::stdout().lock()))?;
            let summary = produce(&mut |r| w.write(r))?;
            w.finish()?.flush()?;
            print_summary(&summary, true);
            Ok(summary)
        }
    }
}

pub fn scan(a: &ScanArgs, argv: &[String]) -> Result<Status> {
    let scan = HaarScan::new(a.m, a.count, a.seed)?;
    let manifest = RunManifest::new("monogamy scan", argv, vec![a.seed]);
    write_dataset(a.out.as_deref(), manifest, |sink| {
        Ok(scan.run(a.workers, sink)?)
    })?;
    Ok(Status::Done)
}

pub fn sample(a: &SampleArgs, argv: &[String]) -> Result<Status> {
    let cfg = SamplerConfig {
        m: a.m,
        steps: a.steps,
        burn_in: a.burn_in,
        stride: a.stride,
        sigma: a.sigma,
        temperature: a.temperature,
        seed: a.seed,
    };
    let mut chain = saturation_sampler(cfg)?;
    let manifest = RunManifest::new("monogamy sample", argv, vec![a.seed]);
    write_dataset(a.out.as_deref(), manifest, |sink| {
        let mut summary = ScanSummary::default();
        for r in chain.by_ref() {
            let r = r?;
            summary.observe(&r);
            sink(&r)?;
        }
        Ok(summary)
    })?;
    let rate = format!("acceptance rate: {:?}", chain.acceptance_rate());
    if a.out.is_some() {
        println!("{rate}");
    } else {
        eprintln!("{rate}");
    }
    Ok(Status::Done)
}

pub fn search(a: &SearchArgs, argv: &[String]) -> Result<Status> {
    let scan = HaarScan::new(a.m, a.count, a.seed)?;
    let mut best: Option<MonogamyRecord> = None;
    scan.run(a.workers, |r| {
        if best
            .as_ref()
            .is_none_or(|b| r.unsquared_slack < b.unsquared_slack)
        {
            best = Some(r.clone());
        }
        Ok(())
    })?;
    let best = best.context("search needs --count ≥ 1")?;
    println!("states: {}", a.count);
    println!(
        "min unsquared slack: {:?} (seed {}, step {})",
        best.unsquared_slack, best.seed, best.step
    );
    println!("n_abc: {:?}", best.n_abc_sq.sqrt());
    println!("n_ab: {:?}", best.n_ab_sq.sqrt());
    println!("n_ac: {:?}", best.n_ac_sq.sqrt());
    println!(
        "violation found: {}",
        if best.unsquared_slack < VIOLATION_THRESHOLD {
            "yes"
        } else {
            "no"
        }
    );
    if let Some(path) = &a.out {
        write_json_file(path, &state_json(&scan.state(best.step)))?;
        let mut manifest = RunManifest::new("monogamy search", argv, vec![a.seed]);
        manifest.output(path)?;
        manifest.write(&manifest_path(path))?;
    }
    Ok(Status::Done)
}

pub fn generalized(a: &GeneralizedArgs, argv: &[String]) -> Result<Status> {
    let records = generalized_scan(a.parties, a.dim, a.count, a.seed)?;
    let violations = records
        .iter()
        .filter(|r| r.slack < VIOLATION_THRESHOLD)
        .count();
    let min = records.iter().map(|r| r.slack).reduce(f64::min);
    println!("records: {}", records.len());
    println!("violations: {violations}");
    println!(
        "min slack: {}",
        min.map_or("n/a".to_string(), |v| format!("{v:?}"))
    );
    if let Some(path) = &a.out {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = BufWriter::new(file);
        let bi: Vec<String> = (1..a.parties).map(|b| format!("n_a_b{b}_sq")).collect();
        writeln!(w, "seed,step,n_a_rest_sq,{},slack", bi.join(","))?;
        for (step, r) in records.iter().enumerate() {
            let bi: Vec<String> = r.n_a_bi_sq.iter().map(|&x| format_float(x)).collect();
            writeln!(
                w,
                "{},{step},{},{},{}",
                a.seed,
                format_float(r.n_a_rest_sq),
                bi.join(","),
                format_float(r.slack)
            )?;
        }
        w.flush()?;
        let mut manifest = RunManifest::new("monogamy generalized", argv, vec![a.seed]);
        manifest.output(path)?;
        manifest.write(&manifest_path(path))?;
    }
    Ok(Status::Done)
}

pub fn report(a: &ReportArgs, argv: &[String]) -> Result<Status> {
    let file = File::open(&a.csv).with_context(|| format!("cannot open {}", a.csv.display()))?;
    let records =
        read_records(file).with_context(|| format!("{} is not a monogamy CSV", a.csv.display()))?;
    fs::write(&a.svg, monogamy_svg(&records))
        .with_context(|| format!("cannot write {}", a.svg.display()))?;
    println!("points: {}", records.len());
    let mut manifest = RunManifest::new("report", argv, Vec::new());
    manifest.input(&a.csv)?;
    manifest.output(&a.svg)?;
    manifest.write(&manifest_path(&a.svg))?;
    Ok(Status::Done)
}

pub fn state(a: &StateCmdArgs, argv: &[String]) -> Result<Status> {
    let psi = builtin(&a.name, a.dims.as_ref(), a.seed)?;
    let json = state_json(&psi);
    match &a.out {
        Some(path) => {
            write_json_file(path, &json)?;
            let mut manifest = RunManifest::new("state", argv, vec![a.seed]);
            manifest.output(path)?;
            manifest.write(&manifest_path(path))?;
        }
        None => write_json(io::stdout().lock(), &json)?,
    }
    Ok(Status::Done)
}

pub fn rerun(a: &RerunArgs) -> Result<Status> {
    let recorded = RunManifest::read(&a.manifest)?;
    ensure!(
        recorded.command != "rerun",
        "a manifest cannot record a rerun"
    );
    for (path, digest) in &recorded.inputs {
        let now = file_digest(Path::new(path))?;
        ensure!(
            &now == digest,
            "input {path} changed since the recorded run"
        );
    }
    let cli = crate::parse(&recorded.argv)
        .map_err(|e| anyhow::anyhow!("manifest arguments no longer parse: {e}"))?;
    let status = crate::execute(cli, &recorded.argv)?;
    let mut mismatched = Vec::new();
    for (path, digest) in &recorded.outputs {
        if &file_digest(Path::new(path))? == digest {
            println!("reproduced: {path}");
        } else {
            mismatched.push(path.as_str());
        }
    }
    if !mismatched.is_empty() {
        bail!(
            "outputs differ from the recorded run: {}",
            mismatched.join(", ")
        );
    }
    Ok(status)
}
