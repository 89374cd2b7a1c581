/*
Copyright 2026 The spca Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


//! `spca bench`: seeded spiked instances over a (p, s, σ, K) grid.
//!
//! Seeds run in parallel; results are assembled in grid order, so the table
//! does not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;
use spca_core::data::synthesize;
use spca_core::deflation::standard_pca;
use spca_core::solver::{extract_loading, ZeroTol};
use spca_core::{SolverConfig, SpcaError, SyntheticSpec};
use std::path::Path;
use std::time::Duration;

use crate::args::{BenchArgs, Format, SolverArgs, BENCH_SCHEDULE};
use crate::output::{emit, pct, seconds, timestamp, to_json, SolverSummary};
use crate::Status;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub p: usize,
    pub s: usize,
    pub sigma: f64,
    pub param: f64,
}

#[derive(Serialize)]
pub struct CellOut {
    pub p: usize,
    pub s: usize,
    pub sigma: f64,
    pub param: f64,
    pub runs: usize,
    pub failed: usize,
    pub card: Option<f64>,
    pub pev_pct: Option<f64>,
    pub pca_pev_pct: Option<f64>,
    pub iters: Option<f64>,
    pub seconds: Option<f64>,
    pub errors: Vec<String>,
}

#[derive(Serialize)]
pub struct BenchOutput {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    /// `k` or `rho`: what `param` means in each cell.
    pub param_name: &'static str,
    pub solver: SolverSummary,
    pub seeds: Vec<u64>,
    pub cells: Vec<CellOut>,
}

struct Run {
    card: f64,
    pev_pct: f64,
    pca_pev_pct: f64,
    iters: f64,
    elapsed: Duration,
}

fn read_grid(path: &Path) -> Result<Vec<Cell>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut cells = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        let line = rec.position().map_or(idx as u64 + 1, |p| p.line());
        let bad = |msg: String| format!("{}: line {line}: {msg}", path.display());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 4 {
            return Err(bad(format!("expected `p,s,sigma,param`, found {} fields", rec.len())));
        }
        // An optional header row.
        if idx == 0 && rec[0].parse::<f64>().is_err() {
            continue;
        }
        let int = |f: &str| f.parse::<usize>().map_err(|e| bad(format!("bad integer {f:?}: {e}")));
        let float = |f: &str| f.parse::<f64>().map_err(|e| bad(format!("bad number {f:?}: {e}")));
        cells.push(Cell {
            p: int(&rec[0])?,
            s: int(&rec[1])?,
            sigma: float(&rec[2])?,
            param: float(&rec[3])?,
        });
    }
    Ok(cells)
}

/// The grid from `--grid`, or the product of the list flags. Any empty list
/// gives an empty grid.
pub fn grid(a: &BenchArgs) -> Result<Vec<Cell>, String> {
    if let Some(path) = &a.grid {
        return read_grid(path);
    }
    let mut cells = Vec::new();
    for &p in &a.p {
        for &s in &a.s {
            for &sigma in &a.noise {
                for &param in a.solver.params() {
                    cells.push(Cell { p, s, sigma, param });
                }
            }
        }
    }
    Ok(cells)
}

fn run_one(cell: Cell, seed: u64, solver: &SolverArgs, cfg: &SolverConfig) -> Result<Run, String> {
    let f = solver.formulation_for(cell.param)?;
    let inst = synthesize(SyntheticSpec::Spiked {
        p: cell.p,
        s: cell.s,
        noise_sigma: cell.sigma,
        seed,
    })
    .map_err(|e| e.to_string())?;
    let report = match spca_core::solve(&inst.sigma, f, cfg) {
        Ok(r) => r,
        Err(SpcaError::NotConverged(r)) => {
            return Err(format!("not converged after {} iterations", r.iterations))
        }
        Err(e) => return Err(e.to_string()),
    };
    let loading = extract_loading(&report.x_final, ZeroTol::default()).map_err(|e| e.to_string())?;
    let sigma = inst.sigma.as_sym();
    let pca = standard_pca(sigma, 1).map_err(|e| e.to_string())?;
    Ok(Run {
        card: loading.cardinality as f64,
        pev_pct: pct(sigma.quad_form(&loading.vector), sigma.trace()),
        pca_pev_pct: pca.explained_pct,
        iters: report.iterations as f64,
        elapsed: report.elapsed,
    })
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn summarize(cell: Cell, seeds: &[u64], runs: Vec<Result<Run, String>>, timed: bool) -> CellOut {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for (seed, r) in seeds.iter().zip(runs) {
        match r {
            Ok(run) => ok.push(run),
            Err(e) => errors.push(format!("seed {seed}: {e}")),
        }
    }
    let col = |f: fn(&Run) -> f64| median(ok.iter().map(f).collect());
    CellOut {
        p: cell.p,
        s: cell.s,
        sigma: cell.sigma,
        param: cell.param,
        runs: seeds.len(),
        failed: errors.len(),
        card: col(|r| r.card),
        pev_pct: col(|r| r.pev_pct),
        pca_pev_pct: col(|r| r.pca_pev_pct),
        iters: col(|r| r.iters),
        seconds: if timed {
            col(|r| r.elapsed.as_secs_f64()).map(|s| seconds(Duration::from_secs_f64(s)))
        } else {
            None
        },
        errors,
    }
}

fn table(cells: &[CellOut], param_name: &str) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    let header = [
        "p", "s", "sigma", param_name, "runs", "failed", "card", "pev_pct", "pca_pev_pct", "iters",
        "seconds", "errors",
    ];
    w.write_record(header).map_err(err)?;
    let opt = |v: Option<f64>, digits: usize| v.map(|x| format!("{x:.digits$}")).unwrap_or_default();
    for c in cells {
        w.write_record([
            c.p.to_string(),
            c.s.to_string(),
            c.sigma.to_string(),
            c.param.to_string(),
            c.runs.to_string(),
            c.failed.to_string(),
            opt(c.card, 1),
            opt(c.pev_pct, 2),
            opt(c.pca_pev_pct, 2),
            opt(c.iters, 1),
            opt(c.seconds, 3),
            c.errors.join("; "),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn run(a: &BenchArgs) -> Result<Status, String> {
    let cells = grid(a)?;
    let cfg = a.solver.config(BENCH_SCHEDULE)?;
    let seeds: Vec<u64> = (a.seed..a.seed + a.seeds).collect();
    let jobs: Vec<(Cell, u64)> = cells
        .iter()
        .flat_map(|&c| seeds.iter().map(move |&s| (c, s)))
        .collect();
    let mut results: Vec<Result<Run, String>> = jobs
        .par_iter()
        .map(|&(c, s)| run_one(c, s, &a.solver, &cfg))
        .collect();
    let timed = !a.output.no_timestamp;
    let mut out = Vec::with_capacity(cells.len());
    for &cell in &cells {
        let rest = results.split_off(seeds.len());
        out.push(summarize(cell, &seeds, std::mem::replace(&mut results, rest), timed));
    }
    let status = if out.iter().any(|c| c.failed > 0) {
        Status::NotConverged
    } else {
        Status::Converged
    };
    let param_name = a.solver.param_name();
    let bytes = match a.output.format {
        Format::Csv => table(&out, param_name)?,
        Format::Json => to_json(&BenchOutput {
            command: "bench",
            timestamp: timed.then(timestamp),
            param_name,
            solver: (&cfg).into(),
            seeds,
            cells: out,
        })?,
    };
    emit(a.output.output.as_deref(), &bytes)?;
    Ok(status)
}
