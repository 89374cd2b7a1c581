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


//! Result records and their JSON/CSV renderings. Field names and shapes are
//! pinned by `schema/result.schema.json`.

use serde::Serialize;
use spca_core::{Continuation, Formulation, Loading, SolveReport, SolverConfig};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

/// Header of every per-component table.
pub const TABLE_HEADER: [&str; 5] = ["pc", "card", "pev_pct", "iters", "seconds"];

#[derive(Serialize)]
pub struct SolverSummary {
    pub mu0: f64,
    pub continuation: Continuation,
    pub tol: f64,
    pub max_iters: usize,
}

impl From<&SolverConfig> for SolverSummary {
    fn from(c: &SolverConfig) -> Self {
        SolverSummary {
            mu0: c.mu0,
            continuation: c.continuation,
            tol: c.tol,
            max_iters: c.max_iters,
        }
    }
}

#[derive(Serialize)]
pub struct ComponentOut {
    pub pc: usize,
    pub formulation: Formulation,
    pub loading: Vec<f64>,
    /// 1-based variable numbers of the nonzero entries.
    pub support: Vec<usize>,
    pub cardinality: usize,
    /// `100 · xᵀΣx / Tr(Σ)` on the original Σ.
    pub pev_pct: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rel_gap: f64,
    pub seconds: Option<f64>,
}

impl ComponentOut {
    pub fn new(
        pc: usize,
        formulation: Formulation,
        loading: &Loading,
        variance: f64,
        trace: f64,
        report: &SolveReport,
        timed: bool,
    ) -> Self {
        ComponentOut {
            pc,
            formulation,
            loading: loading.vector.clone(),
            support: loading.support().iter().map(|i| i + 1).collect(),
            cardinality: loading.cardinality,
            pev_pct: pct(variance, trace),
            objective: report.objective,
            iterations: report.iterations,
            converged: report.converged,
            rel_gap: report.rel_gap,
            seconds: timed.then(|| seconds(report.elapsed)),
        }
    }
}

#[derive(Serialize)]
pub struct SolveOutput {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub input: String,
    pub dim: usize,
    pub solver: SolverSummary,
    pub component: ComponentOut,
}

#[derive(Serialize)]
pub struct Totals {
    pub cardinality: usize,
    /// Explained variance of all components without double counting
    /// correlated loadings.
    pub adjusted_variance_pct: f64,
    pub iterations: usize,
    pub seconds: Option<f64>,
}

#[derive(Serialize)]
pub struct MultiOutput {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub input: String,
    pub dim: usize,
    pub deflation: &'static str,
    pub solver: SolverSummary,
    pub components: Vec<ComponentOut>,
    pub totals: Totals,
}

pub fn pct(v: f64, trace: f64) -> f64 {
    if trace > 0.0 {
        100.0 * v / trace
    } else {
        0.0
    }
}

/// Seconds rounded to milliseconds.
pub fn seconds(d: Duration) -> f64 {
    (d.as_secs_f64() * 1000.0).round() / 1000.0
}

pub fn timestamp() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

fn opt_secs(s: Option<f64>) -> String {
    s.map(|v| format!("{v:.3}")).unwrap_or_default()
}

fn table_row(c: &ComponentOut) -> [String; 5] {
    [
        c.pc.to_string(),
        c.cardinality.to_string(),
        format!("{:.2}", c.pev_pct),
        c.iterations.to_string(),
        opt_secs(c.seconds),
    ]
}

pub fn component_table(components: &[ComponentOut], totals: Option<&Totals>) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    w.write_record(TABLE_HEADER).map_err(err)?;
    for c in components {
        w.write_record(table_row(c)).map_err(err)?;
    }
    if let Some(t) = totals {
        w.write_record([
            "total".to_string(),
            t.cardinality.to_string(),
            format!("{:.2}", t.adjusted_variance_pct),
            t.iterations.to_string(),
            opt_secs(t.seconds),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, String> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| e.to_string())?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("cannot write to standard output: {e}")),
    }
}
