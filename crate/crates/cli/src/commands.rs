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


//! The `solve`, `multi`, `synth` and `project2d` subcommands.

use spca_core::data::{load_data_csv, project_columns_2d, synthesize, write_matrix_csv};
use spca_core::deflation::{solve_multi_lenient, standard_pca};
use spca_core::solver::{extract_loading, ZeroTol};
use spca_core::{Formulation, SolveReport, SolverConfig, SpcaError, SyntheticSpec};
use std::fmt::Write as _;
use std::time::Duration;

use crate::args::{
    Basis, Format, Model, MultiArgs, ProjectArgs, SolveArgs, SynthArgs, DATA_SCHEDULE, FIXED_MU,
};
use crate::input::{load, Loaded};
use crate::output::{
    component_table, emit, seconds, timestamp, to_json, ComponentOut, MultiOutput,
    SolveOutput, Totals,
};
use crate::Status;

fn status_of(converged: bool) -> Status {
    if converged {
        Status::Converged
    } else {
        Status::NotConverged
    }
}

pub fn solve(a: &SolveArgs) -> Result<Status, String> {
    let input = load(&a.input)?;
    let fs = a.solver.formulations()?;
    let [f] = fs[..] else {
        return Err(format!(
            "solve takes one --{} value, got {}; use `multi` for several",
            a.solver.param_name(),
            fs.len()
        ));
    };
    let cfg = a.solver.config(FIXED_MU)?;
    let report = match spca_core::solve(&input.sigma, f, &cfg) {
        Ok(r) => r,
        Err(SpcaError::NotConverged(r)) => *r,
        Err(e) => return Err(e.to_string()),
    };
    let loading = extract_loading(&report.x_final, ZeroTol::default()).map_err(|e| e.to_string())?;
    let sigma = input.sigma.as_sym();
    let timed = !a.output.no_timestamp;
    let component = ComponentOut::new(
        1,
        f,
        &loading,
        sigma.quad_form(&loading.vector),
        sigma.trace(),
        &report,
        timed,
    );
    let status = status_of(report.converged);
    let bytes = match a.output.format {
        Format::Csv => component_table(std::slice::from_ref(&component), None)?,
        Format::Json => to_json(&SolveOutput {
            command: "solve",
            timestamp: timed.then(timestamp),
            input: input.source,
            dim: sigma.dim(),
            solver: (&cfg).into(),
            component,
        })?,
    };
    emit(a.output.output.as_deref(), &bytes)?;
    Ok(status)
}

/// Runs the deflation sequence and packages every component.
fn run_multi(
    input: &Loaded,
    fs: &[Formulation],
    cfg: &SolverConfig,
    a_deflation: crate::args::Deflation,
    timed: bool,
) -> Result<(Vec<ComponentOut>, Totals, spca_core::MultiPcResult), String> {
    let res = solve_multi_lenient(&input.sigma, fs, cfg, a_deflation.scheme()).map_err(|e| e.to_string())?;
    let trace = input.sigma.trace();
    let components: Vec<ComponentOut> = res
        .components
        .iter()
        .zip(fs)
        .enumerate()
        .map(|(j, (c, &f))| ComponentOut::new(j + 1, f, &c.loading, c.variance, trace, &c.report, timed))
        .collect();
    let reports: Vec<&SolveReport> = res.components.iter().map(|c| &c.report).collect();
    let totals = Totals {
        cardinality: res.total_cardinality(),
        adjusted_variance_pct: res.adjusted_variance_pct,
        iterations: reports.iter().map(|r| r.iterations).sum(),
        seconds: timed.then(|| seconds(reports.iter().map(|r| r.elapsed).sum::<Duration>())),
    };
    Ok((components, totals, res))
}

pub fn multi(a: &MultiArgs) -> Result<Status, String> {
    let input = load(&a.input)?;
    let fs = a.solver.formulations()?;
    let cfg = a.solver.config(FIXED_MU)?;
    let timed = !a.output.no_timestamp;
    let (components, totals, _) = run_multi(&input, &fs, &cfg, a.deflation, timed)?;
    let status = status_of(components.iter().all(|c| c.converged));
    let bytes = match a.output.format {
        Format::Csv => component_table(&components, Some(&totals))?,
        Format::Json => to_json(&MultiOutput {
            command: "multi",
            timestamp: timed.then(timestamp),
            input: input.source,
            dim: input.sigma.dim(),
            deflation: a.deflation.name(),
            solver: (&cfg).into(),
            components,
            totals,
        })?,
    };
    emit(a.output.output.as_deref(), &bytes)?;
    Ok(status)
}

pub fn synth(a: &SynthArgs) -> Result<Status, String> {
    let spec = match a.model {
        Model::Zou => SyntheticSpec::ZouThreeFactor,
        Model::Spiked => SyntheticSpec::Spiked {
            p: a.p,
            s: a.s,
            noise_sigma: a.noise,
            seed: a.seed,
        },
    };
    let inst = synthesize(spec).map_err(|e| e.to_string())?;
    write_matrix_csv(&a.output, &inst.sigma.as_sym().to_matrix()).map_err(|e| e.to_string())?;
    if let Some(path) = &a.support_output {
        let mut out = String::new();
        for i in &inst.true_support {
            let _ = writeln!(out, "{}", i + 1);
        }
        emit(Some(path), out.as_bytes())?;
    }
    Ok(Status::Converged)
}

pub fn project2d(a: &ProjectArgs) -> Result<Status, String> {
    let input = load(&a.input)?;
    let data = input
        .data
        .as_ref()
        .ok_or("project2d needs a data, triplets or votes input")?;
    let p = data.variables();
    let mut status = Status::Converged;
    let (v1, v2) = match a.basis {
        Basis::Identity => {
            if p < 2 {
                return Err(format!("identity basis needs at least 2 variables, found {p}"));
            }
            let e = |k: usize| (0..p).map(|i| if i == k { 1.0 } else { 0.0 }).collect::<Vec<_>>();
            (e(0), e(1))
        }
        Basis::Pca => {
            let pca = standard_pca(input.sigma.as_sym(), 2).map_err(|e| e.to_string())?;
            if pca.loadings.cols() < 2 {
                return Err(format!("PCA basis needs at least 2 variables, found {p}"));
            }
            (pca.loadings.column(0), pca.loadings.column(1))
        }
        Basis::Admm => {
            let fs = a.solver.formulations()?;
            if fs.len() != 2 {
                return Err(format!(
                    "admm basis needs two --{} values, got {}",
                    a.solver.param_name(),
                    fs.len()
                ));
            }
            let cfg = a.solver.config(DATA_SCHEDULE)?;
            let (components, _, res) = run_multi(&input, &fs, &cfg, a.deflation, false)?;
            status = status_of(components.iter().all(|c| c.converged));
            (res.loadings.column(0), res.loadings.column(1))
        }
        Basis::File => {
            let path = a.basis_file.as_ref().ok_or("--basis file needs --basis-file")?;
            let b = load_data_csv(path).map_err(|e| e.to_string())?;
            if b.variables() != p || b.samples() != 2 {
                return Err(format!(
                    "{} must be {p}x2, found {}x{}",
                    path.display(),
                    b.variables(),
                    b.samples()
                ));
            }
            (b.values.column(0), b.values.column(1))
        }
    };
    let points = project_columns_2d(data, &v1, &v2).map_err(|e| e.to_string())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    w.write_record(["id", "alpha", "beta", "label"]).map_err(err)?;
    for (j, (alpha, beta)) in points.iter().enumerate() {
        let label = data
            .column_labels
            .as_ref()
            .map_or("", |l| l[j].as_str());
        w.write_record([(j + 1).to_string(), alpha.to_string(), beta.to_string(), label.to_string()])
            .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    emit(a.output.as_deref(), &bytes)?;
    Ok(status)
}
