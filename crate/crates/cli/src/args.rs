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


//! Command-line definitions.

use clap::{Args, Parser, Subcommand, ValueEnum};
use spca_core::{Continuation, DeflationScheme, Formulation, SolverConfig};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "spca",
    version,
    about = "Sparse PCA by ADMM on the l1-constrained and l1-penalized SDP relaxations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract one sparse principal component.
    Solve(SolveArgs),
    /// Extract several components, deflating between solves.
    Multi(MultiArgs),
    /// Write a synthetic covariance matrix as CSV.
    Synth(SynthArgs),
    /// Project the columns of a data matrix onto a two-vector basis.
    Project2d(ProjectArgs),
    /// Median results over seeded spiked instances on a parameter grid.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    /// Square covariance matrix, one row per line.
    Cov,
    /// Data matrix, one row per variable and one column per sample.
    Data,
    /// Sparse `row,col,value` lines with 0-based indices.
    Triplets,
    /// Votes in {-1,0,1}, bills as rows and senators as columns.
    Votes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// The 10-variable three-factor model.
    Zou,
    /// The 13-variable pit props correlation matrix.
    Pitprops,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Input file, read according to --input-kind.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputKind::Cov)]
    pub input_kind: InputKind,
    /// Use a bundled covariance matrix instead of --input.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Subtract row means before forming MMᵀ. Defaults to true for data and
    /// triplets and false for votes.
    #[arg(long)]
    pub center: Option<bool>,
    /// The first votes row holds column labels.
    #[arg(long)]
    pub labeled: bool,
    /// The triplet file starts with a `p,n` line.
    #[arg(long)]
    pub triplet_header: bool,
    /// Triplet matrix dimensions when the file has no header.
    #[arg(long, value_name = "P,N", value_delimiter = ',', num_args = 1)]
    pub dims: Vec<usize>,
    /// Drop bills with more than this many missing (zero) votes.
    #[arg(long)]
    pub max_missing: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormulationKind {
    Constrained,
    Penalized,
}

#[derive(Args, Debug)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = FormulationKind::Constrained)]
    pub formulation: FormulationKind,
    /// l1 budget of the constrained form. Comma separated, one per component.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<f64>,
    /// Penalty of the penalized form. Comma separated, one per component.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
    /// Initial penalty parameter μ.
    #[arg(long)]
    pub mu0: Option<f64>,
    /// Continuation factor; setting it (or --cont-floor) turns continuation on.
    #[arg(long)]
    pub cont_factor: Option<f64>,
    /// Lower bound of μ under continuation.
    #[arg(long)]
    pub cont_floor: Option<f64>,
    /// Keep μ fixed even where the command defaults to continuation.
    #[arg(long, conflicts_with_all = ["cont_factor", "cont_floor"])]
    pub fixed_mu: bool,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iters: usize,
}

/// Per-command solver defaults.
#[derive(Clone, Copy, Debug)]
pub struct SolverDefaults {
    pub mu0: f64,
    pub continuation: bool,
}

pub const FIXED_MU: SolverDefaults = SolverDefaults {
    mu0: 0.8,
    continuation: false,
};
pub const BENCH_SCHEDULE: SolverDefaults = SolverDefaults {
    mu0: 1.0,
    continuation: true,
};
pub const DATA_SCHEDULE: SolverDefaults = SolverDefaults {
    mu0: 100.0,
    continuation: true,
};

const DEFAULT_FACTOR: f64 = 2.0 / 3.0;
const DEFAULT_FLOOR: f64 = 1e-4;

impl SolverArgs {
    pub fn config(&self, d: SolverDefaults) -> Result<SolverConfig, String> {
        let explicit = self.cont_factor.is_some() || self.cont_floor.is_some();
        let continuation = if explicit || (d.continuation && !self.fixed_mu) {
            Continuation::Schedule {
                factor: self.cont_factor.unwrap_or(DEFAULT_FACTOR),
                floor: self.cont_floor.unwrap_or(DEFAULT_FLOOR),
            }
        } else {
            Continuation::Off
        };
        let cfg = SolverConfig {
            mu0: self.mu0.unwrap_or(d.mu0),
            continuation,
            tol: self.tol,
            max_iters: self.max_iters,
            record_descent: false,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    /// The parameter list of the selected formulation.
    pub fn params(&self) -> &[f64] {
        match self.formulation {
            FormulationKind::Constrained => &self.k,
            FormulationKind::Penalized => &self.rho,
        }
    }

    pub fn param_name(&self) -> &'static str {
        match self.formulation {
            FormulationKind::Constrained => "k",
            FormulationKind::Penalized => "rho",
        }
    }

    pub fn formulation_for(&self, v: f64) -> Result<Formulation, String> {
        match self.formulation {
            FormulationKind::Constrained => Formulation::constrained(v),
            FormulationKind::Penalized => Formulation::penalized(v),
        }
        .map_err(|e| e.to_string())
    }

    pub fn formulations(&self) -> Result<Vec<Formulation>, String> {
        if self.params().is_empty() {
            return Err(format!(
                "the {:?} formulation needs --{}",
                self.formulation,
                self.param_name()
            )
            .to_lowercase());
        }
        self.params().iter().map(|&v| self.formulation_for(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the timestamp and all wall times, so equal runs give equal bytes.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Deflation {
    Schur,
    Hotelling,
}

impl Deflation {
    pub fn scheme(self) -> DeflationScheme {
        match self {
            Deflation::Schur => DeflationScheme::SchurComplement,
            Deflation::Hotelling => DeflationScheme::Hotelling,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Deflation::Schur => "schur",
            Deflation::Hotelling => "hotelling",
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MultiArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Deflation::Schur)]
    pub deflation: Deflation,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Zou,
    Spiked,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long, default_value_t = 100)]
    pub p: usize,
    /// Number of nonzeros in the planted vector.
    #[arg(long, default_value_t = 10)]
    pub s: usize,
    /// Noise level σ.
    #[arg(long, default_value_t = 0.01)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Covariance CSV destination.
    #[arg(long)]
    pub output: PathBuf,
    /// Also write the planted 1-based support, one index per line.
    #[arg(long)]
    pub support_output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// The first two coordinate vectors.
    Identity,
    /// Leading two eigenvectors of MMᵀ.
    Pca,
    /// Two sparse components from `multi` with the given K or ρ list.
    Admm,
    /// A p×2 CSV file given by --basis-file.
    File,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Basis::Pca)]
    pub basis: Basis,
    #[arg(long, required_if_eq("basis", "file"))]
    pub basis_file: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Deflation::Schur)]
    pub deflation: Deflation,
    /// Points CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Grid CSV with `p,s,sigma,param` rows (header optional). Overrides the
    /// list flags.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub noise: Vec<f64>,
    /// Seeds per cell.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// First seed; cells use seed, seed+1, ....
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
