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

use crate::solver::SolveReport;
use std::path::PathBuf;

/// Everything that can go wrong inside the library.
#[derive(Debug, thiserror::Error)]
pub enum SpcaError {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("eigensolver did not converge after {sweeps} iterations")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not positive semidefinite (pivot {pivot:.3e} at index {index})")]
    NotPsd { index: usize, pivot: f64 },
    #[error("basis vectors are numerically dependent (condition number {condition:.3e})")]
    DegenerateBasis { condition: f64 },
    #[error("direction carries no variance (x'Σx = {variance:.3e}); deflation undefined")]
    DegenerateDirection { variance: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ADMM stopped at the iteration cap ({} iterations, relative gap {:.3e})", .0.iterations, .0.rel_gap)]
    NotConverged(Box<SolveReport>),
    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<SpcaError>,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("input is not symmetric: entry ({row},{col}) differs from its transpose by {diff:.3e}")]
    AsymmetricInput { row: usize, col: usize, diff: f64 },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = SpcaError> = std::result::Result<T, E>;
