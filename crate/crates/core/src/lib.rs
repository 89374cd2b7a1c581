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

//! Sparse principal component analysis through ADMM on the ℓ1-constrained
//! and ℓ1-penalized semidefinite relaxations.

pub mod data;
pub mod deflation;
pub mod error;
pub mod linalg;
pub mod projections;
pub mod solver;

pub use data::{CovarianceMatrix, DataMatrix, SyntheticSpec};
pub use deflation::{solve_multi, DeflationScheme, MultiPcResult};
pub use error::{Result, SpcaError};
pub use linalg::{Matrix, SymMatrix};
pub use solver::{solve, Continuation, Formulation, Loading, SolveReport, SolverConfig};
