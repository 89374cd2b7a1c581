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

//! Sequential extraction of several sparse components and the adjusted
//! variance they explain.

use crate::data::CovarianceMatrix;
use crate::error::{Result, SpcaError};
use crate::linalg::{cholesky_upper, norm2, sym_eig, Matrix, SymMatrix};
use crate::solver::{extract_loading, solve, Formulation, Loading, SolveReport, SolverConfig, ZeroTol};
use serde::{Deserialize, Serialize};

const UNIT_NORM_TOL: f64 = 1e-10;
const MIN_DIRECTION_VARIANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeflationScheme {
    /// `Σ − (xᵀΣx) x xᵀ`. Only PSD-preserving when x is an eigenvector.
    Hotelling,
    /// `Σ − Σx xᵀΣ / (xᵀΣx)`.
    #[default]
    SchurComplement,
}

/// Removes direction `x` (unit norm) from `sigma`.
pub fn deflate(sigma: &SymMatrix, x: &[f64], scheme: DeflationScheme) -> Result<SymMatrix> {
    if x.len() != sigma.dim() {
        return Err(SpcaError::DimensionMismatch {
            expected: sigma.dim(),
            found: x.len(),
        });
    }
    let norm = norm2(x);
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(SpcaError::InvalidParameter(format!(
            "deflation direction must have unit norm, got {norm}"
        )));
    }
    let sx = sigma.mul_vec(x);
    let variance: f64 = x.iter().zip(&sx).map(|(a, b)| a * b).sum();
    let mut out = match scheme {
        DeflationScheme::Hotelling => sigma.add_scaled(-variance, &SymMatrix::outer(x, 1.0)),
        DeflationScheme::SchurComplement => {
            if variance <= MIN_DIRECTION_VARIANCE {
                return Err(SpcaError::DegenerateDirection { variance });
            }
            sigma.add_scaled(-1.0 / variance, &SymMatrix::outer(&sx, 1.0))
        }
    };
    out.symmetrize();
    Ok(out)
}

/// Explained variance of possibly correlated loadings: `Σ_j R_jj²` where
/// `RᵀR = XᵀΣX` is the Cholesky factorization of the score Gram matrix.
///
/// Each diagonal entry of R is the variance a component explains beyond the
/// ones before it, so correlated loadings are not double counted.
pub fn adjusted_variance(sigma: &SymMatrix, loadings: &Matrix) -> Result<f64> {
    if loadings.rows() != sigma.dim() {
        return Err(SpcaError::DimensionMismatch {
            expected: sigma.dim(),
            found: loadings.rows(),
        });
    }
    let columns: Vec<Vec<f64>> = (0..loadings.cols()).map(|j| loadings.column(j)).collect();
    let scores: Vec<Vec<f64>> = columns.iter().map(|c| sigma.mul_vec(c)).collect();
    let gram = SymMatrix::from_fn(columns.len(), |i, j| {
        columns[i].iter().zip(&scores[j]).map(|(a, b)| a * b).sum()
    });
    let r = cholesky_upper(&gram)?;
    Ok((0..r.rows()).map(|j| r[(j, j)] * r[(j, j)]).sum())
}

/// One extracted component.
#[derive(Clone, Debug)]
pub struct Component {
    pub loading: Loading,
    /// `xᵀΣx` on the original covariance.
    pub variance: f64,
    /// `xᵀΣ_{j−1}x` on the deflated covariance the component was solved on.
    pub deflated_variance: f64,
    pub report: SolveReport,
}

#[derive(Clone, Debug)]
pub struct MultiPcResult {
    /// p×r matrix whose columns are the unit loadings.
    pub loadings: Matrix,
    pub components: Vec<Component>,
    pub adjusted_variance: f64,
    /// Adjusted variance as a percentage of `Tr(Σ)`.
    pub adjusted_variance_pct: f64,
}

impl MultiPcResult {
    pub fn cardinalities(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.loading.cardinality).collect()
    }

    pub fn total_cardinality(&self) -> usize {
        self.cardinalities().iter().sum()
    }
}

/// Solves one relaxation per entry of `f_seq`, deflating Σ between solves.
/// Any solve that stops at the iteration cap aborts the sequence.
pub fn solve_multi(
    sigma: &CovarianceMatrix,
    f_seq: &[Formulation],
    cfg: &SolverConfig,
    scheme: DeflationScheme,
) -> Result<MultiPcResult> {
    run_sequence(sigma, f_seq, cfg, scheme, false)
}

/// Like [`solve_multi`] but keeps unconverged components (their reports
/// carry `converged = false`).
pub fn solve_multi_lenient(
    sigma: &CovarianceMatrix,
    f_seq: &[Formulation],
    cfg: &SolverConfig,
    scheme: DeflationScheme,
) -> Result<MultiPcResult> {
    run_sequence(sigma, f_seq, cfg, scheme, true)
}

fn run_sequence(
    sigma: &CovarianceMatrix,
    f_seq: &[Formulation],
    cfg: &SolverConfig,
    scheme: DeflationScheme,
    accept_unconverged: bool,
) -> Result<MultiPcResult> {
    if f_seq.is_empty() {
        return Err(SpcaError::InvalidParameter(
            "need at least one formulation".into(),
        ));
    }
    let annotate = |index: usize| {
        move |e: SpcaError| SpcaError::Component {
            index,
            source: Box::new(e),
        }
    };
    let original = sigma.as_sym();
    let mut current = sigma.clone();
    let mut components = Vec::with_capacity(f_seq.len());
    for (j, &f) in f_seq.iter().enumerate() {
        let report = match solve(&current, f, cfg) {
            Ok(r) => r,
            Err(SpcaError::NotConverged(r)) if accept_unconverged => *r,
            Err(e) => return Err(annotate(j + 1)(e)),
        };
        let loading = extract_loading(&report.x_final, ZeroTol::default()).map_err(annotate(j + 1))?;
        let deflated_variance = current.as_sym().quad_form(&loading.vector);
        if j + 1 < f_seq.len() {
            let next = deflate(current.as_sym(), &loading.vector, scheme).map_err(annotate(j + 1))?;
            current = CovarianceMatrix::new_unchecked(next);
        }
        components.push(Component {
            variance: original.quad_form(&loading.vector),
            deflated_variance,
            loading,
            report,
        });
    }
    let columns: Vec<Vec<f64>> = components.iter().map(|c| c.loading.vector.clone()).collect();
    let loadings = Matrix::from_columns(&columns)?;
    let adjusted = adjusted_variance(original, &loadings)?;
    let trace = original.trace();
    Ok(MultiPcResult {
        loadings,
        components,
        adjusted_variance: adjusted,
        adjusted_variance_pct: if trace > 0.0 { 100.0 * adjusted / trace } else { 0.0 },
    })
}

/// Dense PCA baseline: the leading `r` eigenvectors and the percentage of
/// `Tr(Σ)` their eigenvalues explain.
#[derive(Clone, Debug)]
pub struct StandardPca {
    pub loadings: Matrix,
    pub eigenvalues: Vec<f64>,
    pub explained_pct: f64,
}

pub fn standard_pca(sigma: &SymMatrix, r: usize) -> Result<StandardPca> {
    let eig = sym_eig(sigma)?;
    let r = r.min(sigma.dim());
    let columns: Vec<Vec<f64>> = (0..r).map(|j| eig.vector(j).to_vec()).collect();
    let eigenvalues = eig.values()[..r].to_vec();
    let trace = sigma.trace();
    let explained = eigenvalues.iter().sum::<f64>();
    Ok(StandardPca {
        loadings: Matrix::from_columns(&columns)?,
        eigenvalues,
        explained_pct: if trace > 0.0 { 100.0 * explained / trace } else { 0.0 },
    })
}
