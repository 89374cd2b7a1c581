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

//! The ADMM iteration for the ℓ1-constrained and ℓ1-penalized SDP
//! relaxations of sparse PCA, and rank-one extraction of the loading.
//!
//! Each iteration performs
//!
//! ```text
//! X ← P_C(Y + μΛ + μΣ)            C = {X ⪰ 0, Tr X = 1}
//! Y ← P_B(X − μΛ)                 B = {‖Y‖₁ ≤ K}         (constrained)
//! Y ← Shrink(X − μΛ, μρ)                                  (penalized)
//! Λ ← Λ − (X − Y)/μ
//! ```
//!
//! starting from `Y = 0, Λ = 0`, and stops once
//! `‖X − Y‖_F / max(1, ‖X‖_F, ‖Y‖_F)` drops below the tolerance.

use crate::data::CovarianceMatrix;
use crate::error::{Result, SpcaError};
use crate::linalg::{norm2, sym_eig, SymMatrix};
use crate::projections::{project_l1_ball_matrix, project_spectahedron, shrink, ShrinkSpec};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Which relaxation is solved.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Formulation {
    /// `max ⟨Σ,X⟩ s.t. X ∈ C, ‖X‖₁ ≤ k`
    Constrained { k: f64 },
    /// `max ⟨Σ,X⟩ − ρ‖X‖₁ s.t. X ∈ C`
    Penalized { rho: f64 },
}

impl Formulation {
    pub fn constrained(k: f64) -> Result<Self> {
        let f = Formulation::Constrained { k };
        f.validate()?;
        Ok(f)
    }

    pub fn penalized(rho: f64) -> Result<Self> {
        let f = Formulation::Penalized { rho };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            Formulation::Constrained { k } => ("k", k),
            Formulation::Penalized { rho } => ("rho", rho),
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(SpcaError::InvalidParameter(format!(
                "{name} must be positive and finite, got {v}"
            )))
        }
    }
}

/// Penalty-parameter schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Continuation {
    Off,
    /// `μ ← max(factor·μ, floor)` once per iteration.
    Schedule { factor: f64, floor: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mu0: f64,
    pub continuation: Continuation,
    pub tol: f64,
    pub max_iters: usize,
    pub record_descent: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mu0: 1.0,
            continuation: Continuation::Off,
            tol: 1e-4,
            max_iters: 5000,
            record_descent: false,
        }
    }
}

impl SolverConfig {
    pub fn fixed(mu: f64) -> Self {
        SolverConfig {
            mu0: mu,
            ..Default::default()
        }
    }

    /// `μ_0 = mu0`, `μ_k = max(2μ_{k−1}/3, 1e-4)`.
    pub fn with_default_schedule(mu0: f64) -> Self {
        SolverConfig {
            mu0,
            continuation: Continuation::Schedule {
                factor: 2.0 / 3.0,
                floor: 1e-4,
            },
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SpcaError::InvalidParameter(msg));
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad(format!("mu0 must be positive, got {}", self.mu0));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if let Continuation::Schedule { factor, floor } = self.continuation {
            if !(factor > 0.0 && factor < 1.0) {
                return bad(format!("continuation factor must lie in (0,1), got {factor}"));
            }
            if !(floor > 0.0 && floor <= self.mu0) {
                return bad(format!(
                    "continuation floor must lie in (0, mu0], got {floor}"
                ));
            }
        }
        Ok(())
    }
}

/// Iterate triple plus the current penalty.
#[derive(Clone, Debug)]
pub struct AdmmState {
    pub x: SymMatrix,
    pub y: SymMatrix,
    pub lambda: SymMatrix,
    pub mu: f64,
    pub iter: usize,
}

/// Per-iteration diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub rel_gap: f64,
    /// `‖Y^{k+1} − Y^k‖_F` on the same scale as `rel_gap`.
    pub y_change: f64,
    /// `‖U^k − U^{k+1}‖_G` for `U = (Λ, Y)`, measured with the μ used in
    /// that iteration.
    pub g_norm_step: f64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub x_final: SymMatrix,
    pub y_final: SymMatrix,
    pub lambda_final: SymMatrix,
    pub mu_final: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub rel_gap: f64,
    pub descent_trace: Option<Vec<IterationRecord>>,
    /// Monotonic wall time spent in the iteration loop.
    pub elapsed: Duration,
}

/// Weight of the G-norm, `G = diag(μI, I/μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GNormSpec {
    mu: f64,
}

impl GNormSpec {
    pub fn new(mu: f64) -> Result<Self> {
        if mu > 0.0 && mu.is_finite() {
            Ok(GNormSpec { mu })
        } else {
            Err(SpcaError::InvalidParameter(format!(
                "G-norm weight must be positive, got {mu}"
            )))
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// `sqrt(μ‖Λ‖_F² + ‖Y‖_F²/μ)`.
pub fn g_norm(u_lambda: &SymMatrix, u_y: &SymMatrix, g: GNormSpec) -> f64 {
    let l = u_lambda.frobenius_norm();
    let y = u_y.frobenius_norm();
    (g.mu * l * l + y * y / g.mu).sqrt()
}

impl AdmmState {
    /// `Y = 0, Λ = 0`; X is produced by the first update.
    pub fn new(dim: usize, mu: f64) -> Self {
        AdmmState {
            x: SymMatrix::zeros(dim),
            y: SymMatrix::zeros(dim),
            lambda: SymMatrix::zeros(dim),
            mu,
            iter: 0,
        }
    }

    /// Resumes from the final iterates of an earlier solve.
    pub fn warm_start(prev: &SolveReport, mu: f64) -> Self {
        AdmmState {
            x: prev.x_final.clone(),
            y: prev.y_final.clone(),
            lambda: prev.lambda_final.clone(),
            mu,
            iter: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// One full iteration: X, Y and Λ updates followed by the μ schedule.
    pub fn step(
        &mut self,
        sigma: &CovarianceMatrix,
        f: Formulation,
        cfg: &SolverConfig,
    ) -> Result<IterationRecord> {
        let mu = self.mu;
        self.x = x_update(self, sigma)?;
        let y_new = y_update(self, f)?;
        let lambda_new = multiplier_update_with(&self.lambda, &self.x, &y_new, mu);

        let g = GNormSpec { mu };
        let dy = &self.y - &y_new;
        let g_norm_step = g_norm(&(&self.lambda - &lambda_new), &dy, g);
        let dy_norm = dy.frobenius_norm();
        self.y = y_new;
        self.lambda = lambda_new;
        self.iter += 1;
        self.mu = continuation_step(mu, cfg);
        Ok(IterationRecord {
            rel_gap: rel_gap(self),
            y_change: dy_norm / gap_scale(self),
            g_norm_step,
        })
    }
}

/// `P_C(Y + μΛ + μΣ)`.
pub fn x_update(state: &AdmmState, sigma: &CovarianceMatrix) -> Result<SymMatrix> {
    let sigma = sigma.as_sym();
    if sigma.dim() != state.dim() {
        return Err(SpcaError::DimensionMismatch {
            expected: state.dim(),
            found: sigma.dim(),
        });
    }
    let mu = state.mu;
    let z = state
        .y
        .add_scaled(mu, &state.lambda)
        .add_scaled(mu, sigma);
    project_spectahedron(&z)
}

/// Y-subproblem on `X − μΛ`: ℓ1-ball projection of the flattened matrix, or
/// soft-thresholding at `μρ`.
pub fn y_update(state: &AdmmState, f: Formulation) -> Result<SymMatrix> {
    let w = state.x.add_scaled(-state.mu, &state.lambda);
    match f {
        Formulation::Constrained { k } => project_l1_ball_matrix(&w, k),
        Formulation::Penalized { rho } => Ok(shrink(&w, ShrinkSpec::new(state.mu * rho)?)),
    }
}

/// `Λ − (X − Y)/μ` using the state's current iterates.
pub fn multiplier_update(state: &AdmmState) -> SymMatrix {
    multiplier_update_with(&state.lambda, &state.x, &state.y, state.mu)
}

fn multiplier_update_with(lambda: &SymMatrix, x: &SymMatrix, y: &SymMatrix, mu: f64) -> SymMatrix {
    lambda.add_scaled(-1.0 / mu, &(x - y))
}

/// `‖X − Y‖_F / max(1, ‖X‖_F, ‖Y‖_F)`.
pub fn rel_gap(state: &AdmmState) -> f64 {
    (&state.x - &state.y).frobenius_norm() / gap_scale(state)
}

fn gap_scale(state: &AdmmState) -> f64 {
    1f64.max(state.x.frobenius_norm())
        .max(state.y.frobenius_norm())
}

pub fn continuation_step(mu: f64, cfg: &SolverConfig) -> f64 {
    match cfg.continuation {
        Continuation::Off => mu,
        Continuation::Schedule { factor, floor } => (factor * mu).max(floor),
    }
}

fn objective(sigma: &SymMatrix, f: Formulation, x: &SymMatrix, y: &SymMatrix) -> f64 {
    let base = sigma.inner(x);
    match f {
        Formulation::Constrained { .. } => base,
        Formulation::Penalized { rho } => base - rho * y.l1_norm(),
    }
}

/// Runs ADMM from `Y = 0, Λ = 0`.
///
/// Hitting `max_iters` yields `SpcaError::NotConverged` carrying the partial
/// report.
pub fn solve(sigma: &CovarianceMatrix, f: Formulation, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    solve_from(sigma, f, cfg, AdmmState::new(sigma.dim(), cfg.mu0))
}

/// Runs ADMM from a caller-supplied state (e.g. a warm start).
pub fn solve_from(
    sigma: &CovarianceMatrix,
    f: Formulation,
    cfg: &SolverConfig,
    mut state: AdmmState,
) -> Result<SolveReport> {
    cfg.validate()?;
    f.validate()?;
    if state.dim() != sigma.dim() {
        return Err(SpcaError::DimensionMismatch {
            expected: state.dim(),
            found: sigma.dim(),
        });
    }
    let start = Instant::now();
    let mut trace = cfg.record_descent.then(Vec::new);
    let mut gap = f64::INFINITY;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let rec = state.step(sigma, f, cfg)?;
        gap = rec.rel_gap;
        if let Some(t) = trace.as_mut() {
            t.push(rec);
        }
        // A zero gap with a moving Y happens when the first X already lies
        // in the ball; that is not a fixed point.
        if gap < cfg.tol && rec.y_change < cfg.tol {
            converged = true;
            break;
        }
    }
    let report = SolveReport {
        objective: objective(sigma.as_sym(), f, &state.x, &state.y),
        x_final: state.x,
        y_final: state.y,
        lambda_final: state.lambda,
        mu_final: state.mu,
        iterations: state.iter,
        converged,
        rel_gap: gap,
        descent_trace: trace,
        elapsed: start.elapsed(),
    };
    if converged {
        Ok(report)
    } else {
        Err(SpcaError::NotConverged(Box::new(report)))
    }
}

/// Threshold below which loading entries count as zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ZeroTol {
    Absolute(f64),
    /// Multiple of the largest loading magnitude.
    Relative(f64),
}

impl Default for ZeroTol {
    fn default() -> Self {
        ZeroTol::Relative(1e-3)
    }
}

/// Unit-norm sparse loading vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Loading {
    pub vector: Vec<f64>,
    pub cardinality: usize,
}

impl Loading {
    pub fn support(&self) -> Vec<usize> {
        self.vector
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Rank-one extraction: leading eigenvector of `x`, small entries zeroed,
/// renormalized, largest-magnitude entry made positive.
pub fn extract_loading(x: &SymMatrix, zero_tol: ZeroTol) -> Result<Loading> {
    let eig = sym_eig(x)?;
    let mut v = eig.vector(0).to_vec();
    let peak = v.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let cutoff = match zero_tol {
        ZeroTol::Absolute(t) => t,
        ZeroTol::Relative(t) => t * peak,
    };
    for e in v.iter_mut() {
        if e.abs() < cutoff {
            *e = 0.0;
        }
    }
    let norm = norm2(&v);
    if norm > 0.0 {
        v.iter_mut().for_each(|e| *e /= norm);
    }
    let lead = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|e| *e = -*e);
    }
    let cardinality = v.iter().filter(|e| **e != 0.0).count();
    Ok(Loading {
        vector: v,
        cardinality,
    })
}
