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

//! Euclidean projections and the proximal map of the entrywise ℓ1 norm.

use crate::error::{Result, SpcaError};
use crate::linalg::{sym_eig, SymMatrix};

/// Output of [`project_simplex`]: `gamma_i = max(sigma_i − theta, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexProjection {
    pub gamma: Vec<f64>,
    pub theta: f64,
}

/// Soft-threshold level for [`shrink`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShrinkSpec {
    tau: f64,
}

impl ShrinkSpec {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(SpcaError::InvalidParameter(format!(
                "shrink threshold must be finite and nonnegative, got {tau}"
            )));
        }
        Ok(ShrinkSpec { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(SpcaError::InvalidParameter(format!(
            "projection radius must be positive and finite, got {r}"
        )))
    }
}

/// Projects `sigma` onto `{ξ ≥ 0, Σξ = r}`.
///
/// Sorts ascending and takes the smallest index `j` whose tail satisfies
/// `s_j − (Σ_{i≥j} s_i − r)/(p − j) > 0`; the threshold is that tail's mean
/// excess. O(p log p).
pub fn project_simplex(sigma: &[f64], r: f64) -> Result<SimplexProjection> {
    check_radius(r)?;
    if sigma.iter().any(|v| !v.is_finite()) {
        return Err(SpcaError::NonFinite);
    }
    let p = sigma.len();
    if p == 0 {
        return Err(SpcaError::InvalidParameter(
            "cannot project an empty vector onto the simplex".into(),
        ));
    }
    let mut sorted = sigma.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut suffix = vec![0.0; p + 1];
    for j in (0..p).rev() {
        suffix[j] = suffix[j + 1] + sorted[j];
    }
    // The last index always qualifies: s_max − (s_max − r) = r > 0.
    let j_hat = (0..p)
        .find(|&j| sorted[j] - (suffix[j] - r) / (p - j) as f64 > 0.0)
        .unwrap_or(p - 1);
    let theta = (suffix[j_hat] - r) / (p - j_hat) as f64;
    let gamma = sigma.iter().map(|&s| (s - theta).max(0.0)).collect();
    Ok(SimplexProjection { gamma, theta })
}

/// Projects `x` onto `{ξ : ‖ξ‖₁ ≤ k}`. Points already inside are returned
/// unchanged; otherwise `|x|` goes onto the radius-`k` simplex and the signs
/// are restored.
pub fn project_l1_ball(x: &[f64], k: f64) -> Result<Vec<f64>> {
    check_radius(k)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(SpcaError::NonFinite);
    }
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    if l1 <= k {
        return Ok(x.to_vec());
    }
    let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let proj = project_simplex(&abs, k)?;
    Ok(x.iter()
        .zip(proj.gamma)
        .map(|(&xi, g)| if xi < 0.0 { -g } else { g })
        .collect())
}

/// ℓ1-ball projection of a matrix treated as one flat vector of its p²
/// entries.
pub fn project_l1_ball_matrix(z: &SymMatrix, k: f64) -> Result<SymMatrix> {
    let flat = project_l1_ball(z.as_slice(), k)?;
    SymMatrix::from_row_major(z.dim(), flat)
}

/// Entrywise soft-thresholding `sgn(z)·max(|z| − τ, 0)`.
pub fn shrink(z: &SymMatrix, spec: ShrinkSpec) -> SymMatrix {
    let tau = spec.tau();
    z.map(|v| v.signum() * (v.abs() - tau).max(0.0))
}

/// Projection onto the spectahedron `{X ⪰ 0, Tr X = 1}`: eigenvalues are
/// mapped onto the unit simplex, eigenvectors kept.
pub fn project_spectahedron(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eig(a)?;
    let proj = project_simplex(eig.values(), 1.0)?;
    Ok(eig.reconstruct_with(&proj.gamma))
}
