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

use super::matrix::{dot, Matrix, SymMatrix};
use crate::error::{Result, SpcaError};

const PIVOT_NEGATIVE_LIMIT: f64 = -1e-8;
const MAX_NORMAL_CONDITION: f64 = 1e12;

/// Upper-triangular `R` with `A = RᵀR` and a nonnegative diagonal.
///
/// Pivots in `[-1e-8, 0]` are treated as exact zeros (the remainder of that
/// row of `R` is zeroed); anything more negative is reported as `NotPsd`.
pub fn cholesky_upper(a: &SymMatrix) -> Result<Matrix> {
    if !a.is_finite() {
        return Err(SpcaError::NonFinite);
    }
    let n = a.dim();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = a[(j, j)];
        for k in 0..j {
            pivot -= r[(k, j)] * r[(k, j)];
        }
        if pivot < PIVOT_NEGATIVE_LIMIT {
            return Err(SpcaError::NotPsd { index: j, pivot });
        }
        if pivot <= 0.0 {
            continue;
        }
        let rjj = pivot.sqrt();
        r[(j, j)] = rjj;
        for c in (j + 1)..n {
            let mut s = a[(j, c)];
            for k in 0..j {
                s -= r[(k, j)] * r[(k, c)];
            }
            r[(j, c)] = s / rjj;
        }
    }
    Ok(r)
}

/// Least-squares coefficients `(α, β)` minimizing `‖α v1 + β v2 − target‖₂`,
/// solved through the 2×2 normal equations.
pub fn lstsq_2col(v1: &[f64], v2: &[f64], target: &[f64]) -> Result<(f64, f64)> {
    let p = target.len();
    for v in [v1, v2] {
        if v.len() != p {
            return Err(SpcaError::DimensionMismatch {
                expected: p,
                found: v.len(),
            });
        }
    }
    let g11 = dot(v1, v1);
    let g12 = dot(v1, v2);
    let g22 = dot(v2, v2);
    // Eigenvalues of the Gram matrix give its condition number.
    let mean = 0.5 * (g11 + g22);
    let radius = (0.25 * (g11 - g22).powi(2) + g12 * g12).sqrt();
    let (hi, lo) = (mean + radius, mean - radius);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition < MAX_NORMAL_CONDITION) {
        return Err(SpcaError::DegenerateBasis { condition });
    }
    let b1 = dot(v1, target);
    let b2 = dot(v2, target);
    let det = g11 * g22 - g12 * g12;
    let alpha = (g22 * b1 - g12 * b2) / det;
    let beta = (g11 * b2 - g12 * b1) / det;
    Ok((alpha, beta))
}
