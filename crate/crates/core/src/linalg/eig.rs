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

use super::matrix::{Matrix, SymMatrix};
use crate::error::{Result, SpcaError};

/// Eigenpairs of a symmetric matrix, eigenvalues in non-increasing order.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    values: Vec<f64>,
    // Row j holds the eigenvector paired with `values[j]`.
    vectors_by_row: Matrix,
}

impl EigDecomposition {
    fn from_unsorted(values: Vec<f64>, vectors_by_row: Matrix) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut sorted = Matrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for k in 0..n {
                sorted[(dst, k)] = vectors_by_row[(src, k)];
            }
        }
        EigDecomposition {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors_by_row: sorted,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The j-th eigenvector (unit norm).
    pub fn vector(&self, j: usize) -> &[f64] {
        self.vectors_by_row.row(j)
    }

    /// Orthonormal matrix U with eigenvectors as columns.
    pub fn vectors(&self) -> Matrix {
        self.vectors_by_row.transpose()
    }

    /// `U diag(weights) Uᵀ`, skipping zero weights.
    pub fn reconstruct_with(&self, weights: &[f64]) -> SymMatrix {
        let n = self.values.len();
        let mut out = SymMatrix::zeros(n);
        let data = out.data_mut();
        for (j, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let u = self.vector(j);
            for i in 0..n {
                let wi = w * u[i];
                let row = &mut data[i * n..(i + 1) * n];
                for (r, &uk) in row.iter_mut().zip(u) {
                    *r += wi * uk;
                }
            }
        }
        out.symmetrize();
        out
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(&self.values)
    }
}

fn check_finite(a: &SymMatrix) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(SpcaError::NonFinite)
    }
}

/// Symmetric eigendecomposition by Householder tridiagonalization followed
/// by the implicit QL iteration.
pub fn sym_eig(a: &SymMatrix) -> Result<EigDecomposition> {
    check_finite(a)?;
    let n = a.dim();
    if n == 0 {
        return Ok(EigDecomposition {
            values: Vec::new(),
            vectors_by_row: Matrix::zeros(0, 0),
        });
    }
    let mut v = a.to_matrix();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    // The QL sweep rotates pairs of eigenvector columns; keep them as rows.
    let mut w = v.transpose();
    tridiagonal_ql(&mut w, &mut d, &mut e)?;
    Ok(EigDecomposition::from_unsorted(d, w))
}

// Householder reduction to tridiagonal form (EISPACK tred2). On exit `v`
// holds the accumulated orthogonal transform, `d` the diagonal and `e` the
// subdiagonal in e[1..n].
fn tridiagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e[..i].iter_mut() {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

const QL_MAX_ITERS_PER_VALUE: usize = 60;

// Implicit QL with Wilkinson-type shifts (EISPACK tql2). `w` holds the
// eigenvectors as rows.
fn tridiagonal_ql(w: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITERS_PER_VALUE {
                    return Err(SpcaError::NoConvergence { sweeps: iter });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[(l + 2)..n].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(w, i, i + 1, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

// (row_a, row_b) <- (c·row_a − s·row_b, s·row_a + c·row_b)
fn rotate_rows(w: &mut Matrix, a: usize, b: usize, c: f64, s: f64) {
    let n = w.cols();
    for k in 0..n {
        let wa = w[(a, k)];
        let wb = w[(b, k)];
        w[(b, k)] = s * wa + c * wb;
        w[(a, k)] = c * wa - s * wb;
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;

/// Cyclic Jacobi eigendecomposition. Slower than [`sym_eig`] but built from
/// plane rotations only, so it serves as an independent cross-check.
pub fn sym_eig_jacobi(a: &SymMatrix) -> Result<EigDecomposition> {
    check_finite(a)?;
    let n = a.dim();
    let mut m = a.to_matrix();
    let mut w = SymMatrix::identity(n).to_matrix();
    let scale = a.frobenius_norm();
    let target = JACOBI_REL_TOL * scale;

    let off_norm = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[(i, j)] * m[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SpcaError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- Jᵀ A J with J the (p, q) rotation.
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                rotate_rows(&mut w, p, q, c, s);
            }
        }
    }
    let values = (0..n).map(|i| m[(i, i)]).collect();
    Ok(EigDecomposition::from_unsorted(values, w))
}
