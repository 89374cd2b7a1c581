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


//! Independent oracles and random generators shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use spca_core::linalg::{sym_eig, Matrix, SymMatrix};
use spca_core::CovarianceMatrix;

/// θ solving `Σ max(σ_i − θ, 0) = r` by bisection.
pub fn bisection_theta(sigma: &[f64], r: f64) -> f64 {
    let f = |t: f64| sigma.iter().map(|s| (s - t).max(0.0)).sum::<f64>() - r;
    let max = sigma.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (max - r - 1.0, max);
    while f(lo) < 0.0 {
        lo -= 2.0 * (hi - lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn simplex_by_bisection(sigma: &[f64], r: f64) -> Vec<f64> {
    let t = bisection_theta(sigma, r);
    sigma.iter().map(|s| (s - t).max(0.0)).collect()
}

/// Euclidean projection onto `{‖y‖₁ ≤ k}` by enumerating every support
/// set. On a support S with signs s = sgn(x), the face minimizer is
/// `y_S = x_S − θ s_S` with θ fixed by `Σ_S |y_i| = k`; candidates that
/// leave their orthant are discarded and the closest survivor wins.
pub fn l1_ball_by_enumeration(x: &[f64], k: f64) -> Vec<f64> {
    if x.iter().map(|v| v.abs()).sum::<f64>() <= k {
        return x.to_vec();
    }
    let p = x.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << p) {
        let support: Vec<usize> = (0..p).filter(|i| mask & (1 << i) != 0).collect();
        let abs_sum: f64 = support.iter().map(|&i| x[i].abs()).sum();
        let theta = (abs_sum - k) / support.len() as f64;
        let mut y = vec![0.0; p];
        let mut ok = true;
        for &i in &support {
            let mag = x[i].abs() - theta;
            if mag < 0.0 {
                ok = false;
                break;
            }
            y[i] = x[i].signum() * mag;
        }
        if !ok {
            continue;
        }
        let d: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
            best = Some((d, y));
        }
    }
    best.expect("the full support is always a candidate once θ ≥ 0").1
}

pub fn random_vec(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

pub fn random_sym(rng: &mut impl Rng, n: usize, scale: f64) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| rng.gen_range(-scale..scale))
}

/// `G Gᵀ` with `G` of size n×rank.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> SymMatrix {
    let g: Vec<Vec<f64>> = (0..n).map(|_| random_vec(rng, rank, 1.0)).collect();
    SymMatrix::from_fn(n, |i, j| g[i].iter().zip(&g[j]).map(|(a, b)| a * b).sum())
}

pub fn random_cov(rng: &mut impl Rng, n: usize) -> CovarianceMatrix {
    CovarianceMatrix::new_unchecked(random_psd(rng, n, n))
}

pub fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v = random_vec(rng, n, 1.0);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Random point of the spectahedron `{Z ⪰ 0, Tr Z = 1}` of random rank.
pub fn random_spectahedron_point(rng: &mut impl Rng, n: usize) -> SymMatrix {
    let rank = rng.gen_range(1..=n);
    let z = random_psd(rng, n, rank);
    let t = z.trace();
    z.scale(1.0 / t)
}

/// Random symmetric matrix with `‖Z‖₁ ≤ k`.
pub fn random_l1_ball_point(rng: &mut impl Rng, n: usize, k: f64) -> SymMatrix {
    let z = random_sym(rng, n, 1.0);
    let radius = k * rng.gen::<f64>();
    z.scale(radius / z.l1_norm())
}

pub fn min_eig(a: &SymMatrix) -> f64 {
    *sym_eig(a).unwrap().values().last().unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn columns(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Best accuracy of any line `w·z ≥ b` separating two labelled classes in
/// the plane, searched over 3600 directions and every threshold.
pub fn best_linear_accuracy(points: &[(f64, f64)], labels: &[bool]) -> f64 {
    let n = points.len();
    let mut best = 0usize;
    for step in 0..3600 {
        let a = std::f64::consts::PI * step as f64 / 1800.0;
        let (c, s) = (a.cos(), a.sin());
        let mut proj: Vec<(f64, bool)> = points
            .iter()
            .zip(labels)
            .map(|(&(x, y), &l)| (c * x + s * y, l))
            .collect();
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Everything above the cut is predicted `true`.
        let mut correct = proj.iter().filter(|(_, l)| *l).count();
        best = best.max(correct);
        for &(_, l) in &proj {
            if l {
                correct -= 1;
            } else {
                correct += 1;
            }
            best = best.max(correct);
        }
    }
    best as f64 / n as f64
}

use spca_core::solver::{g_norm, solve, AdmmState, Formulation, GNormSpec, SolverConfig};

/// Worst violations of the G-norm descent inequality along a fixed-μ run.
#[derive(Debug, Clone, Copy)]
pub struct DescentCheck {
    /// Smallest value of `‖U^k−U*‖² − ‖U^{k+1}−U*‖² − ‖U^k−U^{k+1}‖²`.
    pub worst_inequality: f64,
    /// Largest increase of `‖U^k−U*‖_G` between iterations.
    pub worst_increase: f64,
    pub iterations: usize,
}

pub fn descent_check(sigma: &CovarianceMatrix, f: Formulation, mu: f64, steps: usize) -> DescentCheck {
    let reference = solve(
        sigma,
        f,
        &SolverConfig {
            tol: 1e-10,
            max_iters: 500_000,
            ..SolverConfig::fixed(mu)
        },
    )
    .expect("reference solve converges");
    let g = GNormSpec::new(mu).unwrap();
    let dist = |s: &AdmmState| {
        g_norm(&(&s.lambda - &reference.lambda_final), &(&s.y - &reference.y_final), g)
    };
    let cfg = SolverConfig::fixed(mu);
    let mut state = AdmmState::new(sigma.dim(), mu);
    let mut worst_inequality = f64::INFINITY;
    let mut worst_increase = f64::NEG_INFINITY;
    let mut d_prev = dist(&state);
    for _ in 0..steps {
        let rec = state.step(sigma, f, &cfg).unwrap();
        let d = dist(&state);
        worst_inequality = worst_inequality.min(d_prev * d_prev - d * d - rec.g_norm_step * rec.g_norm_step);
        worst_increase = worst_increase.max(d - d_prev);
        d_prev = d;
        if rec.g_norm_step < 1e-12 {
            break;
        }
    }
    DescentCheck {
        worst_inequality,
        worst_increase,
        iterations: state.iter,
    }
}
