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


// Symmetric eigensolver checks on inputs captured from solver runs.

use spca_core::data::load_data_csv;
use spca_core::linalg::{sym_eig, sym_eig_jacobi, SymMatrix};

fn fixture(name: &str) -> SymMatrix {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    SymMatrix::from_matrix(&load_data_csv(path).unwrap().values).unwrap()
}

// An 8×8 X-update input with a close eigenvalue pair on which a
// general-purpose library routine returned wrong eigenvectors.
#[test]
fn clustered_spectrum_reconstructs() {
    let a = fixture("clustered_spectrum.csv");
    let scale = a.frobenius_norm();
    let eig = sym_eig(&a).unwrap();
    assert!((&eig.reconstruct() - &a).max_abs() <= 1e-13 * scale);
    let u = eig.vectors();
    let utu = u.transpose().matmul(&u).unwrap();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((utu[(i, j)] - want).abs() <= 1e-13);
        }
    }
    let jac = sym_eig_jacobi(&a).unwrap();
    for (x, y) in eig.values().iter().zip(jac.values()) {
        assert!((x - y).abs() <= 1e-13 * scale);
    }
}
