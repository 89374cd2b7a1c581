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

//! Covariance inputs: construction from raw data, the synthetic generators
//! and the CSV/triplet loaders.

use crate::error::{Result, SpcaError};
use crate::linalg::{dot, lstsq_2col, sym_eig, Matrix, SymMatrix};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const PSD_TOL: f64 = 1e-8;
const CSV_SYMMETRY_TOL: f64 = 1e-9;

/// Symmetric positive semidefinite input matrix Σ.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix(SymMatrix);

impl CovarianceMatrix {
    /// Accepts `sigma` if its smallest eigenvalue is at least
    /// `−1e-8 · max(1, ‖Σ‖_F)`.
    pub fn new(sigma: SymMatrix) -> Result<Self> {
        if sigma.dim() > 0 {
            let eig = sym_eig(&sigma)?;
            let min = *eig.values().last().unwrap();
            let floor = -PSD_TOL * sigma.frobenius_norm().max(1.0);
            if min < floor {
                return Err(SpcaError::NotPsd {
                    index: sigma.dim() - 1,
                    pivot: min,
                });
            }
        }
        Ok(CovarianceMatrix(sigma))
    }

    /// Skips the PSD check. Used for deflated matrices, which may be mildly
    /// indefinite under Hotelling deflation.
    pub fn new_unchecked(sigma: SymMatrix) -> Self {
        CovarianceMatrix(sigma)
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.0
    }

    pub fn into_sym(self) -> SymMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

impl AsRef<SymMatrix> for CovarianceMatrix {
    fn as_ref(&self) -> &SymMatrix {
        &self.0
    }
}

/// p×n data matrix: one row per variable, one column per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    pub values: Matrix,
    /// Optional per-column labels (e.g. senator names).
    pub column_labels: Option<Vec<String>>,
}

impl DataMatrix {
    pub fn new(values: Matrix) -> Result<Self> {
        if !values.is_finite() {
            return Err(SpcaError::NonFinite);
        }
        Ok(DataMatrix {
            values,
            column_labels: None,
        })
    }

    pub fn variables(&self) -> usize {
        self.values.rows()
    }

    pub fn samples(&self) -> usize {
        self.values.cols()
    }
}

/// `Σ = M Mᵀ`, optionally after subtracting each row's mean.
pub fn covariance_from_data(m: &DataMatrix, center: bool) -> Result<CovarianceMatrix> {
    let p = m.variables();
    let n = m.samples();
    if n == 0 {
        return Err(SpcaError::InvalidParameter(
            "data matrix has no samples".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            let row = m.values.row(i);
            if center {
                let mean = row.iter().sum::<f64>() / n as f64;
                row.iter().map(|v| v - mean).collect()
            } else {
                row.to_vec()
            }
        })
        .collect();
    let sigma = SymMatrix::from_fn(p, |i, j| dot(&rows[i], &rows[j]));
    CovarianceMatrix::new(sigma)
}

/// Exact covariance of the three-factor model:
///
/// ```text
/// V1 ~ N(0, 290), V2 ~ N(0, 300), V3 = −0.3 V1 + 0.925 V2 + ε, ε ~ N(0, 1)
/// X1..X4 = V1 + noise, X5..X8 = V2 + noise, X9, X10 = V3 + noise
/// ```
///
/// with independent unit-variance noises.
pub fn zou_covariance() -> CovarianceMatrix {
    // Coefficients of each observable on the independent factors (V1, V2, ε).
    let factor_var = [290.0, 300.0, 1.0];
    let v1 = [1.0, 0.0, 0.0];
    let v2 = [0.0, 1.0, 0.0];
    let v3 = [-0.3, 0.925, 1.0];
    let loadings: Vec<[f64; 3]> = (0..10)
        .map(|i| match i {
            0..=3 => v1,
            4..=7 => v2,
            _ => v3,
        })
        .collect();
    let sigma = SymMatrix::from_fn(10, |i, j| {
        let shared: f64 = (0..3)
            .map(|f| loadings[i][f] * loadings[j][f] * factor_var[f])
            .sum();
        shared + if i == j { 1.0 } else { 0.0 }
    });
    CovarianceMatrix::new_unchecked(sigma)
}

/// Synthetic instance generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SyntheticSpec {
    ZouThreeFactor,
    /// `Σ = x̂x̂ᵀ + noise_sigma · v vᵀ` with `x̂` carrying `s` standard normal
    /// entries at random positions and `v ~ U[0,1]^p`.
    Spiked {
        p: usize,
        s: usize,
        noise_sigma: f64,
        seed: u64,
    },
}

/// Generated instance plus the planted support (empty for the Zou model).
#[derive(Clone, Debug)]
pub struct SyntheticInstance {
    pub sigma: CovarianceMatrix,
    pub true_support: BTreeSet<usize>,
    /// The planted sparse vector `x̂`, when there is one.
    pub spike: Option<Vec<f64>>,
}

/// Box–Muller standard normal from a uniform stream.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    // gen::<f64>() lies in [0, 1); 1 − u keeps the log argument positive.
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Builds a synthetic instance. The spiked generator draws from ChaCha8
/// seeded by `seed`, so instances are reproducible across platforms.
pub fn synthesize(spec: SyntheticSpec) -> Result<SyntheticInstance> {
    match spec {
        SyntheticSpec::ZouThreeFactor => Ok(SyntheticInstance {
            sigma: zou_covariance(),
            true_support: BTreeSet::new(),
            spike: None,
        }),
        SyntheticSpec::Spiked { .. } => spiked_covariance(spec),
    }
}

pub fn spiked_covariance(spec: SyntheticSpec) -> Result<SyntheticInstance> {
    let SyntheticSpec::Spiked {
        p,
        s,
        noise_sigma,
        seed,
    } = spec
    else {
        return Err(SpcaError::InvalidParameter(
            "spiked_covariance needs a Spiked spec".into(),
        ));
    };
    if s == 0 || s > p {
        return Err(SpcaError::InvalidParameter(format!(
            "spike sparsity must satisfy 0 < s <= p, got s={s}, p={p}"
        )));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(SpcaError::InvalidParameter(format!(
            "noise level must be nonnegative, got {noise_sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support: BTreeSet<usize> = sample(&mut rng, p, s).into_iter().collect();
    let mut spike = vec![0.0; p];
    for &i in &support {
        spike[i] = standard_normal(&mut rng);
    }
    let v: Vec<f64> = (0..p).map(|_| rng.gen::<f64>()).collect();
    let sigma = SymMatrix::from_fn(p, |i, j| spike[i] * spike[j] + noise_sigma * v[i] * v[j]);
    Ok(SyntheticInstance {
        sigma: CovarianceMatrix::new_unchecked(sigma),
        true_support: support,
        spike: Some(spike),
    })
}

fn io_err(path: &Path, source: std::io::Error) -> SpcaError {
    SpcaError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> SpcaError {
    SpcaError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_numeric_rows(path: &Path, skip_first: bool) -> Result<(Option<Vec<String>>, Vec<Vec<f64>>)> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_numeric_rows(file, path, skip_first)
}

/// Parses comma-separated numeric rows; `path` only labels diagnostics.
fn parse_numeric_rows(
    source: impl std::io::Read,
    path: &Path,
    skip_first: bool,
) -> Result<(Option<Vec<String>>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut header = None;
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(idx as u64 + 1, |p| p.line());
        if idx == 0 && skip_first {
            header = Some(record.iter().map(str::to_owned).collect());
            continue;
        }
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(path, line, format!("not a finite number: {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected {w} fields, found {}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads a square symmetric matrix (one row per line, no header).
/// Entries may differ from their transpose by at most `1e-9·max(1, |a_ij|)`.
pub fn load_covariance_csv(path: impl AsRef<Path>) -> Result<CovarianceMatrix> {
    let path = path.as_ref();
    let (_, rows) = read_numeric_rows(path, false)?;
    covariance_from_rows(path, rows)
}

fn covariance_from_rows(path: &Path, rows: Vec<Vec<f64>>) -> Result<CovarianceMatrix> {
    let p = rows.len();
    if p == 0 {
        return Err(parse_err(path, 1, "empty covariance file"));
    }
    if rows[0].len() != p {
        return Err(SpcaError::DimensionMismatch {
            expected: p,
            found: rows[0].len(),
        });
    }
    for i in 0..p {
        for j in (i + 1)..p {
            let diff = (rows[i][j] - rows[j][i]).abs();
            if diff > CSV_SYMMETRY_TOL * rows[i][j].abs().max(1.0) {
                return Err(SpcaError::AsymmetricInput {
                    row: i,
                    col: j,
                    diff,
                });
            }
        }
    }
    CovarianceMatrix::new(SymMatrix::from_rows(&rows)?)
}

/// Reads a dense p×n data matrix (one variable per line, no header).
pub fn load_data_csv(path: impl AsRef<Path>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let (_, rows) = read_numeric_rows(path, false)?;
    DataMatrix::new(Matrix::from_rows(&rows)?)
}

/// Reads a votes matrix (bills as rows, senators as columns) with entries in
/// {−1, 0, 1}. With `labeled`, the first row holds column labels.
pub fn load_votes_csv(path: impl AsRef<Path>, labeled: bool) -> Result<DataMatrix> {
    let path = path.as_ref();
    let (header, rows) = read_numeric_rows(path, labeled)?;
    for (r, row) in rows.iter().enumerate() {
        if let Some(v) = row.iter().find(|v| ![-1.0, 0.0, 1.0].contains(*v)) {
            let line = r as u64 + 1 + u64::from(labeled);
            return Err(parse_err(path, line, format!("vote {v} is not one of -1, 0, 1")));
        }
    }
    let mut data = DataMatrix::new(Matrix::from_rows(&rows)?)?;
    if let Some(h) = header {
        if h.len() != data.samples() {
            return Err(SpcaError::DimensionMismatch {
                expected: data.samples(),
                found: h.len(),
            });
        }
        data.column_labels = Some(h);
    }
    Ok(data)
}

/// How the triplet file's dimensions are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripletDims {
    /// First line is `p,n`.
    Header,
    Given { p: usize, n: usize },
}

/// Reads `row,col,value` lines (0-based indices) into a dense p×n matrix.
/// Repeated coordinates overwrite earlier values.
pub fn load_triplets(path: impl AsRef<Path>, dims: TripletDims) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (p, n) = match dims {
        TripletDims::Given { p, n } => (p, n),
        TripletDims::Header => {
            let (line, l) = lines
                .next()
                .ok_or_else(|| parse_err(path, 1, "missing `p,n` header"))?;
            let dims: Vec<usize> = l
                .split(',')
                .map(|f| f.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(path, line, format!("bad header: {e}")))?;
            match dims[..] {
                [p, n] => (p, n),
                _ => return Err(parse_err(path, line, "header must be `p,n`")),
            }
        }
    };
    let mut m = Matrix::zeros(p, n);
    for (line, l) in lines {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                line,
                format!("expected `row,col,value`, found {} fields", fields.len()),
            ));
        }
        let idx = |f: &str| {
            f.parse::<usize>()
                .map_err(|e| parse_err(path, line, format!("bad index {f:?}: {e}")))
        };
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        let v: f64 = fields[2]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_err(path, line, format!("bad value {:?}", fields[2])))?;
        if i >= p || j >= n {
            return Err(parse_err(
                path,
                line,
                format!("index ({i},{j}) outside a {p}x{n} matrix"),
            ));
        }
        m[(i, j)] = v;
    }
    DataMatrix::new(m)
}

/// Writes a matrix as CSV using the shortest round-trip float formatting.
pub fn write_matrix_csv(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Keeps the rows (bills) with at most `max_missing` zero entries.
pub fn filter_bills(votes: &DataMatrix, max_missing: usize) -> DataMatrix {
    let kept: Vec<Vec<f64>> = (0..votes.variables())
        .map(|i| votes.values.row(i))
        .filter(|row| row.iter().filter(|v| **v == 0.0).count() <= max_missing)
        .map(<[f64]>::to_vec)
        .collect();
    let values = if kept.is_empty() {
        Matrix::zeros(0, votes.samples())
    } else {
        Matrix::from_rows(&kept).expect("rows share the source width")
    };
    DataMatrix {
        values,
        column_labels: votes.column_labels.clone(),
    }
}

/// Least-squares coordinates of every column of `m` in the basis (v1, v2).
pub fn project_columns_2d(m: &DataMatrix, v1: &[f64], v2: &[f64]) -> Result<Vec<(f64, f64)>> {
    (0..m.samples())
        .map(|j| lstsq_2col(v1, v2, &m.values.column(j)))
        .collect()
}

const PITPROPS_CSV: &str = include_str!("../fixtures/pitprops.csv");

/// 13×13 pit props correlation matrix (Jeffers, 1967).
pub fn pitprops() -> CovarianceMatrix {
    let path = Path::new("fixtures/pitprops.csv");
    parse_numeric_rows(PITPROPS_CSV.as_bytes(), path, false)
        .and_then(|(_, rows)| Ok(CovarianceMatrix::new_unchecked(SymMatrix::from_rows(&rows)?)))
        .expect("bundled pit props fixture is a valid correlation matrix")
}

pub const PITPROPS_VARIABLES: [&str; 13] = [
    "topdiam", "length", "moist", "testsg", "ovensg", "ringtop", "ringbut", "bowmax", "bowdist",
    "whorls", "clear", "knots", "diaknot",
];
