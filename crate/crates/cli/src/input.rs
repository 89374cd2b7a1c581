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


//! Turns input flags into a covariance matrix (and the data behind it).

use spca_core::data::{
    covariance_from_data, filter_bills, load_covariance_csv, load_data_csv, load_triplets,
    load_votes_csv, pitprops, zou_covariance, TripletDims,
};
use spca_core::{CovarianceMatrix, DataMatrix};

use crate::args::{Builtin, InputArgs, InputKind};

pub struct Loaded {
    pub sigma: CovarianceMatrix,
    /// The p×n matrix Σ was formed from, for non-covariance inputs.
    pub data: Option<DataMatrix>,
    /// Path or `builtin:<name>`, echoed in results.
    pub source: String,
}

pub fn load(a: &InputArgs) -> Result<Loaded, String> {
    if let Some(b) = a.builtin {
        let (sigma, name) = match b {
            Builtin::Zou => (zou_covariance(), "zou"),
            Builtin::Pitprops => (pitprops(), "pitprops"),
        };
        return Ok(Loaded {
            sigma,
            data: None,
            source: format!("builtin:{name}"),
        });
    }
    let path = a.input.as_ref().ok_or("missing --input")?;
    let source = path.display().to_string();
    let err = |e: spca_core::SpcaError| e.to_string();
    if a.input_kind == InputKind::Cov {
        return Ok(Loaded {
            sigma: load_covariance_csv(path).map_err(err)?,
            data: None,
            source,
        });
    }
    let mut data = match a.input_kind {
        InputKind::Data => load_data_csv(path).map_err(err)?,
        InputKind::Triplets => {
            let dims = if a.triplet_header {
                TripletDims::Header
            } else {
                match a.dims[..] {
                    [p, n] => TripletDims::Given { p, n },
                    _ => return Err("triplet input needs --triplet-header or --dims P,N".into()),
                }
            };
            load_triplets(path, dims).map_err(err)?
        }
        InputKind::Votes => load_votes_csv(path, a.labeled).map_err(err)?,
        InputKind::Cov => unreachable!(),
    };
    if let Some(m) = a.max_missing {
        data = filter_bills(&data, m);
        if data.variables() == 0 {
            return Err(format!("no rows of {source} have at most {m} missing entries"));
        }
    }
    let center = a.center.unwrap_or(a.input_kind != InputKind::Votes);
    let sigma = covariance_from_data(&data, center).map_err(err)?;
    Ok(Loaded {
        sigma,
        data: Some(data),
        source,
    })
}
