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


//! `spca`: sparse PCA from the command line.

mod args;
mod bench;
mod commands;
mod input;
mod output;

use clap::Parser;
use std::process::ExitCode;

use crate::args::{Cli, Command};

/// How a command that produced output ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    /// Some solve hit the iteration cap; results were still written.
    NotConverged,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which the contract reserves for
    // unconverged runs.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Multi(a) => commands::multi(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Project2d(a) => commands::project2d(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match outcome {
        Ok(Status::Converged) => ExitCode::SUCCESS,
        Ok(Status::NotConverged) => {
            eprintln!("spca: warning: the iteration cap was reached; results are partial");
            ExitCode::from(2)
        }
        Err(msg) => {
            eprintln!("spca: error: {msg}");
            ExitCode::from(1)
        }
    }
}
