// Copyright 2026 The qreplica Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Run configuration and the tolerance table embedded in every report.

//! `qreplica`: demos, reports and the invariant suite.

mod commands;
mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qreplica_core::{linalg::set_max_dim, Error, Result};

use commands::StateInput;
use config::{RunConfig, Tolerances};

#[derive(Parser)]
#[command(name = "qreplica", version, about = "Simulate tape-programmed replicating automata")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run on a single thread (the default).
    #[arg(long, global = true, conflicts_with = "parallel")]
    deterministic: bool,
    /// Score search candidates on all cores.
    #[arg(long, global = true)]
    parallel: bool,
    /// Override a tolerance, as name=value. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Copy a basis state (or any state) through the orthogonal cloner.
    CloneDemo {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "state")]
        index: Option<usize>,
        /// State JSON file.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Apply conditional dynamics built from a gate-set file.
    CondDyn {
        #[arg(long)]
        blocks: PathBuf,
        #[arg(long)]
        control: usize,
        #[arg(long)]
        payload: Option<PathBuf>,
    },
    /// Run a program tape over a payload.
    TapeRun {
        /// `n=..;cells=..;head=..` or tape JSON.
        #[arg(long)]
        tape: String,
        #[arg(long)]
        gates: PathBuf,
        #[arg(long)]
        payload: Option<PathBuf>,
    },
    /// Search for a short gate word approximating a target unitary.
    Approx {
        #[arg(long)]
        target: PathBuf,
        /// Gate-set file; defaults to the golden-angle rotations.
        #[arg(long)]
        gates: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        max_len: usize,
    },
    /// Replicate an automaton for several generations.
    Replicate {
        /// Automaton file; defaults to the built-in demo.
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        generations: u64,
        /// Also write the final report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the built-in demo automaton.
    DemoAutomaton,
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        /// Emit JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<bool> {
    if let Ok(v) = std::env::var("QREPLICA_MAX_DIM") {
        let d = v.trim().parse().map_err(|e| Error::Input {
            line: 0,
            column: 0,
            message: format!("QREPLICA_MAX_DIM: {e}"),
        })?;
        set_max_dim(d);
    }
    let g = cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        tolerances: Tolerances::with_overrides(&g.tol)?,
        output: g.output,
        deterministic: g.deterministic || !g.parallel,
    };
    match cli.command {
        Command::CloneDemo { n, index, state } => {
            let input = match (&state, index) {
                (Some(p), _) => StateInput::File(p),
                (None, Some(k)) => StateInput::Index(k),
                (None, None) => StateInput::Index(0),
            };
            commands::clone_demo(&cfg, n, input)?;
        }
        Command::CondDyn {
            blocks,
            control,
            payload,
        } => commands::cond_dyn(&cfg, &blocks, control, payload.as_deref())?,
        Command::TapeRun {
            tape,
            gates,
            payload,
        } => commands::tape_run(&cfg, &tape, &gates, payload.as_deref())?,
        Command::Approx {
            target,
            gates,
            epsilon,
            max_len,
        } => commands::approx(&cfg, &target, gates.as_deref(), epsilon, max_len)?,
        Command::Replicate {
            automaton,
            generations,
            report,
        } => commands::replicate_cmd(&cfg, automaton.as_deref(), generations, report.as_ref())?,
        Command::DemoAutomaton => commands::demo_automaton(&cfg)?,
        Command::Verify { json } => {
            let report = verify::run(cfg.seed, &cfg.tolerances)?;
            let text = if json {
                config::to_json(&report)
            } else {
                report.table()
            };
            cfg.emit(&text)?;
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qreplica: {e}");
            ExitCode::from(if e.is_integrity() { 3 } else { 2 })
        }
    }
}
