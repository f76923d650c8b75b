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

//! Subcommand implementations. Each builds a serializable report.

use std::path::{Path, PathBuf};

use qreplica_core::approx::SearchConfig;
use qreplica_core::automaton::demo_registry;
use qreplica_core::tape::JOINT_CHECK_LIMIT;
use qreplica_core::{
    apply, apply_controlled, approximate_with, automaton_overlap, cloner, conditional_dynamics,
    default_gate_set, densify, fidelity, replicate, run_tape, run_tape_joint, tensor_state,
    Approximation, Automaton, AutomatonFile, Complex64, Error, GateSet, Operator,
    Result, StateVector, Tape,
};
use serde::Serialize;

use crate::config::{emit_to, read_json, to_json, to_json_line, RunConfig, Tolerances};

fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// A basis index or a state file.
pub enum StateInput<'a> {
    Index(usize),
    File(&'a Path),
}

#[derive(Serialize)]
struct CloneReport {
    command: &'static str,
    n: usize,
    input: StateVector,
    output: StateVector,
    ideal: StateVector,
    fidelity_to_ideal: f64,
    verdict: &'static str,
    tolerances: Tolerances,
}

pub fn clone_demo(cfg: &RunConfig, n: usize, input: StateInput) -> Result<()> {
    if n < 2 {
        return Err(Error::Contract(format!("clone demo needs n >= 2, got {n}")));
    }
    let psi = match input {
        StateInput::Index(k) => StateVector::basis(n, k)?,
        StateInput::File(p) => read_json(p)?,
    };
    if psi.dim() != n {
        return Err(Error::Contract(format!(
            "input state has dim {}, expected {n}",
            psi.dim()
        )));
    }
    let blank = StateVector::basis(n, qreplica_core::basis_ops::BLANK)?;
    let output = apply_controlled(&cloner(n)?, &tensor_state(&psi, &blank)?)?;
    let ideal = tensor_state(&psi, &psi)?;
    let f = fidelity(&output, &ideal)?;
    let verdict = if f >= cfg.tolerances.clone_verdict {
        "cloned"
    } else {
        "entangled"
    };
    cfg.emit(&to_json(&CloneReport {
        command: "clone-demo",
        n,
        input: psi,
        output,
        ideal,
        fidelity_to_ideal: f,
        verdict,
        tolerances: cfg.tolerances.clone(),
    }))
}

#[derive(Serialize)]
struct CondDynReport {
    command: &'static str,
    control_dim: usize,
    target_dim: usize,
    control: usize,
    payload: StateVector,
    output: StateVector,
    expected: StateVector,
    max_diff_to_expected: f64,
    dense_cross_check: Option<f64>,
    tolerances: Tolerances,
}

pub fn cond_dyn(
    cfg: &RunConfig,
    blocks: &Path,
    control: usize,
    payload: Option<&Path>,
) -> Result<()> {
    let g: GateSet = read_json(blocks)?;
    let d = conditional_dynamics(g.gates().to_vec())?;
    let payload = match payload {
        Some(p) => read_json(p)?,
        None => StateVector::basis(d.target_dim(), 0)?,
    };
    let control_state = StateVector::basis(d.control_dim(), control)?;
    let joint = tensor_state(&control_state, &payload)?;
    let output = apply_controlled(&d, &joint)?;
    let expected = tensor_state(&control_state, &apply(d.block(control), &payload)?)?;
    let diff = |a: &StateVector, b: &StateVector| {
        a.amps()
            .iter()
            .zip(b.amps())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    let dense_cross_check = if d.joint_dim() <= JOINT_CHECK_LIMIT {
        Some(diff(&apply(&densify(&d)?, &joint)?, &output))
    } else {
        None
    };
    cfg.emit(&to_json(&CondDynReport {
        command: "cond-dyn",
        control_dim: d.control_dim(),
        target_dim: d.target_dim(),
        control,
        max_diff_to_expected: diff(&output, &expected),
        payload,
        output,
        expected,
        dense_cross_check,
        tolerances: cfg.tolerances.clone(),
    }))
}

/// Accepts the `n=…;cells=…;head=…` text form or its JSON object form.
pub fn parse_tape(text: &str) -> Result<Tape> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        Ok(serde_json::from_str(trimmed)?)
    } else {
        trimmed.parse()
    }
}

#[derive(Serialize)]
struct JointCheck {
    performed: bool,
    joint_dim: Option<u128>,
    tape_return_fidelity: Option<f64>,
    max_payload_diff: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct TapeRunReport {
    command: &'static str,
    tape: String,
    gate_labels: Vec<String>,
    payload: StateVector,
    output: StateVector,
    joint_check: JointCheck,
    tolerances: Tolerances,
}

pub fn tape_run(cfg: &RunConfig, tape: &str, gates: &Path, payload: Option<&Path>) -> Result<()> {
    let tape = parse_tape(tape)?;
    let g: GateSet = read_json(gates)?;
    let payload = match payload {
        Some(p) => read_json(p)?,
        None => StateVector::basis(g.dim(), 0)?,
    };
    let output = run_tape(&tape, g.gates(), &payload)?;
    let joint_check = match run_tape_joint(&tape, g.gates(), &payload) {
        Ok(j) => JointCheck {
            performed: true,
            joint_dim: Some(j.joint.dim() as u128),
            tape_return_fidelity: Some(j.tape_return_fidelity),
            max_payload_diff: Some(
                j.payload
                    .amps()
                    .iter()
                    .zip(output.amps())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max),
            ),
            note: None,
        },
        Err(Error::Capacity { requested, limit, .. }) => JointCheck {
            performed: false,
            joint_dim: Some(requested),
            tape_return_fidelity: None,
            max_payload_diff: None,
            note: Some(format!(
                "product-form verification only: joint space {requested} exceeds {limit}"
            )),
        },
        Err(e) => return Err(e),
    };
    cfg.emit(&to_json(&TapeRunReport {
        command: "tape-run",
        tape: tape.to_string(),
        gate_labels: g.labels().to_vec(),
        payload,
        output,
        joint_check,
        tolerances: cfg.tolerances.clone(),
    }))
}

#[derive(Serialize)]
struct ApproxReport {
    command: &'static str,
    found: bool,
    epsilon: f64,
    max_len: usize,
    sequence: Vec<usize>,
    labels: Vec<String>,
    achieved_distance: f64,
    expansions: usize,
    target: Operator,
    tolerances: Tolerances,
}

pub fn approx(
    cfg: &RunConfig,
    target: &Path,
    gates: Option<&Path>,
    epsilon: f64,
    max_len: usize,
) -> Result<()> {
    let target: Operator = read_json(target)?;
    let g = match gates {
        Some(p) => read_json(p)?,
        None => default_gate_set(),
    };
    let search = SearchConfig {
        net_radius: cfg.tolerances.net_radius,
        parallel: cfg.parallel(),
    };
    let outcome = approximate_with(&target, &g, epsilon, max_len, &search)?;
    let found = matches!(outcome, Approximation::Found(_));
    let best = outcome.into_best();
    cfg.emit(&to_json(&ApproxReport {
        command: "approx",
        found,
        epsilon,
        max_len,
        labels: best.sequence.iter().map(|&k| g.labels()[k].clone()).collect(),
        sequence: best.sequence,
        achieved_distance: best.achieved_distance,
        expansions: best.expansions,
        target: best.target,
        tolerances: cfg.tolerances.clone(),
    }))
}

#[derive(Serialize)]
struct GenerationRecord {
    generation: u64,
    tape: String,
    tape_identical_to_origin: bool,
    payload_fidelity_to_parent: f64,
    payload_fidelity_to_origin: f64,
    overlap_with_parent: [f64; 2],
    /// Overlap with an automaton whose tape differs in one cell.
    mutant_overlap: Option<[f64; 2]>,
    mutant_payload_fidelity: Option<f64>,
    tolerances: Tolerances,
}

/// A decodable tape differing from `t` in its last cell.
fn mutant_of(a: &Automaton) -> Result<Option<Automaton>> {
    let t = a.tape();
    if t.len() < 2 {
        return Ok(None);
    }
    let mut cells = t.cells().to_vec();
    let last = cells.len() - 1;
    cells[last] = if cells[last] == 0 { 1 } else { 0 };
    let tape = Tape::new(t.alphabet_size(), cells, 0)?;
    let segments = qreplica_core::automaton::decode_segments(&tape)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("m{i}"), s))
        .collect();
    let reg = qreplica_core::ProgramRegistry::new(a.registry().gate_set().clone(), segments)?;
    Automaton::from_tape(tape, reg, a.generation()).map(Some)
}

pub fn replicate_cmd(
    cfg: &RunConfig,
    automaton: Option<&Path>,
    generations: u64,
    report: Option<&PathBuf>,
) -> Result<()> {
    let origin = match automaton {
        Some(p) => read_json::<AutomatonFile>(p)?.into_automaton()?,
        None => Automaton::new(demo_registry()?)?,
    };
    let mut lines = String::new();
    let mut current = origin.clone();
    for _ in 0..generations {
        let (parent, child) = replicate(&current)?;
        let mutant = mutant_of(&child)?;
        let record = GenerationRecord {
            generation: child.generation(),
            tape: child.tape().to_string(),
            tape_identical_to_origin: child.tape() == origin.tape(),
            payload_fidelity_to_parent: fidelity(child.payload(), parent.payload())?,
            payload_fidelity_to_origin: fidelity(child.payload(), origin.payload())?,
            overlap_with_parent: complex(automaton_overlap(&child, &parent)?),
            mutant_overlap: mutant
                .as_ref()
                .map(|m| automaton_overlap(&child, m).map(complex))
                .transpose()?,
            mutant_payload_fidelity: mutant
                .as_ref()
                .map(|m| fidelity(child.payload(), m.payload()))
                .transpose()?,
            tolerances: cfg.tolerances.clone(),
        };
        lines.push_str(&to_json_line(&record));
        current = child;
    }
    let target = report.map(PathBuf::as_path).or(cfg.output.as_deref());
    emit_to(target, &lines)
}

/// Writes the demo automaton in file form.
pub fn demo_automaton(cfg: &RunConfig) -> Result<()> {
    let a = Automaton::new(demo_registry()?)?;
    cfg.emit(&to_json(&AutomatonFile::from_automaton(&a)))
}
