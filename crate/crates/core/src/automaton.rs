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

//! Self-replicating automata: a program tape plus the payload it translates to.
//!
//! # Tape layout
//!
//! Symbol `0` is a separator and every program segment is preceded by one:
//!
//! ```text
//! 0 c₁ c₂ … 0 d₁ d₂ … 0 u₁ …
//! ```
//!
//! Segment symbols are drawn from `1..n`. Gate `0` of the registry's gate set
//! must be the identity, so separators act trivially when the whole tape is
//! run as a program. Segment names are not written on the tape; they follow
//! the registry's order.
//!
//! # The scattering rule
//!
//! A program state `|Ψ_G⟩` is the tape state of one segment (with its
//! separator). [`scattering_apply`] decodes it and applies the product of the
//! segment's gates to the data state, leaving the program register untouched.
//! Decoding only succeeds on basis tape states; superposed program registers
//! are rejected rather than interpreted.

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{word_unitary, GateSet};
use crate::basis_ops::{densify, ControlledOperator};
use crate::error::{Error, Result};
use crate::linalg::{apply, fidelity, Operator, StateVector, UNITARY_TOL};
use crate::tape::{decode_tape_state, replicate_tape, run_tape, tape_overlap, tape_to_state, Tape};

/// Reserved separator symbol.
pub const SEPARATOR: usize = 0;

/// Agreement required between a stored payload and a fresh translation.
pub const PAYLOAD_TOL: f64 = 1e-9;

/// Named programs stored as tape segments over a shared gate set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegistryWire", into = "RegistryWire")]
pub struct ProgramRegistry {
    gate_set: GateSet,
    segments: IndexMap<String, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RegistryWire {
    gate_set: GateSet,
    segments: IndexMap<String, Vec<usize>>,
}

impl TryFrom<RegistryWire> for ProgramRegistry {
    type Error = Error;

    fn try_from(w: RegistryWire) -> Result<Self> {
        ProgramRegistry::new(w.gate_set, w.segments)
    }
}

impl From<ProgramRegistry> for RegistryWire {
    fn from(r: ProgramRegistry) -> Self {
        RegistryWire {
            gate_set: r.gate_set,
            segments: r.segments,
        }
    }
}

impl ProgramRegistry {
    pub fn new(gate_set: GateSet, segments: IndexMap<String, Vec<usize>>) -> Result<Self> {
        let n = gate_set.n();
        if n < 2 {
            return Err(Error::contract(
                "a program gate set needs the separator plus at least one gate",
            ));
        }
        let id = Operator::identity(gate_set.dim())?;
        if gate_set.gate(SEPARATOR).max_abs_diff(&id) > UNITARY_TOL {
            return Err(Error::contract("gate 0 is the separator and must be the identity"));
        }
        if segments.is_empty() {
            return Err(Error::contract("registry needs at least one program"));
        }
        for (name, seg) in &segments {
            if let Some(&bad) = seg.iter().find(|&&k| k == SEPARATOR || k >= n) {
                return Err(Error::contract(format!(
                    "program {name:?} uses symbol {bad}; segments take symbols 1..{n}"
                )));
            }
        }
        Ok(ProgramRegistry { gate_set, segments })
    }

    pub fn gate_set(&self) -> &GateSet {
        &self.gate_set
    }

    pub fn segments(&self) -> &IndexMap<String, Vec<usize>> {
        &self.segments
    }

    pub fn segment(&self, name: &str) -> Option<&[usize]> {
        self.segments.get(name).map(Vec::as_slice)
    }

    /// Dimension of the data register the programs act on.
    pub fn data_dim(&self) -> usize {
        self.gate_set.dim()
    }

    /// The automaton tape holding every program in registry order.
    pub fn encode_tape(&self) -> Tape {
        let cells = self
            .segments
            .values()
            .flat_map(|seg| std::iter::once(SEPARATOR).chain(seg.iter().copied()))
            .collect();
        Tape::new(self.gate_set.n(), cells, 0).expect("registry symbols are valid")
    }

    /// `|Ψ_G⟩` for the named program: the tape state of its segment.
    pub fn program_state(&self, name: &str) -> Result<StateVector> {
        let seg = self
            .segment(name)
            .ok_or_else(|| Error::contract(format!("no program named {name:?}")))?;
        segment_state(self.gate_set.n(), seg)
    }

    /// The operator a program implements.
    pub fn program_unitary(&self, name: &str) -> Result<Operator> {
        let seg = self
            .segment(name)
            .ok_or_else(|| Error::contract(format!("no program named {name:?}")))?;
        word_unitary(seg, &self.gate_set)
    }

    /// Rebuilds a registry from a tape, naming segments after `self`.
    pub fn decode_like(&self, tape: &Tape) -> Result<ProgramRegistry> {
        let segs = decode_segments(tape)?;
        if segs.len() != self.segments.len() {
            return Err(Error::CorruptedHeredity(format!(
                "tape holds {} programs, expected {}",
                segs.len(),
                self.segments.len()
            )));
        }
        let segments = self.segments.keys().cloned().zip(segs).collect();
        ProgramRegistry::new(self.gate_set.clone(), segments)
    }
}

/// Tape state `|0 s₁ s₂ …⟩` of a single segment.
pub fn segment_state(alphabet_size: usize, segment: &[usize]) -> Result<StateVector> {
    let mut cells = vec![SEPARATOR];
    cells.extend_from_slice(segment);
    tape_to_state(&Tape::new(alphabet_size, cells, 0)?)
}

/// Splits an automaton tape into its segments.
pub fn decode_segments(tape: &Tape) -> Result<Vec<Vec<usize>>> {
    let cells = tape.cells();
    if cells[0] != SEPARATOR {
        return Err(Error::UndecodableProgram(format!(
            "tape must open with separator {SEPARATOR}, found {}",
            cells[0]
        )));
    }
    let mut segs: Vec<Vec<usize>> = Vec::new();
    for &k in cells {
        if k == SEPARATOR {
            segs.push(Vec::new());
        } else {
            segs.last_mut().expect("opened above").push(k);
        }
    }
    Ok(segs)
}

/// Gates realizing a conditional dynamics operator one branch at a time.
///
/// Branch `l` contributes `|l⟩⟨l| ⊗ U_l + Σ_{l'≠l} |l'⟩⟨l'| ⊗ I`; branches
/// with `U_l = I` are skipped. The branches act on orthogonal blocks, so their
/// product in any order is the full operator.
pub fn branch_gates(c: &ControlledOperator) -> Result<Vec<Operator>> {
    let m = c.target_dim();
    let id = Operator::identity(m)?;
    let mut out = Vec::new();
    for (l, block) in c.blocks().iter().enumerate() {
        if block.max_abs_diff(&id) == 0.0 {
            continue;
        }
        let mut blocks = vec![id.clone(); c.control_dim()];
        blocks[l] = block.clone();
        out.push(densify(&crate::basis_ops::conditional_dynamics(blocks)?)?);
    }
    Ok(out)
}

/// Incremental construction of a registry over one data dimension.
#[derive(Clone, Debug)]
pub struct RegistryBuilder {
    dim: usize,
    gates: Vec<Operator>,
    labels: Vec<String>,
    segments: IndexMap<String, Vec<usize>>,
}

impl RegistryBuilder {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(RegistryBuilder {
            dim,
            gates: vec![Operator::identity(dim)?],
            labels: vec!["sep".into()],
            segments: IndexMap::new(),
        })
    }

    fn symbol_for(&mut self, gate: &Operator, label: String) -> Result<usize> {
        if gate.dim() != self.dim {
            return Err(Error::contract(format!(
                "gate {label} has dim {}, registry data dim is {}",
                gate.dim(),
                self.dim
            )));
        }
        if let Some(i) = self.gates.iter().skip(1).position(|g| g == gate) {
            return Ok(i + 1);
        }
        self.gates.push(gate.clone());
        self.labels.push(label);
        Ok(self.gates.len() - 1)
    }

    /// Adds a program applying `gates` in order (first element first).
    pub fn program(mut self, name: &str, gates: &[Operator]) -> Result<Self> {
        if self.segments.contains_key(name) {
            return Err(Error::contract(format!("program {name:?} defined twice")));
        }
        let seg = gates
            .iter()
            .enumerate()
            .map(|(i, g)| self.symbol_for(g, format!("{name}.{i}")))
            .collect::<Result<Vec<_>>>()?;
        self.segments.insert(name.to_string(), seg);
        Ok(self)
    }

    /// Adds a program equal to a conditional dynamics operator.
    pub fn controlled_program(self, name: &str, c: &ControlledOperator) -> Result<Self> {
        let gates = branch_gates(c)?;
        self.program(name, &gates)
    }

    pub fn build(self) -> Result<ProgramRegistry> {
        ProgramRegistry::new(GateSet::new(self.gates, self.labels)?, self.segments)
    }
}

/// The fixed rule `|Ψ_G⟩ ⊗ |ψ⟩ → |Ψ_G⟩ ⊗ G|ψ⟩`, returning `G|ψ⟩`.
pub fn scattering_apply(
    program_state: &StateVector,
    psi: &StateVector,
    registry: &ProgramRegistry,
) -> Result<StateVector> {
    let n = registry.gate_set.n();
    let tape = decode_tape_state(program_state, n)?;
    let mut segs = decode_segments(&tape)?;
    if segs.len() != 1 {
        return Err(Error::UndecodableProgram(format!(
            "program state holds {} segments, expected one",
            segs.len()
        )));
    }
    if psi.dim() != registry.data_dim() {
        return Err(Error::contract(format!(
            "data state dim {} does not match program dim {}",
            psi.dim(),
            registry.data_dim()
        )));
    }
    let g = word_unitary(&segs.pop().expect("one segment"), &registry.gate_set)?;
    apply(&g, psi)
}

/// `Φ_T`: the tape run as a program on the blank data state `|0⟩`.
pub fn translate(tape: &Tape, registry: &ProgramRegistry) -> Result<StateVector> {
    if tape.alphabet_size() != registry.gate_set.n() {
        return Err(Error::contract(format!(
            "tape alphabet {} does not match registry alphabet {}",
            tape.alphabet_size(),
            registry.gate_set.n()
        )));
    }
    decode_segments(tape)?;
    let blank = StateVector::basis(registry.data_dim(), 0)?;
    run_tape(&tape.rewound(), registry.gate_set.gates(), &blank)
}

/// Lifecycle of an automaton around a replication cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Replicating,
    Translated,
}

/// `|T⟩ ⊗ |Φ_T⟩` together with the programs the tape encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Automaton {
    tape: Tape,
    payload: StateVector,
    registry: ProgramRegistry,
    generation: u64,
    phase: Phase,
}

impl Automaton {
    /// A generation-0 automaton whose tape encodes `registry`.
    pub fn new(registry: ProgramRegistry) -> Result<Self> {
        let tape = registry.encode_tape();
        Self::from_tape(tape, registry, 0)
    }

    /// An automaton with an explicit tape, which must decode to `registry`.
    pub fn from_tape(tape: Tape, registry: ProgramRegistry, generation: u64) -> Result<Self> {
        let decoded = registry.decode_like(&tape)?;
        if decoded.segments != registry.segments {
            return Err(Error::CorruptedHeredity(
                "tape does not encode the registry's programs".into(),
            ));
        }
        let payload = translate(&tape, &registry)?;
        Ok(Automaton {
            tape,
            payload,
            registry,
            generation,
            phase: Phase::Translated,
        })
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    pub fn payload(&self) -> &StateVector {
        &self.payload
    }

    pub fn registry(&self) -> &ProgramRegistry {
        &self.registry
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Checks that a translated automaton's payload matches its tape.
    pub fn check_translated(&self) -> Result<f64> {
        let fresh = translate(&self.tape, &self.registry)?;
        let f = fidelity(&fresh, &self.payload)?;
        if self.phase == Phase::Translated && f < 1.0 - PAYLOAD_TOL {
            return Err(Error::CorruptedHeredity(format!(
                "payload fidelity to its own translation is {f}"
            )));
        }
        Ok(f)
    }
}

/// One replication cycle. Returns `(parent, child)`.
///
/// 1. The tape is copied cell by cell through the basis cloner.
/// 2. The copy is translated with the parent's gate set into the child's
///    payload; the child's registry is then decoded from its own tape and
///    must agree with the parent's.
pub fn replicate(parent: &Automaton) -> Result<(Automaton, Automaton)> {
    replicate_with(parent, replicate_tape)
}

pub(crate) fn replicate_with(
    parent: &Automaton,
    copy_tape: impl Fn(&Tape) -> Result<(Tape, Tape)>,
) -> Result<(Automaton, Automaton)> {
    if parent.phase != Phase::Translated {
        return Err(Error::contract("parent must be in the translated phase"));
    }
    let mut working = parent.clone();
    working.phase = Phase::Replicating;

    let (parent_tape, child_tape) = copy_tape(&working.tape)?;
    let heredity = |e: Error| match e {
        Error::UndecodableProgram(m) => Error::CorruptedHeredity(m),
        other => other,
    };
    let payload = translate(&child_tape, &working.registry).map_err(heredity)?;
    let child_registry = working.registry.decode_like(&child_tape).map_err(heredity)?;
    if child_registry != working.registry {
        return Err(Error::CorruptedHeredity(
            "child's programs differ from the parent's".into(),
        ));
    }

    working.tape = parent_tape;
    working.phase = Phase::Translated;
    let child = Automaton {
        tape: child_tape,
        payload,
        registry: child_registry,
        generation: parent.generation + 1,
        phase: Phase::Translated,
    };
    Ok((working, child))
}

/// `⟨T_a|T_b⟩ · ⟨Φ_a|Φ_b⟩`.
pub fn automaton_overlap(a: &Automaton, b: &Automaton) -> Result<Complex64> {
    let tapes = tape_overlap(&a.tape, &b.tape)?;
    let payloads = a.payload.inner(&b.payload)?;
    Ok(payloads * tapes)
}

/// File form of an automaton.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub tape: String,
    pub registry: ProgramRegistry,
    #[serde(default)]
    pub generation: u64,
}

impl AutomatonFile {
    pub fn from_automaton(a: &Automaton) -> Self {
        AutomatonFile {
            tape: a.tape.to_string(),
            registry: a.registry.clone(),
            generation: a.generation,
        }
    }

    pub fn into_automaton(self) -> Result<Automaton> {
        let tape: Tape = self.tape.parse()?;
        Automaton::from_tape(tape, self.registry, self.generation)
    }
}

/// A two-qubit demonstration registry on data space `C² ⊗ C²`.
///
/// * `C`: the basis cloner on the two qubits.
/// * `D`: conditional dynamics with blocks `(H, S)`.
/// * `prep`: a Hadamard on the first qubit.
pub fn demo_registry() -> Result<ProgramRegistry> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let hadamard = Operator::new(2, vec![h.into(), h.into(), h.into(), (-h).into()])?;
    let phase_s = Operator::new(2, vec![1.0.into(), z, z, Complex64::new(0.0, 1.0)])?;
    let d = crate::basis_ops::conditional_dynamics(vec![hadamard.clone(), phase_s])?;
    let prep = crate::linalg::tensor_op(&hadamard, &Operator::identity(2)?)?;
    RegistryBuilder::new(4)?
        .controlled_program("C", &crate::basis_ops::cloner(2)?)?
        .controlled_program("D", &d)?
        .program("prep", &[prep])?
        .build()
}
