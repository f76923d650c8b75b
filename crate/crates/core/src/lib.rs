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

//! Dense state-vector simulation of conditional quantum dynamics and of
//! self-replicating automata built from it.
//!
//! * [`linalg`]: states, operators, tensor products, fidelity and the
//!   phase-invariant operator distance.
//! * [`basis_ops`]: cyclic shifts, the basis cloner `Σ_l |l⟩⟨l| ⊗ U^l` and
//!   general conditional dynamics `Σ_l |l⟩⟨l| ⊗ U_l` in block form.
//! * [`tape`]: program tapes as orthogonal basis states, tape runs and
//!   cloner-certified tape replication.
//! * [`approx`]: breadth-first approximation of unitaries by gate words.
//! * [`automaton`]: program registries, the scattering rule, translation and
//!   the replication cycle.

pub mod approx;
pub mod automaton;
pub mod basis_ops;
pub mod error;
pub mod linalg;
pub mod random;
pub mod tape;

pub use approx::{
    approximate, approximate_with, default_gate_set, sequence_unitary, word_unitary,
    ApproxResult, Approximation, GateSet, SearchConfig,
};
pub use automaton::{
    automaton_overlap, replicate, scattering_apply, translate, Automaton, AutomatonFile, Phase,
    ProgramRegistry, RegistryBuilder,
};
pub use basis_ops::{
    apply_controlled, cloner, conditional_dynamics, cyclic_shift, densify, shift_power,
    ControlledOperator,
};
pub use error::{Error, Result};
pub use linalg::{
    apply, fidelity, phase_invariant_distance, tensor_op, tensor_state, Operator, StateVector,
    NORM_TOL, UNITARY_TOL,
};
pub use num_complex::Complex64;
pub use tape::{replicate_tape, run_tape, run_tape_joint, shift_tape, tape_to_state, Tape};
