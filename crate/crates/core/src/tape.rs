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

//! Classical program tapes and their basis-state encoding.
//!
//! A tape `k_s … k_1` over an alphabet of size `n` is the basis vector of
//! `(Cⁿ)^{⊗s}` at index `Σ k_i · n^{i-1}`: cell 1 is the least significant
//! digit and the first cell read. Distinct tapes are therefore orthogonal.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis_ops::{apply_controlled, cloner, conditional_dynamics, ControlledOperator, BLANK};
use crate::error::{Error, Result};
use crate::linalg::{
    check_capacity, fidelity, matvec_into, tensor_op, tensor_state, Operator, StateVector,
};

/// Largest joint space (tape ⊗ payload) that [`run_tape_joint`] materializes.
pub const JOINT_CHECK_LIMIT: usize = 1 << 10;

/// Minimum fidelity a per-cell clone must reach to be committed.
pub const REPLICATION_FIDELITY: f64 = 1.0 - 1e-9;

/// Probability mass a state must put on one basis vector to decode as a tape.
pub const DECODE_TOL: f64 = 1e-9;

/// A finite cyclic tape with a read head.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TapeWire", into = "TapeWire")]
pub struct Tape {
    alphabet_size: usize,
    cells: Vec<usize>,
    head: usize,
}

impl Tape {
    /// `cells[0]` is cell 1, the first one read.
    pub fn new(alphabet_size: usize, cells: Vec<usize>, head: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::contract("tape alphabet must have at least one symbol"));
        }
        if cells.is_empty() {
            return Err(Error::contract("tape must have at least one cell"));
        }
        if let Some((i, &k)) = cells.iter().enumerate().find(|(_, &k)| k >= alphabet_size) {
            return Err(Error::contract(format!(
                "cell {} holds symbol {k}, alphabet size is {alphabet_size}",
                i + 1
            )));
        }
        if head >= cells.len() {
            return Err(Error::contract(format!(
                "head {head} outside tape of length {}",
                cells.len()
            )));
        }
        Ok(Tape {
            alphabet_size,
            cells,
            head,
        })
    }

    /// A tape of `len` blank cells.
    pub fn blank(alphabet_size: usize, len: usize) -> Result<Self> {
        Self::new(alphabet_size, vec![BLANK; len], 0)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn symbol_at_head(&self) -> usize {
        self.cells[self.head]
    }

    /// Same cells, head moved back to cell 1.
    pub fn rewound(&self) -> Tape {
        Tape {
            head: 0,
            ..self.clone()
        }
    }

    /// Dimension `n^s` of the tape's state space.
    pub fn state_dim(&self) -> Result<usize> {
        let dim = (self.alphabet_size as u128).checked_pow(self.cells.len() as u32);
        check_capacity("tape state", dim.unwrap_or(u128::MAX))
    }

    /// Basis index of the tape state; caller must have checked capacity.
    fn basis_index(&self) -> usize {
        self.cells
            .iter()
            .rev()
            .fold(0, |acc, &k| acc * self.alphabet_size + k)
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "n={};cells={};head={}",
            self.alphabet_size,
            cells.join(","),
            self.head
        )
    }
}

impl FromStr for Tape {
    type Err = Error;

    /// Parses `n=<int>;cells=<int>,<int>,…;head=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |column: usize, message: String| Error::Input {
            line: 1,
            column,
            message,
        };
        let (mut n, mut cells, mut head) = (None, None, None);
        let mut offset = 0;
        for part in s.trim().split(';') {
            let column = offset + 1;
            offset += part.len() + 1;
            let Some((key, value)) = part.split_once('=') else {
                return Err(bad(column, format!("expected key=value, got {part:?}")));
            };
            let int = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|e| bad(column, format!("{key}: {e}")))
            };
            match key.trim() {
                "n" => n = Some(int(value)?),
                "head" => head = Some(int(value)?),
                "cells" => {
                    cells = Some(
                        value
                            .split(',')
                            .map(int)
                            .collect::<Result<Vec<usize>>>()?,
                    )
                }
                other => return Err(bad(column, format!("unknown tape field {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| bad(1, "missing n".into()))?;
        let cells = cells.ok_or_else(|| bad(1, "missing cells".into()))?;
        Tape::new(n, cells, head.unwrap_or(0))
    }
}

#[derive(Serialize, Deserialize)]
struct TapeWire {
    n: usize,
    cells: Vec<usize>,
    #[serde(default)]
    head: usize,
}

impl TryFrom<TapeWire> for Tape {
    type Error = Error;

    fn try_from(w: TapeWire) -> Result<Self> {
        Tape::new(w.n, w.cells, w.head)
    }
}

impl From<Tape> for TapeWire {
    fn from(t: Tape) -> Self {
        TapeWire {
            n: t.alphabet_size,
            cells: t.cells,
            head: t.head,
        }
    }
}

/// The basis state `|k_s … k_1⟩`.
pub fn tape_to_state(t: &Tape) -> Result<StateVector> {
    let dim = t.state_dim()?;
    StateVector::basis(dim, t.basis_index())
}

/// Reads a tape back from its state. Anything that is not (within
/// [`DECODE_TOL`]) a single basis vector of some `(Cⁿ)^{⊗s}` is rejected.
pub fn decode_tape_state(state: &StateVector, alphabet_size: usize) -> Result<Tape> {
    if alphabet_size < 2 {
        return Err(Error::UndecodableProgram(
            "tape states need an alphabet of at least two symbols".into(),
        ));
    }
    let mut len = 0;
    let mut rest = state.dim();
    while rest > 1 && rest.is_multiple_of(alphabet_size) {
        rest /= alphabet_size;
        len += 1;
    }
    if rest != 1 || len == 0 {
        return Err(Error::UndecodableProgram(format!(
            "dimension {} is not a power of {alphabet_size}",
            state.dim()
        )));
    }
    let (mut index, p) = state.dominant_basis();
    if p < 1.0 - DECODE_TOL {
        return Err(Error::UndecodableProgram(format!(
            "state is not a basis tape state (largest weight {p})"
        )));
    }
    let mut cells = Vec::with_capacity(len);
    for _ in 0..len {
        cells.push(index % alphabet_size);
        index /= alphabet_size;
    }
    Tape::new(alphabet_size, cells, 0)
}

/// `⟨a|b⟩` of two tape states, computed from the cells. Tapes of different
/// shape live in different spaces and are rejected.
pub fn tape_overlap(a: &Tape, b: &Tape) -> Result<f64> {
    if a.alphabet_size != b.alphabet_size || a.len() != b.len() {
        return Err(Error::contract(format!(
            "tape spaces differ: {}^{} vs {}^{}",
            a.alphabet_size,
            a.len(),
            b.alphabet_size,
            b.len()
        )));
    }
    Ok(if a.cells == b.cells { 1.0 } else { 0.0 })
}

/// Advances the head one cell, wrapping at the end.
pub fn shift_tape(t: &Tape) -> Tape {
    Tape {
        head: (t.head + 1) % t.len(),
        ..t.clone()
    }
}

fn check_gates(t: &Tape, gates: &[Operator], payload_dim: usize) -> Result<()> {
    if gates.len() != t.alphabet_size {
        return Err(Error::contract(format!(
            "tape alphabet has {} symbols but {} gates were given",
            t.alphabet_size,
            gates.len()
        )));
    }
    for (l, g) in gates.iter().enumerate() {
        if g.dim() != payload_dim {
            return Err(Error::contract(format!(
                "gate {l} has dim {}, payload has dim {payload_dim}",
                g.dim()
            )));
        }
        g.ensure_unitary(&format!("gate {l}"))?;
    }
    if t.head != 0 {
        return Err(Error::contract(format!(
            "tape run must start at cell 1, head is at cell {}",
            t.head + 1
        )));
    }
    Ok(())
}

/// `U_{k_s} ⋯ U_{k_1} · payload`: cell 1's gate acts first.
pub fn run_tape(t: &Tape, gates: &[Operator], payload: &StateVector) -> Result<StateVector> {
    check_gates(t, gates, payload.dim())?;
    let m = payload.dim();
    let mut cur = payload.amps().to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); m];
    for &k in &t.cells {
        matvec_into(m, gates[k].entries(), &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    StateVector::new(cur)
}

/// Outcome of evolving `|T⟩ ⊗ payload` on the full joint space.
#[derive(Clone, Debug)]
pub struct JointEvolution {
    /// Final joint state.
    pub joint: StateVector,
    /// Probability that the tape register is back in its initial state.
    pub tape_return_fidelity: f64,
    /// Payload factor conditioned on the initial tape state.
    pub payload: StateVector,
}

/// Joint-space evolution on `|T⟩ ⊗ payload`, applying conditional dynamics
/// and a unitary tape rotation `s` times.
///
/// The register reads its most significant cell. Each step rotates the tape
/// contents down one cell (cell `r` reaches the read position on step `r`)
/// and then applies `Σ_l |l⟩⟨l| ⊗ (I ⊗ U_l)` with the read cell as control.
/// After `s` rotations the tape register has made a full cycle.
pub fn run_tape_joint(
    t: &Tape,
    gates: &[Operator],
    payload: &StateVector,
) -> Result<JointEvolution> {
    check_gates(t, gates, payload.dim())?;
    let (n, s, m) = (t.alphabet_size, t.len(), payload.dim());
    let tape_dim = t.state_dim()?;
    let joint_dim = tape_dim as u128 * m as u128;
    if joint_dim > JOINT_CHECK_LIMIT as u128 {
        return Err(Error::Capacity {
            what: "joint tape evolution",
            requested: joint_dim,
            limit: JOINT_CHECK_LIMIT,
        });
    }
    let rest = Operator::identity(tape_dim / n)?;
    let blocks = gates
        .iter()
        .map(|g| tensor_op(&rest, g))
        .collect::<Result<Vec<_>>>()?;
    let dynamics: ControlledOperator = conditional_dynamics(blocks)?;

    let tape_state = tape_to_state(t)?;
    let mut joint = tensor_state(&tape_state, payload)?;
    for _ in 0..s {
        joint = rotate_tape_register(&joint, n, s, m);
        joint = apply_controlled(&dynamics, &joint)?;
    }

    let start = t.basis_index() * m;
    let slice = joint.amps()[start..start + m].to_vec();
    let tape_return_fidelity = slice.iter().map(|a| a.norm_sqr()).sum::<f64>();
    let payload = StateVector::normalized(slice)?;
    Ok(JointEvolution {
        joint,
        tape_return_fidelity,
        payload,
    })
}

/// Permutes the tape register: digit `i+1` moves to digit `i`, digit 0 wraps
/// to the most significant position.
fn rotate_tape_register(joint: &StateVector, n: usize, s: usize, m: usize) -> StateVector {
    let top = n.pow(s as u32 - 1);
    let mut out = vec![Complex64::new(0.0, 0.0); joint.dim()];
    for (t, chunk) in joint.amps().chunks_exact(m).enumerate() {
        let rotated = t / n + (t % n) * top;
        out[rotated * m..(rotated + 1) * m].copy_from_slice(chunk);
    }
    StateVector::new(out).expect("permutation preserves the norm")
}

/// Copies a tape cell by cell through the basis cloner.
///
/// Returns `(parent, child)`; the parent comes back after a full cycle of
/// shifts, and every child cell is read off a certified clone.
pub fn replicate_tape(t: &Tape) -> Result<(Tape, Tape)> {
    replicate_tape_with(t, &cloner(t.alphabet_size)?)
}

pub(crate) fn replicate_tape_with(t: &Tape, cloner: &ControlledOperator) -> Result<(Tape, Tape)> {
    let n = t.alphabet_size;
    if cloner.control_dim() != n || cloner.target_dim() != n {
        return Err(Error::contract("cloner dimension does not match tape alphabet"));
    }
    let blank = StateVector::basis(n, BLANK)?;
    let mut parent = t.clone();
    let mut child = Tape {
        cells: vec![BLANK; t.len()],
        ..t.clone()
    };
    for _ in 0..t.len() {
        let k = parent.symbol_at_head();
        let cell = StateVector::basis(n, k)?;
        let out = apply_controlled(cloner, &tensor_state(&cell, &blank)?)?;
        let ideal = tensor_state(&cell, &cell)?;
        let f = fidelity(&out, &ideal)?;
        if f < REPLICATION_FIDELITY {
            return Err(Error::ReplicationIntegrity {
                cell: parent.head + 1,
                fidelity: f,
            });
        }
        child.cells[child.head] = out.dominant_basis().0 % n;
        parent = shift_tape(&parent);
        child = shift_tape(&child);
    }
    Ok((parent, child))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis_ops::cyclic_shift;

    fn tape(n: usize, cells: &[usize]) -> Tape {
        Tape::new(n, cells.to_vec(), 0).unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(tape_to_state(&tape(2, &[0])).unwrap(), StateVector::basis(2, 0).unwrap());
        // cells (k1, k2) = (0, 1) reads as k2k1 = "10"
        assert_eq!(
            tape_to_state(&tape(2, &[0, 1])).unwrap(),
            StateVector::basis(4, 2).unwrap()
        );
    }

    #[test]
    fn validation() {
        assert!(Tape::new(2, vec![], 0).is_err());
        assert!(Tape::new(2, vec![2], 0).is_err());
        assert!(Tape::new(2, vec![1], 1).is_err());
        assert!(Tape::new(0, vec![0], 0).is_err());
    }

    #[test]
    fn shift_examples() {
        let t = Tape::new(2, vec![1], 0).unwrap();
        assert_eq!(shift_tape(&t), t);
        let t = Tape::new(2, vec![1, 0, 1], 2).unwrap();
        assert_eq!(shift_tape(&t).head(), 0);
        for s in 1..=6 {
            let t = Tape::new(3, (0..s).map(|i| i % 3).collect(), 0).unwrap();
            let back = (0..s).fold(t.clone(), |acc, _| shift_tape(&acc));
            assert_eq!(back, t);
        }
    }

    #[test]
    fn text_format() {
        let t: Tape = "n=3;cells=2,0,1;head=1".parse().unwrap();
        assert_eq!(t, Tape::new(3, vec![2, 0, 1], 1).unwrap());
        assert_eq!(t.to_string(), "n=3;cells=2,0,1;head=1");
        let t: Tape = "n=2;cells=1".parse().unwrap();
        assert_eq!(t.head(), 0);
        assert!(matches!("n=2;cells=1,x".parse::<Tape>(), Err(Error::Input { column: 5, .. })));
        assert!("n=2;cells=3".parse::<Tape>().is_err());
        assert!("cells=1".parse::<Tape>().is_err());
        let json: Tape = serde_json::from_str(r#"{"n":3,"cells":[2,0,1],"head":1}"#).unwrap();
        assert_eq!(json, t_312());
    }

    fn t_312() -> Tape {
        Tape::new(3, vec![2, 0, 1], 1).unwrap()
    }

    #[test]
    fn run_tape_small_cases() {
        let x = cyclic_shift(2).unwrap();
        let i = Operator::identity(2).unwrap();
        let zero = StateVector::basis(2, 0).unwrap();
        let out = run_tape(&tape(2, &[1, 1]), &[i.clone(), x.clone()], &zero).unwrap();
        assert_eq!(out, zero);
        let out = run_tape(&tape(2, &[0, 0, 0]), &[i.clone(), x.clone()], &zero).unwrap();
        assert_eq!(out, zero);
        let out = run_tape(&tape(2, &[1, 0, 0]), &[i.clone(), x.clone()], &zero).unwrap();
        assert_eq!(out, StateVector::basis(2, 1).unwrap());
        // wrong gate count, wrong dim, head not at cell 1
        assert!(run_tape(&tape(3, &[1]), &[i.clone(), x.clone()], &zero).is_err());
        assert!(run_tape(&tape(2, &[1]), &[i.clone(), x.clone()], &StateVector::basis(3, 0).unwrap()).is_err());
        let moved = Tape::new(2, vec![0, 1], 1).unwrap();
        assert!(run_tape(&moved, &[i, x], &zero).is_err());
    }

    #[test]
    fn joint_evolution_capacity_guard() {
        let i = Operator::identity(2).unwrap();
        let t = Tape::blank(2, 10).unwrap();
        let err = run_tape_joint(&t, &[i.clone(), i], &StateVector::basis(2, 0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn decode_round_trip_and_rejection() {
        let t = tape(3, &[2, 0, 1, 1]);
        assert_eq!(decode_tape_state(&tape_to_state(&t).unwrap(), 3).unwrap(), t);
        let sup = StateVector::normalized(vec![1.0.into(), 1.0.into(), 0.0.into(), 0.0.into()]).unwrap();
        assert!(matches!(decode_tape_state(&sup, 2), Err(Error::UndecodableProgram(_))));
        assert!(decode_tape_state(&StateVector::basis(6, 0).unwrap(), 4).is_err());
    }

    #[test]
    fn replication_copies_and_restores_parent() {
        let t = Tape::new(4, vec![3, 0, 2, 1, 1], 2).unwrap();
        let (parent, child) = replicate_tape(&t).unwrap();
        assert_eq!(parent, t);
        assert_eq!(child, t);
        let blank = Tape::blank(3, 4).unwrap();
        assert_eq!(replicate_tape(&blank).unwrap().1, blank);
    }

    #[test]
    fn broken_cloner_is_detected() {
        let ids = vec![Operator::identity(3).unwrap(); 3];
        let broken = conditional_dynamics(ids).unwrap();
        let t = tape(3, &[0, 2, 1]);
        let err = replicate_tape_with(&t, &broken).unwrap_err();
        assert!(matches!(err, Error::ReplicationIntegrity { cell: 2, .. }));
        assert!(err.is_integrity());
    }
}
