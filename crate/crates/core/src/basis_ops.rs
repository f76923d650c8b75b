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

//! Cyclic shifts, the basis cloner and conditional dynamics.
//!
//! A conditional dynamics operator `Σ_l |l⟩⟨l| ⊗ U_l` is kept as its `n`
//! diagonal blocks and applied slice by slice; [`densify`] materializes it
//! only for cross-checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_capacity, matvec_into, Operator, StateVector};

/// Basis index of the blank "environment" state a clone is written into.
pub const BLANK: usize = 0;

/// The permutation `|k⟩ → |k+1 mod n⟩`.
pub fn cyclic_shift(n: usize) -> Result<Operator> {
    shift_power(n, 1)
}

/// The permutation `|k⟩ → |k+l mod n⟩`. Negative `l` shifts backwards.
pub fn shift_power(n: usize, l: i64) -> Result<Operator> {
    if n == 0 {
        return Err(Error::contract("shift dimension must be at least 1"));
    }
    let l = l.rem_euclid(n as i64) as usize;
    Operator::from_fn(n, |r, c| {
        if r == (c + l) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Block-diagonal unitary `Σ_l |l⟩⟨l| ⊗ U_l` on `H₁ ⊗ H₂`.
///
/// The control dimension is the number of blocks, so a controlled operator
/// can never carry more programs than its control space has basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlledOperator {
    blocks: Vec<Operator>,
}

impl ControlledOperator {
    pub fn control_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn target_dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn blocks(&self) -> &[Operator] {
        &self.blocks
    }

    pub fn block(&self, l: usize) -> &Operator {
        &self.blocks[l]
    }

    /// Dimension of the joint space the operator acts on.
    pub fn joint_dim(&self) -> usize {
        self.control_dim() * self.target_dim()
    }
}

/// Conditional dynamics with `blocks[l] = U_l`.
pub fn conditional_dynamics(blocks: Vec<Operator>) -> Result<ControlledOperator> {
    let Some(first) = blocks.first() else {
        return Err(Error::contract("conditional dynamics needs at least one block"));
    };
    let m = first.dim();
    for (l, b) in blocks.iter().enumerate() {
        if b.dim() != m {
            return Err(Error::contract(format!(
                "block {l} has dim {}, expected {m}",
                b.dim()
            )));
        }
        b.ensure_unitary(&format!("block {l}"))?;
    }
    Ok(ControlledOperator { blocks })
}

/// The basis cloner `C = Σ_l |l⟩⟨l| ⊗ U^l`, mapping `|k⟩|0⟩ → |k⟩|k⟩`.
pub fn cloner(n: usize) -> Result<ControlledOperator> {
    let blocks = (0..n as i64)
        .map(|l| shift_power(n, l))
        .collect::<Result<Vec<_>>>()?;
    if blocks.is_empty() {
        return Err(Error::contract("cloner dimension must be at least 1"));
    }
    Ok(ControlledOperator { blocks })
}

/// Applies `c` to an arbitrary joint state (control is the slow index).
pub fn apply_controlled(c: &ControlledOperator, joint: &StateVector) -> Result<StateVector> {
    let m = c.target_dim();
    if joint.dim() != c.joint_dim() {
        return Err(Error::contract(format!(
            "joint state dim {} does not match {} x {}",
            joint.dim(),
            c.control_dim(),
            m
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); joint.dim()];
    for ((block, src), dst) in c
        .blocks
        .iter()
        .zip(joint.amps().chunks_exact(m))
        .zip(out.chunks_exact_mut(m))
    {
        matvec_into(m, block.entries(), src, dst);
    }
    Ok(StateVector::from_raw(out))
}

/// Dense `Σ_l |l⟩⟨l| ⊗ U_l`.
pub fn densify(c: &ControlledOperator) -> Result<Operator> {
    let d = check_capacity("densified operator", c.joint_dim() as u128)?;
    let m = c.target_dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for (l, block) in c.blocks.iter().enumerate() {
        for r in 0..m {
            let row = l * m + r;
            entries[row * d + l * m..row * d + (l + 1) * m].copy_from_slice(block.row(r));
        }
    }
    Operator::new(d, entries)
}

#[derive(Serialize, Deserialize)]
struct ControlledWire {
    control_dim: usize,
    target_dim: usize,
    blocks: Vec<Operator>,
}

impl Serialize for ControlledOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ControlledWire {
            control_dim: self.control_dim(),
            target_dim: self.target_dim(),
            blocks: self.blocks.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ControlledOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ControlledWire::deserialize(d)?;
        if w.blocks.len() != w.control_dim {
            return Err(D::Error::custom(format!(
                "control_dim {} but {} blocks",
                w.control_dim,
                w.blocks.len()
            )));
        }
        let c = conditional_dynamics(w.blocks).map_err(D::Error::custom)?;
        if c.target_dim() != w.target_dim {
            return Err(D::Error::custom(format!(
                "target_dim {} but blocks have dim {}",
                w.target_dim,
                c.target_dim()
            )));
        }
        Ok(c)
    }
}
