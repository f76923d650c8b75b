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

//! Shared fixtures for the criterion benchmarks.

use qreplica_core::random::{haar_state, haar_unitary};
use qreplica_core::{conditional_dynamics, ControlledOperator, Operator, StateVector, Tape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random conditional dynamics with `n` blocks of dimension `m`, and a
/// random joint state to apply it to.
pub fn controlled_fixture(n: usize, m: usize, seed: u64) -> (ControlledOperator, StateVector) {
    let mut r = rng(seed);
    let blocks = (0..n).map(|_| haar_unitary(m, &mut r)).collect();
    let c = conditional_dynamics(blocks).expect("haar blocks are unitary");
    (c, haar_state(n * m, &mut r))
}

/// Random tape of length `s` over `n` gates of dimension `m`.
pub fn tape_fixture(n: usize, s: usize, m: usize, seed: u64) -> (Tape, Vec<Operator>) {
    use rand::Rng;
    let mut r = rng(seed);
    let gates = (0..n).map(|_| haar_unitary(m, &mut r)).collect();
    let cells = (0..s).map(|_| r.random_range(0..n)).collect();
    (Tape::new(n, cells, 0).expect("valid cells"), gates)
}
