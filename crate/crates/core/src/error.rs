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

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition of an operation was violated (dimension mismatch,
    /// non-unitary input, out-of-range symbol, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A dense object would exceed the configured amplitude budget.
    #[error("capacity exceeded: {what} needs dimension {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: usize,
    },

    /// Malformed external input. Line and column are 1-based when known.
    #[error("input error at line {line}, column {column}: {message}")]
    Input {
        line: usize,
        column: usize,
        message: String,
    },

    /// A per-cell cloning step did not produce the certified copy.
    #[error("replication integrity: cell {cell} cloned with fidelity {fidelity}")]
    ReplicationIntegrity { cell: usize, fidelity: f64 },

    /// A child's decoded program table differs from its parent's.
    #[error("corrupted heredity: {0}")]
    CorruptedHeredity(String),

    /// A program or tape state is not a decodable basis tape state.
    #[error("undecodable program: {0}")]
    UndecodableProgram(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for the two integrity failures of the replication cycle.
    pub fn is_integrity(&self) -> bool {
        matches!(
            self,
            Error::ReplicationIntegrity { .. } | Error::CorruptedHeredity(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
