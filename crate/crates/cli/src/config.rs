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

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qreplica_core::approx::DEFAULT_NET_RADIUS;
use qreplica_core::linalg::max_dim;
use qreplica_core::tape::{JOINT_CHECK_LIMIT, REPLICATION_FIDELITY};
use qreplica_core::{Error, Result, NORM_TOL, UNITARY_TOL};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Values in force for a run. Only `net_radius` and `clone_verdict` can be
/// overridden; the rest are reported for completeness.
#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub norm_tol: f64,
    pub unitary_tol: f64,
    pub max_dim: usize,
    pub joint_check_limit: usize,
    pub replication_fidelity: f64,
    pub net_radius: f64,
    /// Fidelity to `ψ⊗ψ` at or above which a clone demo reports "cloned".
    pub clone_verdict: f64,
}

impl Tolerances {
    pub fn with_overrides(overrides: &[String]) -> Result<Self> {
        let mut t = Tolerances {
            norm_tol: NORM_TOL,
            unitary_tol: UNITARY_TOL,
            max_dim: max_dim(),
            joint_check_limit: JOINT_CHECK_LIMIT,
            replication_fidelity: REPLICATION_FIDELITY,
            net_radius: DEFAULT_NET_RADIUS,
            clone_verdict: 1.0 - 1e-9,
        };
        for (i, item) in overrides.iter().enumerate() {
            let bad = |message: String| Error::Input {
                line: 1,
                column: i + 1,
                message,
            };
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("tolerance override {item:?} is not name=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| bad(format!("{name}: {e}")))?;
            if !(value.is_finite() && value >= 0.0) {
                return Err(bad(format!("{name} must be a finite non-negative number")));
            }
            match name.trim() {
                "net_radius" => t.net_radius = value,
                "clone_verdict" => t.clone_verdict = value,
                other => return Err(bad(format!("tolerance {other:?} cannot be overridden"))),
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub deterministic: bool,
}

impl RunConfig {
    pub fn parallel(&self) -> bool {
        !self.deterministic
    }

    /// Writes `text` to the configured output, or standard output.
    pub fn emit(&self, text: &str) -> Result<()> {
        emit_to(self.output.as_deref(), text)
    }
}

pub fn emit_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

pub fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Input {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    }
}

/// Reads and parses a JSON file; parse errors keep their line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Input {
        line: e.line(),
        column: e.column(),
        message: format!("{}: {e}", path.display()),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}
