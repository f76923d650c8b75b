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

//! Approximating a target unitary by products of a finite gate set.
//!
//! The search enumerates words breadth first, one length at a time. Every
//! generated product is scored against the target. A product is expanded
//! further only if no previously kept product lies within the net radius of
//! it; since lengths are visited in order and symbols ascending, the kept
//! representative is always the shorter, then lexicographically smaller word.
//!
//! The net lookup relies on the phase-invariant distance being a metric:
//! candidates are pre-filtered through their distances to two fixed pivots.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{distance_raw, matmul_raw, Operator};
use crate::tape::Tape;

/// Default completeness resolution of the pruning net.
pub const DEFAULT_NET_RADIUS: f64 = 1e-3;

/// Distances closer than this count as tied; ties keep the earlier word.
pub const TIE_TOL: f64 = 1e-12;

/// A finite family of unitaries of one common dimension, indexed by symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateSetWire", into = "GateSetWire")]
pub struct GateSet {
    gates: Vec<Operator>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GateSetWire {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    labels: Vec<String>,
    gates: Vec<Operator>,
}

impl TryFrom<GateSetWire> for GateSet {
    type Error = Error;

    fn try_from(w: GateSetWire) -> Result<Self> {
        if let Some(n) = w.n {
            if n != w.gates.len() {
                return Err(Error::contract(format!(
                    "gate set declares n = {n} but lists {} gates",
                    w.gates.len()
                )));
            }
        }
        let labels = if w.labels.is_empty() {
            (0..w.gates.len()).map(|i| format!("g{i}")).collect()
        } else {
            w.labels
        };
        GateSet::new(w.gates, labels)
    }
}

impl From<GateSet> for GateSetWire {
    fn from(g: GateSet) -> Self {
        GateSetWire {
            n: Some(g.gates.len()),
            labels: g.labels,
            gates: g.gates,
        }
    }
}

impl GateSet {
    pub fn new(gates: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = gates.first() else {
            return Err(Error::contract("gate set needs at least one gate"));
        };
        if labels.len() != gates.len() {
            return Err(Error::contract(format!(
                "{} labels for {} gates",
                labels.len(),
                gates.len()
            )));
        }
        let m = first.dim();
        for (l, g) in gates.iter().enumerate() {
            if g.dim() != m {
                return Err(Error::contract(format!(
                    "gate {l} has dim {}, expected {m}",
                    g.dim()
                )));
            }
            g.ensure_unitary(&format!("gate {l} ({})", labels[l]))?;
        }
        Ok(GateSet { gates, labels })
    }

    /// Labels `g0, g1, …`.
    pub fn unlabeled(gates: Vec<Operator>) -> Result<Self> {
        let labels = (0..gates.len()).map(|i| format!("g{i}")).collect();
        Self::new(gates, labels)
    }

    /// Alphabet size.
    pub fn n(&self) -> usize {
        self.gates.len()
    }

    /// Dimension the gates act on.
    pub fn dim(&self) -> usize {
        self.gates[0].dim()
    }

    pub fn gates(&self) -> &[Operator] {
        &self.gates
    }

    pub fn gate(&self, symbol: usize) -> &Operator {
        &self.gates[symbol]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Single-qubit rotation about Z: `diag(e^{-iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> Operator {
    let h = theta / 2.0;
    let z = Complex64::new(0.0, 0.0);
    Operator::new(2, vec![Complex64::from_polar(1.0, -h), z, z, Complex64::from_polar(1.0, h)])
        .expect("2x2")
}

/// Single-qubit rotation about X.
pub fn rx(theta: f64) -> Operator {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let s = Complex64::new(0.0, -s);
    Operator::new(2, vec![c, s, s, c]).expect("2x2")
}

/// Rotations by `2π·φ` (φ the golden ratio) about Z and X.
pub fn default_gate_set() -> GateSet {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let angle = 2.0 * PI * golden;
    GateSet::new(
        vec![rz(angle), rx(angle)],
        vec!["rz_golden".into(), "rx_golden".into()],
    )
    .expect("rotations are unitary")
}

/// Product of the gates named by `word`, `word[0]` applied first. The empty
/// word is the identity.
pub fn word_unitary(word: &[usize], g: &GateSet) -> Result<Operator> {
    let m = g.dim();
    let mut acc = Operator::identity(m)?;
    for (i, &k) in word.iter().enumerate() {
        if k >= g.n() {
            return Err(Error::contract(format!(
                "symbol {k} at position {} outside gate set of size {}",
                i + 1,
                g.n()
            )));
        }
        acc = g.gate(k).compose(&acc)?;
    }
    Ok(acc)
}

/// `U_{k_s} ⋯ U_{k_1}` for the cells of `t`.
pub fn sequence_unitary(t: &Tape, g: &GateSet) -> Result<Operator> {
    if t.alphabet_size() != g.n() {
        return Err(Error::contract(format!(
            "tape alphabet {} does not match gate set size {}",
            t.alphabet_size(),
            g.n()
        )));
    }
    word_unitary(t.cells(), g)
}

/// A scored gate word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    /// Symbols in application order (cell 1 first). Empty means identity.
    pub sequence: Vec<usize>,
    pub achieved_distance: f64,
    pub target: Operator,
    /// Number of products generated and scored.
    pub expansions: usize,
}

impl ApproxResult {
    /// The sequence as a tape over the gate set's alphabet, if non-empty.
    pub fn tape(&self, g: &GateSet) -> Option<Tape> {
        Tape::new(g.n(), self.sequence.clone(), 0).ok()
    }

    /// Recomputes the distance from scratch.
    pub fn recompute_distance(&self, g: &GateSet) -> Result<f64> {
        let u = word_unitary(&self.sequence, g)?;
        crate::linalg::phase_invariant_distance(&u, &self.target)
    }
}

/// Search outcome. `NotFound` still reports the best word seen; it only
/// certifies that no word kept by the net reached epsilon.
#[derive(Clone, Debug, PartialEq)]
pub enum Approximation {
    Found(ApproxResult),
    NotFound { best: ApproxResult },
}

impl Approximation {
    pub fn is_found(&self) -> bool {
        matches!(self, Approximation::Found(_))
    }

    pub fn best(&self) -> &ApproxResult {
        match self {
            Approximation::Found(r) | Approximation::NotFound { best: r } => r,
        }
    }

    pub fn into_best(self) -> ApproxResult {
        match self {
            Approximation::Found(r) | Approximation::NotFound { best: r } => r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub net_radius: f64,
    /// Score each level's children on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            net_radius: DEFAULT_NET_RADIUS,
            parallel: false,
        }
    }
}

/// [`approximate_with`] under the default configuration.
pub fn approximate(
    target: &Operator,
    g: &GateSet,
    epsilon: f64,
    max_len: usize,
) -> Result<Approximation> {
    approximate_with(target, g, epsilon, max_len, &SearchConfig::default())
}

/// Shortest-first search for a word within `epsilon` of `target`.
///
/// Stops at the first length that reaches epsilon and returns that level's
/// best word. Otherwise explores every length up to `max_len` and reports
/// the best word seen.
pub fn approximate_with(
    target: &Operator,
    g: &GateSet,
    epsilon: f64,
    max_len: usize,
    config: &SearchConfig,
) -> Result<Approximation> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::contract(format!("epsilon must be positive, got {epsilon}")));
    }
    if max_len == 0 {
        return Err(Error::contract("max_len must be at least 1"));
    }
    if config.net_radius.is_nan() || config.net_radius < 0.0 {
        return Err(Error::contract("net radius must be non-negative"));
    }
    if target.dim() != g.dim() {
        return Err(Error::contract(format!(
            "target dim {} does not match gate dim {}",
            target.dim(),
            g.dim()
        )));
    }
    target.ensure_unitary("target")?;

    let m = g.dim();
    let target_entries = target.entries();
    let identity = Operator::identity(m)?.entries().to_vec();
    let mut net = Net::new(config.net_radius, m, g);
    net.insert_if_new(&identity);

    let mut best_word: Vec<usize> = Vec::new();
    let mut best_dist = distance_raw(m, &identity, target_entries);
    let mut expansions = 1;
    let mut frontier = vec![(Vec::<usize>::new(), identity)];

    let finish = |word: Vec<usize>, dist: f64, expansions: usize| ApproxResult {
        sequence: word,
        achieved_distance: dist,
        target: target.clone(),
        expansions,
    };

    if best_dist <= epsilon {
        return Ok(Approximation::Found(finish(best_word, best_dist, expansions)));
    }

    for _ in 0..max_len {
        let expand = |(word, op): &(Vec<usize>, Vec<Complex64>)| {
            (0..g.n())
                .map(|k| {
                    let prod = matmul_raw(m, g.gate(k).entries(), op);
                    let dist = distance_raw(m, &prod, target_entries);
                    let mut w = word.clone();
                    w.push(k);
                    (w, prod, dist)
                })
                .collect::<Vec<_>>()
        };
        let children: Vec<(Vec<usize>, Vec<Complex64>, f64)> = if config.parallel {
            frontier.par_iter().flat_map_iter(expand).collect()
        } else {
            frontier.iter().flat_map(expand).collect()
        };

        let mut next = Vec::new();
        for (word, prod, dist) in children {
            expansions += 1;
            if dist < best_dist - TIE_TOL {
                best_dist = dist;
                best_word = word.clone();
            }
            if net.insert_if_new(&prod) {
                next.push((word, prod));
            }
        }
        if best_dist <= epsilon {
            return Ok(Approximation::Found(finish(best_word, best_dist, expansions)));
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Approximation::NotFound {
        best: finish(best_word, best_dist, expansions),
    })
}

/// Kept products, indexed by distance to a primary pivot.
struct Net {
    radius: f64,
    dim: usize,
    pivots: [Vec<Complex64>; 2],
    by_key: BTreeMap<u64, Vec<usize>>,
    points: Vec<(Vec<Complex64>, f64)>,
}

impl Net {
    fn new(radius: f64, dim: usize, g: &GateSet) -> Self {
        // pivots need not be special; spreading them reduces false candidates
        let a = Operator::identity(dim).expect("dim checked").entries().to_vec();
        let b = if g.n() > 1 {
            matmul_raw(dim, g.gate(0).entries(), g.gate(g.n() - 1).entries())
        } else {
            g.gate(0).entries().to_vec()
        };
        Net {
            radius,
            dim,
            pivots: [a, b],
            by_key: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    fn key(d: f64) -> u64 {
        d.max(0.0).to_bits()
    }

    /// Inserts `op` unless a kept product lies within the radius.
    fn insert_if_new(&mut self, op: &[Complex64]) -> bool {
        let d0 = distance_raw(self.dim, op, &self.pivots[0]);
        let d1 = distance_raw(self.dim, op, &self.pivots[1]);
        // small slack covers rounding in the pivot distances
        let slack = self.radius + 1e-12;
        let lo = Self::key(d0 - slack);
        let hi = Self::key(d0 + slack);
        for idxs in self.by_key.range(lo..=hi).map(|(_, v)| v) {
            for &i in idxs {
                let (p, pd1) = &self.points[i];
                if (pd1 - d1).abs() > slack {
                    continue;
                }
                if distance_raw(self.dim, op, p) <= self.radius {
                    return false;
                }
            }
        }
        self.by_key
            .entry(Self::key(d0))
            .or_default()
            .push(self.points.len());
        self.points.push((op.to_vec(), d1));
        true
    }
}
