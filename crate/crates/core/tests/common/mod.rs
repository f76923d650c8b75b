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

//! Naive reference computations used as independent oracles.

#![allow(dead_code)]

use qreplica_core::{Complex64, Operator, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense matrix as nested rows.
pub fn rows(op: &Operator) -> Vec<Vec<Complex64>> {
    (0..op.dim()).map(|r| op.row(r).to_vec()).collect()
}

/// `(A ⊗ B)[(i,j),(k,l)] = A[i,k] · B[j,l]`, written out index by index.
pub fn naive_kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (da, db) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0); da * db]; da * db];
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    out[i * db + j][k * db + l] = a[i][k] * b[j][l];
                }
            }
        }
    }
    out
}

pub fn naive_matvec(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn naive_matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn naive_kron_vec(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_diff_rows(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| max_diff(x, y))
        .fold(0.0, f64::max)
}

pub fn basis(n: usize, k: usize) -> StateVector {
    StateVector::basis(n, k).unwrap()
}

/// Phase-invariant distance from the trace formula, for cross-checking.
pub fn trace_distance_formula(a: &Operator, b: &Operator) -> f64 {
    let t: Complex64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum();
    (1.0 - t.norm() / a.dim() as f64).max(0.0).sqrt()
}
