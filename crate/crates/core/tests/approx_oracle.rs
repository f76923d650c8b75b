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

mod common;

use common::*;
use qreplica_core::approx::{rx, rz};
use qreplica_core::random::haar_unitary;
use qreplica_core::{
    approximate, cyclic_shift, default_gate_set, phase_invariant_distance, word_unitary,
    Approximation, GateSet, Operator,
};

/// Best word of length 1..=max_len by brute force: every word, naive
/// products, trace-formula distance. Ties keep the shorter, then
/// lexicographically smaller word.
fn exhaustive(target: &Operator, g: &GateSet, max_len: usize) -> (f64, Vec<usize>) {
    let gates: Vec<_> = g.gates().iter().map(rows).collect();
    let m = g.dim();
    let target_rows = rows(target);
    let mut best = (f64::INFINITY, Vec::new());
    for len in 1..=max_len {
        let count = g.n().pow(len as u32);
        for code in 0..count {
            // most significant digit first gives lexicographic order
            let mut word = vec![0; len];
            let mut rest = code;
            for slot in word.iter_mut().rev() {
                *slot = rest % g.n();
                rest /= g.n();
            }
            let mut acc = rows(&Operator::identity(m).unwrap());
            for &k in &word {
                acc = naive_matmul(&gates[k], &acc);
            }
            let t: qreplica_core::Complex64 = acc
                .iter()
                .flatten()
                .zip(target_rows.iter().flatten())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let d = (1.0 - t.norm() / m as f64).max(0.0).sqrt();
            if d < best.0 - 1e-12 {
                best = (d, word);
            }
        }
    }
    best
}

fn three_gate_set() -> GateSet {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let extra = haar_unitary(2, &mut rng(41));
    GateSet::unlabeled(vec![rz(2.0 * std::f64::consts::PI * golden), rx(1.0), extra]).unwrap()
}

#[test]
fn pruned_search_matches_exhaustive_optimum() {
    let sets = vec![
        default_gate_set(),
        three_gate_set(),
        GateSet::unlabeled(vec![rx(0.77)]).unwrap(),
    ];
    let mut r = rng(42);
    for g in &sets {
        for _ in 0..8 {
            let target = haar_unitary(2, &mut r);
            for max_len in 1..=6 {
                let (oracle, _) = exhaustive(&target, g, max_len);
                let found = approximate(&target, g, 1e-14, max_len).unwrap().into_best();
                // the empty word (identity) is also a candidate for the search
                let identity = phase_invariant_distance(&Operator::identity(2).unwrap(), &target).unwrap();
                let expect = oracle.min(identity);
                assert!(
                    (found.achieved_distance - expect).abs() < 1e-9,
                    "n={} len={max_len}: search {} vs oracle {expect}",
                    g.n(),
                    found.achieved_distance
                );
            }
        }
    }
}

#[test]
fn returned_distance_re_verifies() {
    let g = three_gate_set();
    let mut r = rng(43);
    for _ in 0..10 {
        let target = haar_unitary(2, &mut r);
        let res = approximate(&target, &g, 1e-14, 7).unwrap().into_best();
        let u = word_unitary(&res.sequence, &g).unwrap();
        let again = phase_invariant_distance(&u, &target).unwrap();
        assert!((again - res.achieved_distance).abs() < 1e-12);
        assert!(res.sequence.len() <= 7);
    }
}

#[test]
fn best_distance_is_monotone_in_max_len() {
    let g = default_gate_set();
    let mut r = rng(44);
    for _ in 0..5 {
        let target = haar_unitary(2, &mut r);
        let mut prev = f64::INFINITY;
        for max_len in 1..=11 {
            let d = approximate(&target, &g, 1e-14, max_len).unwrap().best().achieved_distance;
            assert!(d <= prev);
            prev = d;
        }
    }
}

#[test]
fn longer_words_approximate_strictly_better() {
    let g = default_gate_set();
    let mut r = rng(45);
    for i in 0..20 {
        let target = haar_unitary(2, &mut r);
        let short = approximate(&target, &g, 1e-14, 4).unwrap().best().achieved_distance;
        let long = approximate(&target, &g, 1e-14, 12).unwrap().best().achieved_distance;
        assert!(long < short, "target {i}: {long} !< {short}");
    }
}

#[test]
fn bit_flip_within_five_hundredths() {
    let g = default_gate_set();
    let x = cyclic_shift(2).unwrap();
    let Approximation::Found(res) = approximate(&x, &g, 0.05, 14).unwrap() else {
        panic!("no word within 0.05");
    };
    assert!(res.achieved_distance <= 0.05);
    let len = res.sequence.len();
    assert_eq!(len, 13);

    // no shorter word reaches epsilon, and the returned distance is attained
    let (shorter, _) = exhaustive(&x, &g, len - 1);
    assert!(shorter > 0.05);
    let (optimum, word) = exhaustive(&x, &g, len);
    assert!((optimum - res.achieved_distance).abs() < 1e-9);
    assert_eq!(word.len(), len);
    let attained = phase_invariant_distance(&word_unitary(&res.sequence, &g).unwrap(), &x).unwrap();
    assert!((attained - res.achieved_distance).abs() < 1e-12);
}

#[test]
fn not_found_reports_best_effort() {
    let g = default_gate_set();
    let x = cyclic_shift(2).unwrap();
    let out = approximate(&x, &g, 0.01, 5).unwrap();
    assert!(!out.is_found());
    let (oracle, _) = exhaustive(&x, &g, 5);
    assert!((out.best().achieved_distance - oracle).abs() < 1e-9);
}
