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

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qreplica_bench::{controlled_fixture, tape_fixture};
use qreplica_core::random::haar_unitary;
use qreplica_core::{
    apply, apply_controlled, approximate, default_gate_set, densify, replicate, run_tape,
    run_tape_joint, Automaton, StateVector,
};

fn controlled(c: &mut Criterion) {
    let mut group = c.benchmark_group("controlled");
    for (n, m) in [(2, 2), (4, 8), (8, 8), (8, 32)] {
        let (op, state) = controlled_fixture(n, m, 1);
        group.bench_with_input(BenchmarkId::new("structured", format!("{n}x{m}")), &(), |b, _| {
            b.iter(|| apply_controlled(black_box(&op), black_box(&state)).unwrap())
        });
        let dense = densify(&op).unwrap();
        group.bench_with_input(BenchmarkId::new("dense", format!("{n}x{m}")), &(), |b, _| {
            b.iter(|| apply(black_box(&dense), black_box(&state)).unwrap())
        });
    }
    group.finish();
}

fn tapes(c: &mut Criterion) {
    let mut group = c.benchmark_group("tape");
    let (tape, gates) = tape_fixture(3, 5, 4, 2);
    let payload = StateVector::basis(4, 0).unwrap();
    group.bench_function("product_form", |b| {
        b.iter(|| run_tape(black_box(&tape), &gates, &payload).unwrap())
    });
    group.bench_function("joint_space", |b| {
        b.iter(|| run_tape_joint(black_box(&tape), &gates, &payload).unwrap())
    });
    group.finish();
}

fn search(c: &mut Criterion) {
    let g = default_gate_set();
    let target = haar_unitary(2, &mut qreplica_bench::rng(3));
    let mut group = c.benchmark_group("approximate");
    group.sample_size(10);
    for len in [4, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| approximate(black_box(&target), &g, 1e-12, len).unwrap())
        });
    }
    group.finish();
}

fn replication(c: &mut Criterion) {
    let parent = Automaton::new(qreplica_core::automaton::demo_registry().unwrap()).unwrap();
    c.bench_function("replicate_demo", |b| b.iter(|| replicate(black_box(&parent)).unwrap()));
}

criterion_group!(benches, controlled, tapes, search, replication);
criterion_main!(benches);
