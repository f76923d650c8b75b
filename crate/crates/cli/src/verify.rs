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

//! The invariant suite behind `qreplica verify`.
//!
//! Each check draws from its own seeded generator, so the table depends only
//! on the seed.

use std::fmt::Write as _;

use indexmap::IndexMap;
use qreplica_core::approx::SearchConfig;
use qreplica_core::automaton::{decode_segments, demo_registry};
use qreplica_core::random::{haar_state, haar_unitary};
use qreplica_core::{
    apply, apply_controlled, approximate_with, automaton_overlap, cloner, conditional_dynamics,
    default_gate_set, densify, fidelity, phase_invariant_distance, replicate, run_tape_joint,
    scattering_apply, tape_to_state, tensor_state, Automaton, Complex64, GateSet,
    Operator, ProgramRegistry, RegistryBuilder, Result, StateVector, Tape,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Tolerances;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub metric: &'static str,
    pub value: f64,
    pub limit: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
    pub tolerances: Tolerances,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        writeln!(s, "qreplica verify  seed={}", self.seed).unwrap();
        writeln!(
            s,
            "{:>2}  {:<8}{:<44}{:<28}{:>14}  limit",
            "#", "status", "criterion", "metric", "value"
        )
        .unwrap();
        for o in &self.outcomes {
            writeln!(
                s,
                "{:>2}  {:<8}{:<44}{:<28}{:>14.6e}  {}",
                o.id,
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.metric,
                o.value,
                o.limit
            )
            .unwrap();
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        let t = &self.tolerances;
        writeln!(
            s,
            "tolerances: norm_tol={:e} unitary_tol={:e} max_dim={} net_radius={:e}",
            t.norm_tol, t.unitary_tol, t.max_dim, t.net_radius
        )
        .unwrap();
        writeln!(s, "summary: {passed}/{} passed", self.outcomes.len()).unwrap();
        s
    }
}

fn rng(seed: u64, id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 32))
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn basis(n: usize, k: usize) -> Result<StateVector> {
    StateVector::basis(n, k)
}

fn outcome(id: u32, name: &'static str, metric: &'static str, value: f64, passed: bool, limit: String) -> Outcome {
    Outcome {
        id,
        name,
        passed,
        metric,
        value,
        limit,
    }
}

fn perfect_cloning() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let c = cloner(n)?;
        for k in 0..n {
            let out = apply_controlled(&c, &tensor_state(&basis(n, k)?, &basis(n, 0)?)?)?;
            let f = fidelity(&out, &tensor_state(&basis(n, k)?, &basis(n, k)?)?)?;
            worst = worst.max(1.0 - f);
        }
    }
    Ok(outcome(1, "perfect orthogonal cloning", "max 1-fidelity", worst, worst <= 1e-12, "<= 1e-12".into()))
}

fn no_cloning_boundary(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed, 2);
    let (mut worst_fid, mut worst_form) = (0.0f64, 0.0f64);
    for n in 2..=5 {
        let c = cloner(n)?;
        let mut done = 0;
        while done < 200 {
            let psi = haar_state(n, &mut r);
            if psi.amps().iter().map(|a| a.norm_sqr()).fold(0.0, f64::max) > 0.999 {
                continue;
            }
            let out = apply_controlled(&c, &tensor_state(&psi, &basis(n, 0)?)?)?;
            let mut analytic = vec![Complex64::new(0.0, 0.0); n * n];
            for (k, a) in psi.amps().iter().enumerate() {
                analytic[k * n + k] = *a;
            }
            worst_form = worst_form.max(max_diff(out.amps(), &analytic));
            worst_fid = worst_fid.max(fidelity(&out, &tensor_state(&psi, &psi)?)?);
            done += 1;
        }
    }
    let passed = worst_fid <= 1.0 - 1e-6 && worst_form <= 1e-10;
    Ok(outcome(
        2,
        "no-cloning boundary",
        "max fidelity to psi x psi",
        worst_fid,
        passed,
        format!("<= 1-1e-6, analytic diff {worst_form:.1e} <= 1e-10"),
    ))
}

fn conditional_dynamics_check(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed, 3);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = r.random_range(1..=8usize);
        // every fourth instance forces unequal dimensions
        let m = if i % 4 == 0 { n % 8 + 1 } else { r.random_range(1..=8usize) };
        let blocks = (0..n).map(|_| haar_unitary(m, &mut r)).collect();
        let d = conditional_dynamics(blocks)?;
        let joint = haar_state(n * m, &mut r);
        let structured = apply_controlled(&d, &joint)?;
        let dense = apply(&densify(&d)?, &joint)?;
        worst = worst.max(max_diff(structured.amps(), dense.amps()));
    }
    Ok(outcome(3, "conditional dynamics structured = dense", "max amplitude diff", worst, worst <= 1e-12, "<= 1e-12".into()))
}

fn tape_theorem(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed, 4);
    let (mut worst_payload, mut worst_tape) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < 50 {
        let n = r.random_range(1..=3usize);
        let m = r.random_range(1..=4usize);
        let s = r.random_range(1..=5usize);
        if n.pow(s as u32) * m > 1 << 10 {
            continue;
        }
        let gates: Vec<Operator> = (0..n).map(|_| haar_unitary(m, &mut r)).collect();
        let tape = Tape::new(n, (0..s).map(|_| r.random_range(0..n)).collect(), 0)?;
        let joint = run_tape_joint(&tape, &gates, &basis(m, 0)?)?;
        let mut product = Operator::identity(m)?;
        for &k in tape.cells() {
            product = gates[k].compose(&product)?;
        }
        let expect = apply(&product, &basis(m, 0)?)?;
        worst_payload = worst_payload.max(max_diff(joint.payload.amps(), expect.amps()));
        worst_tape = worst_tape.max((1.0 - joint.tape_return_fidelity).abs());
        done += 1;
    }
    let passed = worst_payload <= 1e-10 && worst_tape <= 1e-12;
    Ok(outcome(
        4,
        "tape theorem on the joint space",
        "max payload diff",
        worst_payload,
        passed,
        format!("<= 1e-10, tape return defect {worst_tape:.1e} <= 1e-12"),
    ))
}

fn tape_orthogonality() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut pairs = 0u64;
    for n in 2..=256usize {
        let mut s = 1u32;
        while n.pow(s) <= 256 {
            let count = n.pow(s);
            let states: Vec<StateVector> = (0..count)
                .map(|mut code| {
                    let cells = (0..s)
                        .map(|_| {
                            let k = code % n;
                            code /= n;
                            k
                        })
                        .collect();
                    tape_to_state(&Tape::new(n, cells, 0)?)
                })
                .collect::<Result<_>>()?;
            for i in 0..count {
                for j in 0..count {
                    if i != j {
                        worst = worst.max(fidelity(&states[i], &states[j])?);
                        pairs += 1;
                    }
                }
            }
            s += 1;
        }
    }
    debug_assert!(pairs > 0);
    Ok(outcome(5, "tape orthogonality (n^s <= 256)", "max off-diagonal fidelity", worst, worst <= 1e-12, "<= 1e-12".into()))
}

fn exhaustive_best(target: &Operator, g: &GateSet, max_len: usize) -> Result<f64> {
    let mut best = phase_invariant_distance(&Operator::identity(g.dim())?, target)?;
    let mut level = vec![Operator::identity(g.dim())?];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * g.n());
        for p in &level {
            for gate in g.gates() {
                let q = gate.compose(p)?;
                best = best.min(phase_invariant_distance(&q, target)?);
                next.push(q);
            }
        }
        level = next;
    }
    Ok(best)
}

fn approximation(seed: u64, tol: &Tolerances) -> Result<Outcome> {
    let mut r = rng(seed, 6);
    let g = default_gate_set();
    let cfg = SearchConfig {
        net_radius: tol.net_radius,
        parallel: false,
    };
    let search = |t: &Operator, len| -> Result<f64> {
        Ok(approximate_with(t, &g, 1e-14, len, &cfg)?.best().achieved_distance)
    };
    let mut worst_gain = f64::NEG_INFINITY;
    let mut worst_agreement = 0.0f64;
    for i in 0..20 {
        let target = haar_unitary(2, &mut r);
        let short = search(&target, 4)?;
        let long = search(&target, 12)?;
        worst_gain = worst_gain.max(long - short);
        if i < 5 {
            for len in 1..=6 {
                let oracle = exhaustive_best(&target, &g, len)?;
                worst_agreement = worst_agreement.max((search(&target, len)? - oracle).abs());
            }
        }
    }
    let passed = worst_gain < 0.0 && worst_agreement <= 1e-9;
    Ok(outcome(
        6,
        "approximation improves with length",
        "max d(12) - d(4)",
        worst_gain,
        passed,
        format!("< 0, oracle gap {worst_agreement:.1e} <= 1e-9"),
    ))
}

fn replication() -> Result<Outcome> {
    let origin = Automaton::new(demo_registry()?)?;
    let mut current = origin.clone();
    let mut worst_payload = 0.0f64;
    let mut tapes_ok = true;
    for _ in 0..5 {
        let (parent, child) = replicate(&current)?;
        tapes_ok &= child.tape() == origin.tape();
        worst_payload = worst_payload.max(1.0 - fidelity(child.payload(), parent.payload())?);
        current = child;
    }

    let g = GateSet::unlabeled(vec![
        Operator::identity(2)?,
        haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(7)),
    ])?;
    let mut worst_overlap = 0.0f64;
    for s in 1..=4usize {
        let autos: Vec<Automaton> = (0..1usize << (s - 1))
            .map(|bits| {
                let mut cells = vec![0];
                cells.extend((0..s - 1).map(|i| (bits >> i) & 1));
                let tape = Tape::new(2, cells, 0)?;
                let segments: IndexMap<String, Vec<usize>> = decode_segments(&tape)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, seg)| (format!("p{i}"), seg))
                    .collect();
                Automaton::from_tape(tape, ProgramRegistry::new(g.clone(), segments)?, 0)
            })
            .collect::<Result<_>>()?;
        for a in &autos {
            for b in &autos {
                if a.tape() != b.tape() {
                    worst_overlap = worst_overlap.max(automaton_overlap(a, b)?.norm());
                }
            }
        }
    }
    let passed = tapes_ok && worst_payload <= 1e-8 && worst_overlap <= 1e-12;
    Ok(outcome(
        7,
        "replication heredity and orthogonality",
        "max 1-payload fidelity",
        worst_payload,
        passed,
        format!("<= 1e-8, tapes identical={tapes_ok}, overlap {worst_overlap:.1e} <= 1e-12"),
    ))
}

fn closed_loop(seed: u64) -> Result<Outcome> {
    let mut r = rng(seed, 8);
    let mut worst = 0.0f64;
    for n in 1..=3usize {
        if n >= 2 {
            let c = cloner(n)?;
            let reg = RegistryBuilder::new(n * n)?.controlled_program("C", &c)?.build()?;
            let prog = reg.program_state("C")?;
            for k in 0..n * n {
                let psi = basis(n * n, k)?;
                let diff = max_diff(
                    scattering_apply(&prog, &psi, &reg)?.amps(),
                    apply_controlled(&c, &psi)?.amps(),
                );
                worst = worst.max(diff);
            }
        }
        for m in 1..=3usize {
            let d = conditional_dynamics((0..n).map(|_| haar_unitary(m, &mut r)).collect())?;
            let reg = RegistryBuilder::new(n * m)?.controlled_program("D", &d)?.build()?;
            let prog = reg.program_state("D")?;
            for k in 0..n * m {
                let psi = basis(n * m, k)?;
                let diff = max_diff(
                    scattering_apply(&prog, &psi, &reg)?.amps(),
                    apply_controlled(&d, &psi)?.amps(),
                );
                worst = worst.max(diff);
            }
        }
    }
    Ok(outcome(8, "tape-encoded C and D close the loop", "max amplitude diff", worst, worst <= 1e-9, "<= 1e-9".into()))
}

pub fn run(seed: u64, tolerances: &Tolerances) -> Result<VerifyReport> {
    let outcomes = vec![
        perfect_cloning()?,
        no_cloning_boundary(seed)?,
        conditional_dynamics_check(seed)?,
        tape_theorem(seed)?,
        tape_orthogonality()?,
        approximation(seed, tolerances)?,
        replication()?,
        closed_loop(seed)?,
    ];
    Ok(VerifyReport {
        seed,
        outcomes,
        tolerances: tolerances.clone(),
    })
}
