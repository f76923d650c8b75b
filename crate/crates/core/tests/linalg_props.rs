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
use proptest::prelude::*;
use qreplica_core::random::{haar_state, haar_unitary};
use qreplica_core::{
    apply, fidelity, phase_invariant_distance, tensor_op, tensor_state, Complex64, Operator,
    StateVector, NORM_TOL,
};

#[test]
fn unitary_application_preserves_norm() {
    let mut r = rng(11);
    for dim in 2..=8 {
        for _ in 0..100 {
            let u = haar_unitary(dim, &mut r);
            assert!(u.is_unitary());
            let s = haar_state(dim, &mut r);
            let out = apply(&u, &s).unwrap();
            assert!((out.norm() - 1.0).abs() <= NORM_TOL);
            assert!((out.norm() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn mixed_product_against_naive_kron() {
    let mut r = rng(12);
    for _ in 0..50 {
        let (a, b) = (haar_unitary(3, &mut r), haar_unitary(3, &mut r));
        let (x, y) = (haar_state(3, &mut r), haar_state(3, &mut r));

        let lhs = apply(&tensor_op(&a, &b).unwrap(), &tensor_state(&x, &y).unwrap()).unwrap();
        let rhs = tensor_state(&apply(&a, &x).unwrap(), &apply(&b, &y).unwrap()).unwrap();
        assert!(max_diff(lhs.amps(), rhs.amps()) < 1e-12);

        let oracle = naive_matvec(
            &naive_kron(&rows(&a), &rows(&b)),
            &naive_kron_vec(x.amps(), y.amps()),
        );
        assert!(max_diff(lhs.amps(), &oracle) < 1e-12);
        assert!(max_diff_rows(&rows(&tensor_op(&a, &b).unwrap()), &naive_kron(&rows(&a), &rows(&b))) == 0.0);
    }
}

#[test]
fn mixed_product_across_unequal_dims() {
    let mut r = rng(13);
    for (da, db) in [(2, 5), (4, 3), (1, 7)] {
        let (a, b) = (haar_unitary(da, &mut r), haar_unitary(db, &mut r));
        let (x, y) = (haar_state(da, &mut r), haar_state(db, &mut r));
        let lhs = apply(&tensor_op(&a, &b).unwrap(), &tensor_state(&x, &y).unwrap()).unwrap();
        let rhs = tensor_state(&apply(&a, &x).unwrap(), &apply(&b, &y).unwrap()).unwrap();
        assert!(max_diff(lhs.amps(), rhs.amps()) < 1e-12);
    }
}

#[test]
fn distance_triangle_and_trace_form() {
    let mut r = rng(14);
    for dim in 2..=6 {
        for _ in 0..50 {
            let a = haar_unitary(dim, &mut r);
            let b = haar_unitary(dim, &mut r);
            let c = haar_unitary(dim, &mut r);
            let ab = phase_invariant_distance(&a, &b).unwrap();
            let bc = phase_invariant_distance(&b, &c).unwrap();
            let ac = phase_invariant_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-9);
            assert!((ab - trace_distance_formula(&a, &b)).abs() < 1e-7);
            assert!((ab - phase_invariant_distance(&b, &a).unwrap()).abs() < 1e-15);
        }
    }
}

#[test]
fn distance_vanishes_on_phase_multiples() {
    let mut r = rng(15);
    for dim in 1..=6 {
        let u = haar_unitary(dim, &mut r);
        assert_eq!(phase_invariant_distance(&u, &u).unwrap(), 0.0);
        for phi in [0.1, 1.0, 2.5, -3.0] {
            let v = u.scale(Complex64::from_polar(1.0, phi));
            assert!(phase_invariant_distance(&u, &v).unwrap() < 1e-14);
        }
    }
}

fn arb_state(max_dim: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d).prop_filter_map(
            "zero vector",
            |v| StateVector::normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).ok(),
        )
    })
}

proptest! {
    #[test]
    fn fidelity_is_symmetric_and_bounded(seed in any::<u64>(), dim in 1usize..9) {
        let mut r = rng(seed);
        let a = haar_state(dim, &mut r);
        let b = haar_state(dim, &mut r);
        let ab = fidelity(&a, &b).unwrap();
        let ba = fidelity(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-15);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn state_json_round_trip(s in arb_state(8)) {
        let text = serde_json::to_string(&s).unwrap();
        let back: StateVector = serde_json::from_str(&text).unwrap();
        for (x, y) in s.amps().iter().zip(back.amps()) {
            prop_assert!((x - y).norm() <= 1e-15 * x.norm().max(1e-300));
        }
    }

    #[test]
    fn operator_json_round_trip(seed in any::<u64>(), dim in 1usize..6) {
        let u = haar_unitary(dim, &mut rng(seed));
        let text = serde_json::to_string(&u).unwrap();
        let back: Operator = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, u);
    }
}
