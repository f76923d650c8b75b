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

//! Seeded random states and unitaries for tests, demos and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{norm, Operator, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state: a normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if norm(&amps) > 1e-6 {
            return StateVector::normalized(amps).expect("finite gaussian vector");
        }
    }
}

/// Haar-distributed unitary: the Q factor of a complex Gaussian matrix,
/// with R's diagonal made real positive.
///
/// Gram-Schmidt on the columns yields exactly that normalization. Each
/// column is orthogonalized twice to keep the residual near machine epsilon.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= proj * qi);
            }
        }
        let n = norm(&v);
        if n < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        cols.push(v);
    }
    Operator::from_fn(dim, |r, c| cols[c][r]).expect("dimension fits the budget")
}
