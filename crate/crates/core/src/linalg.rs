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

//! Dense complex state vectors and operators.
//!
//! Composite spaces use one ordering everywhere: in `a ⊗ b` the first factor
//! is the slow (most significant) index, so `|i⟩ ⊗ |j⟩` sits at `i * dim_b + j`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of a state's 2-norm from one.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed max-entry residual of `A†A - I` for an operator to count as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Default amplitude budget for dense objects.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

/// Current amplitude budget for dense states and operator dimensions.
pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

/// Replace the amplitude budget. Returns the previous value.
pub fn set_max_dim(limit: usize) -> usize {
    MAX_DIM.swap(limit.max(1), Ordering::Relaxed)
}

pub(crate) fn check_capacity(what: &'static str, requested: u128) -> Result<usize> {
    let limit = max_dim();
    if requested > limit as u128 {
        return Err(Error::Capacity {
            what,
            requested,
            limit,
        });
    }
    Ok(requested as usize)
}

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A normalized pure state over a computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amps`, rejecting empty, non-finite or non-normalized input.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::contract("state dimension must be at least 1"));
        }
        if !all_finite(&amps) {
            return Err(Error::contract("state has non-finite amplitudes"));
        }
        check_capacity("state", amps.len() as u128)?;
        let norm = norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::contract(format!(
                "state norm {norm} differs from 1 by more than {NORM_TOL}"
            )));
        }
        Ok(StateVector { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amps);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::contract("cannot normalize a zero or non-finite vector"));
        }
        amps.iter_mut().for_each(|a| *a /= n);
        Self::new(amps)
    }

    /// The basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::contract("state dimension must be at least 1"));
        }
        if index >= dim {
            return Err(Error::contract(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        check_capacity("state", dim as u128)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amps })
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        debug_assert!((norm(&amps) - 1.0).abs() <= 1e-8);
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::contract(format!(
                "inner product of states with dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(inner_raw(&self.amps, &other.amps))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// Index and probability of the most likely basis outcome. Ties go to the
    /// lowest index.
    pub fn dominant_basis(&self) -> (usize, f64) {
        let mut best = (0, self.amps[0].norm_sqr());
        for (i, a) in self.amps.iter().enumerate().skip(1) {
            let p = a.norm_sqr();
            if p > best.1 {
                best = (i, p);
            }
        }
        best
    }
}

pub(crate) fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner_raw(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Operator {
    /// Builds an operator from row-major `entries` of length `dim * dim`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::contract("operator dimension must be at least 1"));
        }
        check_capacity("operator", dim as u128)?;
        if entries.len() != dim * dim {
            return Err(Error::contract(format!(
                "operator of dim {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if !all_finite(&entries) {
            return Err(Error::contract("operator has non-finite entries"));
        }
        Ok(Operator { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::contract("operator rows must form a square matrix"));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    /// Like [`Operator::new`], additionally requiring unitarity.
    pub fn unitary(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let op = Self::new(dim, entries)?;
        op.ensure_unitary("operator")?;
        Ok(op)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| if r == c { 1.0 } else { 0.0 }.into())
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|i| f(i / dim, i % dim)).collect();
        Self::new(dim, entries)
    }

    pub(crate) fn from_raw(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Operator { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Operator {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|i| self.entries[(i % d) * d + i / d].conj())
            .collect();
        Operator::from_raw(d, entries)
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim != rhs.dim {
            return Err(Error::contract(format!(
                "cannot compose operators of dims {} and {}",
                self.dim, rhs.dim
            )));
        }
        Ok(Operator::from_raw(
            self.dim,
            matmul_raw(self.dim, &self.entries, &rhs.entries),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator::from_raw(self.dim, self.entries.iter().map(|z| z * factor).collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max-entry magnitude of `A†A - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entries[k * d + r].conj() * self.entries[k * d + c];
                }
                if r == c {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= UNITARY_TOL
    }

    pub(crate) fn ensure_unitary(&self, what: &str) -> Result<()> {
        let res = self.unitarity_residual();
        if res > UNITARY_TOL {
            return Err(Error::contract(format!(
                "{what} is not unitary (residual {res:e} > {UNITARY_TOL:e})"
            )));
        }
        Ok(())
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dims differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn matmul_raw(d: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for k in 0..d {
            let aik = a[r * d + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            let brow = &b[k * d..(k + 1) * d];
            for (o, bk) in out[r * d..(r + 1) * d].iter_mut().zip(brow) {
                *o += aik * bk;
            }
        }
    }
    out
}

/// `out = M · x` for a row-major `d × d` matrix.
pub(crate) fn matvec_into(d: usize, m: &[Complex64], x: &[Complex64], out: &mut [Complex64]) {
    for (r, o) in out.iter_mut().enumerate() {
        *o = inner_unconj(&m[r * d..(r + 1) * d], x);
    }
}

fn inner_unconj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `a ⊗ b` with `a` as the slow index.
pub fn tensor_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = check_capacity("tensor state", a.dim() as u128 * b.dim() as u128)?;
    let mut amps = Vec::with_capacity(dim);
    for x in &a.amps {
        amps.extend(b.amps.iter().map(|y| x * y));
    }
    Ok(StateVector { amps })
}

/// Kronecker product, ordered consistently with [`tensor_state`].
pub fn tensor_op(a: &Operator, b: &Operator) -> Result<Operator> {
    let d = check_capacity("tensor operator", a.dim as u128 * b.dim as u128)?;
    let (da, db) = (a.dim, b.dim);
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for ar in 0..da {
        for ac in 0..da {
            let x = a.entries[ar * da + ac];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..db {
                let row = ar * db + br;
                for bc in 0..db {
                    entries[row * d + ac * db + bc] = x * b.entries[br * db + bc];
                }
            }
        }
    }
    Ok(Operator::from_raw(d, entries))
}

/// Matrix-vector product. The result must still be a normalized state, which
/// holds for every unitary `op`.
pub fn apply(op: &Operator, s: &StateVector) -> Result<StateVector> {
    if op.dim != s.dim() {
        return Err(Error::contract(format!(
            "operator dim {} does not match state dim {}",
            op.dim,
            s.dim()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); s.dim()];
    matvec_into(op.dim, &op.entries, &s.amps, &mut out);
    let n = norm(&out);
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::contract(format!(
            "operator did not preserve the norm (got {n})"
        )));
    }
    Ok(StateVector { amps: out })
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// `sqrt(max(0, 1 - |tr(A†B)| / dim))`; zero exactly when `A = e^{iφ} B`.
pub fn phase_invariant_distance(a: &Operator, b: &Operator) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::contract(format!(
            "distance between operators of dims {} and {}",
            a.dim, b.dim
        )));
    }
    a.ensure_unitary("left operand")?;
    b.ensure_unitary("right operand")?;
    Ok(distance_raw(a.dim, &a.entries, &b.entries))
}

/// Evaluated as `min_φ ‖A - e^{iφ}B‖_F / sqrt(2·dim)`, which equals the trace
/// form for unitaries but does not lose half the digits near zero.
pub(crate) fn distance_raw(d: usize, a: &[Complex64], b: &[Complex64]) -> f64 {
    let t = inner_raw(a, b);
    let mag = t.norm();
    let w = if mag > 0.0 {
        t.conj() / mag
    } else {
        Complex64::new(1.0, 0.0)
    };
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - w * y).norm_sqr()).sum();
    (sq / (2.0 * d as f64)).sqrt()
}

type WireComplex = [f64; 2];

fn to_wire(z: &Complex64) -> WireComplex {
    [z.re, z.im]
}

fn from_wire(w: &WireComplex) -> Complex64 {
    Complex64::new(w[0], w[1])
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    dim: usize,
    amps: Vec<WireComplex>,
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateWire {
            dim: self.dim(),
            amps: self.amps.iter().map(to_wire).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = StateWire::deserialize(d)?;
        if w.amps.len() != w.dim {
            return Err(serde::de::Error::custom(format!(
                "state declares dim {} but has {} amplitudes",
                w.dim,
                w.amps.len()
            )));
        }
        StateVector::new(w.amps.iter().map(from_wire).collect()).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    dim: usize,
    rows: Vec<Vec<WireComplex>>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorWire {
            dim: self.dim,
            rows: (0..self.dim)
                .map(|r| self.row(r).iter().map(to_wire).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = OperatorWire::deserialize(d)?;
        if w.rows.len() != w.dim {
            return Err(serde::de::Error::custom(format!(
                "operator declares dim {} but has {} rows",
                w.dim,
                w.rows.len()
            )));
        }
        let rows = w
            .rows
            .iter()
            .map(|r| r.iter().map(from_wire).collect())
            .collect();
        Operator::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> Operator {
        Operator::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::normalized(vec![c(1., 0.), c(1., 0.)]).unwrap()
    }

    #[test]
    fn tensor_state_basis_bookkeeping() {
        let s = tensor_state(
            &StateVector::basis(2, 0).unwrap(),
            &StateVector::basis(2, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(s.amps(), &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);

        let s = tensor_state(
            &StateVector::basis(3, 2).unwrap(),
            &StateVector::basis(3, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(s.dim(), 9);
        assert_eq!(s.dominant_basis(), (7, 1.0));
    }

    #[test]
    fn tensor_state_is_bilinear() {
        let s = tensor_state(&plus(), &StateVector::basis(2, 0).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [h, 0.0, h, 0.0];
        for (a, e) in s.amps().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_op_identity_and_ordering() {
        let i2 = Operator::identity(2).unwrap();
        assert_eq!(tensor_op(&i2, &i2).unwrap(), Operator::identity(4).unwrap());

        let xi = tensor_op(&pauli_x(), &i2).unwrap();
        let out = apply(&xi, &StateVector::basis(4, 0).unwrap()).unwrap();
        // X on the slow factor: |00⟩ → |10⟩
        assert_eq!(out, StateVector::basis(4, 2).unwrap());
    }

    #[test]
    fn apply_examples() {
        let psi = plus();
        assert_eq!(apply(&Operator::identity(2).unwrap(), &psi).unwrap(), psi);
        let err = apply(&Operator::identity(3).unwrap(), &psi).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        let squash = Operator::new(2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(apply(&squash, &psi).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis(2, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!((fidelity(&plus(), &zero).unwrap() - 0.5).abs() < 1e-15);
        assert!(fidelity(&zero, &StateVector::basis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn distance_examples() {
        let x = pauli_x();
        let i2 = Operator::identity(2).unwrap();
        assert_eq!(phase_invariant_distance(&x, &x).unwrap(), 0.0);
        let phased = x.scale(Complex64::from_polar(1.0, 0.731));
        assert!(phase_invariant_distance(&x, &phased).unwrap() < 1e-15);
        assert!((phase_invariant_distance(&i2, &x).unwrap() - 1.0).abs() < 1e-15);
        let bad = Operator::new(2, vec![c(2., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        assert!(matches!(
            phase_invariant_distance(&bad, &i2),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn state_validation() {
        assert!(StateVector::new(vec![]).is_err());
        assert!(StateVector::new(vec![c(1., 0.), c(1., 0.)]).is_err());
        assert!(StateVector::new(vec![c(f64::NAN, 0.)]).is_err());
        assert!(StateVector::basis(2, 2).is_err());
        assert!(Operator::new(0, vec![]).is_err());
        assert!(Operator::new(2, vec![c(0., 0.); 3]).is_err());
    }

    #[test]
    fn capacity_is_enforced() {
        let big = StateVector::basis(1 << 11, 0).unwrap();
        let err = tensor_state(&big, &StateVector::basis(1 << 10, 0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn json_shapes() {
        let s = StateVector::basis(2, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"dim":2,"amps":[[0.0,0.0],[1.0,0.0]]}"#
        );
        let x = pauli_x();
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"dim":2,"rows":[[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]}"#
        );
        assert!(serde_json::from_str::<StateVector>(r#"{"dim":3,"amps":[[1.0,0.0]]}"#).is_err());
        assert!(serde_json::from_str::<StateVector>(r#"{"dim":1,"amps":[[2.0,0.0]]}"#).is_err());
    }
}
