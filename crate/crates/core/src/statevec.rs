// Copyright 2026 The parity-loqc Authors
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

//! Dense state vectors over physical qubits.
//!
//! This is the brute-force ground truth for the symbolic parity engine, so it
//! favours plain loops over cleverness. Qubit 0 is the least significant bit
//! of the basis index.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{CMatrix, ONE, ZERO};

/// Default cap on the number of qubits a dense state may hold.
pub const DEFAULT_QUBIT_BUDGET: usize = 22;

/// Tolerance used when checking that an input state is normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Branches with probability below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit state")]
    IndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} used twice")]
    DuplicateQubit(usize),
    #[error("operator is not unitary within 1e-12")]
    NonUnitary,
    #[error("state is not normalized (norm^2 = {0})")]
    UnnormalizedState(f64),
    #[error("requested branch has probability {0:e}")]
    ZeroProbabilityBranch(f64),
    #[error("encoding level {level} exceeds the qubit budget of {budget}")]
    LevelTooLarge { level: usize, budget: usize },
    #[error("encoding level must be at least 1")]
    LevelTooLow,
    #[error("states have different sizes ({0} vs {1} qubits)")]
    DimensionMismatch(usize, usize),
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("logical amplitudes are not normalized (norm^2 = {0})")]
    InvalidAmplitudes(f64),
}

pub type Result<T> = std::result::Result<T, StateError>;

/// Amplitudes of a pure state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The zero-qubit state, i.e. the scalar 1.
    pub fn scalar() -> Self {
        StateVector { num_qubits: 0, amps: vec![ONE] }
    }

    /// Computational basis state `|index>` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        StateVector { num_qubits, amps }
    }

    /// Wrap raw amplitudes. The vector is not renormalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        Ok(StateVector { num_qubits: len.trailing_zeros() as usize, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::UnnormalizedState(n));
        }
        Ok(())
    }

    /// Rescale to unit norm. A zero vector is returned unchanged.
    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
        self
    }

    pub fn check_index(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(StateError::IndexOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// `self ⊗ other`, with `other`'s qubits placed above `self`'s.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        StateVector { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    /// Apply a single-qubit unitary to `qubit`.
    pub fn apply_1q(&self, qubit: usize, u: &CMatrix) -> Result<StateVector> {
        self.check_index(qubit)?;
        if u.rows() != 2 || !u.is_unitary(1e-12) {
            return Err(StateError::NonUnitary);
        }
        Ok(self.apply_1q_unchecked(qubit, u))
    }

    pub(crate) fn apply_1q_unchecked(&self, qubit: usize, u: &CMatrix) -> StateVector {
        let mut amps = self.amps.clone();
        let bit = 1usize << qubit;
        for i in 0..amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                amps[i | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
        StateVector { num_qubits: self.num_qubits, amps }
    }

    /// Apply the same single-qubit unitary to each listed qubit.
    pub fn apply_1q_each(&self, qubits: &[usize], u: &CMatrix) -> Result<StateVector> {
        let mut s = self.clone();
        for &q in qubits {
            s = s.apply_1q(q, u)?;
        }
        Ok(s)
    }

    /// Unnormalized projection of `qubit` onto `|outcome>`, with the qubit removed.
    pub fn project_qubit(&self, qubit: usize, outcome: u8) -> Result<StateVector> {
        self.check_index(qubit)?;
        let bit = 1usize << qubit;
        let low = bit - 1;
        let mut amps = vec![ZERO; self.amps.len() / 2];
        for (j, slot) in amps.iter_mut().enumerate() {
            // Re-insert the measured bit at position `qubit`.
            let i = (j & low) | ((j & !low) << 1) | if outcome == 1 { bit } else { 0 };
            *slot = self.amps[i];
        }
        Ok(StateVector { num_qubits: self.num_qubits - 1, amps })
    }

    /// Probability of reading `outcome` on `qubit`.
    pub fn outcome_probability(&self, qubit: usize, outcome: u8) -> Result<f64> {
        Ok(self.project_qubit(qubit, outcome)?.norm_sqr())
    }

    /// Projective computational-basis measurement with a chosen outcome.
    ///
    /// Returns the Born probability and the renormalized post-state with the
    /// measured qubit removed.
    pub fn measure_qubit(&self, qubit: usize, outcome: u8) -> Result<(f64, StateVector)> {
        let projected = self.project_qubit(qubit, outcome)?;
        let p = projected.norm_sqr();
        if p < ZERO_PROBABILITY {
            return Err(StateError::ZeroProbabilityBranch(p));
        }
        Ok((p, projected.normalized()))
    }

    /// Apply a two-qubit-input operator to `(first, second)`.
    ///
    /// `op` has 4 columns indexed by the input ket `|ab>` as `2a + b`, where
    /// `a` is the bit of `first` and `b` the bit of `second`. With 1 output row
    /// both qubits are consumed. With 2 output rows the output qubit takes the
    /// lower of the two input positions and the higher position is removed.
    /// The result is not renormalized.
    pub fn apply_pair_operator(&self, first: usize, second: usize, op: &CMatrix) -> Result<StateVector> {
        self.check_index(first)?;
        self.check_index(second)?;
        if first == second {
            return Err(StateError::DuplicateQubit(first));
        }
        assert_eq!(op.cols(), 4, "pair operator must act on two qubits");
        assert!(op.rows() == 1 || op.rows() == 2, "pair operator must output 0 or 1 qubits");
        let (lo, hi) = (first.min(second), first.max(second));
        let rest = self.num_qubits - 2;
        let out_qubits = rest + op.rows() / 2;
        let mut amps = vec![ZERO; 1 << out_qubits];
        for i in 0..self.amps.len() {
            let a = self.amps[i];
            if a == ZERO {
                continue;
            }
            let bf = (i >> first) & 1;
            let bs = (i >> second) & 1;
            let col = 2 * bf + bs;
            // Remaining qubits with lo and hi squeezed out.
            let without_hi = (i & ((1 << hi) - 1)) | ((i >> (hi + 1)) << hi);
            let base = (without_hi & ((1 << lo) - 1)) | ((without_hi >> (lo + 1)) << lo);
            for row in 0..op.rows() {
                let coeff = op[(row, col)];
                if coeff == ZERO {
                    continue;
                }
                let j = if op.rows() == 1 {
                    base
                } else {
                    let lo_mask = (1 << lo) - 1;
                    (base & lo_mask) | (row << lo) | ((base & !lo_mask) << 1)
                };
                amps[j] += coeff * a;
            }
        }
        Ok(StateVector { num_qubits: out_qubits, amps })
    }

    /// True iff `other = e^{i phi} self` for some real `phi`, within `tol`.
    pub fn equivalent_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool> {
        if self.num_qubits != other.num_qubits {
            return Err(StateError::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        let (k, pivot) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(k, a)| (k, *a))
            .expect("state has at least one amplitude");
        if pivot.norm() <= tol {
            return Ok(other.amps.iter().all(|b| b.norm() <= tol));
        }
        let ratio = other.amps[k] / pivot;
        if (ratio.norm() - 1.0).abs() > tol {
            return Ok(false);
        }
        let phase = ratio / ratio.norm();
        Ok(self.amps.iter().zip(&other.amps).all(|(a, b)| (b - phase * a).norm() <= tol))
    }
}

fn check_logical_norm(amps: &[Complex64]) -> Result<()> {
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(StateError::InvalidAmplitudes(n));
    }
    Ok(())
}

/// `alpha |0>^(n) + beta |1>^(n)` expanded over `n` physical qubits.
pub fn build_parity_state(level: usize, alpha: Complex64, beta: Complex64) -> Result<StateVector> {
    build_parity_state_with_budget(level, alpha, beta, DEFAULT_QUBIT_BUDGET)
}

pub fn build_parity_state_with_budget(
    level: usize,
    alpha: Complex64,
    beta: Complex64,
    budget: usize,
) -> Result<StateVector> {
    if level == 0 {
        return Err(StateError::LevelTooLow);
    }
    if level > budget {
        return Err(StateError::LevelTooLarge { level, budget });
    }
    let qubits: Vec<usize> = (0..level).collect();
    encoded_state(level, &[qubits], &[alpha, beta])
}

/// Multi-block parity-encoded state.
///
/// `blocks[i]` lists the physical qubits of logical qubit `i`; together they
/// must partition `0..num_qubits`. `logical[x]` is the amplitude of the
/// logical basis state whose bit `i` (LSB first) is the value of block `i`.
/// Each block carries `|j>^(n) = 2^{-(n-1)/2} sum over n-bit strings of
/// parity j`.
pub fn encoded_state(num_qubits: usize, blocks: &[Vec<usize>], logical: &[Complex64]) -> Result<StateVector> {
    assert_eq!(logical.len(), 1 << blocks.len(), "one amplitude per logical basis state");
    check_logical_norm(logical)?;
    let mut owner = vec![usize::MAX; num_qubits];
    for (b, qs) in blocks.iter().enumerate() {
        if qs.is_empty() {
            return Err(StateError::LevelTooLow);
        }
        for &q in qs {
            if q >= num_qubits {
                return Err(StateError::IndexOutOfRange { qubit: q, num_qubits });
            }
            if owner[q] != usize::MAX {
                return Err(StateError::DuplicateQubit(q));
            }
            owner[q] = b;
        }
    }
    assert!(owner.iter().all(|&o| o != usize::MAX), "blocks must cover every qubit");
    let scale: f64 = blocks.iter().map(|qs| 0.5f64.powf((qs.len() as f64 - 1.0) / 2.0)).product();
    let mut amps = vec![ZERO; 1 << num_qubits];
    for (i, slot) in amps.iter_mut().enumerate() {
        let mut logical_index = 0usize;
        for (q, &block) in owner.iter().enumerate() {
            if (i >> q) & 1 == 1 {
                logical_index ^= 1 << block;
            }
        }
        *slot = logical[logical_index] * scale;
    }
    Ok(StateVector { num_qubits, amps })
}
