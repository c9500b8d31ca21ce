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

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{gates, CMatrix, ONE, ZERO};
use crate::statevec::NORM_TOLERANCE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParityError {
    #[error("encoding level must be at least {min}, got {level}")]
    LevelTooLow { level: usize, min: usize },
    #[error("logical amplitudes are not normalized (norm^2 = {0})")]
    Unnormalized(f64),
    #[error("resource state size must be at least {min}, got {size}")]
    ResourceTooSmall { size: usize, min: usize },
}

/// A logical qubit `alpha |0>^(n) + beta |1>^(n)` carried by `n` physical qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalParityQubit {
    alpha: Complex64,
    beta: Complex64,
    level: usize,
}

impl LogicalParityQubit {
    pub fn new(alpha: Complex64, beta: Complex64, level: usize) -> Result<Self, ParityError> {
        if level == 0 {
            return Err(ParityError::LevelTooLow { level, min: 1 });
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(ParityError::Unnormalized(norm));
        }
        Ok(LogicalParityQubit { alpha, beta, level })
    }

    /// Logical `|0>` at the given level.
    pub fn zero(level: usize) -> Self {
        Self::new(ONE, ZERO, level).expect("level must be positive")
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub(crate) fn with_level(self, level: usize) -> Self {
        debug_assert!(level >= 1);
        LogicalParityQubit { level, ..self }
    }

    pub(crate) fn map(self, u: &CMatrix) -> Self {
        let v = u.apply(&[self.alpha, self.beta]);
        LogicalParityQubit { alpha: v[0], beta: v[1], level: self.level }
    }

    /// Same logical state up to a global phase, and same level.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.level == other.level && phase_equal(&[self.alpha, self.beta], &[other.alpha, other.beta], tol)
    }
}

/// Two logical qubits `a` (first) and `b` (second).
///
/// Amplitudes are indexed by the ket `|ab>` as `2a + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalPair {
    amps: [Complex64; 4],
    levels: [usize; 2],
}

impl LogicalPair {
    pub fn new(amps: [Complex64; 4], level_a: usize, level_b: usize) -> Result<Self, ParityError> {
        for level in [level_a, level_b] {
            if level == 0 {
                return Err(ParityError::LevelTooLow { level, min: 1 });
            }
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(ParityError::Unnormalized(norm));
        }
        Ok(LogicalPair { amps, levels: [level_a, level_b] })
    }

    /// Logical basis state `|ab>`.
    pub fn basis(a: u8, b: u8, level_a: usize, level_b: usize) -> Result<Self, ParityError> {
        let mut amps = [ZERO; 4];
        amps[2 * a as usize + b as usize] = ONE;
        Self::new(amps, level_a, level_b)
    }

    pub fn product(a: &LogicalParityQubit, b: &LogicalParityQubit) -> Self {
        LogicalPair {
            amps: [a.alpha * b.alpha, a.alpha * b.beta, a.beta * b.alpha, a.beta * b.beta],
            levels: [a.level, b.level],
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amps
    }

    pub fn levels(&self) -> [usize; 2] {
        self.levels
    }

    pub(crate) fn with_levels(self, level_a: usize, level_b: usize) -> Self {
        debug_assert!(level_a >= 1 && level_b >= 1);
        LogicalPair { levels: [level_a, level_b], ..self }
    }

    /// Exchange the roles of the two logical qubits.
    pub fn swapped(self) -> Self {
        let [a00, a01, a10, a11] = self.amps;
        LogicalPair { amps: [a00, a10, a01, a11], levels: [self.levels[1], self.levels[0]] }
    }

    /// Logical CNOT with `a` as control.
    pub fn cnot(self) -> Self {
        let [a00, a01, a10, a11] = self.amps;
        LogicalPair { amps: [a00, a01, a11, a10], ..self }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.levels == other.levels && phase_equal(&self.amps, &other.amps, tol)
    }
}

/// A resource state `|0>^(size)`; size 2 is a Bell pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResourceState {
    size: usize,
}

impl ResourceState {
    pub const MIN_SIZE: usize = 2;

    pub fn new(size: usize) -> Result<Self, ParityError> {
        if size < Self::MIN_SIZE {
            return Err(ParityError::ResourceTooSmall { size, min: Self::MIN_SIZE });
        }
        Ok(ResourceState { size })
    }

    pub fn bell() -> Self {
        ResourceState { size: 2 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The resource left after one of its qubits is measured out, if it is
    /// still entangled. A lone qubit is not kept.
    pub fn reduced(self) -> Option<ResourceState> {
        ResourceState::new(self.size - 1).ok()
    }
}

/// `v2 = e^{i phi} v1` for some real `phi`, within `tol`.
pub(crate) fn phase_equal(v1: &[Complex64], v2: &[Complex64], tol: f64) -> bool {
    let (k, pivot) = v1
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(k, a)| (k, *a))
        .expect("non-empty");
    if pivot.norm() <= tol {
        return v2.iter().all(|b| b.norm() <= tol);
    }
    let ratio = v2[k] / pivot;
    if (ratio.norm() - 1.0).abs() > tol {
        return false;
    }
    let phase = ratio / ratio.norm();
    v1.iter().zip(v2).all(|(a, b)| (b - phase * a).norm() <= tol)
}

/// Computational-basis measurement of one physical qubit of the code.
///
/// Outcome 1 flips the logical qubit; the X correction that undoes the flip
/// is applied here, so the returned state is always `(alpha, beta, n - 1)`.
pub fn measure_physical(q: LogicalParityQubit, _outcome: u8) -> Result<LogicalParityQubit, ParityError> {
    if q.level < 2 {
        return Err(ParityError::LevelTooLow { level: q.level, min: 2 });
    }
    Ok(q.with_level(q.level - 1))
}

/// Measuring the last physical qubit reads out the logical qubit.
/// Returns `[P(0), P(1)]`.
pub fn destroy_by_measurement(q: LogicalParityQubit) -> Result<[f64; 2], ParityError> {
    if q.level != 1 {
        return Err(ParityError::LevelTooLow { level: q.level, min: 1 });
    }
    Ok([q.alpha.norm_sqr(), q.beta.norm_sqr()])
}

/// Z on every physical qubit: `(alpha, beta) -> (alpha, -beta)`.
pub fn logical_z(q: LogicalParityQubit) -> LogicalParityQubit {
    q.map(&gates::z())
}

/// `X_theta = cos(theta/2) I + i sin(theta/2) X` on any one physical qubit.
pub fn logical_x_theta(q: LogicalParityQubit, theta: f64) -> LogicalParityQubit {
    q.map(&gates::x_theta(theta))
}

/// The logical action of a successful Z90 protocol: `diag(1, i)`.
pub fn logical_z90(q: LogicalParityQubit) -> LogicalParityQubit {
    q.map(&gates::z90())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(level: usize) -> LogicalParityQubit {
        LogicalParityQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), level).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(LogicalParityQubit::new(ONE, ONE, 2).is_err());
        assert_eq!(LogicalParityQubit::new(ONE, ZERO, 0), Err(ParityError::LevelTooLow { level: 0, min: 1 }));
        assert!(ResourceState::new(1).is_err());
        assert_eq!(ResourceState::new(2).unwrap(), ResourceState::bell());
        assert!(LogicalPair::new([ONE; 4], 1, 1).is_err());
    }

    #[test]
    fn measurement_reduces_level_only() {
        for outcome in [0, 1] {
            let out = measure_physical(q(3), outcome).unwrap();
            assert_eq!(out.level(), 2);
            assert_eq!(out.amplitudes(), q(3).amplitudes());
        }
        assert_eq!(measure_physical(q(1), 0), Err(ParityError::LevelTooLow { level: 1, min: 2 }));
    }

    #[test]
    fn destroying_the_last_qubit_reads_out_amplitudes() {
        let p = destroy_by_measurement(q(1)).unwrap();
        assert!((p[0] - 0.36).abs() < 1e-12 && (p[1] - 0.64).abs() < 1e-12);
        assert!(destroy_by_measurement(q(2)).is_err());
    }

    #[test]
    fn deterministic_gates() {
        let z = logical_z(q(5));
        assert_eq!(z.level(), 5);
        assert_eq!(z.amplitudes(), [q(5).alpha(), -q(5).beta()]);

        let x180 = logical_x_theta(q(4), PI);
        let want = LogicalParityQubit::new(q(4).beta() * crate::linalg::I, q(4).alpha() * crate::linalg::I, 4).unwrap();
        assert!(x180.approx_eq(&want, 1e-12));
        assert!((x180.alpha() - want.alpha()).norm() < 1e-12, "exact, not only up to phase");

        assert!(logical_x_theta(q(2), 0.0).approx_eq(&q(2), 1e-15));
    }

    #[test]
    fn cnot_truth_table() {
        for (a, b, want) in [(0, 0, (0, 0)), (0, 1, (0, 1)), (1, 0, (1, 1)), (1, 1, (1, 0))] {
            let out = LogicalPair::basis(a, b, 2, 2).unwrap().cnot();
            assert!(out.approx_eq(&LogicalPair::basis(want.0, want.1, 2, 2).unwrap(), 1e-15));
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let p = LogicalPair::new(
            [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0)],
            3,
            5,
        )
        .unwrap();
        assert_eq!(p.swapped().swapped(), p);
        assert_eq!(p.swapped().levels(), [5, 3]);
    }
}
