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

//! Type-I and type-II fusion gates as complete sets of measurement operators.
//!
//! A fusion gate takes two physical qubits and reports a detector pattern.
//! Each pattern corresponds to one Kraus element `E`; the pattern is observed
//! with probability `‖E|ψ⟩‖²`. Elements are scaled so that `Σ E†E = I` on the
//! two-qubit input space.
//!
//! | gate | class   | operator                      | patterns           |
//! |------|---------|-------------------------------|--------------------|
//! | f_II | success | `(⟨00| + ⟨11|)/2`             | `d_1010`, `d_0101` |
//! | f_II | success | `(⟨00| − ⟨11|)/2`, Z frame    | `d_1001`, `d_0110` |
//! | f_II | failure | `⟨01|/√2`                     | `d_2000`, `d_0200` |
//! | f_II | failure | `⟨10|/√2`                     | `d_0020`, `d_0002` |
//! | f_I  | success | `(|0⟩⟨00| + |1⟩⟨11|)/√2`      | `d_10`             |
//! | f_I  | success | `(|0⟩⟨00| − |1⟩⟨11|)/√2`, Z   | `d_01`             |
//! | f_I  | failure | `⟨01|/√2`                     | `d_20`, `d_02`     |
//! | f_I  | failure | `⟨10|`                        | `d_00`             |
//!
//! Input kets are written `|ab⟩` with `a` the first qubit of the pair.
//! Corrections are reported, never applied.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{gates, CMatrix};
use crate::rng::RngStream;
use crate::statevec::{StateError, StateVector, NORM_TOLERANCE, ZERO_PROBABILITY};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("qubit pair ({first}, {second}) is invalid for a {num_qubits}-qubit state")]
    IndexOutOfRange { first: usize, second: usize, num_qubits: usize },
    #[error("input state is not normalized (norm^2 = {0})")]
    UnnormalizedState(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateType {
    /// Two qubits in, one out on success.
    TypeI,
    /// Two qubits in, none out.
    TypeII,
}

impl GateType {
    pub fn elements(self) -> &'static [KrausElement] {
        match self {
            GateType::TypeI => fi_elements(),
            GateType::TypeII => fii_elements(),
        }
    }

    pub fn detectors(self) -> usize {
        match self {
            GateType::TypeI => 2,
            GateType::TypeII => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FusionClass {
    Success,
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => gates::identity(),
            Pauli::X => gates::x(),
            Pauli::Z => gates::z(),
        }
    }
}

/// Photon counts per detector, e.g. `d_1010`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DetectorPattern {
    counts: Vec<u8>,
}

impl DetectorPattern {
    /// Panics if more than two photons are recorded.
    pub fn new(counts: &[u8]) -> Self {
        assert!(counts.iter().map(|&c| c as u32).sum::<u32>() <= 2, "at most two photons enter a fusion gate");
        DetectorPattern { counts: counts.to_vec() }
    }

    /// Parse the digits of a label such as `"1010"` or `"d_1010"`.
    pub fn parse(label: &str) -> Option<Self> {
        let digits = label.strip_prefix("d_").unwrap_or(label);
        let counts: Option<Vec<u8>> = digits.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
        let counts = counts?;
        if counts.is_empty() || counts.iter().map(|&c| c as u32).sum::<u32>() > 2 {
            return None;
        }
        Some(DetectorPattern { counts })
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }
}

impl fmt::Display for DetectorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d_")?;
        for c in &self.counts {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DetectorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One measurement operator of a fusion gate.
#[derive(Clone, Debug)]
pub struct KrausElement {
    pub pattern: DetectorPattern,
    /// 4 columns; 1 row (both qubits consumed) or 2 rows (one qubit out).
    pub matrix: CMatrix,
    pub class: FusionClass,
    /// Pauli frame update owed by the caller. On success `Z` is a phase
    /// correction; on failure `X` is owed by the side that read `1`.
    pub correction: Pauli,
    /// Computational-basis values `[first, second]` read out on failure.
    pub measured: Option<[u8; 2]>,
}

impl KrausElement {
    pub fn output_qubits(&self) -> usize {
        self.matrix.rows() / 2
    }
}

/// The sampled (or enumerated) result of one fusion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionOutcome {
    pub pattern: DetectorPattern,
    pub class: FusionClass,
    pub probability: f64,
    pub correction: Pauli,
    pub measured: Option<[u8; 2]>,
}

fn element(
    pattern: &str,
    rows: usize,
    entries: &[f64],
    scale: f64,
    class: FusionClass,
    correction: Pauli,
    measured: Option<[u8; 2]>,
) -> KrausElement {
    let scaled: Vec<f64> = entries.iter().map(|x| x * scale).collect();
    KrausElement {
        pattern: DetectorPattern::parse(pattern).expect("static pattern"),
        matrix: CMatrix::from_real(rows, 4, &scaled),
        class,
        correction,
        measured,
    }
}

const BRA_00_PLUS_11: [f64; 4] = [1.0, 0.0, 0.0, 1.0];
const BRA_00_MINUS_11: [f64; 4] = [1.0, 0.0, 0.0, -1.0];
const BRA_01: [f64; 4] = [0.0, 1.0, 0.0, 0.0];
const BRA_10: [f64; 4] = [0.0, 0.0, 1.0, 0.0];

/// The eight measurement operators of the type-II fusion gate.
pub fn fii_elements() -> &'static [KrausElement] {
    static ELEMENTS: OnceLock<Vec<KrausElement>> = OnceLock::new();
    ELEMENTS.get_or_init(|| {
        use FusionClass::*;
        let h = 0.5;
        let f = FRAC_1_SQRT_2;
        vec![
            element("1010", 1, &BRA_00_PLUS_11, h, Success, Pauli::I, None),
            element("0101", 1, &BRA_00_PLUS_11, h, Success, Pauli::I, None),
            element("1001", 1, &BRA_00_MINUS_11, h, Success, Pauli::Z, None),
            element("0110", 1, &BRA_00_MINUS_11, h, Success, Pauli::Z, None),
            element("2000", 1, &BRA_01, f, Failure, Pauli::X, Some([0, 1])),
            element("0200", 1, &BRA_01, f, Failure, Pauli::X, Some([0, 1])),
            element("0020", 1, &BRA_10, f, Failure, Pauli::X, Some([1, 0])),
            element("0002", 1, &BRA_10, f, Failure, Pauli::X, Some([1, 0])),
        ]
    })
}

/// The five measurement operators of the type-I fusion gate.
///
/// The `d_01` operator is `(|0⟩⟨00| − |1⟩⟨11|)/√2`, which differs from the
/// `d_10` operator by a Z on the output qubit.
pub fn fi_elements() -> &'static [KrausElement] {
    static ELEMENTS: OnceLock<Vec<KrausElement>> = OnceLock::new();
    ELEMENTS.get_or_init(|| {
        use FusionClass::*;
        let f = FRAC_1_SQRT_2;
        // Rows: output |0>, output |1>.
        let plus = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let minus = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0];
        vec![
            element("10", 2, &plus, f, Success, Pauli::I, None),
            element("01", 2, &minus, f, Success, Pauli::Z, None),
            element("20", 1, &BRA_01, f, Failure, Pauli::X, Some([0, 1])),
            element("02", 1, &BRA_01, f, Failure, Pauli::X, Some([0, 1])),
            element("00", 1, &BRA_10, 1.0, Failure, Pauli::X, Some([1, 0])),
        ]
    })
}

/// `Σ E†E` over a gate's elements; should equal the 4x4 identity.
pub fn completeness_sum(gate: GateType) -> CMatrix {
    gate.elements().iter().fold(CMatrix::zeros(4, 4), |acc, e| acc.add(&(&e.matrix.adjoint() * &e.matrix)))
}

/// Largest elementwise deviation of `Σ E†E` from the identity.
pub fn completeness_deviation(gate: GateType) -> f64 {
    completeness_sum(gate).max_deviation(&CMatrix::identity(4))
}

fn check_inputs(state: &StateVector, pair: (usize, usize)) -> Result<(), FusionError> {
    let n = state.num_qubits();
    if pair.0 >= n || pair.1 >= n || pair.0 == pair.1 {
        return Err(FusionError::IndexOutOfRange { first: pair.0, second: pair.1, num_qubits: n });
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(FusionError::UnnormalizedState(norm));
    }
    Ok(())
}

fn outcome_of(e: &KrausElement, probability: f64) -> FusionOutcome {
    FusionOutcome {
        pattern: e.pattern.clone(),
        class: e.class,
        probability,
        correction: e.correction,
        measured: e.measured,
    }
}

/// Every detector pattern with its exact probability and renormalized
/// post-state. Zero-probability patterns carry an all-zero post-state.
pub fn enumerate_outcomes(
    state: &StateVector,
    gate: GateType,
    pair: (usize, usize),
) -> Result<Vec<(FusionOutcome, StateVector)>, FusionError> {
    check_inputs(state, pair)?;
    gate.elements()
        .iter()
        .map(|e| {
            let post = state.apply_pair_operator(pair.0, pair.1, &e.matrix)?;
            let p = post.norm_sqr();
            let post = if p < ZERO_PROBABILITY { post } else { post.normalized() };
            Ok((outcome_of(e, p), post))
        })
        .collect()
}

/// Sample a detector pattern with its Born probability.
///
/// The fused qubits are removed from the returned state (for f_I success the
/// output qubit takes the lower of the two positions). The correction in
/// the outcome is not applied.
pub fn apply_fusion(
    state: &StateVector,
    gate: GateType,
    pair: (usize, usize),
    rng: &mut RngStream,
) -> Result<(FusionOutcome, StateVector), FusionError> {
    let mut outcomes = enumerate_outcomes(state, gate, pair)?;
    let u = rng.uniform();
    let mut acc = 0.0;
    let mut chosen = None;
    for (k, (o, _)) in outcomes.iter().enumerate() {
        if o.probability < ZERO_PROBABILITY {
            continue;
        }
        acc += o.probability;
        chosen = Some(k);
        if u < acc {
            break;
        }
    }
    let k = chosen.expect("a normalized state has at least one possible outcome");
    Ok(outcomes.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn bell(sign: f64) -> StateVector {
        let r = FRAC_1_SQRT_2;
        StateVector::from_amplitudes(vec![Complex64::new(r, 0.0), ZERO, ZERO, Complex64::new(sign * r, 0.0)]).unwrap()
    }

    fn probs(state: &StateVector, gate: GateType) -> Vec<(String, f64)> {
        enumerate_outcomes(state, gate, (0, 1))
            .unwrap()
            .into_iter()
            .map(|(o, _)| (o.pattern.to_string(), o.probability))
            .collect()
    }

    fn prob_of(list: &[(String, f64)], label: &str) -> f64 {
        list.iter().find(|(p, _)| p == label).map(|(_, p)| *p).unwrap()
    }

    #[test]
    fn fii_has_eight_elements_fi_has_five() {
        assert_eq!(fii_elements().len(), 8);
        assert_eq!(fi_elements().len(), 5);
        assert_eq!(fii_elements().iter().filter(|e| e.class == FusionClass::Success).count(), 4);
        assert_eq!(fi_elements().iter().filter(|e| e.class == FusionClass::Success).count(), 2);
    }

    #[test]
    fn both_gates_are_complete() {
        assert!(completeness_deviation(GateType::TypeII) < 1e-12);
        assert!(completeness_deviation(GateType::TypeI) < 1e-12);
    }

    #[test]
    fn patterns_are_distinct_and_photon_counts_consistent() {
        for gate in [GateType::TypeI, GateType::TypeII] {
            let mut seen = std::collections::HashSet::new();
            for e in gate.elements() {
                assert_eq!(e.pattern.counts().len(), gate.detectors());
                assert!(seen.insert(e.pattern.clone()), "duplicate {}", e.pattern);
                match (gate, e.class) {
                    (GateType::TypeII, _) => assert_eq!(e.pattern.total(), 2),
                    (GateType::TypeI, FusionClass::Success) => assert_eq!(e.pattern.total(), 1),
                    (GateType::TypeI, FusionClass::Failure) => assert!(matches!(e.pattern.total(), 0 | 2)),
                }
            }
        }
    }

    #[test]
    fn fii_on_even_bell_state() {
        let p = probs(&bell(1.0), GateType::TypeII);
        assert!((prob_of(&p, "d_1010") - 0.5).abs() < 1e-12);
        assert!((prob_of(&p, "d_0101") - 0.5).abs() < 1e-12);
        for label in ["d_1001", "d_0110", "d_2000", "d_0200", "d_0020", "d_0002"] {
            assert!(prob_of(&p, label) < 1e-15, "{label}");
        }
    }

    #[test]
    fn fii_on_01_fails_with_two_patterns() {
        let p = probs(&StateVector::basis(2, 0b10), GateType::TypeII); // first = 0, second = 1
        let nonzero: Vec<_> = p.iter().filter(|(_, x)| *x > 1e-15).collect();
        assert_eq!(nonzero.len(), 2);
        assert!((prob_of(&p, "d_2000") - 0.5).abs() < 1e-12);
        assert!((prob_of(&p, "d_0200") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fii_on_odd_sign_bell_state_uses_minus_patterns() {
        let p = probs(&bell(-1.0), GateType::TypeII);
        assert!((prob_of(&p, "d_1001") - 0.5).abs() < 1e-12);
        assert!((prob_of(&p, "d_0110") - 0.5).abs() < 1e-12);
        // After a Z on one input the state is the plus-sign Bell pair again,
        // which only fires the plus patterns.
        let corrected = bell(-1.0).apply_1q(1, &Pauli::Z.matrix()).unwrap();
        let q = probs(&corrected, GateType::TypeII);
        assert!((prob_of(&q, "d_1010") - 0.5).abs() < 1e-12);
        assert!(prob_of(&q, "d_1001") < 1e-15);
        let minus = fii_elements().iter().find(|e| e.pattern.to_string() == "d_1001").unwrap();
        assert_eq!(minus.correction, Pauli::Z);
    }

    #[test]
    fn fi_on_even_bell_state_yields_plus_state() {
        let out = enumerate_outcomes(&bell(1.0), GateType::TypeI, (0, 1)).unwrap();
        let plus = StateVector::from_amplitudes(vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let minus = plus.apply_1q(0, &Pauli::Z.matrix()).unwrap();
        for (o, post) in &out {
            match o.pattern.to_string().as_str() {
                "d_10" => {
                    assert!((o.probability - 0.5).abs() < 1e-12);
                    assert!(post.equivalent_up_to_phase(&plus, 1e-12).unwrap());
                }
                "d_01" => {
                    assert!((o.probability - 0.5).abs() < 1e-12);
                    assert!(post.equivalent_up_to_phase(&minus, 1e-12).unwrap());
                    let fixed = post.apply_1q(0, &o.correction.matrix()).unwrap();
                    assert!(fixed.equivalent_up_to_phase(&plus, 1e-12).unwrap());
                }
                _ => assert!(o.probability < 1e-15),
            }
        }
    }

    #[test]
    fn fi_on_10_destroys_both() {
        let s = StateVector::basis(2, 0b01); // first = 1, second = 0
        let mut rng = RngStream::new(5, 0);
        let (o, post) = apply_fusion(&s, GateType::TypeI, (0, 1), &mut rng).unwrap();
        assert_eq!(o.pattern.to_string(), "d_00");
        assert_eq!(o.class, FusionClass::Failure);
        assert!((o.probability - 1.0).abs() < 1e-12);
        assert_eq!(post.num_qubits(), 0);
    }

    #[test]
    fn fii_on_bell_pair_succeeds_to_scalar() {
        let mut rng = RngStream::new(9, 1);
        for _ in 0..20 {
            let (o, post) = apply_fusion(&bell(1.0), GateType::TypeII, (0, 1), &mut rng).unwrap();
            assert_eq!(o.class, FusionClass::Success);
            assert_eq!(post.num_qubits(), 0);
            assert!((post.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_pairs_are_rejected() {
        let mut rng = RngStream::new(0, 0);
        let s = bell(1.0);
        assert!(matches!(
            apply_fusion(&s, GateType::TypeII, (0, 0), &mut rng),
            Err(FusionError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            apply_fusion(&s, GateType::TypeI, (0, 2), &mut rng),
            Err(FusionError::IndexOutOfRange { .. })
        ));
        let unnormalized = StateVector::from_amplitudes(vec![ONE, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(
            apply_fusion(&unnormalized, GateType::TypeII, (0, 1), &mut rng),
            Err(FusionError::UnnormalizedState(_))
        ));
    }

    #[test]
    fn sampled_frequencies_match_enumeration() {
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ])
        .unwrap();
        for gate in [GateType::TypeI, GateType::TypeII] {
            let exact = enumerate_outcomes(&s, gate, (1, 0)).unwrap();
            let mut rng = RngStream::new(77, gate as u64);
            let n = 40_000;
            let mut counts = vec![0usize; exact.len()];
            for _ in 0..n {
                let (o, _) = apply_fusion(&s, gate, (1, 0), &mut rng).unwrap();
                let k = exact.iter().position(|(e, _)| e.pattern == o.pattern).unwrap();
                counts[k] += 1;
            }
            for ((o, _), &c) in exact.iter().zip(&counts) {
                let p = o.probability;
                let sigma = (p * (1.0 - p) / n as f64).sqrt().max(1e-9);
                let freq = c as f64 / n as f64;
                assert!((freq - p).abs() <= 4.0 * sigma, "{gate:?} {}: {freq} vs {p}", o.pattern);
            }
        }
    }

    fn arb_two_qubit_state() -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
            .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                StateVector::from_amplitudes(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
                    .unwrap()
                    .normalized()
            })
    }

    proptest! {
        #[test]
        fn probabilities_sum_to_one(s in arb_two_qubit_state(), swap in any::<bool>()) {
            let pair = if swap { (1, 0) } else { (0, 1) };
            for gate in [GateType::TypeI, GateType::TypeII] {
                let total: f64 = enumerate_outcomes(&s, gate, pair).unwrap().iter().map(|(o, _)| o.probability).sum();
                prop_assert!((total - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn parity_sectors_separate_success_from_failure(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0) {
            prop_assume!(a * a + b * b > 1e-3 && c * c + d * d > 1e-3);
            let even = StateVector::from_amplitudes(vec![Complex64::new(a, b), ZERO, ZERO, Complex64::new(b, a)]).unwrap().normalized();
            let odd = StateVector::from_amplitudes(vec![ZERO, Complex64::new(c, d), Complex64::new(d, -c), ZERO]).unwrap().normalized();
            let fail_even: f64 = enumerate_outcomes(&even, GateType::TypeII, (0, 1)).unwrap().iter()
                .filter(|(o, _)| o.class == FusionClass::Failure).map(|(o, _)| o.probability).sum();
            let succ_odd: f64 = enumerate_outcomes(&odd, GateType::TypeII, (0, 1)).unwrap().iter()
                .filter(|(o, _)| o.class == FusionClass::Success).map(|(o, _)| o.probability).sum();
            prop_assert!(fail_even < 1e-12);
            prop_assert!(succ_odd < 1e-12);
        }
    }
}
