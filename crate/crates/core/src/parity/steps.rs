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

//! Single fusion steps on encoded qubits and resource states.
//!
//! Every step succeeds with probability exactly 1/2 whatever the logical
//! amplitudes are, so the symbolic rules only draw one coin. The `*_branch`
//! variants take the coin as an argument; the oracle uses them to compare
//! each branch with the state-vector simulation.

use serde::Serialize;

use super::logical::{LogicalPair, LogicalParityQubit, ResourceState};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EncodeOutcome {
    /// The resource was absorbed: level `n + size - 2`.
    Success(LogicalParityQubit),
    /// One physical qubit of the code was measured out; the resource lost
    /// one qubit and may be reused.
    Failure { qubit: LogicalParityQubit, remnant: Option<ResourceState> },
    /// A failure at level 1 measured out the last physical qubit.
    Lost { remnant: Option<ResourceState> },
}

impl EncodeOutcome {
    pub fn remnant(&self) -> Option<ResourceState> {
        match self {
            EncodeOutcome::Success(_) => None,
            EncodeOutcome::Failure { remnant, .. } | EncodeOutcome::Lost { remnant } => *remnant,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, EncodeOutcome::Success(_))
    }
}

/// Level reached by absorbing `resource` into a code of `level` qubits.
pub(crate) fn grown_level(level: usize, resource: ResourceState) -> usize {
    level + resource.size() - 2
}

/// Fuse one physical qubit of `q` with one qubit of `resource` using f_II.
pub fn encode_step(q: LogicalParityQubit, resource: ResourceState, rng: &mut RngStream) -> EncodeOutcome {
    encode_branch(q, resource, rng.coin())
}

pub fn encode_branch(q: LogicalParityQubit, resource: ResourceState, success: bool) -> EncodeOutcome {
    if success {
        return EncodeOutcome::Success(q.with_level(grown_level(q.level(), resource)));
    }
    let remnant = resource.reduced();
    if q.level() == 1 {
        EncodeOutcome::Lost { remnant }
    } else {
        EncodeOutcome::Failure { qubit: q.with_level(q.level() - 1), remnant }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairEncodeOutcome {
    Success(LogicalPair),
    Failure { pair: LogicalPair, remnant: Option<ResourceState> },
    Lost { remnant: Option<ResourceState> },
}

/// Encode step on one logical qubit (`side` 0 or 1) of an entangled pair.
pub fn encode_pair_branch(pair: LogicalPair, side: usize, resource: ResourceState, success: bool) -> PairEncodeOutcome {
    let mut levels = pair.levels();
    if success {
        levels[side] = grown_level(levels[side], resource);
        return PairEncodeOutcome::Success(pair.with_levels(levels[0], levels[1]));
    }
    let remnant = resource.reduced();
    if levels[side] == 1 {
        return PairEncodeOutcome::Lost { remnant };
    }
    levels[side] -= 1;
    PairEncodeOutcome::Failure { pair: pair.with_levels(levels[0], levels[1]), remnant }
}

pub fn encode_pair_step(
    pair: LogicalPair,
    side: usize,
    resource: ResourceState,
    rng: &mut RngStream,
) -> PairEncodeOutcome {
    encode_pair_branch(pair, side, resource, rng.coin())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JoinOutcome {
    Success(ResourceState),
    /// Whatever is still entangled after the failure.
    Failure {
        remnants: Vec<ResourceState>,
    },
}

/// Join two resource states with a Hadamard-conjugated f_I.
///
/// Success gives `|0>^(a + b - 1)`; failure measures both fused qubits in
/// the conjugate basis, which leaves nothing usable.
pub fn join_fi(a: ResourceState, b: ResourceState, rng: &mut RngStream) -> JoinOutcome {
    join_fi_branch(a, b, rng.coin())
}

pub fn join_fi_branch(a: ResourceState, b: ResourceState, success: bool) -> JoinOutcome {
    if success {
        JoinOutcome::Success(ResourceState::new(a.size() + b.size() - 1).expect("sizes only grow"))
    } else {
        JoinOutcome::Failure { remnants: Vec::new() }
    }
}

/// Join two resource states with f_II.
///
/// Success gives `|0>^(a + b - 2)`; failure measures one qubit of each in
/// the computational basis and leaves `|0>^(a-1)` and `|0>^(b-1)`. Single
/// qubits left over are dropped.
pub fn join_fii(a: ResourceState, b: ResourceState, rng: &mut RngStream) -> JoinOutcome {
    join_fii_branch(a, b, rng.coin())
}

pub fn join_fii_branch(a: ResourceState, b: ResourceState, success: bool) -> JoinOutcome {
    if success {
        match ResourceState::new(a.size() + b.size() - 2) {
            Ok(r) => JoinOutcome::Success(r),
            // Two Bell pairs fuse into a bare Bell measurement: nothing is left.
            Err(_) => JoinOutcome::Failure { remnants: Vec::new() },
        }
    } else {
        JoinOutcome::Failure { remnants: [a.reduced(), b.reduced()].into_iter().flatten().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn r(n: usize) -> ResourceState {
        ResourceState::new(n).unwrap()
    }

    fn q(level: usize) -> LogicalParityQubit {
        LogicalParityQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), level).unwrap()
    }

    #[test]
    fn encode_success_adds_size_minus_two() {
        assert_eq!(encode_branch(q(4), r(5), true), EncodeOutcome::Success(q(7)));
    }

    #[test]
    fn encode_failure_leaves_recyclable_remnant() {
        assert_eq!(encode_branch(q(4), r(5), false), EncodeOutcome::Failure { qubit: q(3), remnant: Some(r(4)) });
    }

    #[test]
    fn encode_failure_at_level_one_is_loss() {
        assert_eq!(encode_branch(q(1), r(2), false), EncodeOutcome::Lost { remnant: None });
    }

    #[test]
    fn pair_encode_touches_one_side() {
        let pair = LogicalPair::basis(1, 0, 3, 5).unwrap();
        assert_eq!(
            encode_pair_branch(pair, 1, r(4), true),
            PairEncodeOutcome::Success(LogicalPair::basis(1, 0, 3, 7).unwrap())
        );
        assert_eq!(
            encode_pair_branch(pair, 0, r(4), false),
            PairEncodeOutcome::Failure { pair: LogicalPair::basis(1, 0, 2, 5).unwrap(), remnant: Some(r(3)) }
        );
        let low = LogicalPair::basis(1, 0, 1, 5).unwrap();
        assert_eq!(encode_pair_branch(low, 0, r(2), false), PairEncodeOutcome::Lost { remnant: None });
    }

    #[test]
    fn fi_joins() {
        assert_eq!(join_fi_branch(r(2), r(2), true), JoinOutcome::Success(r(3)));
        assert_eq!(join_fi_branch(r(2), r(2), false), JoinOutcome::Failure { remnants: vec![] });
        assert_eq!(join_fi_branch(r(3), r(3), true), JoinOutcome::Success(r(5)));
    }

    #[test]
    fn fii_joins() {
        assert_eq!(join_fii_branch(r(3), r(3), true), JoinOutcome::Success(r(4)));
        assert_eq!(join_fii_branch(r(3), r(3), false), JoinOutcome::Failure { remnants: vec![r(2), r(2)] });
        assert_eq!(join_fii_branch(r(5), r(5), true), JoinOutcome::Success(r(8)));
        assert_eq!(join_fii_branch(r(2), r(4), false), JoinOutcome::Failure { remnants: vec![r(3)] });
    }

    #[test]
    fn branches_are_fair_coins() {
        let mut rng = RngStream::new(11, 0);
        let n = 100_000;
        let mut wins = [0usize; 3];
        for _ in 0..n {
            wins[0] += encode_step(q(3), r(4), &mut rng).is_success() as usize;
            wins[1] += matches!(join_fi(r(3), r(3), &mut rng), JoinOutcome::Success(_)) as usize;
            wins[2] += matches!(join_fii(r(3), r(4), &mut rng), JoinOutcome::Success(_)) as usize;
        }
        let sigma = (n as f64 * 0.25).sqrt();
        for w in wins {
            assert!((w as f64 - n as f64 / 2.0).abs() < 4.0 * sigma, "{w}");
        }
    }
}
