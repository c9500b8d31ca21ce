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

//! Z90 and CNOT protocols on encoded qubits.

use serde::Serialize;

use super::logical::{logical_z90, LogicalPair, LogicalParityQubit, ParityError, ResourceState};
use super::steps::{encode_step, grown_level, EncodeOutcome};
use super::trace::{ProtocolRun, ProtocolStatus, ProtocolTrace, TraceEvent};
use crate::fusion::GateType;
use crate::rng::RngStream;

/// Where protocols get their resource states from and return remnants to.
pub trait ResourceSupply {
    fn acquire(&mut self, size: usize, rng: &mut RngStream) -> ResourceState;
    fn recycle(&mut self, remnant: ResourceState);
}

/// Hands out whatever is asked for and records the traffic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountingSupply {
    pub acquired: Vec<usize>,
    pub returned: Vec<usize>,
}

impl ResourceSupply for CountingSupply {
    fn acquire(&mut self, size: usize, _rng: &mut RngStream) -> ResourceState {
        self.acquired.push(size);
        ResourceState::new(size).expect("protocols never ask for less than a Bell pair")
    }

    fn recycle(&mut self, remnant: ResourceState) {
        self.returned.push(remnant.size());
    }
}

fn take(supply: &mut dyn ResourceSupply, size: usize, rng: &mut RngStream, trace: &mut ProtocolTrace) -> ResourceState {
    let r = supply.acquire(size, rng);
    trace.push(TraceEvent::ResourceAcquired { size: r.size() });
    r
}

fn give_back(supply: &mut dyn ResourceSupply, remnant: Option<ResourceState>, trace: &mut ProtocolTrace) {
    if let Some(r) = remnant {
        trace.push(TraceEvent::ResourceReturned { size: r.size() });
        supply.recycle(r);
    }
}

fn finish<T>(status: ProtocolStatus, result: Option<T>, trace: ProtocolTrace) -> ProtocolRun<T> {
    ProtocolRun { status, result, trace }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Z90Policy {
    /// Retry straight away from whatever level is left.
    OneShot,
    /// After a failure, encode back up to the starting level with pieces of
    /// at most `max_piece` qubits (and at least 3) before trying again.
    RestoreBetweenAttempts { max_piece: usize },
}

/// Size of the resource fused with the rotated qubit: `target_level + 1`,
/// whatever the current level is.
pub fn z90_resource_size(target_level: usize) -> usize {
    target_level + 1
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Z90Attempt {
    /// Logical Z90 applied, level back at the target.
    Success(LogicalParityQubit),
    /// The rotation became a global phase; one level lost.
    Failure {
        qubit: LogicalParityQubit,
        remnant: Option<ResourceState>,
    },
    Lost {
        remnant: Option<ResourceState>,
    },
}

/// One attempt with a forced fusion outcome.
///
/// On success the other `level - 1` physical qubits are measured; an odd
/// parity leaves Z90† behind, which X followed by a logical Z turns back
/// into Z90.
pub fn z90_attempt_branch(q: LogicalParityQubit, target_level: usize, success: bool) -> Z90Attempt {
    let resource = ResourceState::new(z90_resource_size(target_level)).expect("target level is at least 1");
    if success {
        return Z90Attempt::Success(logical_z90(q).with_level(target_level));
    }
    let remnant = resource.reduced();
    if q.level() == 1 {
        Z90Attempt::Lost { remnant }
    } else {
        Z90Attempt::Failure { qubit: q.with_level(q.level() - 1), remnant }
    }
}

/// Size of the next restoring piece at `level` on the way back to `target`.
pub fn restore_piece(target: usize, level: usize, max_piece: usize) -> usize {
    (target + 2 - level).min(max_piece).max(3)
}

/// Apply logical Z90 to `q` at its current level, retrying until success
/// or loss.
pub fn z90_protocol(
    q: LogicalParityQubit,
    policy: Z90Policy,
    supply: &mut dyn ResourceSupply,
    rng: &mut RngStream,
) -> ProtocolRun<LogicalParityQubit> {
    let target = q.level();
    let mut trace = ProtocolTrace::new();
    let mut cur = q;
    loop {
        take(supply, z90_resource_size(target), rng, &mut trace);
        trace.push(TraceEvent::PhysicalZ90);
        let success = rng.coin();
        trace.push(TraceEvent::Fusion { gate: GateType::TypeII, success });
        match z90_attempt_branch(cur, target, success) {
            Z90Attempt::Success(out) => {
                trace.push(TraceEvent::ParityMeasured { qubits: cur.level() - 1 });
                trace.push(TraceEvent::LevelChange { from: cur.level(), to: target });
                return finish(ProtocolStatus::Success, Some(out), trace);
            }
            Z90Attempt::Lost { remnant } => {
                give_back(supply, remnant, &mut trace);
                return finish(ProtocolStatus::LogicalLoss, None, trace);
            }
            Z90Attempt::Failure { qubit, remnant } => {
                give_back(supply, remnant, &mut trace);
                trace.push(TraceEvent::LevelChange { from: cur.level(), to: qubit.level() });
                cur = qubit;
            }
        }
        if let Z90Policy::RestoreBetweenAttempts { max_piece } = policy {
            while cur.level() < target {
                let size = restore_piece(target, cur.level(), max_piece);
                let r = take(supply, size, rng, &mut trace);
                let out = encode_step(cur, r, rng);
                trace.push(TraceEvent::Fusion { gate: GateType::TypeII, success: out.is_success() });
                give_back(supply, out.remnant(), &mut trace);
                match out {
                    EncodeOutcome::Success(next) | EncodeOutcome::Failure { qubit: next, .. } => {
                        trace.push(TraceEvent::LevelChange { from: cur.level(), to: next.level() });
                        cur = next;
                    }
                    EncodeOutcome::Lost { .. } => return finish(ProtocolStatus::LogicalLoss, None, trace),
                }
            }
        }
    }
}

/// Which side of a CNOT is measured out after both fusions succeed.
///
/// The f_I always acts on the first qubit of the pair and the f_II on the
/// second. The measured side moves onto the fresh block taken from the gate
/// resource and ends up as the control; the other side is the target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Orientation {
    #[default]
    MeasureFirst,
    MeasureSecond,
}

impl Orientation {
    /// Index in the pair of the side that is measured out and becomes the
    /// control.
    pub fn control(self) -> usize {
        match self {
            Orientation::MeasureFirst => 0,
            Orientation::MeasureSecond => 1,
        }
    }
}

fn with_side_level(pair: LogicalPair, side: usize, level: usize) -> LogicalPair {
    let mut levels = pair.levels();
    levels[side] = level;
    pair.with_levels(levels[0], levels[1])
}

/// A CNOT whose two fusions succeeded but whose measured side has not been
/// read out yet.
///
/// While pending, the new block can still be grown with encode steps. If it
/// is measured away completely the gate is undone and both logical qubits
/// fall back to their input amplitudes, each one level down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendingCnot {
    /// Gate applied, control at the new block's level.
    applied: LogicalPair,
    /// Input amplitudes at levels `(a - 1, b - 1)`; `None` if either is 0.
    fallback: Option<LogicalPair>,
    orientation: Orientation,
    measured: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PendingGrowth {
    Pending {
        pending: PendingCnot,
        remnant: Option<ResourceState>,
    },
    /// The new block was wiped out; input amplitudes at the fallback levels.
    Reverted {
        pair: LogicalPair,
        remnant: Option<ResourceState>,
    },
    /// Wiped out with nothing to fall back on.
    Lost {
        remnant: Option<ResourceState>,
    },
}

impl PendingCnot {
    pub fn new_block(&self) -> usize {
        self.applied.levels()[self.orientation.control()]
    }

    /// Physical qubits still to be measured on commit.
    pub fn measured_block(&self) -> usize {
        self.measured
    }

    pub fn target_level(&self) -> usize {
        self.applied.levels()[1 - self.orientation.control()]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Encode step on the new block with a forced outcome.
    pub fn grow_branch(self, resource: ResourceState, success: bool) -> PendingGrowth {
        let side = self.orientation.control();
        let n = self.new_block();
        if success {
            let applied = with_side_level(self.applied, side, grown_level(n, resource));
            return PendingGrowth::Pending { pending: PendingCnot { applied, ..self }, remnant: None };
        }
        let remnant = resource.reduced();
        if n > 1 {
            let applied = with_side_level(self.applied, side, n - 1);
            return PendingGrowth::Pending { pending: PendingCnot { applied, ..self }, remnant };
        }
        match self.fallback {
            Some(pair) => PendingGrowth::Reverted { pair, remnant },
            None => PendingGrowth::Lost { remnant },
        }
    }

    pub fn grow(self, resource: ResourceState, rng: &mut RngStream) -> PendingGrowth {
        self.grow_branch(resource, rng.coin())
    }

    /// Measure the pending side out; a parity-conditioned X on both logical
    /// qubits makes the CNOT stand.
    pub fn commit(self) -> LogicalPair {
        self.applied
    }

    pub fn fallback(&self) -> Option<LogicalPair> {
        self.fallback
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CnotAttempt {
    /// The f_I failed: the first qubit is one level down and the resource
    /// one qubit shorter.
    TypeIFailed {
        pair: LogicalPair,
        remnant: Option<ResourceState>,
    },
    /// The f_II failed after the f_I: both qubits are one level down and the
    /// fresh block of the resource is left over.
    TypeIIFailed {
        pair: LogicalPair,
        remnant: Option<ResourceState>,
    },
    Succeeded(PendingCnot),
    /// A logical qubit lost its last physical qubit.
    Lost {
        remnant: Option<ResourceState>,
    },
}

/// One CNOT attempt with forced fusion outcomes.
///
/// With a gate resource of `m + 1` qubits, success leaves the control on an
/// `m`-qubit block and the target one level lower. The target side must be
/// at level 2 or more.
pub fn cnot_attempt_branch(
    pair: LogicalPair,
    gate_resource: ResourceState,
    orientation: Orientation,
    first_ok: bool,
    second_ok: bool,
) -> Result<CnotAttempt, ParityError> {
    let [a, b] = pair.levels();
    let control = orientation.control();
    let target_level = pair.levels()[1 - control];
    if target_level < 2 {
        return Err(ParityError::LevelTooLow { level: target_level, min: 2 });
    }
    let m = gate_resource.size() - 1;
    let fresh = ResourceState::new(m).ok();
    if !first_ok {
        let remnant = gate_resource.reduced();
        if a == 1 {
            return Ok(CnotAttempt::Lost { remnant });
        }
        return Ok(CnotAttempt::TypeIFailed { pair: pair.with_levels(a - 1, b), remnant });
    }
    if !second_ok {
        if a == 1 || b == 1 {
            return Ok(CnotAttempt::Lost { remnant: fresh });
        }
        return Ok(CnotAttempt::TypeIIFailed { pair: pair.with_levels(a - 1, b - 1), remnant: fresh });
    }
    let gated = match orientation {
        Orientation::MeasureFirst => pair.cnot(),
        Orientation::MeasureSecond => pair.swapped().cnot().swapped(),
    };
    let applied = with_side_level(with_side_level(gated, control, m), 1 - control, target_level - 1);
    let fallback = (a > 1 && b > 1).then(|| pair.with_levels(a - 1, b - 1));
    let measured = pair.levels()[control] - 1;
    Ok(CnotAttempt::Succeeded(PendingCnot { applied, fallback, orientation, measured }))
}

pub fn cnot_attempt(
    pair: LogicalPair,
    gate_resource: ResourceState,
    orientation: Orientation,
    rng: &mut RngStream,
) -> Result<CnotAttempt, ParityError> {
    let first_ok = rng.coin();
    let second_ok = first_ok && rng.coin();
    cnot_attempt_branch(pair, gate_resource, orientation, first_ok, second_ok)
}

/// A single CNOT attempt, committed immediately on success.
pub fn cnot_protocol(
    pair: LogicalPair,
    gate_resource: ResourceState,
    orientation: Orientation,
    rng: &mut RngStream,
) -> Result<ProtocolRun<LogicalPair>, ParityError> {
    let mut trace = ProtocolTrace::new();
    trace.push(TraceEvent::ResourceAcquired { size: gate_resource.size() });
    let first_ok = rng.coin();
    trace.push(TraceEvent::Fusion { gate: GateType::TypeI, success: first_ok });
    let second_ok = first_ok && rng.coin();
    if first_ok {
        trace.push(TraceEvent::Fusion { gate: GateType::TypeII, success: second_ok });
    }
    let (status, result, remnant) = match cnot_attempt_branch(pair, gate_resource, orientation, first_ok, second_ok)? {
        CnotAttempt::Lost { remnant } => (ProtocolStatus::LogicalLoss, None, remnant),
        CnotAttempt::TypeIFailed { pair, remnant } | CnotAttempt::TypeIIFailed { pair, remnant } => {
            (ProtocolStatus::Failed, Some(pair), remnant)
        }
        CnotAttempt::Succeeded(pending) => {
            trace.push(TraceEvent::ParityMeasured { qubits: pending.measured_block() });
            (ProtocolStatus::Success, Some(pending.commit()), None)
        }
    };
    if let Some(r) = remnant {
        trace.push(TraceEvent::ResourceReturned { size: r.size() });
    }
    Ok(finish(status, result, trace))
}
