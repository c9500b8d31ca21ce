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

use serde::Serialize;

use crate::fusion::{GateType, Pauli};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProtocolStatus {
    Success,
    /// The attempt failed but every logical qubit survived.
    Failed,
    LogicalLoss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceEvent {
    ResourceAcquired {
        size: usize,
    },
    ResourceReturned {
        size: usize,
    },
    Fusion {
        gate: GateType,
        success: bool,
    },
    PhysicalZ90,
    /// Physical qubits measured out of a code; an odd result is fixed by
    /// the parity-conditioned flip.
    ParityMeasured {
        qubits: usize,
    },
    Correction(Pauli),
    LevelChange {
        from: usize,
        to: usize,
    },
    Reverted,
}

/// Ordered record of what a protocol did.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProtocolTrace {
    events: Vec<TraceEvent>,
}

impl ProtocolTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: TraceEvent) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn resources_acquired(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TraceEvent::ResourceAcquired { .. })).count()
    }

    pub fn resources_returned(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TraceEvent::ResourceReturned { .. })).count()
    }

    pub fn fusions(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TraceEvent::Fusion { .. })).count()
    }
}

/// Outcome of running a protocol to completion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolRun<T> {
    pub status: ProtocolStatus,
    /// `None` only on logical loss.
    pub result: Option<T>,
    pub trace: ProtocolTrace,
}
