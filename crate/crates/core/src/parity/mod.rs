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

//! Symbolic parity-encoded qubits: `(alpha, beta, level)` tracked through
//! fusion-based steps and protocols.

mod logical;
mod protocols;
mod steps;
mod trace;

pub use logical::{
    destroy_by_measurement, logical_x_theta, logical_z, logical_z90, measure_physical, LogicalPair, LogicalParityQubit,
    ParityError, ResourceState,
};
pub use protocols::{
    cnot_attempt, cnot_attempt_branch, cnot_protocol, restore_piece, z90_attempt_branch, z90_protocol,
    z90_resource_size, CnotAttempt, CountingSupply, Orientation, PendingCnot, PendingGrowth, ResourceSupply,
    Z90Attempt, Z90Policy,
};
pub use steps::{
    encode_branch, encode_pair_branch, encode_pair_step, encode_step, join_fi, join_fi_branch, join_fii,
    join_fii_branch, EncodeOutcome, JoinOutcome, PairEncodeOutcome,
};
pub use trace::{ProtocolRun, ProtocolStatus, ProtocolTrace, TraceEvent};
