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

//! Fusion gates, parity-encoded qubits and their protocols, a state-vector
//! oracle, and exact and Monte-Carlo resource accounting.

pub mod fusion;
pub mod linalg;
pub mod oracle;
pub mod parity;
pub mod rng;
pub mod statevec;
pub mod strategy;
pub mod tables;
pub mod verify;
