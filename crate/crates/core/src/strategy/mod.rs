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

//! Exact and Monte-Carlo resource accounting for building resource states,
//! Z90 and CNOT.

mod analytic;
mod dp;
mod mc;
mod search;
mod spec;

use thiserror::Error;

pub use analytic::{cnot_success_prob_asymptotic, z90_exact, z90_expected_cost_one_shot, z90_success_prob, ExactZ90};
pub use dp::{dp_min_cost, enumerate_trees, fi_cost_table, recycle_cost_table, CostTable, FusionTree};
pub use mc::{mc_build_resource, mc_cnot, mc_z90, CnotTrialStats, TrialSupply};
pub use search::{strategy_search, CandidateSpace, SearchResult};
pub use spec::{
    BuildPlan, CnotStrategy, CostLedger, PostEncode, RecyclePolicy, StrategySpec, SummaryStats, Z90Strategy,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("resource size must be at least 2, got {size}")]
    SizeTooSmall { size: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("the candidate space is empty")]
    EmptySpace,
}
