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

//! Search over fusion trees for the cheapest way to build `|0>^(m)`.

use serde::Serialize;

use super::dp::{enumerate_trees, recycle_cost_table, FusionTree};
use super::mc::mc_build_resource;
use super::spec::{BuildPlan, RecyclePolicy, StrategySpec};
use super::StrategyError;
use crate::fusion::GateType;

/// The trees to consider and how they are scored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateSpace {
    pub gates: Vec<GateType>,
    pub recycle: RecyclePolicy,
    /// Candidates beyond this many are ignored, in enumeration order.
    pub max_candidates: usize,
    /// Seed shared by every Monte-Carlo evaluation.
    pub seed: u64,
}

impl CandidateSpace {
    pub fn fusion_type_i() -> Self {
        CandidateSpace { gates: vec![GateType::TypeI], recycle: RecyclePolicy::None, max_candidates: 100_000, seed: 0 }
    }

    pub fn both_gates(recycle: RecyclePolicy) -> Self {
        CandidateSpace { gates: vec![GateType::TypeI, GateType::TypeII], recycle, ..Self::fusion_type_i() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub spec: StrategySpec,
    pub tree: FusionTree,
    pub cost: f64,
    pub depth: usize,
    pub candidates: usize,
    /// `false` when costs are Monte-Carlo estimates.
    pub exact: bool,
}

/// The cheapest tree for `|0>^(m)` in `space`, ties going to the shallower
/// tree. Pool recycling has no closed form and is scored by Monte Carlo
/// with `budget` trials per candidate and the same seed for all of them;
/// the other policies are exact and ignore `budget`.
pub fn strategy_search(m: usize, space: &CandidateSpace, budget: u64) -> Result<SearchResult, StrategyError> {
    if m < 2 {
        return Err(StrategyError::SizeTooSmall { size: m });
    }
    let mut trees = enumerate_trees(m, &space.gates);
    trees.truncate(space.max_candidates);
    if trees.is_empty() {
        return Err(StrategyError::EmptySpace);
    }
    let values = recycle_cost_table(m);
    let credit = |k: usize| values.cost(k);
    let exact = space.recycle != RecyclePolicy::Pool;
    let spec_for = |tree: &FusionTree| StrategySpec {
        build_plan: BuildPlan::Tree(tree.clone()),
        recycle: space.recycle,
        ..StrategySpec::default()
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, tree) in trees.iter().enumerate() {
        let cost = match space.recycle {
            RecyclePolicy::None => tree.expected_cost(),
            RecyclePolicy::Credit => tree.expected_cost_with_credit(&credit),
            RecyclePolicy::Pool => mc_build_resource(m, &spec_for(tree), budget, space.seed)?.mean_cost,
        };
        let depth = tree.depth();
        let better = match best {
            None => true,
            Some((c, d, _)) => cost < c - 1e-9 || (cost <= c + 1e-9 && depth < d),
        };
        if better {
            best = Some((cost, depth, i));
        }
    }
    let (cost, depth, i) = best.expect("space is not empty");
    let tree = trees.swap_remove(i);
    Ok(SearchResult { spec: spec_for(&tree), tree, cost, depth, candidates: trees.len() + 1, exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = strategy_search(5, &CandidateSpace::fusion_type_i(), 0).unwrap();
        assert_eq!((s.cost, s.tree.to_string()), (16.0, "I(I(2,2),I(2,2))".to_string()));
        assert_eq!(strategy_search(3, &CandidateSpace::fusion_type_i(), 0).unwrap().cost, 4.0);
        let six = strategy_search(6, &CandidateSpace::fusion_type_i(), 0).unwrap();
        assert_eq!(six.cost, 28.0);
        assert_eq!(six.tree.size(), 6);
        assert_eq!(
            strategy_search(1, &CandidateSpace::fusion_type_i(), 0),
            Err(StrategyError::SizeTooSmall { size: 1 })
        );
    }

    #[test]
    fn empty_space() {
        let space = CandidateSpace { gates: vec![], ..CandidateSpace::fusion_type_i() };
        assert_eq!(strategy_search(5, &space, 0), Err(StrategyError::EmptySpace));
    }

    #[test]
    fn credit_search_matches_table() {
        let s = strategy_search(7, &CandidateSpace::both_gates(RecyclePolicy::Credit), 0).unwrap();
        assert_eq!(s.cost, 38.0);
        assert!(s.tree.uses(GateType::TypeII));
    }

    #[test]
    fn pool_search_is_reproducible() {
        let space = CandidateSpace { seed: 4, ..CandidateSpace::both_gates(RecyclePolicy::Pool) };
        let a = strategy_search(5, &space, 2_000).unwrap();
        assert_eq!(a, strategy_search(5, &space, 2_000).unwrap());
        assert!(!a.exact);
    }
}
