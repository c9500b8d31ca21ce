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

//! Monte-Carlo trials with stochastic resource construction.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::dp::{fi_cost_table, recycle_cost_table, FusionTree};
use super::spec::{BuildPlan, CostLedger, RecyclePolicy, StrategySpec, SummaryStats, Tally};
use super::StrategyError;
use crate::fusion::GateType;
use crate::parity::{
    cnot_attempt, encode_pair_step, z90_protocol, CnotAttempt, LogicalPair, LogicalParityQubit, PairEncodeOutcome,
    PendingGrowth, ProtocolStatus, ResourceState, ResourceSupply,
};
use crate::rng::RngStream;

/// Builds resource states on demand from Bell pairs by following the plan's
/// fusion trees, and keeps the books for one trial at a time.
#[derive(Clone, Debug)]
pub struct TrialSupply {
    trees: Vec<Option<Arc<FusionTree>>>,
    /// Credit for a remnant of each size.
    values: Vec<u64>,
    recycle: RecyclePolicy,
    pool: Vec<u32>,
    ledger: CostLedger,
}

impl TrialSupply {
    /// A supply able to build every size from 2 to `max_size`.
    pub fn new(spec: &StrategySpec, max_size: usize) -> Result<TrialSupply, StrategyError> {
        let max = max_size.max(2);
        let mut trees = match &spec.build_plan {
            BuildPlan::FusionTypeI | BuildPlan::Tree(_) => fi_cost_table(max).trees_up_to(max),
            BuildPlan::Recycling => recycle_cost_table(max).trees_up_to(max),
        };
        if let BuildPlan::Tree(tree) = &spec.build_plan {
            let size = tree.size();
            if size > max {
                return Err(StrategyError::InvalidStrategy(format!("tree builds size {size}, above {max}")));
            }
            trees[size] = Some(Arc::new(tree.clone()));
        }
        let v = recycle_cost_table(max);
        let values = (0..=max).map(|k| if k < 2 { 0 } else { v.cost(k).round() as u64 }).collect();
        Ok(TrialSupply { trees, values, recycle: spec.recycle, pool: vec![0; max + 1], ledger: CostLedger::default() })
    }

    /// Clear the pool and the books.
    pub fn start_trial(&mut self) {
        self.pool.iter_mut().for_each(|c| *c = 0);
        self.ledger = CostLedger::default();
    }

    pub fn ledger(&self) -> CostLedger {
        self.ledger
    }

    pub fn max_size(&self) -> usize {
        self.trees.len() - 1
    }

    fn take_pooled(&mut self, size: usize) -> bool {
        if self.recycle == RecyclePolicy::Pool && self.pool[size] > 0 {
            self.pool[size] -= 1;
            self.ledger.pool_hits += 1;
            return true;
        }
        false
    }

    fn obtain(&mut self, tree: &FusionTree, rng: &mut RngStream) {
        if !self.take_pooled(tree.size()) {
            self.build(tree, rng);
        }
    }

    fn build(&mut self, tree: &FusionTree, rng: &mut RngStream) {
        let FusionTree::Join { gate, left, right } = tree else {
            self.ledger.bell_states_consumed += 1;
            return;
        };
        loop {
            self.obtain(left, rng);
            self.obtain(right, rng);
            if rng.coin() {
                return;
            }
            if *gate == GateType::TypeII {
                for side in [left, right] {
                    if let Ok(r) = ResourceState::new(side.size() - 1) {
                        self.recycle(r);
                    }
                }
            }
        }
    }
}

impl ResourceSupply for TrialSupply {
    /// # Panics
    /// If `size` is outside the range the supply was made for.
    fn acquire(&mut self, size: usize, rng: &mut RngStream) -> ResourceState {
        let tree = self
            .trees
            .get(size)
            .and_then(Clone::clone)
            .unwrap_or_else(|| panic!("no plan for |0>^({size}); supply built up to {}", self.max_size()));
        self.ledger.resources_acquired += 1;
        self.obtain(&tree, rng);
        ResourceState::new(size).expect("plans start at size 2")
    }

    fn recycle(&mut self, remnant: ResourceState) {
        let k = remnant.size();
        match self.recycle {
            RecyclePolicy::None => return,
            RecyclePolicy::Pool if k < self.pool.len() => self.pool[k] += 1,
            RecyclePolicy::Pool => return,
            RecyclePolicy::Credit => self.ledger.credited += self.values.get(k).copied().unwrap_or(0),
        }
        self.ledger.remnants_returned += 1;
    }
}

trait Merge: Default + Send {
    fn merge(self, other: Self) -> Self;
}

impl Merge for Tally {
    fn merge(self, other: Self) -> Self {
        Tally::merge(self, other)
    }
}

/// Runs `trial` for every index in parallel; the result depends only on
/// `(seed, trials)`.
fn run_trials<A, F>(supply: &TrialSupply, trials: u64, seed: u64, trial: F) -> A
where
    A: Merge,
    F: Fn(&mut TrialSupply, &mut RngStream, &mut A) + Sync,
{
    (0..trials)
        .into_par_iter()
        .fold(
            || (A::default(), supply.clone()),
            |(mut acc, mut s), i| {
                s.start_trial();
                let mut rng = RngStream::for_trial(seed, i);
                trial(&mut s, &mut rng, &mut acc);
                (acc, s)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(A::default, A::merge)
}

fn check_trials(trials: u64) -> Result<(), StrategyError> {
    if trials == 0 {
        return Err(StrategyError::ZeroTrials);
    }
    Ok(())
}

/// Bell pairs per finished `|0>^(m)`.
pub fn mc_build_resource(m: usize, spec: &StrategySpec, trials: u64, seed: u64) -> Result<SummaryStats, StrategyError> {
    check_trials(trials)?;
    if m < 2 {
        return Err(StrategyError::SizeTooSmall { size: m });
    }
    if let BuildPlan::Tree(tree) = &spec.build_plan {
        if tree.size() != m {
            return Err(StrategyError::InvalidStrategy(format!("tree builds |0>^({}), not |0>^({m})", tree.size())));
        }
    }
    let supply = TrialSupply::new(spec, m)?;
    let tally: Tally = run_trials(&supply, trials, seed, |s: &mut TrialSupply, rng: &mut RngStream, t: &mut Tally| {
        s.acquire(m, rng);
        t.record(true, s.ledger().net_cost());
    });
    Ok(tally.summary())
}

/// Z90 at level `n`, resource construction included.
pub fn mc_z90(n: usize, spec: &StrategySpec, trials: u64, seed: u64) -> Result<SummaryStats, StrategyError> {
    check_trials(trials)?;
    spec.validate()?;
    let q = LogicalParityQubit::zero(n);
    let supply = TrialSupply::new(spec, n + 1)?;
    let policy = spec.z90.policy;
    let tally: Tally = run_trials(&supply, trials, seed, |s: &mut TrialSupply, rng: &mut RngStream, t: &mut Tally| {
        let run = z90_protocol(q, policy, s, rng);
        t.record(run.status == ProtocolStatus::Success, s.ledger().net_cost());
    });
    Ok(tally.summary())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CnotTrialStats {
    pub summary: SummaryStats,
    /// Gate attempts per trial.
    pub mean_attempts: f64,
    /// Pending gates undone because the new block was wiped out.
    pub reverts: u64,
    /// Trials ended because the target fell below level 2.
    pub target_exhausted: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct CnotTally {
    tally: Tally,
    attempts: u64,
    reverts: u64,
    target_exhausted: u64,
}

impl Merge for CnotTally {
    fn merge(self, o: Self) -> Self {
        CnotTally {
            tally: self.tally.merge(o.tally),
            attempts: self.attempts + o.attempts,
            reverts: self.reverts + o.reverts,
            target_exhausted: self.target_exhausted + o.target_exhausted,
        }
    }
}

fn give_back(supply: &mut TrialSupply, remnant: Option<ResourceState>) {
    if let Some(r) = remnant {
        supply.recycle(r);
    }
}

fn cnot_trial(n: usize, spec: &StrategySpec, s: &mut TrialSupply, rng: &mut RngStream, acc: &mut CnotTally) -> bool {
    let c = spec.cnot;
    let side = c.orientation.control();
    let goal = c.post_encode_target.unwrap_or(n);
    let mut pair = LogicalPair::basis(0, 0, n, n).expect("n is at least 1");
    loop {
        while pair.levels()[side] < c.pre_encode_threshold {
            let r = s.acquire(c.pre_encode_resource, rng);
            match encode_pair_step(pair, side, r, rng) {
                PairEncodeOutcome::Success(p) => pair = p,
                PairEncodeOutcome::Failure { pair: p, remnant } => {
                    give_back(s, remnant);
                    pair = p;
                }
                PairEncodeOutcome::Lost { remnant } => {
                    give_back(s, remnant);
                    return false;
                }
            }
        }
        if pair.levels()[1 - side] < 2 {
            acc.target_exhausted += 1;
            return false;
        }
        acc.attempts += 1;
        let g = s.acquire(c.gate_resource, rng);
        let mut pending = match cnot_attempt(pair, g, c.orientation, rng).expect("target level checked") {
            CnotAttempt::TypeIFailed { pair: p, remnant } | CnotAttempt::TypeIIFailed { pair: p, remnant } => {
                give_back(s, remnant);
                pair = p;
                continue;
            }
            CnotAttempt::Lost { remnant } => {
                give_back(s, remnant);
                return false;
            }
            CnotAttempt::Succeeded(pending) => pending,
        };
        loop {
            if pending.new_block() >= goal {
                return true;
            }
            let r = s.acquire(c.post_encode.piece(goal, pending.new_block()), rng);
            match pending.grow(r, rng) {
                PendingGrowth::Pending { pending: p, remnant } => {
                    give_back(s, remnant);
                    pending = p;
                }
                PendingGrowth::Reverted { pair: p, remnant } => {
                    give_back(s, remnant);
                    acc.reverts += 1;
                    pair = p;
                    break;
                }
                PendingGrowth::Lost { remnant } => {
                    give_back(s, remnant);
                    return false;
                }
            }
        }
    }
}

/// CNOT between two qubits at level `n`, retried until it stands or a
/// logical qubit is lost. Costs cover only resources used during the gate.
pub fn mc_cnot(n: usize, spec: &StrategySpec, trials: u64, seed: u64) -> Result<CnotTrialStats, StrategyError> {
    check_trials(trials)?;
    spec.validate()?;
    if n < 2 {
        return Err(StrategyError::InvalidStrategy(format!("both qubits need level 2 or more, got {n}")));
    }
    let c = spec.cnot;
    let goal = c.post_encode_target.unwrap_or(n);
    let mut max = (goal + 1).max(c.pre_encode_resource).max(c.gate_resource);
    if let super::spec::PostEncode::Fixed(size) = c.post_encode {
        max = max.max(size);
    }
    let supply = TrialSupply::new(spec, max)?;
    let acc: CnotTally =
        run_trials(&supply, trials, seed, |s: &mut TrialSupply, rng: &mut RngStream, acc: &mut CnotTally| {
            let ok = cnot_trial(n, spec, s, rng, acc);
            acc.tally.record(ok, s.ledger().net_cost());
        });
    Ok(CnotTrialStats {
        summary: acc.tally.summary(),
        mean_attempts: acc.attempts as f64 / trials as f64,
        reverts: acc.reverts,
        target_exhausted: acc.target_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::Z90Policy;
    use crate::strategy::{z90_expected_cost_one_shot, z90_success_prob, PostEncode};

    fn within(stats: &SummaryStats, want: f64, sigmas: f64) -> bool {
        (stats.mean_cost - want).abs() <= sigmas * stats.std_error.max(1e-9)
    }

    #[test]
    fn build_converges_to_dp() {
        let spec = StrategySpec::no_recycling();
        let t = fi_cost_table(10);
        for m in 2..=10 {
            let s = mc_build_resource(m, &spec, 40_000, 3).unwrap();
            assert!(within(&s, t.cost(m), 4.0), "m={m} {} ± {}", s.mean_cost, s.std_error);
        }
    }

    #[test]
    fn credited_build_converges_to_recycle_values() {
        let spec = StrategySpec::recycling();
        let t = recycle_cost_table(10);
        for m in 3..=10 {
            let s = mc_build_resource(m, &spec, 40_000, 5).unwrap();
            assert!(within(&s, t.cost(m), 4.0), "m={m} {} ± {}", s.mean_cost, s.std_error);
        }
    }

    #[test]
    fn build_errors() {
        let spec = StrategySpec::no_recycling();
        assert_eq!(mc_build_resource(5, &spec, 0, 1), Err(StrategyError::ZeroTrials));
        let tree = FusionTree::join(GateType::TypeI, FusionTree::Bell, FusionTree::Bell);
        let bad = StrategySpec { build_plan: BuildPlan::Tree(tree), ..spec };
        assert!(matches!(mc_build_resource(5, &bad, 10, 1), Err(StrategyError::InvalidStrategy(_))));
        assert!(mc_build_resource(3, &bad, 10, 1).is_ok());
    }

    #[test]
    fn z90_one_shot() {
        let spec = StrategySpec::no_recycling();
        for n in [3, 5] {
            let s = mc_z90(n, &spec, 100_000, 9).unwrap();
            let p = z90_success_prob(n);
            assert!((s.success_rate - p).abs() < 4.0 * (p * (1.0 - p) / 1e5).sqrt());
            assert!(within(&s, z90_expected_cost_one_shot(n), 4.0), "n={n}");
        }
    }

    #[test]
    fn deterministic_and_pool_never_worse() {
        let spec = StrategySpec { build_plan: BuildPlan::Recycling, ..StrategySpec::no_recycling() };
        let a = mc_build_resource(9, &spec, 5_000, 17).unwrap();
        let b = mc_build_resource(9, &spec, 5_000, 17).unwrap();
        assert_eq!(a, b);
        let pooled = StrategySpec { recycle: RecyclePolicy::Pool, ..spec.clone() };
        let p = mc_build_resource(9, &pooled, 5_000, 17).unwrap();
        assert!(p.mean_cost <= a.mean_cost);
    }

    #[test]
    fn cnot_runs_and_counts() {
        let spec = StrategySpec::cnot_table(8, false);
        let s = mc_cnot(8, &spec, 4_000, 1).unwrap();
        assert!(s.summary.success_rate > 0.9);
        assert!(s.mean_attempts >= 1.0);
        let mut weak = spec.clone();
        weak.cnot.gate_resource = 2;
        weak.cnot.post_encode = PostEncode::Fixed(3);
        let w = mc_cnot(8, &weak, 2_000, 1).unwrap();
        assert!(w.summary.trials == 2_000);
    }

    #[test]
    fn restore_policy_runs() {
        let spec = StrategySpec {
            z90: super::super::Z90Strategy { policy: Z90Policy::RestoreBetweenAttempts { max_piece: 5 } },
            ..StrategySpec::no_recycling()
        };
        let s = mc_z90(6, &spec, 20_000, 2).unwrap();
        let t = fi_cost_table(8);
        let e = crate::strategy::z90_exact(6, spec.z90.policy, &|k| t.cost(k), &|_| 0.0);
        let se = (e.success_prob * (1.0 - e.success_prob) / 2e4).sqrt();
        assert!((s.success_rate - e.success_prob).abs() < 4.0 * se, "{} vs {}", s.success_rate, e.success_prob);
        assert!(within(&s, e.conditional_cost, 4.0), "{} vs {}", s.mean_cost, e.conditional_cost);
    }
}
