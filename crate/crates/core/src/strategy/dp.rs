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

//! Fusion trees for building `|0>^(m)` and their exact expected costs.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::StrategyError;
use crate::fusion::GateType;

/// A recipe for `|0>^(m)`: Bell pairs joined pairwise, each join retried
/// until it succeeds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FusionTree {
    Bell,
    Join { gate: GateType, left: Arc<FusionTree>, right: Arc<FusionTree> },
}

impl FusionTree {
    pub fn join(gate: GateType, left: FusionTree, right: FusionTree) -> FusionTree {
        FusionTree::Join { gate, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn size(&self) -> usize {
        match self {
            FusionTree::Bell => 2,
            FusionTree::Join { gate: GateType::TypeI, left, right } => left.size() + right.size() - 1,
            FusionTree::Join { gate: GateType::TypeII, left, right } => left.size() + right.size() - 2,
        }
    }

    /// Number of joins on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            FusionTree::Bell => 0,
            FusionTree::Join { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn uses(&self, gate: GateType) -> bool {
        match self {
            FusionTree::Bell => false,
            FusionTree::Join { gate: g, left, right } => *g == gate || left.uses(gate) || right.uses(gate),
        }
    }

    /// Expected Bell pairs per finished state when every failure throws
    /// its inputs away.
    pub fn expected_cost(&self) -> f64 {
        self.expected_cost_with_credit(&|_| 0.0)
    }

    /// Expected net cost when each f_II failure remnant of size `k` is worth
    /// `credit(k)` Bell pairs.
    pub fn expected_cost_with_credit(&self, credit: &dyn Fn(usize) -> f64) -> f64 {
        match self {
            FusionTree::Bell => 1.0,
            FusionTree::Join { gate, left, right } => {
                let inputs = left.expected_cost_with_credit(credit) + right.expected_cost_with_credit(credit);
                match gate {
                    GateType::TypeI => 2.0 * inputs,
                    GateType::TypeII => 2.0 * inputs - credit(left.size() - 1) - credit(right.size() - 1),
                }
            }
        }
    }
}

impl Serialize for FusionTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for FusionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionTree::Bell => write!(f, "2"),
            FusionTree::Join { gate, left, right } => {
                let g = match gate {
                    GateType::TypeI => "I",
                    GateType::TypeII => "II",
                };
                write!(f, "{g}({left},{right})")
            }
        }
    }
}

/// Optimal expected cost and tree for every size up to a bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CostTable {
    costs: Vec<f64>,
    trees: Vec<Option<Arc<FusionTree>>>,
}

impl CostTable {
    pub fn max_size(&self) -> usize {
        self.costs.len() - 1
    }

    /// Expected cost of `|0>^(size)`; size 1 (a bare qubit) costs nothing.
    pub fn cost(&self, size: usize) -> f64 {
        self.costs[size]
    }

    pub fn tree(&self, size: usize) -> Option<&Arc<FusionTree>> {
        self.trees.get(size).and_then(Option::as_ref)
    }

    pub(crate) fn trees_up_to(&self, max: usize) -> Vec<Option<Arc<FusionTree>>> {
        (0..=max).map(|k| self.trees.get(k).cloned().flatten()).collect()
    }

    fn with_capacity(max: usize) -> CostTable {
        let mut costs = vec![f64::INFINITY; max + 1];
        let mut trees = vec![None; max + 1];
        costs[1] = 0.0;
        costs[2] = 1.0;
        trees[2] = Some(Arc::new(FusionTree::Bell));
        CostTable { costs, trees }
    }

    fn offer(&mut self, size: usize, cost: f64, gate: GateType, a: usize, b: usize) {
        let better = match &self.trees[size] {
            None => true,
            Some(_) if cost < self.costs[size] - 1e-9 => true,
            Some(t) if cost <= self.costs[size] + 1e-9 => {
                let depth = 1 + self.trees[a].as_ref().unwrap().depth().max(self.trees[b].as_ref().unwrap().depth());
                depth < t.depth()
            }
            Some(_) => false,
        };
        if better {
            self.costs[size] = cost;
            let left = self.trees[a].clone().expect("smaller sizes are done");
            let right = self.trees[b].clone().expect("smaller sizes are done");
            self.trees[size] = Some(Arc::new(FusionTree::Join { gate, left, right }));
        }
    }
}

fn check_size(m: usize) -> Result<(), StrategyError> {
    if m < 2 {
        return Err(StrategyError::SizeTooSmall { size: m });
    }
    Ok(())
}

/// f_I joins only, no recycling: `C(m) = min over a + b - 1 = m of
/// 2 (C(a) + C(b))`.
pub fn fi_cost_table(max: usize) -> CostTable {
    let mut t = CostTable::with_capacity(max.max(2));
    for m in 3..=max {
        for a in 2..=m.div_ceil(2) {
            let b = m + 1 - a;
            t.offer(m, 2.0 * (t.costs[a] + t.costs[b]), GateType::TypeI, a, b);
        }
    }
    t
}

/// Both joins, with every f_II failure remnant of size `k` credited at its
/// own optimal value `V(k)`.
///
/// `V(m) = min( 2 (V(a) + V(b)) over a + b - 1 = m,
///              2 (V(a) + V(b)) - V(a-1) - V(b-1) over a + b - 2 = m )`,
/// with f_II inputs strictly smaller than `m`.
pub fn recycle_cost_table(max: usize) -> CostTable {
    let mut t = CostTable::with_capacity(max.max(2));
    for m in 3..=max {
        for a in 2..=m.div_ceil(2) {
            let b = m + 1 - a;
            t.offer(m, 2.0 * (t.costs[a] + t.costs[b]), GateType::TypeI, a, b);
        }
        for a in 3..=(m + 2) / 2 {
            let b = m + 2 - a;
            if b >= m {
                continue;
            }
            let cost = 2.0 * (t.costs[a] + t.costs[b]) - t.costs[a - 1] - t.costs[b - 1];
            t.offer(m, cost, GateType::TypeII, a, b);
        }
    }
    t
}

/// Minimum expected Bell-pair cost of `|0>^(m)` with f_I joins and no
/// recycling, and a tree that achieves it.
pub fn dp_min_cost(m: usize) -> Result<(f64, FusionTree), StrategyError> {
    check_size(m)?;
    let t = fi_cost_table(m);
    Ok((t.cost(m), t.tree(m).expect("every size from 2 up is reachable").as_ref().clone()))
}

/// Every fusion tree of size `m` using the given gates, left and right
/// children ordered. f_II joins only take inputs smaller than `m`, which
/// keeps the set finite.
pub fn enumerate_trees(m: usize, gates: &[GateType]) -> Vec<FusionTree> {
    let mut memo: Vec<Vec<FusionTree>> = vec![Vec::new(); m.max(2) + 1];
    if m < 2 {
        return Vec::new();
    }
    memo[2].push(FusionTree::Bell);
    for size in 3..=m {
        let mut out = Vec::new();
        for &gate in gates {
            let (extra, lo) = match gate {
                GateType::TypeI => (1, 2),
                GateType::TypeII => (2, 3),
            };
            for a in lo..=size {
                let Some(b) = (size + extra).checked_sub(a) else { continue };
                if gate == GateType::TypeII && b >= size {
                    continue;
                }
                for l in &memo[a] {
                    for r in &memo[b] {
                        out.push(FusionTree::join(gate, l.clone(), r.clone()));
                    }
                }
            }
        }
        memo[size] = out;
    }
    std::mem::take(&mut memo[m])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fi_costs() {
        let want = [1.0, 4.0, 10.0, 16.0, 28.0, 40.0, 52.0, 64.0, 88.0, 112.0, 136.0];
        let t = fi_cost_table(12);
        for (m, w) in (2..=12).zip(want) {
            assert_eq!(t.cost(m), w, "m={m}");
            assert_eq!(t.tree(m).unwrap().size(), m);
            assert!((t.tree(m).unwrap().expected_cost() - w).abs() < 1e-9);
        }
    }

    #[test]
    fn dp_examples() {
        assert_eq!(
            dp_min_cost(3).unwrap(),
            (4.0, FusionTree::join(GateType::TypeI, FusionTree::Bell, FusionTree::Bell))
        );
        let (c5, t5) = dp_min_cost(5).unwrap();
        assert_eq!(c5, 16.0);
        assert_eq!(t5.to_string(), "I(I(2,2),I(2,2))");
        assert_eq!(dp_min_cost(2).unwrap().0, 1.0);
        assert_eq!(dp_min_cost(1), Err(StrategyError::SizeTooSmall { size: 1 }));
    }

    #[test]
    fn recycle_costs() {
        let want = [4.0, 10.0, 16.0, 28.0, 38.0, 44.0, 57.0, 66.0, 72.0, 85.0];
        let plans =
            ["I(2,2)", "I(2,3)", "I(3,3)", "I(3,4)", "II(4,5)", "II(5,5)", "II(3,8)", "II(4,8)", "II(5,8)", "II(3,11)"];
        let t = recycle_cost_table(12);
        for ((m, w), plan) in (3..=12).zip(want).zip(plans) {
            assert_eq!(t.cost(m), w, "m={m}");
            let tree = t.tree(m).unwrap();
            let FusionTree::Join { gate, left, right } = tree.as_ref() else { panic!() };
            let g = if *gate == GateType::TypeI { "I" } else { "II" };
            assert_eq!(format!("{g}({},{})", left.size(), right.size()), plan);
            let v = |k: usize| t.cost(k);
            assert!((tree.expected_cost_with_credit(&v) - w).abs() < 1e-9);
        }
    }

    #[test]
    fn exhaustive_enumeration_agrees_with_recursion() {
        for m in 2..=10 {
            let trees = enumerate_trees(m, &[GateType::TypeI]);
            assert!(trees.iter().all(|t| t.size() == m));
            let best = trees.iter().map(FusionTree::expected_cost).fold(f64::INFINITY, f64::min);
            assert_eq!(best, dp_min_cost(m).unwrap().0, "m={m}");
        }
        // Catalan numbers: binary trees with m - 1 leaves.
        assert_eq!(enumerate_trees(10, &[GateType::TypeI]).len(), 1430);
    }

    #[test]
    fn exhaustive_enumeration_with_both_gates() {
        let t = recycle_cost_table(9);
        let v = |k: usize| t.cost(k);
        for m in 3..=9 {
            let trees = enumerate_trees(m, &[GateType::TypeI, GateType::TypeII]);
            assert!(trees.iter().all(|tr| tr.size() == m));
            let best = trees.iter().map(|tr| tr.expected_cost_with_credit(&v)).fold(f64::INFINITY, f64::min);
            assert!((best - t.cost(m)).abs() < 1e-9, "m={m}");
        }
    }
}
