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

use super::dp::FusionTree;
use super::StrategyError;
use crate::parity::{Orientation, Z90Policy};

/// What happens to the remnants left by failed fusions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum RecyclePolicy {
    /// Thrown away.
    #[default]
    None,
    /// Kept in a per-trial pool and used before building anything new of
    /// the same size.
    Pool,
    /// Credited at the expected cost of a fresh state of that size under the
    /// best recycling plan.
    Credit,
}

impl RecyclePolicy {
    pub fn recycles(self) -> bool {
        self != RecyclePolicy::None
    }
}

/// How resource states are built.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub enum BuildPlan {
    /// The cheapest f_I-only tree for every size.
    #[default]
    FusionTypeI,
    /// The cheapest tree for every size when f_II remnants are worth their
    /// own expected cost.
    Recycling,
    /// One explicit tree; only its own size can be built.
    Tree(FusionTree),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Z90Strategy {
    pub policy: Z90Policy,
}

impl Default for Z90Strategy {
    fn default() -> Self {
        Z90Strategy { policy: Z90Policy::OneShot }
    }
}

/// Resource size for each post-encoding step on the new control block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PostEncode {
    /// `target - level + 2`, enough to reach the target in one success.
    OneHit,
    Fixed(usize),
}

impl PostEncode {
    pub fn piece(self, target: usize, level: usize) -> usize {
        match self {
            PostEncode::OneHit => target + 2 - level,
            PostEncode::Fixed(size) => size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CnotStrategy {
    /// Encode the control up while it is below this level.
    pub pre_encode_threshold: usize,
    pub pre_encode_resource: usize,
    /// `|0>^(m+1)` used by the gate itself.
    pub gate_resource: usize,
    /// Level the new control block is grown to before commit; `None` means
    /// the starting level.
    pub post_encode_target: Option<usize>,
    pub post_encode: PostEncode,
    pub orientation: Orientation,
}

impl CnotStrategy {
    /// Threshold 6; `|0>^(8)` for pre-encoding (`|0>^(7)` at `n = 6`);
    /// `|0>^(5)` in the gate; post-encoding back to `n` in one hit.
    pub fn captioned(n: usize) -> Self {
        CnotStrategy {
            pre_encode_threshold: 6,
            pre_encode_resource: if n == 6 { 7 } else { 8 },
            gate_resource: 5,
            post_encode_target: None,
            post_encode: PostEncode::OneHit,
            orientation: Orientation::MeasureFirst,
        }
    }
}

impl Default for CnotStrategy {
    fn default() -> Self {
        CnotStrategy::captioned(8)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StrategySpec {
    pub build_plan: BuildPlan,
    pub recycle: RecyclePolicy,
    pub z90: Z90Strategy,
    pub cnot: CnotStrategy,
}

impl StrategySpec {
    /// f_I trees, nothing recycled, one-shot Z90.
    pub fn no_recycling() -> Self {
        StrategySpec::default()
    }

    /// Recycling trees with credited remnants; Z90 restores the level with
    /// pieces of at most 5 qubits between attempts.
    pub fn recycling() -> Self {
        StrategySpec {
            build_plan: BuildPlan::Recycling,
            recycle: RecyclePolicy::Credit,
            z90: Z90Strategy { policy: Z90Policy::RestoreBetweenAttempts { max_piece: 5 } },
            cnot: CnotStrategy::default(),
        }
    }

    /// The CNOT strategy for level `n`. Resources are always built from f_I
    /// trees; with `recycle` the remnants of failed steps are credited.
    pub fn cnot_table(n: usize, recycle: bool) -> Self {
        StrategySpec {
            recycle: if recycle { RecyclePolicy::Credit } else { RecyclePolicy::None },
            cnot: CnotStrategy::captioned(n),
            ..StrategySpec::no_recycling()
        }
    }

    pub fn validate(&self) -> Result<(), StrategyError> {
        let c = &self.cnot;
        for (name, size) in [("pre_encode_resource", c.pre_encode_resource), ("gate_resource", c.gate_resource)] {
            if size < 2 {
                return Err(StrategyError::InvalidStrategy(format!("{name} must be at least 2, got {size}")));
            }
        }
        if let PostEncode::Fixed(size) = c.post_encode {
            if size < 3 {
                return Err(StrategyError::InvalidStrategy(format!(
                    "post-encoding pieces must be at least 3, got {size}"
                )));
            }
        }
        if c.pre_encode_threshold < 1 || c.post_encode_target == Some(0) {
            return Err(StrategyError::InvalidStrategy("thresholds must be at least 1".into()));
        }
        if c.pre_encode_resource < 3 && c.pre_encode_threshold > 1 {
            return Err(StrategyError::InvalidStrategy("pre-encoding with Bell pairs never raises the level".into()));
        }
        Ok(())
    }
}

/// Bell pairs spent during one trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostLedger {
    /// Fresh Bell pairs fused; never decreases.
    pub bell_states_consumed: u64,
    /// Value of remnants credited back.
    pub credited: u64,
    pub resources_acquired: u64,
    pub pool_hits: u64,
    pub remnants_returned: u64,
}

impl CostLedger {
    pub fn net_cost(&self) -> i64 {
        self.bell_states_consumed as i64 - self.credited as i64
    }
}

/// Aggregate of many trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub success_std_error: f64,
    /// `mean_cost` and `std_error` are over successful trials only.
    pub conditional_on_success: bool,
    pub mean_cost: f64,
    pub std_error: f64,
    pub unconditional_mean_cost: f64,
    pub unconditional_std_error: f64,
}

/// Integer counters; merging is exact and order independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub trials: u64,
    pub successes: u64,
    pub sum: i128,
    pub sum_sq: i128,
    pub sum_ok: i128,
    pub sum_sq_ok: i128,
}

impl Tally {
    pub fn record(&mut self, success: bool, cost: i64) {
        let c = cost as i128;
        self.trials += 1;
        self.sum += c;
        self.sum_sq += c * c;
        if success {
            self.successes += 1;
            self.sum_ok += c;
            self.sum_sq_ok += c * c;
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.successes += other.successes;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.sum_ok += other.sum_ok;
        self.sum_sq_ok += other.sum_sq_ok;
        self
    }

    pub fn summary(&self) -> SummaryStats {
        let (mean, se) = mean_and_error(self.successes, self.sum_ok, self.sum_sq_ok);
        let (umean, use_) = mean_and_error(self.trials, self.sum, self.sum_sq);
        let rate = if self.trials == 0 { 0.0 } else { self.successes as f64 / self.trials as f64 };
        let rate_se = if self.trials == 0 { 0.0 } else { (rate * (1.0 - rate) / self.trials as f64).sqrt() };
        SummaryStats {
            trials: self.trials,
            successes: self.successes,
            success_rate: rate,
            success_std_error: rate_se,
            conditional_on_success: true,
            mean_cost: mean,
            std_error: se,
            unconditional_mean_cost: umean,
            unconditional_std_error: use_,
        }
    }
}

fn mean_and_error(n: u64, sum: i128, sum_sq: i128) -> (f64, f64) {
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = sum as f64 / nf;
    if n == 1 {
        return (mean, 0.0);
    }
    // Exact integer numerator of the sample variance.
    let num = (n as i128) * sum_sq - sum * sum;
    let var = num as f64 / (nf * (nf - 1.0));
    (mean, (var.max(0.0) / nf).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_statistics() {
        let mut t = Tally::default();
        for (ok, c) in [(true, 2), (true, 4), (false, 9), (true, 6)] {
            t.record(ok, c);
        }
        let s = t.summary();
        assert_eq!((s.trials, s.successes), (4, 3));
        assert_eq!(s.mean_cost, 4.0);
        assert!((s.std_error - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(s.unconditional_mean_cost, 21.0 / 4.0);
        assert_eq!(s.success_rate, 0.75);
    }

    #[test]
    fn merge_is_order_independent() {
        let mut a = Tally::default();
        let mut b = Tally::default();
        a.record(true, 5);
        b.record(false, 7);
        b.record(true, 1);
        assert_eq!(a.merge(b), b.merge(a));
    }

    #[test]
    fn validation() {
        assert!(StrategySpec::no_recycling().validate().is_ok());
        assert!(StrategySpec::cnot_table(6, true).validate().is_ok());
        let mut s = StrategySpec::default();
        s.cnot.gate_resource = 1;
        assert!(s.validate().is_err());
        s.cnot.gate_resource = 2;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn captioned_resources() {
        assert_eq!(CnotStrategy::captioned(6).pre_encode_resource, 7);
        assert_eq!(CnotStrategy::captioned(9).pre_encode_resource, 8);
        assert_eq!(PostEncode::OneHit.piece(10, 4), 8);
    }
}
