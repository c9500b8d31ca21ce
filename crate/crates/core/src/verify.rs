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

//! Self-check suites run by the command-line tool.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::fusion::{completeness_deviation, GateType};
use crate::oracle::{cnot_truth_table, random_amplitudes, verify_transitions, z90_phase_check, Z90Variant};
use crate::parity::{Orientation, Z90Policy};
use crate::rng::RngStream;
use crate::strategy::{
    dp_min_cost, enumerate_trees, fi_cost_table, mc_z90, z90_exact, z90_expected_cost_one_shot, z90_success_prob,
    FusionTree, StrategySpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Povm,
    Transitions,
    Gates,
    Dp,
    Formulas,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Povm, Suite::Transitions, Suite::Gates, Suite::Dp, Suite::Formulas];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Povm => "povm",
            Suite::Transitions => "transitions",
            Suite::Gates => "gates",
            Suite::Dp => "dp",
            Suite::Formulas => "formulas",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

/// Table I column (a) for sizes 3 to 10.
pub const FI_COSTS: [f64; 8] = [4.0, 10.0, 16.0, 28.0, 40.0, 52.0, 64.0, 88.0];

pub fn run_suite(suite: Suite, max_level: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport { suite, checks: Vec::new() };
    match suite {
        Suite::Povm => {
            for gate in [GateType::TypeI, GateType::TypeII] {
                let dev = completeness_deviation(gate);
                r.check(format!("{gate:?} completeness"), dev < 1e-12, format!("max |sum E^dag E - I| = {dev:.3e}"));
            }
        }
        Suite::Transitions => {
            let report = verify_transitions(max_level, seed);
            let mut names: Vec<&str> = Vec::new();
            for c in &report.checks {
                if !names.contains(&c.transition) {
                    names.push(c.transition);
                }
            }
            for name in names {
                let branches: Vec<_> = report.checks.iter().filter(|c| c.transition == name).collect();
                let failed: Vec<_> = branches.iter().filter(|c| !c.passed).map(|c| c.branch.clone()).collect();
                let detail = if failed.is_empty() {
                    format!("{} branches agree at 1e-10", branches.len())
                } else {
                    format!("{} of {} branches differ, first: {}", failed.len(), branches.len(), failed[0])
                };
                r.check(name, failed.is_empty(), detail);
            }
        }
        Suite::Gates => {
            for orientation in [Orientation::MeasureFirst, Orientation::MeasureSecond] {
                let table = cnot_truth_table(2, 2, 3, orientation);
                r.check(format!("cnot truth table {orientation:?}"), table.iter().all(|&x| x), format!("{table:?}"));
            }
            let mut rng = RngStream::new(seed, 1);
            let mut good = 0;
            for i in 0..20 {
                let amps = random_amplitudes(&mut rng);
                good += z90_phase_check(amps, 2 + i % 3, Z90Variant::ConsumedQubit) as usize;
            }
            r.check("z90 phase equivalence", good == 20, format!("{good}/20 random inputs"));
        }
        Suite::Dp => {
            let costs: Vec<f64> = (3..=10).map(|m| dp_min_cost(m).map_or(f64::NAN, |c| c.0)).collect();
            r.check("f_I costs", costs == FI_COSTS, format!("{costs:?}"));
            let t = fi_cost_table(10);
            let mut agree = true;
            for m in 2..=10 {
                let best = enumerate_trees(m, &[GateType::TypeI])
                    .iter()
                    .map(FusionTree::expected_cost)
                    .fold(f64::INFINITY, f64::min);
                agree &= best == t.cost(m);
            }
            r.check("exhaustive enumeration", agree, "every f_I tree for sizes 2 to 10");
        }
        Suite::Formulas => {
            let t = fi_cost_table(12);
            let cost = |k: usize| t.cost(k);
            let mut worst: f64 = 0.0;
            for n in 1..=10 {
                let e = z90_exact(n, Z90Policy::OneShot, &cost, &|_| 0.0);
                worst = worst.max((e.success_prob - z90_success_prob(n)).abs());
                worst = worst.max((e.conditional_cost - z90_expected_cost_one_shot(n)).abs());
            }
            r.check("exact chain vs closed form", worst < 1e-9, format!("max deviation {worst:.2e}"));
            let trials = 20_000;
            let spec = StrategySpec::no_recycling();
            for n in [3, 6] {
                let Ok(s) = mc_z90(n, &spec, trials, seed) else {
                    r.check(format!("mc z90 n={n}"), false, "simulation error");
                    continue;
                };
                let p = z90_success_prob(n);
                let sp = (p * (1.0 - p) / trials as f64).sqrt();
                let c = z90_expected_cost_one_shot(n);
                let ok = (s.success_rate - p).abs() <= 4.0 * sp && (s.mean_cost - c).abs() <= 4.0 * s.std_error;
                r.check(
                    format!("mc z90 n={n}"),
                    ok,
                    format!(
                        "rate {:.4} vs {p:.4}, cost {:.2} ± {:.2} vs {c:.2}",
                        s.success_rate, s.mean_cost, s.std_error
                    ),
                );
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in Suite::ALL {
            let level = if suite == Suite::Transitions { 3 } else { 4 };
            let r = run_suite(suite, level, 1);
            assert!(r.passed(), "{suite}: {:#?}", r.checks);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
