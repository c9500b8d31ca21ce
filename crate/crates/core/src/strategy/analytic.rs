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

//! Closed forms and exact Markov-chain values.

use serde::Serialize;

use super::dp::fi_cost_table;
use crate::parity::{restore_piece, z90_resource_size, Z90Policy};

/// `1 - (1/2)^n`: a one-shot Z90 at level `n` fails only after `n` losses.
pub fn z90_success_prob(n: usize) -> f64 {
    1.0 - 0.5f64.powi(n as i32)
}

/// `1 - (3/4)^n`, ignoring the boundary at low levels.
pub fn cnot_success_prob_asymptotic(n: usize) -> f64 {
    1.0 - 0.75f64.powi(n as i32)
}

/// Expected Bell pairs spent by a successful one-shot Z90 at level `n`,
/// with every attempt consuming one f_I-built `|0>^(n+1)`:
/// `C(n+1) * sum_{k=1..n} k 2^-k / (1 - 2^-n)`.
pub fn z90_expected_cost_one_shot(n: usize) -> f64 {
    let c = fi_cost_table(n + 1).cost(n + 1);
    let attempts: f64 = (1..=n).map(|k| k as f64 * 0.5f64.powi(k as i32)).sum();
    c * attempts / z90_success_prob(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactZ90 {
    pub success_prob: f64,
    /// Expected net cost given success.
    pub conditional_cost: f64,
    /// Expected net cost over all runs.
    pub unconditional_cost: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Value {
    p: f64,
    cost: f64,
    cost_ok: f64,
}

impl Value {
    const SUCCESS: Value = Value { p: 1.0, cost: 0.0, cost_ok: 0.0 };
    const LOSS: Value = Value { p: 0.0, cost: 0.0, cost_ok: 0.0 };

    /// Pay `c` and move on to `next`.
    fn after(self, c: f64) -> Value {
        Value { p: self.p, cost: c + self.cost, cost_ok: c * self.p + self.cost_ok }
    }

    fn mix(a: Value, b: Value) -> Value {
        Value { p: 0.5 * (a.p + b.p), cost: 0.5 * (a.cost + b.cost), cost_ok: 0.5 * (a.cost_ok + b.cost_ok) }
    }
}

/// Exact success probability and costs of the Z90 protocol at level `n`.
///
/// `cost(k)` is the expected price of a fresh `|0>^(k)` and `credit(k)` the
/// value of a returned remnant of size `k`.
pub fn z90_exact(n: usize, policy: Z90Policy, cost: &dyn Fn(usize) -> f64, credit: &dyn Fn(usize) -> f64) -> ExactZ90 {
    let size = z90_resource_size(n);
    let remnant = |k: usize| if k >= 2 { credit(k) } else { 0.0 };
    // attempt[l]: about to try the rotation at level l.
    // restore[l]: rebuilding towards n from level l.
    let mut attempt = vec![Value::default(); n + 1];
    let mut restore = vec![Value::default(); n + 1];
    let after_failure = |l: usize, attempt: &[Value], restore: &[Value]| -> Value {
        if l == 0 {
            Value::LOSS
        } else {
            match policy {
                Z90Policy::OneShot => attempt[l],
                Z90Policy::RestoreBetweenAttempts { .. } => restore[l],
            }
        }
    };
    for _ in 0..1_000_000 {
        let mut delta = 0.0f64;
        let mut next_attempt = attempt.clone();
        let mut next_restore = restore.clone();
        for (l, slot) in next_attempt.iter_mut().enumerate().skip(1) {
            let fail = after_failure(l - 1, &attempt, &restore).after(-remnant(size - 1));
            *slot = Value::mix(Value::SUCCESS, fail).after(cost(size));
        }
        if let Z90Policy::RestoreBetweenAttempts { max_piece } = policy {
            for l in 1..=n {
                if l >= n {
                    next_restore[l] = attempt[n];
                    continue;
                }
                let piece = restore_piece(n, l, max_piece);
                let up = l + piece - 2;
                let ok = if up >= n { attempt[n] } else { restore[up] };
                let fail = if l == 1 { Value::LOSS } else { restore[l - 1] }.after(-remnant(piece - 1));
                next_restore[l] = Value::mix(ok, fail).after(cost(piece));
            }
        }
        for (old, new) in attempt.iter().zip(&next_attempt).chain(restore.iter().zip(&next_restore)) {
            delta = delta
                .max((old.p - new.p).abs())
                .max((old.cost - new.cost).abs())
                .max((old.cost_ok - new.cost_ok).abs());
        }
        attempt = next_attempt;
        restore = next_restore;
        if delta < 1e-13 {
            break;
        }
    }
    let v = attempt[n];
    ExactZ90 { success_prob: v.p, conditional_cost: v.cost_ok / v.p, unconditional_cost: v.cost }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::recycle_cost_table;

    #[test]
    fn formulas() {
        assert_eq!(z90_success_prob(1), 0.5);
        assert_eq!(z90_success_prob(3), 0.875);
        assert!((z90_success_prob(10) - 0.999023).abs() < 1e-6);
        assert_eq!(cnot_success_prob_asymptotic(1), 0.25);
        assert_eq!(cnot_success_prob_asymptotic(2), 0.4375);
        assert_eq!(z90_expected_cost_one_shot(1), 1.0);
        assert!((z90_expected_cost_one_shot(3) - 15.714).abs() < 1e-3);
        assert!((z90_expected_cost_one_shot(9) - 174.45).abs() < 1e-2);
    }

    #[test]
    fn exact_one_shot_matches_closed_form() {
        let t = fi_cost_table(12);
        let cost = |k: usize| t.cost(k);
        for n in 1..=10 {
            let e = z90_exact(n, Z90Policy::OneShot, &cost, &|_| 0.0);
            assert!((e.success_prob - z90_success_prob(n)).abs() < 1e-12);
            assert!((e.conditional_cost - z90_expected_cost_one_shot(n)).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn exact_restore_with_credit() {
        let t = recycle_cost_table(12);
        let v = |k: usize| t.cost(k);
        let want = [17.8, 28.1, 48.7, 59.6, 63.5, 84.4, 90.2, 93.6];
        for (n, w) in (3..=10).zip(want) {
            let e = z90_exact(n, Z90Policy::RestoreBetweenAttempts { max_piece: 5 }, &v, &v);
            assert!((e.conditional_cost - w).abs() < 0.06, "n={n}: {}", e.conditional_cost);
            assert!(e.success_prob > 0.75 && e.success_prob < 1.0, "n={n}: {}", e.success_prob);
        }
    }
}
