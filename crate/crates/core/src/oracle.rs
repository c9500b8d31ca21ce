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

//! Physical-qubit runs of every parity transition, branch by branch.
//!
//! Each run applies the fusion Kraus elements and single-qubit corrections
//! to an expanded state vector and compares the result with what the
//! symbolic rules in [`crate::parity`] predict.

use num_complex::Complex64;
use serde::Serialize;

use crate::fusion::{FusionClass, GateType, KrausElement, Pauli};
use crate::linalg::{gates, CMatrix, ONE, ZERO};
use crate::parity::{
    cnot_attempt_branch, encode_branch, join_fi_branch, join_fii_branch, measure_physical, z90_attempt_branch,
    CnotAttempt, EncodeOutcome, JoinOutcome, LogicalPair, LogicalParityQubit, Orientation, PendingCnot, PendingGrowth,
    ResourceState, Z90Attempt,
};
use crate::rng::RngStream;
use crate::statevec::{encoded_state, StateVector, ZERO_PROBABILITY};

pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Largest register the protocol checks build.
pub const ORACLE_QUBIT_CAP: usize = 12;

type Tag = u8;
const A: Tag = 0;
const B: Tag = 1;
const R: Tag = 2;
const S: Tag = 3;
const PIVOT: Tag = 4;

/// A state vector whose qubits carry block labels.
#[derive(Clone, Debug)]
struct Register {
    state: StateVector,
    tags: Vec<Tag>,
}

impl Register {
    fn encoded(blocks: &[(Tag, usize)], logical: &[Complex64]) -> Register {
        let mut tags = Vec::new();
        let mut qubits = Vec::new();
        for &(tag, n) in blocks {
            qubits.push((tags.len()..tags.len() + n).collect::<Vec<_>>());
            tags.extend(std::iter::repeat_n(tag, n));
        }
        let state = encoded_state(tags.len(), &qubits, logical).expect("oracle blocks are well formed");
        Register { state, tags }
    }

    fn resource(tag: Tag, size: usize) -> Register {
        Register::encoded(&[(tag, size)], &[ONE, ZERO])
    }

    /// `other` placed above `self`.
    fn with(&self, other: &Register) -> Register {
        let mut tags = self.tags.clone();
        tags.extend(&other.tags);
        Register { state: self.state.tensor(&other.state), tags }
    }

    fn qubits(&self, tag: Tag) -> Vec<usize> {
        (0..self.tags.len()).filter(|&q| self.tags[q] == tag).collect()
    }

    fn size(&self, tag: Tag) -> usize {
        self.qubits(tag).len()
    }

    fn highest(&self, tag: Tag) -> usize {
        *self.qubits(tag).last().expect("block is not empty")
    }

    fn lowest(&self, tag: Tag) -> usize {
        self.qubits(tag)[0]
    }

    fn apply(&self, q: usize, u: &CMatrix) -> Register {
        Register { state: self.state.apply_1q(q, u).expect("valid qubit"), tags: self.tags.clone() }
    }

    fn apply_block(&self, tag: Tag, u: &CMatrix) -> Register {
        Register {
            state: self.state.apply_1q_each(&self.qubits(tag), u).expect("valid qubits"),
            tags: self.tags.clone(),
        }
    }

    /// X on one qubit of `tag` when `flip` is set and the block is not empty.
    fn flip_one(&self, tag: Tag, flip: bool) -> Register {
        if flip && self.size(tag) > 0 {
            self.apply(self.lowest(tag), &gates::x())
        } else {
            self.clone()
        }
    }

    fn relabel(mut self, from: Tag, to: Tag) -> Register {
        for t in &mut self.tags {
            if *t == from {
                *t = to;
            }
        }
        self
    }

    fn measure(&self, q: usize, outcome: u8) -> Option<(f64, Register)> {
        let (p, state) = self.state.measure_qubit(q, outcome).ok()?;
        let mut tags = self.tags.clone();
        tags.remove(q);
        Some((p, Register { state, tags }))
    }

    /// Every outcome of measuring all qubits of `tag`, with the parity read.
    fn measure_block(&self, tag: Tag) -> Vec<(f64, u8, Register)> {
        let mut out = vec![(1.0, 0u8, self.clone())];
        for _ in 0..self.size(tag) {
            let mut next = Vec::new();
            for (p, parity, reg) in out {
                let q = reg.highest(tag);
                for v in [0, 1] {
                    if let Some((pv, post)) = reg.measure(q, v) {
                        next.push((p * pv, parity ^ v, post));
                    }
                }
            }
            out = next;
        }
        out
    }

    fn fuse(&self, e: &KrausElement, first: usize, second: usize, out_tag: Tag) -> Option<(f64, Register)> {
        let post = self.state.apply_pair_operator(first, second, &e.matrix).expect("valid pair");
        let p = post.norm_sqr();
        if p < ZERO_PROBABILITY {
            return None;
        }
        let (lo, hi) = (first.min(second), first.max(second));
        let mut tags = self.tags.clone();
        tags.remove(hi);
        if e.matrix.rows() == 1 {
            tags.remove(lo);
        } else {
            tags[lo] = out_tag;
        }
        Some((p, Register { state: post.normalized(), tags }))
    }

    /// Does the register hold exactly `blocks` (covering every qubit) in the
    /// logical state `logical`, up to a global phase?
    fn holds(&self, blocks: &[Tag], logical: &[Complex64]) -> bool {
        let qubits: Vec<Vec<usize>> = blocks.iter().map(|&t| self.qubits(t)).collect();
        if qubits.iter().map(Vec::len).sum::<usize>() != self.tags.len() || qubits.iter().any(Vec::is_empty) {
            return false;
        }
        match encoded_state(self.tags.len(), &qubits, logical) {
            Ok(want) => want.equivalent_up_to_phase(&self.state, ORACLE_TOLERANCE).unwrap_or(false),
            Err(_) => false,
        }
    }
}

/// Logical amplitudes of independent blocks, first block in the lowest bit.
fn kron(parts: &[&[Complex64]]) -> Vec<Complex64> {
    parts.iter().fold(vec![ONE], |acc, part| {
        let mut out = vec![ZERO; acc.len() * part.len()];
        for (hi, p) in part.iter().enumerate() {
            for (lo, a) in acc.iter().enumerate() {
                out[hi * acc.len() + lo] = a * p;
            }
        }
        out
    })
}

/// Pair amplitudes in block order `[first, second]`.
fn pair_logical(p: &LogicalPair) -> [Complex64; 4] {
    let a = p.amplitudes();
    // Block bit 0 is the first qubit; pair index is 2 * first + second.
    [a[0], a[2], a[1], a[3]]
}

const ZERO_STATE: [Complex64; 2] = [ONE, ZERO];

/// One compared branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchCheck {
    pub transition: &'static str,
    pub branch: String,
    pub probability: f64,
    pub passed: bool,
}

/// All branches checked by one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<BranchCheck>,
}

impl OracleReport {
    fn push(&mut self, transition: &'static str, branch: String, probability: f64, passed: bool) {
        self.checks.push(BranchCheck { transition, branch, probability, passed });
    }

    fn extend(&mut self, other: OracleReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&BranchCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Number of checked branches for one transition.
    pub fn count(&self, transition: &str) -> usize {
        self.checks.iter().filter(|c| c.transition == transition).count()
    }
}

fn elements(gate: GateType) -> impl Iterator<Item = &'static KrausElement> {
    gate.elements().iter()
}

fn bits(e: &KrausElement) -> [bool; 2] {
    let m = e.measured.expect("failure elements record their readout");
    [m[0] == 1, m[1] == 1]
}

/// A random normalized qubit amplitude pair.
pub fn random_amplitudes(rng: &mut RngStream) -> [Complex64; 2] {
    let mut v = [ZERO; 2];
    for a in &mut v {
        *a = Complex64::new(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    }
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.map(|a| a / n)
}

fn random_pair_amplitudes(rng: &mut RngStream) -> [Complex64; 4] {
    let [a, b] = random_amplitudes(rng);
    let [c, d] = random_amplitudes(rng);
    // Entangled on purpose: mix a product with a second product.
    let v = [a * c + d * 0.5, a * d, b * c, b * d - c * 0.5];
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

fn qubit(amps: [Complex64; 2], level: usize) -> LogicalParityQubit {
    LogicalParityQubit::new(amps[0], amps[1], level).expect("normalized amplitudes")
}

/// Measuring one physical qubit, with the X correction on outcome 1.
pub fn check_measure(max_level: usize, amps: [Complex64; 2]) -> OracleReport {
    let mut report = OracleReport::default();
    for level in 2..=max_level {
        let reg = Register::encoded(&[(A, level)], &amps);
        for outcome in [0, 1] {
            let Some((p, post)) = reg.measure(reg.highest(A), outcome) else { continue };
            let post = post.flip_one(A, outcome == 1);
            let sym = measure_physical(qubit(amps, level), outcome).expect("level at least 2");
            let ok = post.size(A) == sym.level() && post.holds(&[A], &sym.amplitudes());
            report.push("measure", format!("level {level}, outcome {outcome}"), p, ok);
        }
    }
    report
}

/// f_II between the code and a resource, every detector pattern.
pub fn check_encode(max_level: usize, amps: [Complex64; 2]) -> OracleReport {
    let mut report = OracleReport::default();
    for level in 1..=max_level {
        for size in 2..=max_level {
            let reg = Register::encoded(&[(A, level)], &amps).with(&Register::resource(R, size));
            let resource = ResourceState::new(size).expect("size at least 2");
            for e in elements(GateType::TypeII) {
                let Some((p, post)) = reg.fuse(e, reg.highest(A), reg.lowest(R), R) else { continue };
                let label = format!("level {level}, resource {size}, {}", e.pattern);
                let success = e.class == FusionClass::Success;
                let ok = match encode_branch(qubit(amps, level), resource, success) {
                    EncodeOutcome::Success(q) => {
                        let post = if e.correction == Pauli::Z { post.apply_block(R, &gates::z()) } else { post };
                        let post = post.relabel(R, A);
                        success && post.size(A) == q.level() && post.holds(&[A], &q.amplitudes())
                    }
                    EncodeOutcome::Failure { qubit: q, remnant } => {
                        let [qa, qr] = bits(e);
                        let post = post.flip_one(A, qa).flip_one(R, qr);
                        !success
                            && post.size(A) == q.level()
                            && remnant.map_or(1, |r| r.size()) == post.size(R)
                            && post.holds(&[A, R], &kron(&[&q.amplitudes(), &ZERO_STATE]))
                    }
                    EncodeOutcome::Lost { remnant } => {
                        let post = post.flip_one(R, bits(e)[1]);
                        !success && post.size(A) == 0 && remnant.map_or(1, |r| r.size()) == post.size(R)
                    }
                };
                report.push("encode_step", label, p, ok);
            }
        }
    }
    report
}

/// Hadamard-conjugated f_I between two resources.
pub fn check_join_fi(max_level: usize) -> OracleReport {
    let mut report = OracleReport::default();
    let h = gates::hadamard();
    for a in 2..=max_level {
        for b in 2..=max_level {
            let reg = Register::resource(A, a).with(&Register::resource(B, b));
            let (qa, qb) = (reg.highest(A), reg.lowest(B));
            let reg = reg.apply(qa, &h).apply(qb, &h);
            let (ra, rb) = (ResourceState::new(a).unwrap(), ResourceState::new(b).unwrap());
            let mut failure = 0.0;
            for e in elements(GateType::TypeI) {
                let Some((p, post)) = reg.fuse(e, qa, qb, PIVOT) else { continue };
                if e.class == FusionClass::Failure {
                    failure += p;
                    continue;
                }
                let q = post.lowest(PIVOT);
                let post = post.apply(q, &e.correction.matrix()).apply(q, &h).relabel(PIVOT, A).relabel(B, A);
                let ok = match join_fi_branch(ra, rb, true) {
                    JoinOutcome::Success(r) => post.size(A) == r.size() && post.holds(&[A], &ZERO_STATE),
                    JoinOutcome::Failure { .. } => false,
                };
                report.push("join_fI", format!("{a}+{b}, {}", e.pattern), p, ok);
            }
            let ok = (failure - 0.5).abs() < ORACLE_TOLERANCE
                && join_fi_branch(ra, rb, false) == JoinOutcome::Failure { remnants: Vec::new() };
            report.push("join_fI", format!("{a}+{b}, failure"), failure, ok);
        }
    }
    report
}

/// f_II between two resources.
pub fn check_join_fii(max_level: usize) -> OracleReport {
    let mut report = OracleReport::default();
    for a in 2..=max_level {
        for b in 2..=max_level {
            let reg = Register::resource(A, a).with(&Register::resource(B, b));
            let (ra, rb) = (ResourceState::new(a).unwrap(), ResourceState::new(b).unwrap());
            for e in elements(GateType::TypeII) {
                let Some((p, post)) = reg.fuse(e, reg.highest(A), reg.lowest(B), A) else { continue };
                let success = e.class == FusionClass::Success;
                let ok = match join_fii_branch(ra, rb, success) {
                    JoinOutcome::Success(r) => {
                        let post = if e.correction == Pauli::Z { post.apply_block(B, &gates::z()) } else { post };
                        let post = post.relabel(B, A);
                        post.size(A) == r.size() && post.holds(&[A], &ZERO_STATE)
                    }
                    JoinOutcome::Failure { remnants } => {
                        let [fa, fb] = bits(e);
                        let post = post.flip_one(A, fa).flip_one(B, fb);
                        let kept: Vec<usize> = remnants.iter().map(|r| r.size()).collect();
                        let physical: Vec<usize> =
                            [post.size(A), post.size(B)].into_iter().filter(|&s| s >= 2).collect();
                        if success {
                            // Two Bell pairs: nothing left to compare.
                            post.tags.is_empty() && kept.is_empty()
                        } else {
                            kept == physical && post.holds(&[A, B], &kron(&[&ZERO_STATE, &ZERO_STATE]))
                        }
                    }
                };
                report.push("join_fII", format!("{a}+{b}, {}", e.pattern), p, ok);
            }
        }
    }
    report
}

/// Which physical qubit receives the Z90 rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Z90Variant {
    /// The rotated qubit is the one fused with the resource.
    ConsumedQubit,
    /// A different qubit is rotated and later measured out.
    RetainedQubit,
}

/// Physical Z90 attempt: every branch as (probability, label, register,
/// success). Success branches are fully corrected.
fn z90_branches(
    amps: [Complex64; 2],
    level: usize,
    target: usize,
    variant: Z90Variant,
    u: &CMatrix,
) -> Vec<(f64, String, Register, bool, u8)> {
    let reg = Register::encoded(&[(A, level)], &amps);
    let rotated = match variant {
        Z90Variant::ConsumedQubit => reg.highest(A),
        Z90Variant::RetainedQubit => reg.lowest(A),
    };
    let reg = reg.apply(rotated, u).with(&Register::resource(R, target + 1));
    let mut out = Vec::new();
    for e in elements(GateType::TypeII) {
        let Some((p, post)) = reg.fuse(e, reg.highest(A), reg.lowest(R), R) else { continue };
        if e.class == FusionClass::Failure {
            let [fa, fr] = bits(e);
            out.push((p, format!("{}", e.pattern), post.flip_one(A, fa).flip_one(R, fr), false, 0));
            continue;
        }
        let post = if e.correction == Pauli::Z { post.apply_block(R, &gates::z()) } else { post };
        for (pm, parity, reg) in post.measure_block(A) {
            let reg = reg.flip_one(R, parity == 1);
            out.push((p * pm, format!("{}, parity {parity}", e.pattern), reg, true, parity));
        }
    }
    out
}

/// The Z90 attempt at `level` aiming back at `target`, every branch.
pub fn check_z90(max_level: usize, amps: [Complex64; 2]) -> OracleReport {
    let mut report = OracleReport::default();
    for target in 1..=max_level {
        for level in 1..=target {
            let q = qubit(amps, level);
            for (p, label, reg, success, parity) in
                z90_branches(amps, level, target, Z90Variant::ConsumedQubit, &gates::z90())
            {
                let label = format!("level {level}, target {target}, {label}");
                let ok = match z90_attempt_branch(q, target, success) {
                    Z90Attempt::Success(out) => {
                        let reg = if parity == 1 { reg.apply_block(R, &gates::z()) } else { reg };
                        success && reg.size(R) == out.level() && reg.holds(&[R], &out.amplitudes())
                    }
                    Z90Attempt::Failure { qubit: out, remnant } => {
                        !success
                            && reg.size(A) == out.level()
                            && remnant.map_or(1, |r| r.size()) == reg.size(R)
                            && reg.holds(&[A, R], &kron(&[&out.amplitudes(), &ZERO_STATE]))
                    }
                    Z90Attempt::Lost { remnant } => {
                        !success && reg.size(A) == 0 && remnant.map_or(1, |r| r.size()) == reg.size(R)
                    }
                };
                report.push("z90", label, p, ok);
            }
        }
    }
    report
}

/// Do all successful branches of one Z90 attempt leave logical Z90 applied?
pub fn z90_phase_check(amps: [Complex64; 2], level: usize, variant: Z90Variant) -> bool {
    let want = gates::z90().apply(&amps);
    z90_branches(amps, level, level, variant, &gates::z90()).into_iter().filter(|b| b.3).all(
        |(_, _, reg, _, parity)| {
            let reg = if parity == 1 { reg.apply_block(R, &gates::z()) } else { reg };
            reg.holds(&[R], &want)
        },
    )
}

/// Run the Z90 procedure with `Z_theta` in place of Z90 and only the X
/// correction. Returns, per successful branch, its probability and `+1` if
/// the output is `Z_theta`, `-1` if it is `Z_-theta`, `0` otherwise.
pub fn z_theta_branch_signs(amps: [Complex64; 2], level: usize, theta: f64) -> Vec<(f64, i8)> {
    let plus = gates::z_theta(theta).apply(&amps);
    let minus = gates::z_theta(-theta).apply(&amps);
    z90_branches(amps, level, level, Z90Variant::ConsumedQubit, &gates::z_theta(theta))
        .into_iter()
        .filter(|b| b.3)
        .map(|(p, _, reg, _, _)| {
            let sign = if reg.holds(&[R], &plus) {
                1
            } else if reg.holds(&[R], &minus) {
                -1
            } else {
                0
            };
            (p, sign)
        })
        .collect()
}

/// CNOT branches after the f_I on the first logical qubit and the f_II on
/// the second. Success registers hold the pivot-free, unmeasured state with
/// `A` the old first block, `R` the new block and `B` the second block.
enum CnotBranch {
    TypeIFailed(Register),
    TypeIIFailed(Register),
    Succeeded(Register),
}

fn cnot_branches(pair: &LogicalPair, size: usize) -> Vec<(f64, String, CnotBranch)> {
    let [a, b] = pair.levels();
    let reg = Register::encoded(&[(A, a), (B, b)], &pair_logical(pair)).with(&Register::resource(R, size));
    let mut out = Vec::new();
    for e1 in elements(GateType::TypeI) {
        let Some((p1, post)) = reg.fuse(e1, reg.highest(A), reg.lowest(R), PIVOT) else { continue };
        if e1.class == FusionClass::Failure {
            let [fa, fr] = bits(e1);
            out.push((p1, format!("{}", e1.pattern), CnotBranch::TypeIFailed(post.flip_one(A, fa).flip_one(R, fr))));
            continue;
        }
        let post = post.apply(post.lowest(PIVOT), &e1.correction.matrix());
        for e2 in elements(GateType::TypeII) {
            let Some((p2, reg2)) = post.fuse(e2, post.highest(B), post.lowest(PIVOT), PIVOT) else { continue };
            let label = format!("{}, {}", e1.pattern, e2.pattern);
            if e2.class == FusionClass::Failure {
                let [fb, fo] = bits(e2);
                let reg2 = reg2.flip_one(B, fb).flip_one(A, fo).flip_one(R, fo);
                out.push((p1 * p2, label, CnotBranch::TypeIIFailed(reg2)));
                continue;
            }
            let reg2 = if e2.correction == Pauli::Z { reg2.apply_block(R, &gates::z()) } else { reg2 };
            out.push((p1 * p2, label, CnotBranch::Succeeded(reg2)));
        }
    }
    out
}

/// Measure the pending side out and apply the parity-conditioned flips.
fn commit_register(reg: &Register, orientation: Orientation) -> Vec<(f64, Register)> {
    let (measured, other) = match orientation {
        Orientation::MeasureFirst => (A, B),
        Orientation::MeasureSecond => (B, A),
    };
    reg.measure_block(measured)
        .into_iter()
        .map(|(p, parity, r)| (p, r.flip_one(R, parity == 1).flip_one(other, parity == 1)))
        .collect()
}

fn commit_blocks(orientation: Orientation) -> [Tag; 2] {
    match orientation {
        Orientation::MeasureFirst => [R, B],
        Orientation::MeasureSecond => [A, R],
    }
}

fn pair_held(reg: &Register, blocks: [Tag; 2], pair: &LogicalPair) -> bool {
    let [la, lb] = pair.levels();
    reg.size(blocks[0]) == la && reg.size(blocks[1]) == lb && reg.holds(&blocks, &pair_logical(pair))
}

/// One CNOT attempt, every branch, committed immediately on success.
pub fn check_cnot(pair: &LogicalPair, size: usize, orientation: Orientation) -> OracleReport {
    let mut report = OracleReport::default();
    let resource = ResourceState::new(size).expect("size at least 2");
    let [a, b] = pair.levels();
    let name = format!("levels ({a},{b}), resource {size}, {orientation:?}");
    for (p, label, branch) in cnot_branches(pair, size) {
        let label = format!("{name}, {label}");
        let (first_ok, second_ok) = match branch {
            CnotBranch::TypeIFailed(_) => (false, false),
            CnotBranch::TypeIIFailed(_) => (true, false),
            CnotBranch::Succeeded(_) => (true, true),
        };
        let Ok(sym) = cnot_attempt_branch(*pair, resource, orientation, first_ok, second_ok) else {
            report.push("cnot", label, p, false);
            continue;
        };
        match (branch, sym) {
            (
                CnotBranch::TypeIFailed(reg) | CnotBranch::TypeIIFailed(reg),
                CnotAttempt::TypeIFailed { pair: out, remnant },
            )
            | (
                CnotBranch::TypeIFailed(reg) | CnotBranch::TypeIIFailed(reg),
                CnotAttempt::TypeIIFailed { pair: out, remnant },
            ) => {
                let [la, lb] = out.levels();
                let ok = reg.size(A) == la
                    && reg.size(B) == lb
                    && remnant.map_or(1, |r| r.size()) == reg.size(R)
                    && reg.holds(&[A, B, R], &kron(&[&pair_logical(&out), &ZERO_STATE]));
                report.push("cnot", label, p, ok);
            }
            (CnotBranch::TypeIFailed(reg) | CnotBranch::TypeIIFailed(reg), CnotAttempt::Lost { .. }) => {
                report.push("cnot", label, p, reg.size(A) == 0 || reg.size(B) == 0);
            }
            (CnotBranch::Succeeded(reg), CnotAttempt::Succeeded(pending)) => {
                let want = pending.commit();
                for (pm, reg) in commit_register(&reg, orientation) {
                    let ok = pair_held(&reg, commit_blocks(orientation), &want);
                    report.push("cnot", format!("{label}, committed"), p * pm, ok);
                }
            }
            _ => report.push("cnot", label, p, false),
        }
    }
    report
}

/// Grow the new block of a pending CNOT up to `depth` times with `size`
/// resources, checking every commit and every revert against the symbolic
/// pending state.
pub fn check_pending(
    pair: &LogicalPair,
    gate_size: usize,
    grow_size: usize,
    depth: usize,
    orientation: Orientation,
) -> OracleReport {
    let mut report = OracleReport::default();
    let gate = ResourceState::new(gate_size).expect("size at least 2");
    let Ok(CnotAttempt::Succeeded(pending)) = cnot_attempt_branch(*pair, gate, orientation, true, true) else {
        report.push("pending", "attempt rejected".into(), 0.0, false);
        return report;
    };
    for (p, label, branch) in cnot_branches(pair, gate_size) {
        if let CnotBranch::Succeeded(reg) = branch {
            grow_and_check(&mut report, reg, pending, p, label, grow_size, depth, orientation);
        }
    }
    report
}

#[allow(clippy::too_many_arguments)]
fn grow_and_check(
    report: &mut OracleReport,
    reg: Register,
    pending: PendingCnot,
    p: f64,
    label: String,
    grow_size: usize,
    depth: usize,
    orientation: Orientation,
) {
    let want = pending.commit();
    for (pm, committed) in commit_register(&reg, orientation) {
        let ok = pair_held(&committed, commit_blocks(orientation), &want);
        report.push("pending", format!("{label}, commit"), p * pm, ok);
    }
    if depth == 0 || reg.tags.len() + grow_size > ORACLE_QUBIT_CAP {
        return;
    }
    let resource = ResourceState::new(grow_size).expect("size at least 2");
    let reg = reg.with(&Register::resource(S, grow_size));
    for e in elements(GateType::TypeII) {
        let Some((pe, post)) = reg.fuse(e, reg.highest(R), reg.lowest(S), S) else { continue };
        let label = format!("{label}, grow {}", e.pattern);
        let success = e.class == FusionClass::Success;
        match pending.grow_branch(resource, success) {
            PendingGrowth::Pending { pending: next, .. } if success => {
                let post = if e.correction == Pauli::Z { post.apply_block(S, &gates::z()) } else { post };
                grow_and_check(report, post.relabel(S, R), next, p * pe, label, grow_size, depth - 1, orientation);
            }
            PendingGrowth::Pending { pending: next, remnant } => {
                let [fr, fs] = bits(e);
                let post = post.flip_one(R, fr).flip_one(S, fs);
                // The remnant is a separate |0>; measure it away to continue.
                let ok = remnant.map_or(1, |r| r.size()) == post.size(S);
                report.push("pending", format!("{label}, remnant"), p * pe, ok);
                let Some(reg) = drop_block(&post, S) else { continue };
                grow_and_check(report, reg, next, p * pe, label, grow_size, depth - 1, orientation);
            }
            PendingGrowth::Reverted { pair: back, remnant } => {
                let [fr, fs] = bits(e);
                // The last qubit of the new block read the parity.
                let post = post.flip_one(A, fr).flip_one(B, fr).flip_one(S, fs);
                let [la, lb] = back.levels();
                let ok = post.size(R) == 0
                    && post.size(A) == la
                    && post.size(B) == lb
                    && remnant.map_or(1, |r| r.size()) == post.size(S)
                    && post.holds(&[A, B, S], &kron(&[&pair_logical(&back), &ZERO_STATE]));
                report.push("pending", format!("{label}, reverted"), p * pe, ok);
            }
            PendingGrowth::Lost { .. } => {
                report.push("pending", format!("{label}, lost"), p * pe, post.size(R) == 0);
            }
        }
    }
}

/// Project out a block known to be in `|0>^(k)` by reading it and undoing
/// the flips; returns the rest.
fn drop_block(reg: &Register, tag: Tag) -> Option<Register> {
    reg.measure_block(tag).into_iter().next().map(|(_, _, r)| r)
}

/// Logical basis inputs through every successful branch of one CNOT.
///
/// Entry `2a + b` is true when input `|ab>` came out as `CNOT |ab>` on all
/// branches.
pub fn cnot_truth_table(level_a: usize, level_b: usize, size: usize, orientation: Orientation) -> [bool; 4] {
    let mut out = [false; 4];
    for a in 0..2u8 {
        for b in 0..2u8 {
            let input = LogicalPair::basis(a, b, level_a, level_b).expect("valid basis state");
            let mut seen = false;
            let mut ok = true;
            let want_amps = match orientation {
                Orientation::MeasureFirst => input.cnot(),
                Orientation::MeasureSecond => input.swapped().cnot().swapped(),
            };
            for (_, _, branch) in cnot_branches(&input, size) {
                let CnotBranch::Succeeded(reg) = branch else { continue };
                let blocks = commit_blocks(orientation);
                for (_, reg) in commit_register(&reg, orientation) {
                    seen = true;
                    ok &= reg.holds(&blocks, &pair_logical(&want_amps));
                }
            }
            out[2 * a as usize + b as usize] = seen && ok;
        }
    }
    out
}

/// Every symbolic transition against the state-vector simulation, for all
/// levels up to `max_level`.
pub fn verify_transitions(max_level: usize, seed: u64) -> OracleReport {
    let mut rng = RngStream::new(seed, 0);
    let mut report = OracleReport::default();
    let amps = [random_amplitudes(&mut rng), [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]];
    for a in amps {
        report.extend(check_measure(max_level, a));
        report.extend(check_encode(max_level, a));
        report.extend(check_z90(max_level, a));
    }
    report.extend(check_join_fi(max_level));
    report.extend(check_join_fii(max_level));
    let pair_amps = random_pair_amplitudes(&mut rng);
    for la in 1..=max_level {
        for lb in 1..=max_level {
            for size in 2..=max_level {
                if la + lb + size > ORACLE_QUBIT_CAP {
                    continue;
                }
                let pair = LogicalPair::new(pair_amps, la, lb).expect("normalized");
                for orientation in [Orientation::MeasureFirst, Orientation::MeasureSecond] {
                    let target = if orientation == Orientation::MeasureFirst { lb } else { la };
                    if target >= 2 {
                        report.extend(check_cnot(&pair, size, orientation));
                    }
                }
            }
        }
    }
    let pair = LogicalPair::new(pair_amps, 2, 2).expect("normalized");
    for orientation in [Orientation::MeasureFirst, Orientation::MeasureSecond] {
        report.extend(check_pending(&pair, 3, 3, 2, orientation));
        report.extend(check_pending(&pair, 2, 2, 2, orientation));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amps() -> [Complex64; 2] {
        [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]
    }

    fn assert_report(report: &OracleReport) {
        let failures = report.failures();
        assert!(failures.is_empty(), "{:#?}", &failures[..failures.len().min(5)]);
        assert!(!report.checks.is_empty());
    }

    #[test]
    fn comparisons_are_not_vacuous() {
        let reg = Register::encoded(&[(A, 3)], &amps());
        assert!(reg.holds(&[A], &amps()));
        assert!(!reg.holds(&[A], &[amps()[1], amps()[0]]));
        assert!(!reg.holds(&[A], &gates::z90().apply(&amps())));
        let two = reg.with(&Register::resource(R, 2));
        assert!(two.holds(&[A, R], &kron(&[&amps(), &ZERO_STATE])));
        assert!(!two.holds(&[A], &amps()));
        assert!(!two.holds(&[R, A], &kron(&[&amps(), &ZERO_STATE])));
    }

    #[test]
    fn full_sweep_passes() {
        let report = verify_transitions(4, 7);
        assert_report(&report);
        for t in ["measure", "encode_step", "join_fI", "join_fII", "z90", "cnot", "pending"] {
            assert!(report.count(t) > 0, "{t}");
        }
    }

    #[test]
    fn measurement_matches() {
        assert_report(&check_measure(4, amps()));
    }

    #[test]
    fn encoding_matches_and_branches_are_half() {
        let report = check_encode(4, amps());
        assert_report(&report);
        for level in 1..=4 {
            for size in 2..=4 {
                let prefix = format!("level {level}, resource {size}, ");
                let success: f64 = report
                    .checks
                    .iter()
                    .filter(|c| {
                        c.branch.starts_with(&prefix)
                            && ["1010", "0101", "1001", "0110"].iter().any(|p| c.branch.ends_with(p))
                    })
                    .map(|c| c.probability)
                    .sum();
                assert!((success - 0.5).abs() < 1e-12, "{prefix}{success}");
            }
        }
    }

    #[test]
    fn joins_match() {
        assert_report(&check_join_fi(4));
        assert_report(&check_join_fii(4));
    }

    #[test]
    fn z90_matches() {
        let report = check_z90(4, amps());
        assert_report(&report);
        let total: f64 =
            report.checks.iter().filter(|c| c.branch.starts_with("level 2, target 3")).map(|c| c.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn only_the_consumed_qubit_variant_gives_z90() {
        assert!(z90_phase_check(amps(), 3, Z90Variant::ConsumedQubit));
        assert!(!z90_phase_check(amps(), 3, Z90Variant::RetainedQubit));
    }

    #[test]
    fn z_theta_angle_flips_with_parity() {
        let signs = z_theta_branch_signs(amps(), 3, 0.7);
        let plus: f64 = signs.iter().filter(|s| s.1 == 1).map(|s| s.0).sum();
        let minus: f64 = signs.iter().filter(|s| s.1 == -1).map(|s| s.0).sum();
        assert!(signs.iter().all(|s| s.1 != 0));
        assert!((plus - 0.25).abs() < 1e-12 && (minus - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cnot_matches() {
        let mut rng = RngStream::new(1, 0);
        let pair = LogicalPair::new(random_pair_amplitudes(&mut rng), 3, 2).unwrap();
        for o in [Orientation::MeasureFirst, Orientation::MeasureSecond] {
            let report = check_cnot(&pair, 3, o);
            assert_report(&report);
            let total: f64 = report.checks.iter().map(|c| c.probability).sum();
            assert!((total - 1.0).abs() < 1e-12, "{total}");
        }
    }

    #[test]
    fn cnot_truth_table_at_level_two() {
        assert_eq!(cnot_truth_table(2, 2, 3, Orientation::MeasureFirst), [true; 4]);
        assert_eq!(cnot_truth_table(2, 2, 3, Orientation::MeasureSecond), [true; 4]);
    }

    #[test]
    fn pending_growth_and_revert_match() {
        let mut rng = RngStream::new(2, 0);
        let pair = LogicalPair::new(random_pair_amplitudes(&mut rng), 2, 2).unwrap();
        let report = check_pending(&pair, 3, 3, 2, Orientation::MeasureFirst);
        assert_report(&report);
        assert!(report.checks.iter().any(|c| c.branch.ends_with("reverted")));
    }
}
