// Copyright 2026 The committee-ties Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Sequential rules under parallel-universes tie-breaking: greedy Thiele
//! variants, Phragmén, Phase 1 of the Method of Equal Shares (MEqS), and full
//! MEqS (Phase 1 completed by Phragmén on the leftover budgets).
//!
//! Every rule is driven through the same two primitives on a
//! [`SequentialState`]: [`SequentialState::tie_set`] returns all candidates
//! the rule may select next (all of equal merit), and
//! [`SequentialState::apply_choice`] selects one of them. Resolute runs,
//! universe enumeration, and the unique-committee search are all written in
//! terms of these.

use crate::error::{Error, Result};
use crate::model::{CandidateSet, Committee, Election, WeightFunction, WeightKind};
use crate::rational::Rational;
use crate::report::UniqueReport;
use crate::scores::{Saturation, ScaledValue, ScaledWeights};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SequentialRule {
    GreedyThiele(WeightFunction),
    Phragmen,
    MeqsPhase1,
    MeqsFull,
}

impl SequentialRule {
    pub fn greedy(kind: WeightKind, k: usize) -> Result<Self> {
        Ok(SequentialRule::GreedyThiele(WeightFunction::standard(kind, k)?))
    }

    /// Whether the rule may legitimately stop with fewer than `k` members.
    pub fn may_stop_early(&self) -> bool {
        matches!(self, SequentialRule::MeqsPhase1)
    }

    fn needs_approved_candidates(&self) -> bool {
        matches!(self, SequentialRule::Phragmen | SequentialRule::MeqsFull)
    }
}

impl fmt::Display for SequentialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequentialRule::GreedyThiele(w) => match w.kind() {
                WeightKind::Av => f.write_str("greedy-av"),
                WeightKind::Cc => f.write_str("greedy-ccav"),
                WeightKind::Pav => f.write_str("greedy-pav"),
                WeightKind::Custom => write!(f, "greedy-{w:?}"),
            },
            SequentialRule::Phragmen => f.write_str("phragmen"),
            SequentialRule::MeqsPhase1 => f.write_str("meqs-phase1"),
            SequentialRule::MeqsFull => f.write_str("meqs-full"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Equal-shares purchases with the up-front budgets.
    Phase1,
    /// Phragmén continuation on the leftover budgets.
    Completion,
}

/// How the next purchase is paid for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Greedy,
    Phragmen,
    EqualShares,
}

/// All candidates a rule may select next, sharing one exact merit: the
/// marginal gain for greedy rules, the purchase time for Phragmén, and the
/// per-voter cost for equal shares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieSet {
    pub candidates: Vec<usize>,
    pub merit: Rational,
    pub kind: StepKind,
}

impl TieSet {
    pub fn contains(&self, c: usize) -> bool {
        self.candidates.binary_search(&c).is_ok()
    }

    pub fn is_tie(&self) -> bool {
        self.candidates.len() > 1
    }
}

/// Resumable state of one sequential run.
#[derive(Clone, Debug)]
pub struct SequentialState<'r> {
    rule: &'r SequentialRule,
    /// Members in selection order.
    chosen: Vec<usize>,
    members: CandidateSet,
    /// Phragmén money or MEqS budget per voter; empty for greedy rules.
    budgets: Vec<Rational>,
    /// Phragmén clock.
    clock: Rational,
    phase: Phase,
    saturation: Saturation,
}

/// Hashable identity of a state; two states with equal keys have identical
/// futures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateKey {
    members: CandidateSet,
    budgets: Vec<Rational>,
    clock: Rational,
    phase: Phase,
}

/// Candidates approved by at least one voter.
fn approved_count(election: &Election) -> usize {
    (0..election.num_candidates())
        .filter(|&c| !election.approvers(c).is_empty())
        .count()
}

impl<'r> SequentialState<'r> {
    /// Fresh state for a run with committee size `k`.
    pub fn new(rule: &'r SequentialRule, election: &Election, k: usize) -> Result<Self> {
        let m = election.num_candidates();
        if k == 0 || k > m {
            return Err(Error::CommitteeSizeOutOfRange { k, m });
        }
        if let SequentialRule::GreedyThiele(w) = rule {
            w.check_size(k)?;
        }
        let n = election.num_voters();
        let budgets = match rule {
            SequentialRule::GreedyThiele(_) => Vec::new(),
            SequentialRule::Phragmen => vec![Rational::zero(); n],
            SequentialRule::MeqsPhase1 | SequentialRule::MeqsFull => {
                vec![Rational::new(BigInt::from(k), BigInt::from(n)); n]
            }
        };
        Ok(SequentialState {
            rule,
            chosen: Vec::with_capacity(k),
            members: CandidateSet::with_capacity(m),
            budgets,
            clock: Rational::zero(),
            phase: Phase::Phase1,
            saturation: Saturation::new(n),
        })
    }

    pub fn rule(&self) -> &'r SequentialRule {
        self.rule
    }

    /// Members in the order they were selected.
    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn committee(&self) -> Committee {
        Committee::new(self.chosen.iter().copied())
    }

    pub fn budgets(&self) -> &[Rational] {
        &self.budgets
    }

    pub fn clock(&self) -> &Rational {
        &self.clock
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn key(&self) -> StateKey {
        StateKey {
            members: self.members.clone(),
            budgets: self.budgets.clone(),
            clock: self.clock.clone(),
            phase: self.phase,
        }
    }

    /// The set of equally good next selections, or `None` when the rule
    /// cannot select anybody else.
    pub fn tie_set(&self, election: &Election, k: usize) -> Result<Option<TieSet>> {
        if self.chosen.len() >= k {
            return Err(Error::CommitteeComplete);
        }
        Ok(match self.rule {
            SequentialRule::GreedyThiele(w) => Some(self.greedy_ties(election, w, k)),
            SequentialRule::Phragmen => self.phragmen_ties(election),
            SequentialRule::MeqsPhase1 => self.equal_shares_ties(election),
            SequentialRule::MeqsFull => match self.phase {
                Phase::Phase1 => self
                    .equal_shares_ties(election)
                    .or_else(|| self.phragmen_ties(election)),
                Phase::Completion => self.phragmen_ties(election),
            },
        })
    }

    fn greedy_ties(&self, election: &Election, w: &WeightFunction, k: usize) -> TieSet {
        let scaled = ScaledWeights::new(w, k);
        match scaled.as_i128(election.num_voters()) {
            Some(table) => self.greedy_ties_scaled(election, &table, &scaled),
            None => self.greedy_ties_scaled(election, &scaled.increments, &scaled),
        }
    }

    fn greedy_ties_scaled<T: ScaledValue>(&self, election: &Election, table: &[T], scaled: &ScaledWeights) -> TieSet {
        let mut best: Option<T> = None;
        let mut candidates = Vec::new();
        for c in (0..election.num_candidates()).filter(|&c| !self.members.contains(c)) {
            let gain = self.saturation.scaled_gain(election, table, c);
            match best.as_ref().map(|b| gain.cmp(b)) {
                Some(std::cmp::Ordering::Less) => {}
                Some(std::cmp::Ordering::Equal) => candidates.push(c),
                _ => {
                    best = Some(gain);
                    candidates.clear();
                    candidates.push(c);
                }
            }
        }
        let best = best.expect("committee not complete, so a candidate remains");
        TieSet {
            candidates,
            merit: scaled.unscale(&best.to_bigint()),
            kind: StepKind::Greedy,
        }
    }

    /// Time at which the approvers of `c` jointly hold one unit.
    fn purchase_time(&self, election: &Election, c: usize) -> Rational {
        let approvers = election.approvers(c);
        let held: Rational = approvers.iter().map(|&v| &self.budgets[v]).sum();
        let missing = Rational::one() - held;
        if missing.is_positive() {
            &self.clock + missing / Rational::from_integer(BigInt::from(approvers.len()))
        } else {
            self.clock.clone()
        }
    }

    fn phragmen_ties(&self, election: &Election) -> Option<TieSet> {
        let mut best: Option<Rational> = None;
        let mut candidates = Vec::new();
        for c in 0..election.num_candidates() {
            if self.members.contains(c) || election.approvers(c).is_empty() {
                continue;
            }
            let t = self.purchase_time(election, c);
            match best.as_ref().map(|b| t.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => candidates.push(c),
                _ => {
                    best = Some(t);
                    candidates.clear();
                    candidates.push(c);
                }
            }
        }
        best.map(|merit| TieSet {
            candidates,
            merit,
            kind: StepKind::Phragmen,
        })
    }

    fn equal_shares_ties(&self, election: &Election) -> Option<TieSet> {
        let mut best: Option<Rational> = None;
        let mut candidates = Vec::new();
        for c in 0..election.num_candidates() {
            if self.members.contains(c) {
                continue;
            }
            let budgets: Vec<Rational> = election.approvers(c).iter().map(|&v| self.budgets[v].clone()).collect();
            let Some(rho) = per_voter_cost(&budgets) else {
                continue;
            };
            match best.as_ref().map(|b| rho.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => candidates.push(c),
                _ => {
                    best = Some(rho);
                    candidates.clear();
                    candidates.push(c);
                }
            }
        }
        best.map(|merit| TieSet {
            candidates,
            merit,
            kind: StepKind::EqualShares,
        })
    }

    /// Selects `c`, which must belong to the current tie set.
    pub fn apply_choice(&self, c: usize, election: &Election, k: usize) -> Result<SequentialState<'r>> {
        let ties = self.tie_set(election, k)?.ok_or(Error::NotInTieSet(c))?;
        if !ties.contains(c) {
            return Err(Error::NotInTieSet(c));
        }
        let mut next = self.clone();
        match ties.kind {
            StepKind::Greedy => {
                next.saturation.add(election, c);
            }
            StepKind::Phragmen => {
                let elapsed = &ties.merit - &self.clock;
                if !elapsed.is_zero() {
                    for b in &mut next.budgets {
                        *b += &elapsed;
                    }
                }
                let mut paid = Rational::zero();
                for &v in election.approvers(c) {
                    paid += std::mem::take(&mut next.budgets[v]);
                }
                if !paid.is_one() {
                    return Err(Error::Conservation(c));
                }
                next.clock = ties.merit;
                if matches!(self.rule, SequentialRule::MeqsFull) {
                    next.phase = Phase::Completion;
                }
            }
            StepKind::EqualShares => {
                let rho = &ties.merit;
                let mut paid = Rational::zero();
                for &v in election.approvers(c) {
                    let share = if next.budgets[v] < *rho {
                        next.budgets[v].clone()
                    } else {
                        rho.clone()
                    };
                    next.budgets[v] -= &share;
                    paid += share;
                }
                if !paid.is_one() {
                    return Err(Error::Conservation(c));
                }
            }
        }
        next.chosen.push(c);
        next.members.insert(c);
        Ok(next)
    }

    /// Whether the run is over: `k` seats filled or nothing selectable.
    fn finished(&self, election: &Election, k: usize) -> Result<Option<TieSet>> {
        if self.chosen.len() >= k {
            return Ok(None);
        }
        let ties = self.tie_set(election, k)?;
        if ties.is_none() && !self.rule.may_stop_early() {
            return Err(Error::Unfillable {
                k,
                available: approved_count(election),
            });
        }
        Ok(ties)
    }

    /// Completes the run choosing the lowest index in every tie set.
    pub fn complete_resolute(self, election: &Election, k: usize) -> Result<(SequentialState<'r>, Vec<TieSet>)> {
        let mut state = self;
        let mut trace = Vec::new();
        while let Some(ties) = state.finished(election, k)? {
            state = state.apply_choice(ties.candidates[0], election, k)?;
            trace.push(ties);
        }
        Ok((state, trace))
    }
}

/// The per-voter cost `ρ` with `Σ min(b_v, ρ) = 1`, or `None` when the
/// budgets sum to less than one.
pub fn per_voter_cost(budgets: &[Rational]) -> Option<Rational> {
    let total: Rational = budgets.iter().sum();
    if total < Rational::one() {
        return None;
    }
    let mut sorted: Vec<&Rational> = budgets.iter().collect();
    sorted.sort();
    // Voters before index j pay their whole budget, the rest pay ρ each.
    let mut paid = Rational::zero();
    for (j, b) in sorted.iter().enumerate() {
        let payers = Rational::from_integer(BigInt::from(sorted.len() - j));
        let rho = (Rational::one() - &paid) / payers;
        if rho <= **b {
            return Some(rho);
        }
        paid += *b;
    }
    unreachable!("budgets sum to at least one")
}

fn check_fillable(rule: &SequentialRule, election: &Election, k: usize) -> Result<()> {
    if rule.needs_approved_candidates() {
        let available = approved_count(election);
        if available < k {
            return Err(Error::Unfillable { k, available });
        }
    }
    Ok(())
}

/// One deterministic run, breaking every tie by lowest candidate index.
/// Phase 1 of MEqS may return fewer than `k` members.
pub fn run_resolute(rule: &SequentialRule, election: &Election, k: usize) -> Result<(Committee, Vec<TieSet>)> {
    let state = SequentialState::new(rule, election, k)?;
    check_fillable(rule, election, k)?;
    let (state, trace) = state.complete_resolute(election, k)?;
    Ok((state.committee(), trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniverseLimits {
    /// Maximum number of search states expanded.
    pub max_states: u64,
    pub max_committees: usize,
}

impl Default for UniverseLimits {
    fn default() -> Self {
        UniverseLimits {
            max_states: 1_000_000,
            max_committees: 100_000,
        }
    }
}

impl UniverseLimits {
    pub fn unlimited() -> Self {
        UniverseLimits {
            max_states: u64::MAX,
            max_committees: usize::MAX,
        }
    }
}

/// Every committee reachable under some resolution of the internal ties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseSet {
    pub committees: BTreeSet<Committee>,
    pub truncated: bool,
    /// Distinct search states expanded.
    pub universes_explored: u64,
}

/// Explores every branch of every tie set. States reached along different
/// paths are expanded once.
pub fn enumerate_universes(
    rule: &SequentialRule,
    election: &Election,
    k: usize,
    limits: UniverseLimits,
) -> Result<UniverseSet> {
    let root = SequentialState::new(rule, election, k)?;
    check_fillable(rule, election, k)?;
    let mut out = UniverseSet {
        committees: BTreeSet::new(),
        truncated: false,
        universes_explored: 0,
    };
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(state) = stack.pop() {
        if out.universes_explored >= limits.max_states {
            out.truncated = true;
            break;
        }
        out.universes_explored += 1;
        match state.finished(election, k)? {
            None => {
                out.committees.insert(state.committee());
                if out.committees.len() >= limits.max_committees && !stack.is_empty() {
                    out.truncated = true;
                    break;
                }
            }
            Some(ties) => {
                for &c in ties.candidates.iter().rev() {
                    let next = state.apply_choice(c, election, k)?;
                    if seen.insert(next.key()) {
                        stack.push(next);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Decides whether the rule has a unique winning committee.
///
/// Computes one winner `W` resolutely, then re-runs the rule branching on
/// every tie set contained in `W`. The first tie set offering a candidate
/// outside `W` proves a second winner, completed resolutely as the witness.
pub fn sequential_unique(rule: &SequentialRule, election: &Election, k: usize) -> Result<UniqueReport> {
    sequential_unique_limited(rule, election, k, u64::MAX)
}

/// As [`sequential_unique`], giving up after `max_states` expanded states.
/// A truncated report is marked tied with the resolute winner as its only
/// witness.
pub fn sequential_unique_limited(
    rule: &SequentialRule,
    election: &Election,
    k: usize,
    max_states: u64,
) -> Result<UniqueReport> {
    let root = SequentialState::new(rule, election, k)?;
    check_fillable(rule, election, k)?;
    let (first, _) = root.clone().complete_resolute(election, k)?;
    let winner = first.committee();
    let winner_set = winner.to_set(election.num_candidates());

    let mut nodes = 0u64;
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(state) = stack.pop() {
        if nodes >= max_states {
            let mut report = UniqueReport::unique(winner, None, nodes);
            report.verdict = crate::report::Verdict::Tied;
            report.truncated = true;
            return Ok(report);
        }
        nodes += 1;
        let Some(ties) = state.finished(election, k)? else {
            let reached = state.committee();
            if reached != winner {
                return Ok(UniqueReport::tied(winner, reached, None, nodes));
            }
            continue;
        };
        if let Some(&outside) = ties.candidates.iter().find(|&&c| !winner_set.contains(c)) {
            let branch = state.apply_choice(outside, election, k)?;
            let (done, _) = branch.complete_resolute(election, k)?;
            return Ok(UniqueReport::tied(winner, done.committee(), None, nodes));
        }
        for &c in ties.candidates.iter().rev() {
            let next = state.apply_choice(c, election, k)?;
            if seen.insert(next.key()) {
                stack.push(next);
            }
        }
    }
    Ok(UniqueReport::unique(winner, None, nodes))
}
