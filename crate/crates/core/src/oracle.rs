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

//! Brute-force reference implementations for testing.
//!
//! Nothing here shares code with the optimized rule modules beyond the data
//! model: committees are scored from scratch by scanning plain vote lists,
//! and sequential rules are re-simulated naively (Phragmén as absolute
//! spending times, per-voter costs by fixed-point iteration) with every tie
//! branched and no state deduplication.

use crate::error::{Error, Result};
use crate::model::{Committee, Election, WeightFunction};
use crate::rational::Rational;
use crate::report::Verdict;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Largest number of committees scored exhaustively.
pub const MAX_COMMITTEES: u64 = 1_000_000;
/// Largest number of simulation steps for sequential rules.
pub const MAX_STEPS: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Av,
    Sav,
    Thiele(WeightFunction),
    GreedyThiele(WeightFunction),
    Phragmen,
    MeqsPhase1,
    MeqsFull,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub rule: RuleKind,
    pub k: usize,
}

impl RuleSpec {
    pub fn new(rule: RuleKind, k: usize) -> Self {
        RuleSpec { rule, k }
    }
}

fn rat(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn overlap(vote: &[usize], committee: &[usize]) -> usize {
    vote.iter().filter(|c| committee.contains(c)).count()
}

fn committee_score(rule: &RuleKind, votes: &[Vec<usize>], committee: &[usize]) -> Rational {
    let mut total = Rational::zero();
    for vote in votes {
        let hits = overlap(vote, committee);
        match rule {
            RuleKind::Av => total += rat(hits),
            RuleKind::Sav => {
                if !vote.is_empty() {
                    total += Rational::new(BigInt::from(hits), BigInt::from(vote.len()));
                }
            }
            RuleKind::Thiele(w) | RuleKind::GreedyThiele(w) => {
                for i in 1..=hits {
                    total += &w.increments()[i - 1];
                }
            }
            _ => unreachable!("not a score-based rule"),
        }
    }
    total
}

fn all_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial_u64(n: usize, r: usize) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..r.min(n) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn score_based(rule: &RuleKind, election: &Election, k: usize) -> Result<BTreeSet<Committee>> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(Error::CommitteeSizeOutOfRange { k, m });
    }
    if let RuleKind::Thiele(w) = rule {
        w.check_size(k)?;
    }
    if binomial_u64(m, k) > MAX_COMMITTEES {
        return Err(Error::TooLarge(format!("C({m}, {k}) committees")));
    }
    let votes = election.vote_lists();
    let mut best: Option<Rational> = None;
    let mut winners = BTreeSet::new();
    for subset in all_subsets(m, k) {
        let score = committee_score(rule, &votes, &subset);
        if best.as_ref().is_none_or(|b| score > *b) {
            best = Some(score);
            winners.clear();
            winners.insert(Committee::new(subset));
        } else if best.as_ref() == Some(&score) {
            winners.insert(Committee::new(subset));
        }
    }
    Ok(winners)
}

/// Per-voter cost by fixed-point iteration: start with everyone paying an
/// equal share, cap those who cannot afford it, and re-split among the rest.
fn naive_rho(budgets: &[Rational]) -> Option<Rational> {
    let total: Rational = budgets.iter().sum();
    if total < Rational::one() || budgets.is_empty() {
        return None;
    }
    let mut rho = Rational::new(BigInt::one(), BigInt::from(budgets.len()));
    loop {
        let capped: Rational = budgets.iter().filter(|b| **b < rho).sum();
        let payers = budgets.iter().filter(|b| **b >= rho).count();
        let next = (Rational::one() - capped) / rat(payers);
        if next == rho {
            return Some(rho);
        }
        rho = next;
    }
}

#[derive(Clone)]
struct Sim {
    chosen: Vec<usize>,
    /// Equal-shares budgets.
    budgets: Vec<Rational>,
    /// Phragmén: a voter's money at time t is `t - spent_at[v]`.
    spent_at: Vec<Rational>,
    now: Rational,
    completing: bool,
}

struct Simulator<'a> {
    rule: &'a RuleKind,
    votes: Vec<Vec<usize>>,
    m: usize,
    k: usize,
    out: BTreeSet<Committee>,
    steps: u64,
}

impl Simulator<'_> {
    fn approvers(&self, c: usize) -> Vec<usize> {
        (0..self.votes.len()).filter(|&v| self.votes[v].contains(&c)).collect()
    }

    /// `(candidates, is_phragmen_step)` of the next step, empty when stuck.
    fn options(&self, sim: &Sim) -> (Vec<(usize, Rational)>, bool) {
        let open: Vec<usize> = (0..self.m).filter(|c| !sim.chosen.contains(c)).collect();
        match self.rule {
            RuleKind::GreedyThiele(_) => {
                let base = committee_score(self.rule, &self.votes, &sim.chosen);
                let gains = open
                    .into_iter()
                    .map(|c| {
                        let mut with = sim.chosen.clone();
                        with.push(c);
                        // Maximize score, expressed as minimizing its negation.
                        (c, -(committee_score(self.rule, &self.votes, &with) - &base))
                    })
                    .collect();
                (gains, false)
            }
            RuleKind::Phragmen => (self.phragmen_options(sim, &open), true),
            RuleKind::MeqsPhase1 => (self.shares_options(sim, &open), false),
            RuleKind::MeqsFull if sim.completing => (self.phragmen_options(sim, &open), true),
            RuleKind::MeqsFull => (self.shares_options(sim, &open), false),
            _ => unreachable!(),
        }
    }

    fn phragmen_options(&self, sim: &Sim, open: &[usize]) -> Vec<(usize, Rational)> {
        open.iter()
            .filter_map(|&c| {
                let voters = self.approvers(c);
                if voters.is_empty() {
                    return None;
                }
                let spent: Rational = voters.iter().map(|&v| sim.spent_at[v].clone()).sum();
                let when = (Rational::one() + spent) / rat(voters.len());
                Some((c, if when < sim.now { sim.now.clone() } else { when }))
            })
            .collect()
    }

    fn shares_options(&self, sim: &Sim, open: &[usize]) -> Vec<(usize, Rational)> {
        open.iter()
            .filter_map(|&c| {
                let budgets: Vec<Rational> = self.approvers(c).iter().map(|&v| sim.budgets[v].clone()).collect();
                naive_rho(&budgets).map(|rho| (c, rho))
            })
            .collect()
    }

    fn explore(&mut self, mut sim: Sim) -> Result<()> {
        self.steps += 1;
        if self.steps > MAX_STEPS {
            return Err(Error::TooLarge("sequential oracle step budget".into()));
        }
        if sim.chosen.len() == self.k {
            self.out.insert(Committee::new(sim.chosen));
            return Ok(());
        }
        if matches!(self.rule, RuleKind::MeqsFull) && !sim.completing {
            let open: Vec<usize> = (0..self.m).filter(|c| !sim.chosen.contains(c)).collect();
            if self.shares_options(&sim, &open).is_empty() {
                // Leftover equal-shares budgets become money held at time 0.
                sim.completing = true;
                sim.spent_at = sim.budgets.iter().map(|b| -b.clone()).collect();
            }
        }
        let (options, phragmen_step) = self.options(&sim);
        let Some(best) = options.iter().map(|(_, v)| v).min().cloned() else {
            return match self.rule {
                RuleKind::MeqsPhase1 => {
                    self.out.insert(Committee::new(sim.chosen));
                    Ok(())
                }
                _ => Err(Error::Unfillable {
                    k: self.k,
                    available: (0..self.m).filter(|&c| !self.approvers(c).is_empty()).count(),
                }),
            };
        };
        for (c, _) in options.iter().filter(|(_, v)| *v == best) {
            let mut next = sim.clone();
            let voters = self.approvers(*c);
            if phragmen_step {
                next.now = best.clone();
                for v in voters {
                    next.spent_at[v] = best.clone();
                }
            } else if !matches!(self.rule, RuleKind::GreedyThiele(_)) {
                for v in voters {
                    if next.budgets[v] < best {
                        next.budgets[v] = Rational::zero();
                    } else {
                        next.budgets[v] -= &best;
                    }
                }
            }
            next.chosen.push(*c);
            self.explore(next)?;
        }
        Ok(())
    }
}

fn sequential(rule: &RuleKind, election: &Election, k: usize) -> Result<BTreeSet<Committee>> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(Error::CommitteeSizeOutOfRange { k, m });
    }
    if let RuleKind::GreedyThiele(w) = rule {
        w.check_size(k)?;
    }
    let n = election.num_voters();
    let share = Rational::new(BigInt::from(k), BigInt::from(n));
    let mut sim = Simulator {
        rule,
        votes: election.vote_lists(),
        m,
        k,
        out: BTreeSet::new(),
        steps: 0,
    };
    let start = Sim {
        chosen: Vec::new(),
        budgets: vec![share; n],
        spent_at: vec![Rational::zero(); n],
        now: Rational::zero(),
        completing: matches!(rule, RuleKind::Phragmen),
    };
    sim.explore(start)?;
    Ok(sim.out)
}

/// Every winning committee of `spec` on `election`.
pub fn oracle_winning_committees(spec: &RuleSpec, election: &Election) -> Result<BTreeSet<Committee>> {
    match &spec.rule {
        RuleKind::Av | RuleKind::Sav | RuleKind::Thiele(_) => score_based(&spec.rule, election, spec.k),
        _ => sequential(&spec.rule, election, spec.k),
    }
}

pub fn oracle_count(spec: &RuleSpec, election: &Election) -> Result<usize> {
    oracle_winning_committees(spec, election).map(|all| all.len())
}

pub fn oracle_unique(spec: &RuleSpec, election: &Election) -> Result<Verdict> {
    oracle_count(spec, election).map(|n| if n == 1 { Verdict::Unique } else { Verdict::Tied })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::e1;
    use crate::model::WeightKind;
    use crate::rational::ratio;

    fn w(kind: WeightKind, k: usize) -> WeightFunction {
        WeightFunction::standard(kind, k).unwrap()
    }

    fn set(list: &[&[usize]]) -> BTreeSet<Committee> {
        list.iter().map(|c| Committee::new(c.iter().copied())).collect()
    }

    #[test]
    fn completion_starts_from_leftover_budgets() {
        // Phase 1 buys {4, 5} in either order; the leftover budgets then make
        // 6 the first Phragmén purchase.
        let e = Election::new(
            7,
            vec![vec![1, 5], vec![2, 4, 5], vec![3, 4, 6], vec![6], vec![0, 1, 4, 5]],
        )
        .unwrap();
        let spec = RuleSpec::new(RuleKind::MeqsFull, 3);
        assert_eq!(oracle_winning_committees(&spec, &e).unwrap(), set(&[&[4, 5, 6]]));
    }

    #[test]
    fn examples_on_e1() {
        let e = e1();
        assert_eq!(
            oracle_winning_committees(&RuleSpec::new(RuleKind::Av, 1), &e).unwrap(),
            set(&[&[0], &[1]])
        );
        assert_eq!(
            oracle_winning_committees(&RuleSpec::new(RuleKind::Thiele(w(WeightKind::Pav, 2)), 2), &e).unwrap(),
            set(&[&[0, 1]])
        );
        assert_eq!(
            oracle_winning_committees(&RuleSpec::new(RuleKind::GreedyThiele(w(WeightKind::Cc, 2)), 2), &e).unwrap(),
            set(&[&[0, 1], &[0, 2], &[1, 2]])
        );
        let cc = RuleSpec::new(RuleKind::Thiele(w(WeightKind::Cc, 2)), 2);
        assert_eq!(oracle_count(&cc, &e).unwrap(), 3);
        assert_eq!(oracle_unique(&cc, &e).unwrap(), Verdict::Tied);
        let ph = RuleSpec::new(RuleKind::Phragmen, 2);
        assert_eq!(oracle_count(&ph, &e).unwrap(), 1);
        assert_eq!(oracle_unique(&ph, &e).unwrap(), Verdict::Unique);
        assert_eq!(
            oracle_winning_committees(&RuleSpec::new(RuleKind::MeqsPhase1, 2), &e).unwrap(),
            set(&[&[0], &[1]])
        );
        assert_eq!(
            oracle_winning_committees(&RuleSpec::new(RuleKind::MeqsFull, 2), &e).unwrap(),
            set(&[&[0, 1]])
        );
    }

    #[test]
    fn full_committee_is_unique() {
        let e = e1();
        for rule in [RuleKind::Av, RuleKind::Sav, RuleKind::Thiele(w(WeightKind::Pav, 3))] {
            assert_eq!(oracle_count(&RuleSpec::new(rule, 3), &e).unwrap(), 1);
        }
    }

    #[test]
    fn fixed_point_rho() {
        assert_eq!(
            naive_rho(&[Rational::one(), ratio(1, 2), ratio(1, 4)]),
            Some(ratio(3, 8))
        );
        assert_eq!(naive_rho(&[ratio(1, 4), ratio(1, 4)]), None);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(all_subsets(4, 2).len(), 6);
        assert_eq!(all_subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn too_large() {
        let e = Election::new(40, vec![vec![0]]).unwrap();
        assert!(matches!(
            oracle_count(&RuleSpec::new(RuleKind::Av, 10), &e),
            Err(Error::TooLarge(_))
        ));
    }
}
