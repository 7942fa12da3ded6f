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

//! Exact Thiele rules: optimal score, every optimal committee, uniqueness,
//! and counting.
//!
//! Scores are summed as integers after scaling the weight increments by the
//! lcm of their denominators. Small instances (at most ten million
//! committees) are enumerated exhaustively in lexicographic order; larger
//! ones use depth-first branch and bound, bounding a partial committee by
//! its score plus the largest remaining marginal gains, which never
//! underestimates a completion because gains only shrink as the committee
//! grows.
//!
//! Uniqueness runs two passes: the first finds the optimum, the second looks
//! for optimal committees and stops at the second one.

use crate::error::{Error, Result};
use crate::model::{Committee, Election, WeightFunction};
use crate::rational::Rational;
use crate::report::UniqueReport;
use crate::scores::{Saturation, ScaledValue, ScaledWeights};
use crate::simple_rules::binomial;
use num_bigint::{BigInt, BigUint};
use std::ops::ControlFlow;

/// Committee count up to which the search is a plain enumeration.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaustive when `C(m, k)` is at most [`EXHAUSTIVE_LIMIT`], branch and bound otherwise.
    #[default]
    Auto,
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, Debug)]
enum Query {
    Optimum,
    /// Collect optimal committees, stopping once more than `stop_after` are found.
    Collect {
        stop_after: usize,
    },
}

struct Outcome {
    optimum: Rational,
    lex_min: Committee,
    found: Vec<Committee>,
    exceeded: bool,
    nodes: u64,
}

struct Search<'a, T> {
    election: &'a Election,
    deltas: &'a [T],
    k: usize,
    order: Vec<usize>,
    bounded: bool,
    saturation: Saturation,
    chosen: Vec<usize>,
    nodes: u64,
}

impl<'a, T: ScaledValue> Search<'a, T> {
    fn new(election: &'a Election, deltas: &'a [T], k: usize, bounded: bool) -> Self {
        let saturation = Saturation::new(election.num_voters());
        let mut order: Vec<usize> = (0..election.num_candidates()).collect();
        if bounded {
            let gains: Vec<T> = order
                .iter()
                .map(|&c| saturation.scaled_gain(election, deltas, c))
                .collect();
            order.sort_by(|&a, &b| gains[b].cmp(&gains[a]).then(a.cmp(&b)));
        }
        Search {
            election,
            deltas,
            k,
            order,
            bounded,
            saturation,
            chosen: Vec::with_capacity(k),
            nodes: 0,
        }
    }

    /// Upper bound on any completion of the current partial committee that
    /// only uses candidates from `order[pos..]`.
    fn bound(&self, pos: usize, score: &T) -> T {
        let remaining = self.k - self.chosen.len();
        let mut gains: Vec<T> = self.order[pos..]
            .iter()
            .map(|&c| self.saturation.scaled_gain(self.election, self.deltas, c))
            .collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let mut total = score.clone();
        for g in gains.iter().take(remaining) {
            total += g;
        }
        total
    }

    /// Visits every size-k committee whose score can reach `floor` (all of
    /// them when `floor` is `None`). The visitor may raise the floor.
    fn walk<F>(&mut self, pos: usize, score: T, floor: &mut Option<T>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], &T, &mut Option<T>) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.chosen.len() == self.k {
            return visit(&self.chosen, &score, floor);
        }
        if self.bounded {
            if let Some(f) = floor.as_ref() {
                if self.bound(pos, &score) < *f {
                    return ControlFlow::Continue(());
                }
            }
        }
        let remaining = self.k - self.chosen.len();
        let m = self.order.len();
        for i in pos..=(m - remaining) {
            let c = self.order[i];
            let mut next = score.clone();
            next += &self.saturation.scaled_gain(self.election, self.deltas, c);
            self.saturation.add(self.election, c);
            self.chosen.push(c);
            let flow = self.walk(i + 1, next, floor, visit);
            self.chosen.pop();
            self.saturation.remove(self.election, c);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn maximize(&mut self) -> (T, Committee) {
        let mut best: Option<(T, Committee)> = None;
        let mut floor: Option<T> = None;
        let _ = self.walk(0, T::zero(), &mut floor, &mut |chosen, score, floor| {
            let better = match &best {
                None => true,
                Some((b, _)) if score > b => true,
                Some((b, committee)) if score == b => {
                    let candidate = Committee::new(chosen.iter().copied());
                    candidate < *committee
                }
                _ => false,
            };
            if better {
                best = Some((score.clone(), Committee::new(chosen.iter().copied())));
                *floor = Some(score.clone());
            }
            ControlFlow::Continue(())
        });
        best.expect("at least one committee exists")
    }

    fn collect(&mut self, target: &T, stop_after: usize) -> (Vec<Committee>, bool) {
        let mut found = Vec::new();
        let mut exceeded = false;
        let mut floor = Some(target.clone());
        let _ = self.walk(0, T::zero(), &mut floor, &mut |chosen, score, _| {
            if score == target {
                found.push(Committee::new(chosen.iter().copied()));
                if found.len() > stop_after {
                    exceeded = true;
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        (found, exceeded)
    }
}

fn run<T: ScaledValue>(
    election: &Election,
    deltas: &[T],
    scaled: &ScaledWeights,
    k: usize,
    bounded: bool,
    query: Query,
) -> Outcome {
    let mut search = Search::new(election, deltas, k, bounded);
    let (best, lex_min) = search.maximize();
    let (found, exceeded) = match query {
        Query::Optimum => (Vec::new(), false),
        Query::Collect { stop_after } => search.collect(&best, stop_after),
    };
    Outcome {
        optimum: scaled.unscale(&best.to_bigint()),
        lex_min,
        found,
        exceeded,
        nodes: search.nodes,
    }
}

/// Exact Thiele solver with a configurable search strategy.
#[derive(Clone, Copy, Debug, Default)]
pub struct ThieleSolver {
    pub strategy: Strategy,
}

impl ThieleSolver {
    pub fn new(strategy: Strategy) -> Self {
        ThieleSolver { strategy }
    }

    fn solve(&self, election: &Election, weights: &WeightFunction, k: usize, query: Query) -> Result<Outcome> {
        let m = election.num_candidates();
        if k == 0 || k > m {
            return Err(Error::CommitteeSizeOutOfRange { k, m });
        }
        weights.check_size(k)?;
        let bounded = match self.strategy {
            Strategy::Exhaustive => false,
            Strategy::BranchAndBound => true,
            Strategy::Auto => binomial(m, k) > BigUint::from(EXHAUSTIVE_LIMIT),
        };
        let scaled = ScaledWeights::new(weights, k);
        Ok(match scaled.as_i128(election.num_voters()) {
            Some(deltas) => run(election, &deltas, &scaled, k, bounded, query),
            None => run::<BigInt>(election, &scaled.increments, &scaled, k, bounded, query),
        })
    }

    /// The optimal score and the lexicographically smallest optimal committee.
    pub fn optimum(&self, election: &Election, weights: &WeightFunction, k: usize) -> Result<(Rational, Committee)> {
        let out = self.solve(election, weights, k, Query::Optimum)?;
        Ok((out.optimum, out.lex_min))
    }

    pub fn unique(&self, election: &Election, weights: &WeightFunction, k: usize) -> Result<UniqueReport> {
        let out = self.solve(election, weights, k, Query::Collect { stop_after: 1 })?;
        match out.found.into_iter().find(|c| *c != out.lex_min) {
            Some(other) => Ok(UniqueReport::tied(out.lex_min, other, Some(out.optimum), out.nodes)),
            None => Ok(UniqueReport::unique(out.lex_min, Some(out.optimum), out.nodes)),
        }
    }

    /// All optimal committees in lexicographic order, if there are at most `limit`.
    pub fn enumerate(
        &self,
        election: &Election,
        weights: &WeightFunction,
        k: usize,
        limit: usize,
    ) -> Result<Vec<Committee>> {
        let out = self.solve(election, weights, k, Query::Collect { stop_after: limit })?;
        if out.exceeded {
            return Err(Error::LimitExceeded {
                at_least: out.found.len().to_string(),
            });
        }
        let mut found = out.found;
        found.sort();
        Ok(found)
    }

    pub fn count(&self, election: &Election, weights: &WeightFunction, k: usize, limit: usize) -> Result<BigUint> {
        self.enumerate(election, weights, k, limit)
            .map(|all| BigUint::from(all.len()))
    }
}

pub fn thiele_optimum(election: &Election, weights: &WeightFunction, k: usize) -> Result<(Rational, Committee)> {
    ThieleSolver::default().optimum(election, weights, k)
}

pub fn thiele_unique(election: &Election, weights: &WeightFunction, k: usize) -> Result<UniqueReport> {
    ThieleSolver::default().unique(election, weights, k)
}

pub fn thiele_count(election: &Election, weights: &WeightFunction, k: usize, limit: usize) -> Result<BigUint> {
    ThieleSolver::default().count(election, weights, k, limit)
}

pub fn enumerate_thiele_winning(
    election: &Election,
    weights: &WeightFunction,
    k: usize,
    limit: usize,
) -> Result<Vec<Committee>> {
    ThieleSolver::default().enumerate(election, weights, k, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::e1;
    use crate::model::WeightKind;
    use crate::rational::{int, ratio};
    use crate::report::Verdict;
    use crate::scores::w_score;

    fn w(kind: WeightKind, k: usize) -> WeightFunction {
        WeightFunction::standard(kind, k).unwrap()
    }

    fn committees(list: &[&[usize]]) -> Vec<Committee> {
        list.iter().map(|c| Committee::new(c.iter().copied())).collect()
    }

    const BOTH: [Strategy; 2] = [Strategy::Exhaustive, Strategy::BranchAndBound];

    #[test]
    fn optimum_on_e1() {
        for s in BOTH {
            let solver = ThieleSolver::new(s);
            assert_eq!(
                solver.optimum(&e1(), &w(WeightKind::Pav, 2), 2).unwrap(),
                (ratio(7, 2), Committee::new([0, 1]))
            );
            assert_eq!(
                solver.optimum(&e1(), &w(WeightKind::Cc, 2), 2).unwrap(),
                (int(3), Committee::new([0, 1]))
            );
        }
    }

    #[test]
    fn full_committee_is_the_only_one() {
        let pav = w(WeightKind::Pav, 3);
        let (score, committee) = thiele_optimum(&e1(), &pav, 3).unwrap();
        assert_eq!(committee, Committee::new([0, 1, 2]));
        assert_eq!(score, w_score(&e1(), &pav, &committee).unwrap());
    }

    #[test]
    fn uniqueness_on_e1() {
        for s in BOTH {
            let solver = ThieleSolver::new(s);
            let r = solver.unique(&e1(), &w(WeightKind::Pav, 2), 2).unwrap();
            assert_eq!(r.verdict, Verdict::Unique);
            assert_eq!(r.witnesses, committees(&[&[0, 1]]));
            assert_eq!(r.optimum, Some(ratio(7, 2)));
            let r = solver.unique(&e1(), &w(WeightKind::Cc, 2), 2).unwrap();
            assert_eq!(r.verdict, Verdict::Tied);
            assert_eq!(r.optimum, Some(int(3)));
            assert_eq!(r.witnesses[0], Committee::new([0, 1]));
            assert_ne!(r.witnesses[0], r.witnesses[1]);
        }
        let exhaustive = ThieleSolver::new(Strategy::Exhaustive);
        let r = exhaustive.unique(&e1(), &w(WeightKind::Cc, 2), 2).unwrap();
        assert_eq!(r.witnesses, committees(&[&[0, 1], &[0, 2]]));
        let single = Election::new(1, vec![vec![0]]).unwrap();
        assert!(thiele_unique(&single, &w(WeightKind::Pav, 1), 1).unwrap().is_unique());
    }

    #[test]
    fn counting_on_e1() {
        assert_eq!(
            thiele_count(&e1(), &w(WeightKind::Cc, 2), 2, 100).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            thiele_count(&e1(), &w(WeightKind::Pav, 2), 2, 100).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            enumerate_thiele_winning(&e1(), &w(WeightKind::Cc, 2), 2, 10).unwrap(),
            committees(&[&[0, 1], &[0, 2], &[1, 2]])
        );
        assert!(matches!(
            thiele_count(&e1(), &w(WeightKind::Cc, 2), 2, 2),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn symmetric_candidates() {
        let e = Election::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(
            enumerate_thiele_winning(&e, &w(WeightKind::Av, 1), 1, 10).unwrap(),
            committees(&[&[0], &[1]])
        );
        let m = 7;
        let e = Election::new(m, vec![(0..m).collect(); 4]).unwrap();
        for k in 1..=m {
            assert_eq!(
                thiele_count(&e, &w(WeightKind::Pav, k), k, 1_000_000).unwrap(),
                binomial(m, k)
            );
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        let pav = w(WeightKind::Pav, 2);
        assert!(matches!(
            thiele_optimum(&e1(), &pav, 0),
            Err(Error::CommitteeSizeOutOfRange { .. })
        ));
        assert!(matches!(
            thiele_optimum(&e1(), &pav, 4),
            Err(Error::CommitteeSizeOutOfRange { .. })
        ));
        assert!(matches!(
            thiele_optimum(&e1(), &pav, 3),
            Err(Error::WeightsTooShort { .. })
        ));
    }

    #[test]
    fn bignum_fallback_agrees() {
        // Pairwise coprime large denominators force the BigInt path.
        let incs = vec![
            int(1),
            ratio(1_000_000_007, 2_000_000_011),
            ratio(1_000_000_007, 4_000_000_037),
        ];
        let heavy = WeightFunction::from_increments(incs).unwrap();
        let scaled = ScaledWeights::new(&heavy, 3);
        assert!(scaled.as_i128(usize::MAX / 2).is_none());
        let e = Election::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![1]]).unwrap();
        let out = run::<BigInt>(
            &e,
            &scaled.increments,
            &scaled,
            3,
            false,
            Query::Collect { stop_after: 10 },
        );
        let fast = thiele_optimum(&e, &heavy, 3).unwrap();
        assert_eq!(out.optimum, fast.0);
        assert_eq!(out.lex_min, fast.1);
    }
}
