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

//! Exact AV/SAV candidate scores, Thiele committee scores, and marginal gains.

use crate::error::{Error, Result};
use crate::model::{Committee, Election, WeightFunction};
use crate::rational::{int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::ops::Index;

/// One exact score per candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreVector(Vec<Rational>);

impl ScoreVector {
    pub fn new(values: Vec<Rational>) -> Self {
        ScoreVector(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Index<usize> for ScoreVector {
    type Output = Rational;

    fn index(&self, c: usize) -> &Rational {
        &self.0[c]
    }
}

/// Number of approvals per candidate.
pub fn av_scores(election: &Election) -> ScoreVector {
    ScoreVector(
        (0..election.num_candidates())
            .map(|c| int(election.approvers(c).len() as i64))
            .collect(),
    )
}

/// Each voter splits one point evenly over the candidates they approve.
/// Empty votes contribute nothing.
pub fn sav_scores(election: &Election) -> ScoreVector {
    let shares: Vec<Rational> = election
        .votes()
        .iter()
        .map(|vote| match vote.len() {
            0 => Rational::zero(),
            len => Rational::new(BigInt::one(), BigInt::from(len)),
        })
        .collect();
    ScoreVector(
        (0..election.num_candidates())
            .map(|c| election.approvers(c).iter().map(|&v| &shares[v]).sum())
            .collect(),
    )
}

/// `Σ_v w(|A(v) ∩ S|)`.
pub fn w_score(election: &Election, weights: &WeightFunction, committee: &Committee) -> Result<Rational> {
    weights.check_size(committee.len())?;
    committee.check(election)?;
    let set = committee.to_set(election.num_candidates());
    let values: Vec<Rational> = (0..=committee.len()).map(|t| weights.value(t)).collect();
    Ok(election
        .votes()
        .iter()
        .map(|vote| &values[vote.intersection_len(&set)])
        .sum())
}

/// `w_score(S ∪ {c}) - w_score(S)`, computed from the voters approving `c`.
pub fn marginal_gain(
    election: &Election,
    weights: &WeightFunction,
    committee: &Committee,
    candidate: usize,
) -> Result<Rational> {
    if committee.contains(candidate) {
        return Err(Error::CandidateInCommittee(candidate));
    }
    if candidate >= election.num_candidates() {
        return Err(Error::CandidateOutOfRange(candidate));
    }
    committee.check(election)?;
    weights.check_size(committee.len() + 1)?;
    let set = committee.to_set(election.num_candidates());
    Ok(election
        .approvers(candidate)
        .iter()
        .map(|&v| weights.increment(election.vote(v).intersection_len(&set) + 1))
        .sum())
}

/// Per-voter counts `|A(v) ∩ S|` for a growing committee `S`, giving
/// marginal gains in time proportional to the candidate's approvers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Saturation {
    counts: Vec<u32>,
}

impl Saturation {
    pub fn new(num_voters: usize) -> Self {
        Saturation {
            counts: vec![0; num_voters],
        }
    }

    pub fn add(&mut self, election: &Election, candidate: usize) {
        for &v in election.approvers(candidate) {
            self.counts[v] += 1;
        }
    }

    pub fn remove(&mut self, election: &Election, candidate: usize) {
        for &v in election.approvers(candidate) {
            self.counts[v] -= 1;
        }
    }

    pub fn count(&self, voter: usize) -> usize {
        self.counts[voter] as usize
    }

    pub fn gain(&self, election: &Election, weights: &WeightFunction, candidate: usize) -> Rational {
        election
            .approvers(candidate)
            .iter()
            .map(|&v| weights.increment(self.counts[v] as usize + 1))
            .sum()
    }

    /// Gain under integer-scaled weights.
    #[inline]
    pub fn scaled_gain<T: ScaledValue>(&self, election: &Election, table: &[T], candidate: usize) -> T {
        let mut total = T::zero();
        for &v in election.approvers(candidate) {
            total += &table[self.counts[v] as usize + 1];
        }
        total
    }
}

/// Numeric types usable for integer-scaled scores.
pub trait ScaledValue: Clone + Ord + Zero + for<'a> std::ops::AddAssign<&'a Self> + std::fmt::Debug {
    fn to_bigint(&self) -> BigInt;
}

impl ScaledValue for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ScaledValue for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Weight increments multiplied by the least common multiple of their
/// denominators, so scores can be summed as integers without losing
/// exactness. Index 0 is unused and holds zero.
#[derive(Clone, Debug)]
pub struct ScaledWeights {
    pub scale: BigInt,
    pub increments: Vec<BigInt>,
}

impl ScaledWeights {
    pub fn new(weights: &WeightFunction, len: usize) -> Self {
        let incs: Vec<Rational> = (1..=len).map(|i| weights.increment(i)).collect();
        let scale = incs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut increments = vec![BigInt::zero()];
        increments.extend(
            incs.iter()
                .map(|x| (x * Rational::from_integer(scale.clone())).to_integer()),
        );
        ScaledWeights { scale, increments }
    }

    /// The increments as `i128` when every score over `num_voters` voters
    /// fits comfortably.
    pub fn as_i128(&self, num_voters: usize) -> Option<Vec<i128>> {
        let total: BigInt = self.increments.iter().sum::<BigInt>() * BigInt::from(num_voters.max(1));
        if total > BigInt::from(i128::MAX / 4) {
            return None;
        }
        self.increments.iter().map(ToPrimitive::to_i128).collect()
    }

    pub fn unscale(&self, value: &BigInt) -> Rational {
        Rational::new(value.clone(), self.scale.clone())
    }
}
