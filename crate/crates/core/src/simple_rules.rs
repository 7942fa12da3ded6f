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

//! Winner determination, uniqueness, and counting for AV and SAV.
//!
//! With candidates sorted by score, let `x` be the score of the k-th best,
//! `above` the number scoring more than `x` and `tied` the number scoring
//! exactly `x`. The winning committees are the `above` top candidates plus
//! any `k - above` of the tied block, so there are `C(tied, k - above)`.

use crate::error::{Error, Result};
use crate::model::Committee;
use crate::rational::Rational;
use crate::report::UniqueReport;
use crate::scores::ScoreVector;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreRuleTally {
    /// Score of the k-th best candidate.
    pub threshold: Rational,
    /// Candidates scoring strictly above the threshold.
    pub above: Vec<usize>,
    /// Candidates scoring exactly the threshold, ascending.
    pub tied: Vec<usize>,
    pub k: usize,
    pub count: BigUint,
}

impl ScoreRuleTally {
    /// Seats filled from the tied block.
    pub fn open_seats(&self) -> usize {
        self.k - self.above.len()
    }
}

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::ZERO;
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Candidate indices sorted by descending score, equal scores by index.
fn ranking(scores: &ScoreVector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
    order
}

pub fn score_rule_tally(scores: &ScoreVector, k: usize) -> Result<ScoreRuleTally> {
    let m = scores.len();
    if k == 0 || k > m {
        return Err(Error::CommitteeSizeOutOfRange { k, m });
    }
    let order = ranking(scores);
    let threshold = scores[order[k - 1]].clone();
    let mut above = Vec::new();
    let mut tied = Vec::new();
    for c in 0..m {
        if scores[c] > threshold {
            above.push(c);
        } else if scores[c] == threshold {
            tied.push(c);
        }
    }
    let count = binomial(tied.len(), k - above.len());
    Ok(ScoreRuleTally {
        threshold,
        above,
        tied,
        k,
        count,
    })
}

pub fn score_rule_unique(scores: &ScoreVector, k: usize) -> Result<UniqueReport> {
    let tally = score_rule_tally(scores, k)?;
    let open = tally.open_seats();
    let first: Committee = tally.above.iter().chain(&tally.tied[..open]).copied().collect();
    if tally.count.is_one() {
        return Ok(UniqueReport::unique(first, None, 1));
    }
    // Swap the last tied member taken for the next one in the block.
    let second: Committee = tally
        .above
        .iter()
        .chain(&tally.tied[..open - 1])
        .chain(std::iter::once(&tally.tied[open]))
        .copied()
        .collect();
    Ok(UniqueReport::tied(first, second, None, 2))
}

/// All winning committees, provided there are at most `limit`.
pub fn enumerate_score_rule_committees(scores: &ScoreVector, k: usize, limit: usize) -> Result<Vec<Committee>> {
    let tally = score_rule_tally(scores, k)?;
    if tally.count.to_usize().is_none_or(|count| count > limit) {
        return Err(Error::LimitExceeded {
            at_least: tally.count.to_string(),
        });
    }
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(tally.open_seats());
    choose(&tally.tied, tally.open_seats(), 0, &mut pick, &mut |subset| {
        out.push(tally.above.iter().chain(subset).copied().collect());
    });
    out.sort();
    Ok(out)
}

fn choose(pool: &[usize], r: usize, start: usize, pick: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if pick.len() == r {
        emit(pick);
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < r - pick.len() {
            break;
        }
        pick.push(pool[i]);
        choose(pool, r, i + 1, pick, emit);
        pick.pop();
    }
}
