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

//! Elections, committees, and Thiele weight functions.

use crate::error::{parse_err, Error, Result};
use crate::rational::{int, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Fixed-capacity bitset over candidate indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CandidateSet {
    words: Vec<u64>,
}

impl CandidateSet {
    pub fn with_capacity(num_candidates: usize) -> Self {
        CandidateSet {
            words: vec![0; num_candidates.div_ceil(64)],
        }
    }

    pub fn from_members(num_candidates: usize, members: &[usize]) -> Self {
        let mut set = Self::with_capacity(num_candidates);
        for &c in members {
            set.insert(c);
        }
        set
    }

    #[inline]
    pub fn contains(&self, c: usize) -> bool {
        self.words.get(c / 64).is_some_and(|w| w & (1 << (c % 64)) != 0)
    }

    /// Inserts `c`, returning false if it was already present.
    pub fn insert(&mut self, c: usize) -> bool {
        let word = c / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        let bit = 1 << (c % 64);
        let fresh = self.words[word] & bit == 0;
        self.words[word] |= bit;
        fresh
    }

    pub fn remove(&mut self, c: usize) {
        if let Some(w) = self.words.get_mut(c / 64) {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Size of the intersection with `other`.
    #[inline]
    pub fn intersection_len(&self, other: &CandidateSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An approval election: `m` candidates `0..m` and one approval set per voter.
#[derive(Clone, PartialEq, Eq)]
pub struct Election {
    num_candidates: usize,
    votes: Vec<CandidateSet>,
    /// For each candidate, the voters approving it (ascending).
    approvers: Vec<Vec<usize>>,
}

/// Largest supported number of candidates.
pub const MAX_CANDIDATES: usize = 1 << 16;

impl Election {
    /// Builds an election, checking that every index is in range and that no
    /// vote repeats a candidate.
    pub fn new(num_candidates: usize, votes: Vec<Vec<usize>>) -> Result<Self> {
        if num_candidates == 0 {
            return Err(Error::InvalidElection("no candidates".into()));
        }
        if num_candidates > MAX_CANDIDATES {
            return Err(Error::TooLarge(format!(
                "{num_candidates} candidates (at most {MAX_CANDIDATES})"
            )));
        }
        if votes.is_empty() {
            return Err(Error::InvalidElection("no voters".into()));
        }
        let mut sets = Vec::with_capacity(votes.len());
        for (voter, vote) in votes.iter().enumerate() {
            let mut set = CandidateSet::with_capacity(num_candidates);
            for &c in vote {
                if c >= num_candidates {
                    return Err(Error::InvalidElection(format!("voter {voter}: index {c} out of range")));
                }
                if !set.insert(c) {
                    return Err(Error::InvalidElection(format!("voter {voter}: duplicate index {c}")));
                }
            }
            sets.push(set);
        }
        Ok(Self::from_sets(num_candidates, sets))
    }

    fn from_sets(num_candidates: usize, votes: Vec<CandidateSet>) -> Self {
        let mut approvers = vec![Vec::new(); num_candidates];
        for (voter, vote) in votes.iter().enumerate() {
            for c in vote.iter() {
                approvers[c].push(voter);
            }
        }
        Election {
            num_candidates,
            votes,
            approvers,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn num_voters(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> &[CandidateSet] {
        &self.votes
    }

    pub fn vote(&self, voter: usize) -> &CandidateSet {
        &self.votes[voter]
    }

    pub fn approvers(&self, candidate: usize) -> &[usize] {
        &self.approvers[candidate]
    }

    /// Approval sets as sorted index lists.
    pub fn vote_lists(&self) -> Vec<Vec<usize>> {
        self.votes.iter().map(CandidateSet::to_vec).collect()
    }

    /// Returns a copy with `extra` empty votes appended.
    pub fn with_empty_votes(&self, extra: usize) -> Election {
        let mut votes = self.votes.clone();
        votes.extend((0..extra).map(|_| CandidateSet::with_capacity(self.num_candidates)));
        Self::from_sets(self.num_candidates, votes)
    }
}

impl fmt::Debug for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Election")
            .field("m", &self.num_candidates)
            .field("votes", &self.votes)
            .finish()
    }
}

/// Parses the line-oriented election format:
///
/// ```text
/// m 3
/// n 2
/// v 0 1
/// v
/// ```
///
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_election(text: &str) -> Result<Election> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

    let mut header = |key: &str| -> Result<(usize, usize)> {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing `{key}` header")))?;
        let mut fields = line.split_whitespace();
        if fields.next() != Some(key) {
            return Err(parse_err(line_no, format!("expected `{key} <int>`")));
        }
        let value = fields
            .next()
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| parse_err(line_no, format!("expected `{key} <int>`")))?;
        if fields.next().is_some() {
            return Err(parse_err(line_no, format!("trailing data after `{key}`")));
        }
        Ok((line_no, value))
    };
    let (m_line, m) = header("m")?;
    let (n_line, n) = header("n")?;
    if m == 0 {
        return Err(parse_err(m_line, "candidate count must be positive"));
    }
    if m > MAX_CANDIDATES {
        return Err(parse_err(
            m_line,
            format!("at most {MAX_CANDIDATES} candidates supported"),
        ));
    }
    if n == 0 {
        return Err(parse_err(n_line, "voter count must be positive"));
    }

    let mut votes = Vec::with_capacity(n.min(1 << 16));
    let mut last_line = n_line;
    for (line_no, line) in lines {
        last_line = line_no;
        let mut fields = line.split_whitespace();
        if fields.next() != Some("v") {
            return Err(parse_err(line_no, "expected a `v` vote line"));
        }
        if votes.len() == n {
            return Err(parse_err(line_no, format!("more than {n} votes")));
        }
        let mut set = CandidateSet::with_capacity(m);
        for field in fields {
            let c: usize = field
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad candidate index `{field}`")))?;
            if c >= m {
                return Err(parse_err(line_no, format!("index {c} out of range")));
            }
            if !set.insert(c) {
                return Err(parse_err(line_no, format!("duplicate index {c}")));
            }
        }
        votes.push(set);
    }
    if votes.len() != n {
        return Err(parse_err(
            last_line,
            format!("expected {n} votes, found {}", votes.len()),
        ));
    }
    Ok(Election::from_sets(m, votes))
}

pub fn serialize_election(election: &Election) -> String {
    let mut out = format!("m {}\nn {}\n", election.num_candidates, election.num_voters());
    for vote in &election.votes {
        out.push('v');
        for c in vote.iter() {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

/// A set of candidates, stored sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee(Vec<usize>);

impl Committee {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Committee(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn with(&self, c: usize) -> Committee {
        Committee::new(self.0.iter().copied().chain(std::iter::once(c)))
    }

    pub fn to_set(&self, num_candidates: usize) -> CandidateSet {
        CandidateSet::from_members(num_candidates, &self.0)
    }

    /// Checks that all members are valid candidates of `election`.
    pub fn check(&self, election: &Election) -> Result<()> {
        match self.0.last() {
            Some(&c) if c >= election.num_candidates() => Err(Error::CandidateOutOfRange(c)),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for Committee {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Committee::new(iter)
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Named Thiele weight functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Av,
    Cc,
    Pav,
    Custom,
}

impl std::str::FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "av" => Ok(WeightKind::Av),
            "cc" | "ccav" => Ok(WeightKind::Cc),
            "pav" => Ok(WeightKind::Pav),
            "custom" => Ok(WeightKind::Custom),
            _ => Err(Error::UnknownTag(s.to_string())),
        }
    }
}

/// A 1-concave Thiele weight function, stored as its marginal increments
/// `w(i) - w(i-1)` for `i = 1..=len`.
///
/// Invariants: the first increment is 1 and increments are nonnegative and
/// nonincreasing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    kind: WeightKind,
    increments: Vec<Rational>,
}

impl WeightFunction {
    /// The standard weight function of `kind` with `k` increments.
    pub fn standard(kind: WeightKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("committee size must be positive".into()));
        }
        let increments = match kind {
            WeightKind::Av => vec![int(1); k],
            WeightKind::Cc => (0..k).map(|i| int(i64::from(i == 0))).collect(),
            WeightKind::Pav => (1..=k).map(|i| Rational::new(1.into(), i.into())).collect(),
            WeightKind::Custom => return Err(Error::UnknownTag("custom".into())),
        };
        Ok(WeightFunction { kind, increments })
    }

    /// Validates custom increments, reporting the first violated constraint.
    pub fn from_increments(increments: Vec<Rational>) -> Result<Self> {
        let first = increments.first().ok_or_else(|| Error::InvalidWeights {
            index: 1,
            reason: "empty increment list".into(),
        })?;
        if !first.is_one() {
            return Err(Error::InvalidWeights {
                index: 1,
                reason: "first increment must be 1".into(),
            });
        }
        for (i, pair) in increments.windows(2).enumerate() {
            if pair[1].is_negative() {
                return Err(Error::InvalidWeights {
                    index: i + 2,
                    reason: "negative increment".into(),
                });
            }
            if pair[1] > pair[0] {
                return Err(Error::InvalidWeights {
                    index: i + 1,
                    reason: "concavity violated".into(),
                });
            }
        }
        Ok(WeightFunction {
            kind: WeightKind::Custom,
            increments,
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn increments(&self) -> &[Rational] {
        &self.increments
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// The increment `w(i) - w(i-1)`, 1-based. Zero past the stored list.
    pub fn increment(&self, i: usize) -> Rational {
        debug_assert!(i >= 1);
        self.increments.get(i - 1).cloned().unwrap_or_else(Rational::zero)
    }

    /// `w(t)`.
    pub fn value(&self, t: usize) -> Rational {
        self.increments.iter().take(t).sum()
    }

    /// Ensures `w` is defined up to committee size `size`.
    pub fn check_size(&self, size: usize) -> Result<()> {
        if size > self.increments.len() {
            Err(Error::WeightsTooShort {
                size,
                len: self.increments.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Whether every increment is 1, i.e. this is AV.
    pub fn is_approval(&self) -> bool {
        self.increments.iter().all(One::is_one)
    }

    /// The smallest `t` with `δ_t = 1 > δ_{t+1}`, if any.
    pub fn saturation_point(&self) -> Option<usize> {
        (1..self.increments.len()).find(|&t| self.increments[t - 1].is_one() && !self.increments[t].is_one())
    }

    /// Copy truncated or zero-padded to exactly `len` increments.
    pub fn resized(&self, len: usize) -> WeightFunction {
        let mut increments = self.increments.clone();
        increments.resize(len.max(1), Rational::zero());
        WeightFunction {
            kind: self.kind,
            increments,
        }
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let incs: Vec<String> = self.increments.iter().map(crate::rational::format_rational).collect();
        write!(f, "{:?}({})", self.kind, incs.join(", "))
    }
}
