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

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text, with the 1-based line number where parsing failed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// The election violates a structural invariant.
    #[error("invalid election: {0}")]
    InvalidElection(String),
    /// Rejected weight-function increments.
    #[error("invalid weight function: {reason} at index {index}")]
    InvalidWeights { index: usize, reason: String },
    #[error("unknown tag `{0}`")]
    UnknownTag(String),
    #[error("committee size {k} out of range for {m} candidates")]
    CommitteeSizeOutOfRange { k: usize, m: usize },
    #[error("committee of size {size} exceeds the {len} weight increments")]
    WeightsTooShort { size: usize, len: usize },
    #[error("candidate {0} is already in the committee")]
    CandidateInCommittee(usize),
    #[error("candidate {0} is out of range")]
    CandidateOutOfRange(usize),
    /// More results than the caller allowed; `at_least` is a lower bound on the true count.
    #[error("limit exceeded: at least {at_least} results")]
    LimitExceeded { at_least: String },
    #[error("candidate {0} is not in the current tie set")]
    NotInTieSet(usize),
    #[error("the committee is already complete")]
    CommitteeComplete,
    #[error("cannot fill {k} seats: only {available} candidates are approved by anyone")]
    Unfillable { k: usize, available: usize },
    /// A purchase did not transfer exactly one unit of money.
    #[error("payment conservation violated when buying candidate {0}")]
    Conservation(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("experiment cell (n={n}, repetition={repetition}, rule={rule}): {source}")]
    Cell {
        n: usize,
        repetition: usize,
        rule: String,
        source: Box<Error>,
    },
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
