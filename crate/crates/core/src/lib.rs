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

//! Winner determination, tie detection, and winning-committee counting for
//! approval-based multiwinner voting rules.
//!
//! All scores, budgets and times are exact rationals. The crate covers:
//!
//! * AV and SAV, with polynomial-time counting ([`simple_rules`]);
//! * exact Thiele rules such as CCAV and PAV ([`thiele_exact`]);
//! * sequential rules under parallel-universes tie-breaking: greedy Thiele
//!   variants, Phragmén, and the Method of Equal Shares ([`sequential`]);
//! * brute-force oracles, graph gadgets with known answers, random election
//!   cultures, and a tie-frequency experiment harness.

pub mod cultures;
pub mod error;
pub mod experiments;
pub mod gadgets;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod scores;
pub mod sequential;
pub mod simple_rules;
pub mod thiele_exact;

pub use error::{Error, Result};
pub use model::{parse_election, serialize_election, CandidateSet, Committee, Election, WeightFunction, WeightKind};
pub use rational::Rational;
pub use report::{UniqueReport, Verdict};

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::model::Election;

    /// Three candidates; votes {0,1}, {0}, {1}, {2}.
    pub fn e1() -> Election {
        Election::new(3, vec![vec![0, 1], vec![0], vec![1], vec![2]]).unwrap()
    }
}
