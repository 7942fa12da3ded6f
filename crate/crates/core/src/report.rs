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

use crate::model::Committee;
use crate::rational::Rational;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Unique,
    Tied,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unique => "UNIQUE",
            Verdict::Tied => "TIED",
        })
    }
}

/// Outcome of a unique-committee query.
///
/// A unique verdict carries the single winning committee; a tied verdict
/// carries at least two distinct winning committees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Committee>,
    /// Optimal score, for rules that maximize one.
    pub optimum: Option<Rational>,
    pub nodes_explored: u64,
    /// Set when a search limit stopped exploration; the verdict is then
    /// reported as tied without a second witness guarantee.
    pub truncated: bool,
}

impl UniqueReport {
    pub fn unique(winner: Committee, optimum: Option<Rational>, nodes_explored: u64) -> Self {
        UniqueReport {
            verdict: Verdict::Unique,
            witnesses: vec![winner],
            optimum,
            nodes_explored,
            truncated: false,
        }
    }

    pub fn tied(first: Committee, second: Committee, optimum: Option<Rational>, nodes_explored: u64) -> Self {
        debug_assert_ne!(first, second);
        UniqueReport {
            verdict: Verdict::Tied,
            witnesses: vec![first, second],
            optimum,
            nodes_explored,
            truncated: false,
        }
    }

    pub fn is_unique(&self) -> bool {
        self.verdict == Verdict::Unique
    }
}
