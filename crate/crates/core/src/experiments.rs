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

//! Tie-frequency experiments: sweep the number of voters, draw elections
//! from a culture, and count how often each rule has a unique winner.

use crate::cultures::{Culture, Sampler};
use crate::error::{Error, Result};
use crate::model::{Committee, Election, WeightFunction, WeightKind};
use crate::rational::{format_decimal, Rational};
use crate::report::UniqueReport;
use crate::scores::{av_scores, sav_scores};
use crate::sequential::{enumerate_universes, sequential_unique_limited, SequentialRule, UniverseLimits};
use crate::simple_rules::{enumerate_score_rule_committees, score_rule_tally, score_rule_unique};
use crate::thiele_exact::{enumerate_thiele_winning, thiele_count, thiele_unique};
use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Rules available to experiments, named as in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleName {
    #[serde(rename = "av")]
    Av,
    #[serde(rename = "sav")]
    Sav,
    #[serde(rename = "ccav-exact")]
    CcavExact,
    #[serde(rename = "pav-exact")]
    PavExact,
    #[serde(rename = "greedy-pav")]
    GreedyPav,
    #[serde(rename = "greedy-ccav")]
    GreedyCcav,
    #[serde(rename = "phragmen")]
    Phragmen,
    #[serde(rename = "meqs-phase1")]
    MeqsPhase1,
    #[serde(rename = "meqs-full")]
    MeqsFull,
}

impl RuleName {
    pub const ALL: [RuleName; 9] = [
        RuleName::Av,
        RuleName::Sav,
        RuleName::CcavExact,
        RuleName::PavExact,
        RuleName::GreedyPav,
        RuleName::GreedyCcav,
        RuleName::Phragmen,
        RuleName::MeqsPhase1,
        RuleName::MeqsFull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Av => "av",
            RuleName::Sav => "sav",
            RuleName::CcavExact => "ccav-exact",
            RuleName::PavExact => "pav-exact",
            RuleName::GreedyPav => "greedy-pav",
            RuleName::GreedyCcav => "greedy-ccav",
            RuleName::Phragmen => "phragmen",
            RuleName::MeqsPhase1 => "meqs-phase1",
            RuleName::MeqsFull => "meqs-full",
        }
    }

    pub fn is_sequential(self) -> bool {
        !matches!(
            self,
            RuleName::Av | RuleName::Sav | RuleName::CcavExact | RuleName::PavExact
        )
    }

    /// The sequential rule behind this name, if it is one.
    pub fn sequential_rule(self, k: usize) -> Result<Option<SequentialRule>> {
        Ok(Some(match self {
            RuleName::GreedyPav => SequentialRule::greedy(WeightKind::Pav, k)?,
            RuleName::GreedyCcav => SequentialRule::greedy(WeightKind::Cc, k)?,
            RuleName::Phragmen => SequentialRule::Phragmen,
            RuleName::MeqsPhase1 => SequentialRule::MeqsPhase1,
            RuleName::MeqsFull => SequentialRule::MeqsFull,
            _ => return Ok(None),
        }))
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

/// Decides uniqueness of one rule on one election. Sequential rules give
/// up after `max_states` search states and report a truncated tie.
pub fn evaluate_rule(rule: RuleName, election: &Election, k: usize, max_states: u64) -> Result<UniqueReport> {
    match rule {
        RuleName::Av => score_rule_unique(&av_scores(election), k),
        RuleName::Sav => score_rule_unique(&sav_scores(election), k),
        RuleName::CcavExact => thiele_unique(election, &WeightFunction::standard(WeightKind::Cc, k)?, k),
        RuleName::PavExact => thiele_unique(election, &WeightFunction::standard(WeightKind::Pav, k)?, k),
        _ => {
            let seq = rule.sequential_rule(k)?.expect("sequential rule");
            sequential_unique_limited(&seq, election, k, max_states)
        }
    }
}

/// All winning committees of `rule`, in lexicographic order, provided
/// there are at most `limit`. For sequential rules these are the
/// committees reachable under some tie-breaking.
pub fn enumerate_winning(rule: RuleName, election: &Election, k: usize, limit: usize) -> Result<Vec<Committee>> {
    match rule {
        RuleName::Av => enumerate_score_rule_committees(&av_scores(election), k, limit),
        RuleName::Sav => enumerate_score_rule_committees(&sav_scores(election), k, limit),
        RuleName::CcavExact => {
            enumerate_thiele_winning(election, &WeightFunction::standard(WeightKind::Cc, k)?, k, limit)
        }
        RuleName::PavExact => {
            enumerate_thiele_winning(election, &WeightFunction::standard(WeightKind::Pav, k)?, k, limit)
        }
        _ => {
            let seq = rule.sequential_rule(k)?.expect("sequential rule");
            let limits = UniverseLimits {
                max_committees: limit.saturating_add(1),
                ..UniverseLimits::default()
            };
            let set = enumerate_universes(&seq, election, k, limits)?;
            if set.truncated || set.committees.len() > limit {
                return Err(Error::LimitExceeded {
                    at_least: set.committees.len().to_string(),
                });
            }
            Ok(set.committees.into_iter().collect())
        }
    }
}

/// Number of winning committees. AV and SAV are counted in closed form;
/// other rules fail with [`Error::LimitExceeded`] beyond `limit`.
pub fn count_winning(rule: RuleName, election: &Election, k: usize, limit: usize) -> Result<BigUint> {
    match rule {
        RuleName::Av => Ok(score_rule_tally(&av_scores(election), k)?.count),
        RuleName::Sav => Ok(score_rule_tally(&sav_scores(election), k)?.count),
        RuleName::CcavExact => thiele_count(election, &WeightFunction::standard(WeightKind::Cc, k)?, k, limit),
        RuleName::PavExact => thiele_count(election, &WeightFunction::standard(WeightKind::Pav, k)?, k, limit),
        _ => Ok(BigUint::from(enumerate_winning(rule, election, k, limit)?.len())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NGrid {
    pub start: usize,
    /// Inclusive.
    pub stop: usize,
    pub step: usize,
}

impl NGrid {
    pub fn values(&self) -> Vec<usize> {
        if self.step == 0 || self.start > self.stop {
            return Vec::new();
        }
        (self.start..=self.stop).step_by(self.step).collect()
    }
}

fn default_workers() -> usize {
    1
}

fn default_max_states() -> u64 {
    UniverseLimits::default().max_states
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    pub k: usize,
    pub culture: Culture,
    pub rules: Vec<RuleName>,
    pub n_grid: NGrid,
    pub repetitions: usize,
    pub master_seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Per-cell search budget for sequential rules.
    #[serde(default = "default_max_states")]
    pub max_states: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.m == 0 {
            return fail("m must be positive");
        }
        if self.k == 0 || self.k > self.m {
            return Err(Error::CommitteeSizeOutOfRange { k: self.k, m: self.m });
        }
        if self.rules.is_empty() {
            return fail("rule list is empty");
        }
        let mut sorted = self.rules.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.rules.len() {
            return fail("rule list has duplicates");
        }
        let grid = &self.n_grid;
        if grid.start == 0 || grid.step == 0 || grid.start > grid.stop {
            return fail("n_grid needs 1 <= start <= stop and step >= 1");
        }
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        if self.workers == 0 {
            return fail("workers must be at least 1");
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the election drawn for voter count `n` and repetition `rep`.
pub fn child_seed(master: u64, n: usize, repetition: usize) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(n as u64)) ^ repetition as u64)
}

/// Outcome of one rule on one election.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellVerdict {
    pub rule: RuleName,
    pub unique: bool,
    pub truncated: bool,
}

/// Generates the election for `(n, repetition)` and evaluates every
/// configured rule on it.
pub fn evaluate_cell(
    cfg: &ExperimentConfig,
    sampler: &Sampler,
    n: usize,
    repetition: usize,
) -> Result<Vec<CellVerdict>> {
    let wrap = |rule: &str, e: Error| Error::Cell {
        n,
        repetition,
        rule: rule.to_string(),
        source: Box::new(e),
    };
    let election = sampler
        .generate(cfg.m, n, child_seed(cfg.master_seed, n, repetition))
        .map_err(|e| wrap("generation", e))?;
    cfg.rules
        .iter()
        .map(|&rule| {
            let report = evaluate_rule(rule, &election, cfg.k, cfg.max_states).map_err(|e| wrap(rule.as_str(), e))?;
            Ok(CellVerdict {
                rule,
                unique: report.is_unique(),
                truncated: report.truncated,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyRow {
    pub rule: RuleName,
    pub n: usize,
    pub repetitions: usize,
    pub unique: usize,
    /// Cells that hit the search budget; counted as tied.
    pub truncated: usize,
}

impl FrequencyRow {
    pub fn tie_frequency(&self) -> Rational {
        Rational::new(
            BigInt::from(self.repetitions - self.unique),
            BigInt::from(self.repetitions),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
    /// Effective culture parameters, e.g. a calibrated radius.
    pub culture: String,
}

impl FrequencyTable {
    pub fn row(&self, rule: RuleName, n: usize) -> Option<&FrequencyRow> {
        self.rows.iter().find(|r| r.rule == rule && r.n == n)
    }

    /// Mean tie frequency of `rule` over the grid.
    pub fn mean_tie_frequency(&self, rule: RuleName) -> Option<Rational> {
        let rows: Vec<&FrequencyRow> = self.rows.iter().filter(|r| r.rule == rule).collect();
        if rows.is_empty() {
            return None;
        }
        let total: Rational = rows.iter().map(|r| r.tie_frequency()).sum();
        Some(total / Rational::from_integer(BigInt::from(rows.len())))
    }
}

/// Runs the sweep on a pool of `cfg.workers` threads. The table does not
/// depend on the number of workers. When several cells fail, the error of
/// the first one in `(n, repetition)` order is returned.
pub fn run_basic_experiment(cfg: &ExperimentConfig) -> Result<FrequencyTable> {
    cfg.validate()?;
    let sampler = cfg.culture.prepare(cfg.m)?;
    let grid = cfg.n_grid.values();
    let cells: Vec<(usize, usize)> = grid
        .iter()
        .flat_map(|&n| (0..cfg.repetitions).map(move |rep| (n, rep)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    let verdicts: Vec<Result<Vec<CellVerdict>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, rep)| evaluate_cell(cfg, &sampler, n, rep))
            .collect()
    });

    let mut rows: Vec<FrequencyRow> = grid
        .iter()
        .flat_map(|&n| {
            cfg.rules.iter().map(move |&rule| FrequencyRow {
                rule,
                n,
                repetitions: cfg.repetitions,
                unique: 0,
                truncated: 0,
            })
        })
        .collect();
    for (&(n, _), cell) in cells.iter().zip(verdicts) {
        let position = grid.iter().position(|&g| g == n).expect("grid value");
        for (offset, verdict) in cell?.into_iter().enumerate() {
            let row = &mut rows[position * cfg.rules.len() + offset];
            row.unique += usize::from(verdict.unique);
            row.truncated += usize::from(verdict.truncated);
        }
    }
    rows.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.rule.as_str().cmp(b.rule.as_str())));
    Ok(FrequencyTable {
        rows,
        culture: sampler.describe(),
    })
}

fn csv(table: &FrequencyTable, diagnostics: bool) -> String {
    let mut rows: Vec<&FrequencyRow> = table.rows.iter().collect();
    rows.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.rule.as_str().cmp(b.rule.as_str())));
    let mut out = String::from("rule,n,reps,unique,tie_frequency");
    if diagnostics {
        out.push_str(",truncated");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}",
            r.rule,
            r.n,
            r.repetitions,
            r.unique,
            format_decimal(&r.tie_frequency(), 6)
        ));
        if diagnostics {
            out.push_str(&format!(",{}", r.truncated));
        }
        out.push('\n');
    }
    out
}

/// Renders the table as CSV, rows ordered by `n` and then rule name.
pub fn emit_csv(table: &FrequencyTable) -> String {
    csv(table, false)
}

/// As [`emit_csv`] with an extra column counting truncated cells.
pub fn emit_diagnostic_csv(table: &FrequencyTable) -> String {
    csv(table, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::e1;
    use crate::rational::{int, ratio};

    fn config(culture: Culture, rules: Vec<RuleName>) -> ExperimentConfig {
        ExperimentConfig {
            m: 6,
            k: 2,
            culture,
            rules,
            n_grid: NGrid {
                start: 5,
                stop: 15,
                step: 5,
            },
            repetitions: 12,
            master_seed: 7,
            workers: 2,
            max_states: default_max_states(),
        }
    }

    fn resampling(p: Rational, phi: Rational) -> Culture {
        Culture::Resampling { p, phi }
    }

    #[test]
    fn rule_names_round_trip() {
        for rule in RuleName::ALL {
            assert_eq!(rule.as_str().parse::<RuleName>().unwrap(), rule);
            let json = serde_json::to_string(&rule).unwrap();
            assert_eq!(json, format!("\"{rule}\""));
        }
        assert!("stv".parse::<RuleName>().is_err());
    }

    #[test]
    fn counts_on_e1() {
        let e = e1();
        let count = |rule, k| count_winning(rule, &e, k, 100).unwrap();
        assert_eq!(count(RuleName::Av, 1), BigUint::from(2u32));
        assert_eq!(count(RuleName::CcavExact, 2), BigUint::from(3u32));
        assert_eq!(count(RuleName::GreedyCcav, 2), BigUint::from(3u32));
        for rule in RuleName::ALL {
            let all = enumerate_winning(rule, &e, 2, 100).unwrap();
            assert_eq!(BigUint::from(all.len()), count(rule, 2), "{rule}");
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(matches!(
            enumerate_winning(RuleName::GreedyCcav, &e, 2, 1),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn csv_formatting() {
        let mut table = FrequencyTable::default();
        assert_eq!(emit_csv(&table), "rule,n,reps,unique,tie_frequency\n");
        table.rows.push(FrequencyRow {
            rule: RuleName::Av,
            n: 20,
            repetitions: 1000,
            unique: 950,
            truncated: 0,
        });
        assert_eq!(
            emit_csv(&table),
            "rule,n,reps,unique,tie_frequency\nav,20,1000,950,0.050000\n"
        );
        assert_eq!(
            emit_diagnostic_csv(&table),
            "rule,n,reps,unique,tie_frequency,truncated\nav,20,1000,950,0.050000,0\n"
        );
    }

    #[test]
    fn csv_row_order() {
        let row = |rule, n| FrequencyRow {
            rule,
            n,
            repetitions: 3,
            unique: 1,
            truncated: 0,
        };
        let table = FrequencyTable {
            rows: vec![
                row(RuleName::Sav, 40),
                row(RuleName::Av, 40),
                row(RuleName::Sav, 20),
                row(RuleName::Av, 20),
            ],
            culture: String::new(),
        };
        let lines: Vec<String> = emit_csv(&table)
            .lines()
            .skip(1)
            .map(|l| l.split(',').take(2).collect::<Vec<_>>().join(","))
            .collect();
        assert_eq!(lines, ["av,20", "sav,20", "av,40", "sav,40"]);
        assert!(emit_csv(&table).contains("av,20,3,1,0.666667"));
    }

    #[test]
    fn identical_votes_with_k_approvals() {
        // p m = k: the central vote approves exactly k candidates. Under CC
        // one approved member already covers every voter, so any committee
        // containing one of them is optimal; every other rule must pick the
        // approved set.
        let cfg = config(resampling(ratio(1, 3), int(0)), RuleName::ALL.to_vec());
        let table = run_basic_experiment(&cfg).unwrap();
        assert_eq!(table.rows.len(), 27);
        for row in &table.rows {
            let expected = match row.rule {
                RuleName::CcavExact | RuleName::GreedyCcav => 0,
                _ => row.repetitions,
            };
            assert_eq!(row.unique, expected, "{row:?}");
        }
    }

    #[test]
    fn worker_count_does_not_change_the_output() {
        let mut cfg = config(resampling(ratio(1, 3), ratio(3, 4)), RuleName::ALL.to_vec());
        cfg.workers = 1;
        let a = emit_diagnostic_csv(&run_basic_experiment(&cfg).unwrap());
        cfg.workers = 4;
        let b = emit_diagnostic_csv(&run_basic_experiment(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn cells_reproduce_in_isolation() {
        let cfg = config(
            resampling(ratio(1, 3), ratio(3, 4)),
            vec![RuleName::Av, RuleName::Phragmen],
        );
        let table = run_basic_experiment(&cfg).unwrap();
        let sampler = cfg.culture.prepare(cfg.m).unwrap();
        for n in cfg.n_grid.values() {
            let mut unique = [0usize; 2];
            for rep in 0..cfg.repetitions {
                let cell = evaluate_cell(&cfg, &sampler, n, rep).unwrap();
                let e = sampler.generate(cfg.m, n, child_seed(cfg.master_seed, n, rep)).unwrap();
                for (i, v) in cell.iter().enumerate() {
                    assert_eq!(
                        v.unique,
                        evaluate_rule(v.rule, &e, cfg.k, u64::MAX).unwrap().is_unique()
                    );
                    unique[i] += usize::from(v.unique);
                }
            }
            assert_eq!(table.row(RuleName::Av, n).unwrap().unique, unique[0]);
            assert_eq!(table.row(RuleName::Phragmen, n).unwrap().unique, unique[1]);
        }
    }

    #[test]
    fn single_tied_instance_gives_frequency_one() {
        let report = evaluate_rule(RuleName::Av, &e1(), 1, u64::MAX).unwrap();
        assert!(!report.is_unique());
        // Search the seed space for an E1-like draw: an AV tie at k = 1.
        let culture = resampling(ratio(1, 2), int(1));
        let sampler = culture.prepare(3).unwrap();
        let seed = (0..)
            .find(|&s| {
                let e = sampler.generate(3, 4, child_seed(s, 4, 0)).unwrap();
                !evaluate_rule(RuleName::Av, &e, 1, u64::MAX).unwrap().is_unique()
            })
            .unwrap();
        let cfg = ExperimentConfig {
            m: 3,
            k: 1,
            culture,
            rules: vec![RuleName::Av],
            n_grid: NGrid {
                start: 4,
                stop: 4,
                step: 1,
            },
            repetitions: 1,
            master_seed: seed,
            workers: 1,
            max_states: default_max_states(),
        };
        let table = run_basic_experiment(&cfg).unwrap();
        assert_eq!(
            emit_csv(&table),
            "rule,n,reps,unique,tie_frequency\nav,4,1,0,1.000000\n"
        );
    }

    #[test]
    fn config_json() {
        let text = r#"{
            "m": 30, "k": 5,
            "culture": {"culture": "resampling", "p": "1/6", "phi": "3/4"},
            "rules": ["av", "sav", "meqs-full"],
            "n_grid": {"start": 20, "stop": 100, "step": 20},
            "repetitions": 200,
            "master_seed": 1,
            "workers": 8
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.n_grid.values(), vec![20, 40, 60, 80, 100]);
        assert_eq!(cfg.max_states, 1_000_000);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);

        assert!(ExperimentConfig::from_json(&text.replace("200", "0")).is_err());
        assert!(ExperimentConfig::from_json(&text.replace("\"sav\"", "\"av\"")).is_err());
        assert!(ExperimentConfig::from_json(&text.replace("\"k\": 5", "\"k\": 31")).is_err());
        assert!(ExperimentConfig::from_json(&text.replace("\"workers\"", "\"threads\"")).is_err());
    }

    #[test]
    fn failing_cell_reports_its_coordinate() {
        // Phase 1 of equal shares may stop short; full equal shares cannot
        // fill k = 6 seats with one approved candidate and errors instead.
        let mut cfg = config(resampling(ratio(1, 6), int(0)), vec![RuleName::MeqsFull]);
        cfg.k = 6;
        match run_basic_experiment(&cfg) {
            Err(Error::Cell {
                n, repetition, rule, ..
            }) => {
                assert_eq!((n, repetition, rule.as_str()), (5, 0, "meqs-full"));
            }
            other => panic!("{other:?}"),
        }
    }
}
