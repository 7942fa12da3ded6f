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

//! The optimized rule implementations against the brute-force oracles, and
//! structural properties of sequential runs.

use committee_ties::cultures::{gen_resampling, rng_from_seed, uniform_below};
use committee_ties::oracle::{oracle_unique, oracle_winning_committees, RuleKind, RuleSpec};
use committee_ties::rational::{int, ratio};
use committee_ties::scores::{av_scores, sav_scores};
use committee_ties::sequential::{
    enumerate_universes, run_resolute, sequential_unique, SequentialRule, SequentialState, StepKind, UniverseLimits,
};
use committee_ties::simple_rules::{enumerate_score_rule_committees, score_rule_unique};
use committee_ties::thiele_exact::{enumerate_thiele_winning, thiele_unique};
use committee_ties::{Committee, Election, Rational, Verdict, WeightFunction, WeightKind};
use proptest::prelude::*;
use rand::RngCore;
use std::collections::BTreeSet;

fn corpus(count: usize, seed: u64) -> Vec<(Election, usize)> {
    let ps = [ratio(1, 4), ratio(1, 3), ratio(1, 2)];
    let phis = [int(0), ratio(1, 2), ratio(3, 4), int(1)];
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let m = 2 + uniform_below(&mut rng, 6) as usize;
            let n = 1 + uniform_below(&mut rng, 9) as usize;
            let k = 1 + uniform_below(&mut rng, 3.min(m) as u64) as usize;
            let p = &ps[uniform_below(&mut rng, 3) as usize];
            let phi = &phis[uniform_below(&mut rng, 4) as usize];
            (gen_resampling(m, n, p, phi, rng.next_u64()).unwrap(), k)
        })
        .collect()
}

fn custom_weights(k: usize) -> WeightFunction {
    let all = [int(1), ratio(2, 3), ratio(1, 3)];
    WeightFunction::from_increments(all[..k].to_vec()).unwrap()
}

fn sequential_pairs(k: usize) -> Vec<(SequentialRule, RuleKind)> {
    let cc = WeightFunction::standard(WeightKind::Cc, k).unwrap();
    let pav = WeightFunction::standard(WeightKind::Pav, k).unwrap();
    vec![
        (SequentialRule::GreedyThiele(cc.clone()), RuleKind::GreedyThiele(cc)),
        (SequentialRule::GreedyThiele(pav.clone()), RuleKind::GreedyThiele(pav)),
        (
            SequentialRule::GreedyThiele(custom_weights(k)),
            RuleKind::GreedyThiele(custom_weights(k)),
        ),
        (SequentialRule::Phragmen, RuleKind::Phragmen),
        (SequentialRule::MeqsPhase1, RuleKind::MeqsPhase1),
        (SequentialRule::MeqsFull, RuleKind::MeqsFull),
    ]
}

#[test]
fn score_rules_match_oracle() {
    for (e, k) in corpus(300, 10) {
        for (scores, kind) in [(av_scores(&e), RuleKind::Av), (sav_scores(&e), RuleKind::Sav)] {
            let spec = RuleSpec::new(kind, k);
            let expected: Vec<Committee> = oracle_winning_committees(&spec, &e).unwrap().into_iter().collect();
            assert_eq!(
                enumerate_score_rule_committees(&scores, k, usize::MAX).unwrap(),
                expected
            );
            assert_eq!(
                score_rule_unique(&scores, k).unwrap().verdict,
                oracle_unique(&spec, &e).unwrap()
            );
        }
    }
}

#[test]
fn exact_thiele_matches_oracle() {
    for (e, k) in corpus(300, 11) {
        for w in [
            WeightFunction::standard(WeightKind::Cc, k).unwrap(),
            WeightFunction::standard(WeightKind::Pav, k).unwrap(),
            custom_weights(k),
        ] {
            let spec = RuleSpec::new(RuleKind::Thiele(w.clone()), k);
            let expected: Vec<Committee> = oracle_winning_committees(&spec, &e).unwrap().into_iter().collect();
            assert_eq!(enumerate_thiele_winning(&e, &w, k, usize::MAX).unwrap(), expected);
            let report = thiele_unique(&e, &w, k).unwrap();
            assert_eq!(report.verdict, oracle_unique(&spec, &e).unwrap());
            assert!(report.witnesses.iter().all(|c| expected.contains(c)));
        }
    }
}

#[test]
fn sequential_rules_match_oracle() {
    for (e, k) in corpus(300, 12) {
        for (rule, kind) in sequential_pairs(k) {
            let spec = RuleSpec::new(kind, k);
            let oracle = oracle_winning_committees(&spec, &e);
            let universes = enumerate_universes(&rule, &e, k, UniverseLimits::unlimited());
            match (oracle, universes) {
                (Ok(expected), Ok(set)) => {
                    assert!(!set.truncated);
                    assert_eq!(set.committees, expected, "{rule} k={k} {:?}", e.vote_lists());
                    let report = sequential_unique(&rule, &e, k).unwrap();
                    assert_eq!(report.verdict, oracle_unique(&spec, &e).unwrap());
                    assert!(report.witnesses.iter().all(|c| expected.contains(c)));
                    let (resolute, _) = run_resolute(&rule, &e, k).unwrap();
                    assert!(expected.contains(&resolute));
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                (a, b) => panic!("{rule} k={k} {:?}: oracle {a:?}, library {b:?}", e.vote_lists()),
            }
        }
    }
}

/// Walks every universe, checking that each tie set shares one merit and
/// that greedy merits never increase along a universe.
fn walk(e: &Election, k: usize, state: SequentialState<'_>, last_greedy: Option<Rational>) {
    let Ok(Some(ties)) = state.tie_set(e, k) else {
        return;
    };
    if state.chosen().len() >= k {
        return;
    }
    if ties.kind == StepKind::Greedy {
        if let Some(last) = &last_greedy {
            assert!(ties.merit <= *last, "merit rose from {last} to {}", ties.merit);
        }
    }
    for &c in &ties.candidates {
        let next = state.apply_choice(c, e, k).unwrap();
        walk(e, k, next, Some(ties.merit.clone()));
    }
}

#[test]
fn universes_are_well_formed() {
    for (e, k) in corpus(200, 13) {
        for (rule, _) in sequential_pairs(k) {
            walk(&e, k, SequentialState::new(&rule, &e, k).unwrap(), None);
        }
    }
}

fn election_strategy() -> impl Strategy<Value = (Election, usize)> {
    (2usize..=6, 1usize..=7).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(prop::collection::vec(any::<bool>(), m), n),
            1..=m.min(3),
        )
            .prop_map(move |(rows, k)| {
                let votes = rows.iter().map(|row| (0..m).filter(|&c| row[c]).collect()).collect();
                (Election::new(m, votes).unwrap(), k)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Diluting the equal-shares budget with empty voters until no approver
    // group can afford a candidate in the first phase leaves the completion
    // phase, which is Phragmén.
    #[test]
    fn diluted_equal_shares_is_phragmen((e, k) in election_strategy()) {
        let widest = (0..e.num_candidates()).map(|c| e.approvers(c).len()).max().unwrap();
        let n = e.num_voters();
        // Need k * widest / (n + extra) < 1.
        let extra = (k * widest + 1).saturating_sub(n);
        let padded = e.with_empty_votes(extra);
        let limits = UniverseLimits::unlimited();
        let full = enumerate_universes(&SequentialRule::MeqsFull, &padded, k, limits);
        let phragmen = enumerate_universes(&SequentialRule::Phragmen, &padded, k, limits);
        match (full, phragmen) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.committees, b.committees),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn resolute_winner_is_a_universe((e, k) in election_strategy()) {
        for (rule, _) in sequential_pairs(k) {
            if let Ok((w, _)) = run_resolute(&rule, &e, k) {
                let set = enumerate_universes(&rule, &e, k, UniverseLimits::unlimited()).unwrap();
                prop_assert!(set.committees.contains(&w));
            }
        }
    }

    #[test]
    fn oracle_verdict_matches_count((e, k) in election_strategy()) {
        for (_, kind) in sequential_pairs(k) {
            let spec = RuleSpec::new(kind, k);
            if let Ok(all) = oracle_winning_committees(&spec, &e) {
                let verdict = oracle_unique(&spec, &e).unwrap();
                prop_assert_eq!(verdict == Verdict::Unique, all.len() == 1);
                let sizes: BTreeSet<usize> = all.iter().map(|c| c.len()).collect();
                prop_assert!(sizes.iter().all(|&s| s <= k));
            }
        }
    }
}
