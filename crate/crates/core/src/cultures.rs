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

//! Seeded random elections and PabuLib ingestion.
//!
//! Every generator draws from one ChaCha8 stream seeded with the caller's
//! 64-bit seed, in a fixed order:
//!
//! * resampling: the central vote first, then voters in order, each
//!   considering candidates in index order;
//! * interval: voter points, then candidate points, then candidate radii;
//! * PabuLib subsampling: the voter draws, in order.

use crate::error::{parse_err, Error, Result};
use crate::model::Election;
use crate::rational::{format_rational, parse_rational, serde_rational, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `0..bound` by rejection sampling.
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Uniform double in `[0, 1)` with 53 random bits.
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli trial with exact rational probability: a uniform 64-bit draw
/// is compared against `floor(p * 2^64)`.
#[derive(Clone, Debug)]
pub struct Bernoulli {
    threshold: u128,
}

impl Bernoulli {
    pub fn new(p: &Rational) -> Result<Self> {
        check_probability("probability", p)?;
        let scaled = (p * Rational::from_integer(BigInt::from(1u128 << 64)))
            .floor()
            .to_integer();
        Ok(Bernoulli {
            threshold: scaled.to_u128().expect("p <= 1"),
        })
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> bool {
        u128::from(rng.next_u64()) < self.threshold
    }
}

fn check_probability(name: &str, p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::from_integer(1.into()) {
        return Err(Error::InvalidParams(format!(
            "{name} must lie in [0, 1], got {}",
            format_rational(p)
        )));
    }
    Ok(())
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams("m and n must be positive".into()));
    }
    Ok(())
}

/// Resampling model: a uniformly random central vote approving exactly
/// `floor(p m)` candidates; each voter copies each entry with probability
/// `1 - phi` and otherwise approves it with probability `p`.
pub fn gen_resampling(m: usize, n: usize, p: &Rational, phi: &Rational, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    check_probability("phi", phi)?;
    let approve = Bernoulli::new(p)?;
    let resample = Bernoulli::new(phi)?;
    let mut rng = rng_from_seed(seed);

    let central_size = (p * Rational::from_integer(BigInt::from(m)))
        .floor()
        .to_integer()
        .to_usize()
        .expect("bounded by m");
    let mut pool: Vec<usize> = (0..m).collect();
    for i in 0..central_size {
        let j = i + uniform_below(&mut rng, (m - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut central = vec![false; m];
    for &c in &pool[..central_size] {
        central[c] = true;
    }

    let votes = (0..n)
        .map(|_| {
            (0..m)
                .filter(|&c| {
                    if resample.sample(&mut rng) {
                        approve.sample(&mut rng)
                    } else {
                        central[c]
                    }
                })
                .collect()
        })
        .collect();
    Election::new(m, votes)
}

/// Standard normal draw by the Box-Muller transform (one draw per pair of uniforms).
fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = 1.0 - uniform_unit(rng);
    let u2 = uniform_unit(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// One-dimensional interval model: voters and candidates uniform on
/// `[0, 1]`, candidate radii normal with mean `radius` and standard
/// deviation `radius / 2` (clamped at zero). A voter approves a candidate
/// within its radius.
pub fn gen_interval(m: usize, n: usize, radius: f64, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "radius must be a nonnegative number, got {radius}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let voters: Vec<f64> = (0..n).map(|_| uniform_unit(&mut rng)).collect();
    let candidates: Vec<f64> = (0..m).map(|_| uniform_unit(&mut rng)).collect();
    let radii: Vec<f64> = (0..m)
        .map(|_| (radius + standard_normal(&mut rng) * radius / 2.0).max(0.0))
        .collect();
    let votes = voters
        .iter()
        .map(|&x| (0..m).filter(|&c| (x - candidates[c]).abs() <= radii[c]).collect())
        .collect();
    Election::new(m, votes)
}

/// Number of voters sampled when calibrating the interval radius.
pub const CALIBRATION_SAMPLES: usize = 10_000;

/// Finds a base radius giving `target` approvals per vote on average, by
/// bisection over a fixed sample of [`CALIBRATION_SAMPLES`] voters. The
/// result is within 5% of the target or an error is returned.
pub fn calibrate_interval_radius(m: usize, target: f64, seed: u64) -> Result<f64> {
    if !(target > 0.0 && target < m as f64) {
        return Err(Error::InvalidParams(format!("target approvals must lie in (0, {m})")));
    }
    let mean = |r: f64| -> Result<f64> {
        let e = gen_interval(m, CALIBRATION_SAMPLES, r, seed)?;
        Ok(e.votes().iter().map(|v| v.len()).sum::<usize>() as f64 / CALIBRATION_SAMPLES as f64)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while mean(hi)? < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidParams("cannot reach target approvals".into()));
        }
    }
    for _ in 0..50 {
        let mid = (lo + hi) / 2.0;
        if mean(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (r, got) = [lo, hi]
        .into_iter()
        .map(|r| mean(r).map(|g| (r, g)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .expect("two candidates");
    if (got - target).abs() > 0.05 * target {
        return Err(Error::InvalidParams(format!(
            "calibrated radius {r} gives {got} approvals, target {target}"
        )));
    }
    Ok(r)
}

/// A participatory-budgeting instance read from a PabuLib file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbInstance {
    pub meta: BTreeMap<String, String>,
    /// Project identifiers in declaration order.
    pub projects: Vec<String>,
    /// Declared costs. Parsed for validation only.
    pub costs: Vec<Option<Rational>>,
    pub voter_ids: Vec<String>,
    /// Approval sets as indices into `projects`.
    pub votes: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Meta,
    Projects,
    Votes,
}

fn split_row(line: &str) -> Vec<String> {
    line.split(';')
        .map(|f| f.trim().trim_matches('"').trim().to_string())
        .collect()
}

fn column(header: &[String], name: &str, line: usize) -> Result<usize> {
    header
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or_else(|| parse_err(line, format!("missing `{name}` column")))
}

/// Parses the semicolon-delimited PabuLib format with `META`, `PROJECTS`
/// and `VOTES` sections, each starting with a column-name row.
pub fn parse_pabulib(text: &str) -> Result<PbInstance> {
    let mut pb = PbInstance {
        meta: BTreeMap::new(),
        projects: Vec::new(),
        costs: Vec::new(),
        voter_ids: Vec::new(),
        votes: Vec::new(),
    };
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut section: Option<Section> = None;
    let mut header: Option<Vec<String>> = None;
    let mut seen = [false; 3];
    let mut raw_votes: Vec<(usize, String)> = Vec::new();
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        let next = match line.to_ascii_uppercase().as_str() {
            "META" => Some(Section::Meta),
            "PROJECTS" => Some(Section::Projects),
            "VOTES" => Some(Section::Votes),
            _ => None,
        };
        if let Some(next) = next {
            if seen[next as usize] {
                return Err(parse_err(line_no, format!("duplicate {next:?} section")));
            }
            seen[next as usize] = true;
            section = Some(next);
            header = None;
            continue;
        }
        let Some(current) = section else {
            return Err(parse_err(line_no, "data before the first section header"));
        };
        let row = split_row(line);
        let Some(cols) = header.as_ref() else {
            header = Some(row);
            continue;
        };
        match current {
            Section::Meta => {
                if row.len() >= 2 {
                    pb.meta.insert(row[0].clone(), row[1].clone());
                }
            }
            Section::Projects => {
                let id_col = column(cols, "project_id", line_no)?;
                let id = row
                    .get(id_col)
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| parse_err(line_no, "missing project id"))?
                    .clone();
                let cost = match cols.iter().position(|h| h.eq_ignore_ascii_case("cost")) {
                    Some(c) => match row.get(c).filter(|s| !s.is_empty()) {
                        Some(text) => {
                            Some(parse_rational(text).map_err(|_| parse_err(line_no, format!("bad cost `{text}`")))?)
                        }
                        None => None,
                    },
                    None => None,
                };
                if index.insert(id.clone(), pb.projects.len()).is_some() {
                    return Err(parse_err(line_no, format!("duplicate project `{id}`")));
                }
                pb.projects.push(id);
                pb.costs.push(cost);
            }
            Section::Votes => {
                let voter_col = column(cols, "voter_id", line_no)?;
                let vote_col = column(cols, "vote", line_no)?;
                pb.voter_ids.push(row.get(voter_col).cloned().unwrap_or_default());
                raw_votes.push((line_no, row.get(vote_col).cloned().unwrap_or_default()));
            }
        }
    }
    for (name, present) in [("META", seen[0]), ("PROJECTS", seen[1]), ("VOTES", seen[2])] {
        if !present {
            return Err(parse_err(last_line, format!("missing {name} section")));
        }
    }
    // Votes may precede projects in the file, so resolve ids last.
    for (line_no, raw) in raw_votes {
        let mut vote = Vec::new();
        for id in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let &p = index
                .get(id)
                .ok_or_else(|| parse_err(line_no, format!("vote references unknown project `{id}`")))?;
            if !vote.contains(&p) {
                vote.push(p);
            }
        }
        pb.votes.push(vote);
    }
    if pb.projects.is_empty() {
        return Err(parse_err(last_line, "no projects"));
    }
    if pb.votes.is_empty() {
        return Err(parse_err(last_line, "no votes"));
    }
    Ok(pb)
}

/// Writes an instance back in PabuLib form (costs omitted when unknown).
pub fn serialize_pabulib(pb: &PbInstance) -> String {
    let mut out = String::from("META\nkey;value\n");
    for (k, v) in &pb.meta {
        out.push_str(&format!("{k};{v}\n"));
    }
    out.push_str("PROJECTS\nproject_id;cost\n");
    for (id, cost) in pb.projects.iter().zip(&pb.costs) {
        let cost = cost.as_ref().map(format_rational).unwrap_or_default();
        out.push_str(&format!("{id};{cost}\n"));
    }
    out.push_str("VOTES\nvoter_id;vote\n");
    for (voter, vote) in pb.voter_ids.iter().zip(&pb.votes) {
        let ids: Vec<&str> = vote.iter().map(|&p| pb.projects[p].as_str()).collect();
        out.push_str(&format!("{voter};{}\n", ids.join(",")));
    }
    out
}

/// Project indices ordered by approval count, ties by declaration order.
pub fn projects_by_approval(pb: &PbInstance) -> Vec<usize> {
    let mut counts = vec![0usize; pb.projects.len()];
    for vote in &pb.votes {
        for &p in vote {
            counts[p] += 1;
        }
    }
    let mut order: Vec<usize> = (0..pb.projects.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

/// Keeps the `m` most-approved projects (candidate `i` is the `i`-th most
/// approved) and draws `n` voters with replacement among those approving at
/// least one kept project.
pub fn subsample_pabulib(pb: &PbInstance, m: usize, n: usize, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    if pb.projects.len() < m {
        return Err(Error::InvalidParams(format!(
            "instance has {} projects, {m} requested",
            pb.projects.len()
        )));
    }
    let order = projects_by_approval(pb);
    let mut rank = vec![None; pb.projects.len()];
    for (r, &p) in order[..m].iter().enumerate() {
        rank[p] = Some(r);
    }
    let eligible: Vec<Vec<usize>> = pb
        .votes
        .iter()
        .map(|vote| vote.iter().filter_map(|&p| rank[p]).collect::<Vec<_>>())
        .filter(|vote| !vote.is_empty())
        .collect();
    if eligible.is_empty() {
        return Err(Error::InvalidParams("no voter approves a kept project".into()));
    }
    let mut rng = rng_from_seed(seed);
    let votes = (0..n)
        .map(|_| eligible[uniform_below(&mut rng, eligible.len() as u64) as usize].clone())
        .collect();
    Election::new(m, votes)
}

/// Seed used for interval-radius calibration, so that a configuration
/// names one radius regardless of its master seed.
pub const CALIBRATION_SEED: u64 = 0x0005_eed0_ca1b;

/// Culture parameters as they appear in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "culture", rename_all = "lowercase")]
pub enum Culture {
    Resampling {
        #[serde(with = "serde_rational")]
        p: Rational,
        #[serde(with = "serde_rational")]
        phi: Rational,
    },
    /// Give exactly one of `radius` and `target_approvals`; the latter is
    /// calibrated for the configured number of candidates.
    Interval {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target_approvals: Option<f64>,
    },
    /// Each election subsamples one instance chosen at random from `sources`.
    Pabulib {
        sources: Vec<PathBuf>,
        #[serde(default)]
        selection_seed: u64,
    },
}

/// A culture ready to generate elections: files loaded, radius calibrated.
#[derive(Clone, Debug)]
pub enum Sampler {
    Resampling {
        p: Rational,
        phi: Rational,
    },
    Interval {
        radius: f64,
    },
    Pabulib {
        instances: Vec<PbInstance>,
        selection_seed: u64,
    },
}

impl Culture {
    pub fn prepare(&self, m: usize) -> Result<Sampler> {
        match self {
            Culture::Resampling { p, phi } => {
                check_probability("p", p)?;
                check_probability("phi", phi)?;
                Ok(Sampler::Resampling {
                    p: p.clone(),
                    phi: phi.clone(),
                })
            }
            Culture::Interval {
                radius,
                target_approvals,
            } => match (radius, target_approvals) {
                (Some(r), None) => {
                    if !(r.is_finite() && *r >= 0.0) {
                        return Err(Error::InvalidParams(format!(
                            "radius must be a nonnegative number, got {r}"
                        )));
                    }
                    Ok(Sampler::Interval { radius: *r })
                }
                (None, Some(target)) => Ok(Sampler::Interval {
                    radius: calibrate_interval_radius(m, *target, CALIBRATION_SEED)?,
                }),
                _ => Err(Error::InvalidParams(
                    "interval culture needs exactly one of radius and target_approvals".into(),
                )),
            },
            Culture::Pabulib {
                sources,
                selection_seed,
            } => {
                if sources.is_empty() {
                    return Err(Error::InvalidParams("pabulib culture needs at least one source".into()));
                }
                let instances = sources
                    .iter()
                    .map(|path| {
                        let text =
                            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                        let pb = parse_pabulib(&text)
                            .map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
                        if pb.projects.len() < m {
                            return Err(Error::InvalidParams(format!(
                                "{}: {} projects, {m} requested",
                                path.display(),
                                pb.projects.len()
                            )));
                        }
                        Ok(pb)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Sampler::Pabulib {
                    instances,
                    selection_seed: *selection_seed,
                })
            }
        }
    }
}

impl Sampler {
    pub fn generate(&self, m: usize, n: usize, seed: u64) -> Result<Election> {
        match self {
            Sampler::Resampling { p, phi } => gen_resampling(m, n, p, phi, seed),
            Sampler::Interval { radius } => gen_interval(m, n, *radius, seed),
            Sampler::Pabulib {
                instances,
                selection_seed,
            } => {
                let mut rng = rng_from_seed(seed ^ selection_seed.rotate_left(32));
                let pick = uniform_below(&mut rng, instances.len() as u64) as usize;
                subsample_pabulib(&instances[pick], m, n, seed)
            }
        }
    }

    /// One-line description of the effective parameters.
    pub fn describe(&self) -> String {
        match self {
            Sampler::Resampling { p, phi } => {
                format!("resampling p={} phi={}", format_rational(p), format_rational(phi))
            }
            Sampler::Interval { radius } => format!("interval radius={radius} (empty votes kept)"),
            Sampler::Pabulib { instances, .. } => format!("pabulib instances={}", instances.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const FIXTURE: &str = "META
key;value
description;fixture
PROJECTS
project_id;cost;name
a;100;Park
b;250;Library
c;75;Bikes
d;10;Bench
VOTES
voter_id;age;vote
1;30;a,b
2;41;b
3;22;b,c
4;35;a,b,d
5;50;c
";

    #[test]
    fn resampling_without_noise_copies_the_central_vote() {
        let e = gen_resampling(10, 20, &ratio(1, 2), &int(0), 7).unwrap();
        let first = e.vote(0).clone();
        assert_eq!(first.len(), 5);
        assert!(e.votes().iter().all(|v| *v == first));
    }

    #[test]
    fn full_resampling_with_p_one_approves_everyone() {
        let e = gen_resampling(6, 10, &int(1), &int(1), 3).unwrap();
        assert!(e.votes().iter().all(|v| v.len() == 6));
    }

    #[test]
    fn central_vote_size_is_floor_pm() {
        for seed in 0..20 {
            let e = gen_resampling(10, 3, &ratio(1, 2), &int(0), seed).unwrap();
            assert_eq!(e.vote(0).len(), 5);
            let e = gen_resampling(7, 3, &ratio(1, 2), &int(0), seed).unwrap();
            assert_eq!(e.vote(0).len(), 3);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_resampling(30, 50, &ratio(1, 6), &ratio(3, 4), 42).unwrap();
        let b = gen_resampling(30, 50, &ratio(1, 6), &ratio(3, 4), 42).unwrap();
        assert_eq!(a, b);
        let c = gen_resampling(30, 50, &ratio(1, 6), &ratio(3, 4), 43).unwrap();
        assert_ne!(a, c);
        assert_eq!(
            gen_interval(30, 50, 0.1, 9).unwrap(),
            gen_interval(30, 50, 0.1, 9).unwrap()
        );
    }

    #[test]
    fn resampling_marginals_converge_to_p() {
        // phi = 1: each entry is Bernoulli(p) independently.
        let n = 10_000;
        let p = ratio(3, 10);
        let e = gen_resampling(5, n, &p, &int(1), 11).unwrap();
        let sigma = (n as f64 * 0.3 * 0.7).sqrt();
        for c in 0..5 {
            let hits = e.approvers(c).len() as f64;
            assert!((hits - 0.3 * n as f64).abs() < 3.0 * sigma, "candidate {c}: {hits}");
        }
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(gen_resampling(5, 5, &ratio(3, 2), &int(0), 0).is_err());
        assert!(gen_resampling(5, 5, &int(0), &int(-1), 0).is_err());
        assert!(gen_interval(5, 5, -1.0, 0).is_err());
    }

    #[test]
    fn interval_extremes() {
        let e = gen_interval(8, 30, 0.0, 1).unwrap();
        assert!(e.votes().iter().all(|v| v.is_empty()));
        // Radii of at least 1 cover the whole unit interval; with mean 50 and
        // deviation 25 a clamped draw below 1 is a 4-sigma event.
        let e = gen_interval(8, 30, 50.0, 1).unwrap();
        assert!(e.votes().iter().all(|v| v.len() == 8));
    }

    #[test]
    fn calibration_hits_target() {
        let r = calibrate_interval_radius(30, 5.0, 1).unwrap();
        let e = gen_interval(30, 20_000, r, 99).unwrap();
        let mean = e.votes().iter().map(|v| v.len()).sum::<usize>() as f64 / 20_000.0;
        assert!((mean - 5.0).abs() < 0.5, "mean {mean} at r {r}");
    }

    #[test]
    fn parses_fixture() {
        let pb = parse_pabulib(FIXTURE).unwrap();
        assert_eq!(pb.projects, vec!["a", "b", "c", "d"]);
        assert_eq!(pb.costs[1], Some(int(250)));
        assert_eq!(pb.votes, vec![vec![0, 1], vec![1], vec![1, 2], vec![0, 1, 3], vec![2]]);
        assert_eq!(pb.meta["description"], "fixture");
        assert_eq!(parse_pabulib(&serialize_pabulib(&pb)).unwrap().votes, pb.votes);
    }

    #[test]
    fn pabulib_errors() {
        let bad = FIXTURE.replace("5;50;c", "5;50;z");
        match parse_pabulib(&bad) {
            Err(Error::Parse { line: 16, message }) => assert!(message.contains("unknown project")),
            other => panic!("{other:?}"),
        }
        assert!(parse_pabulib("META\nkey;value\nPROJECTS\nproject_id;cost\na;1\n").is_err());
        assert!(parse_pabulib("VOTES\nvoter_id;vote\n1;a\n").is_err());
    }

    #[test]
    fn top_projects_by_hand_count() {
        // Approval counts: a 2, b 4, c 2, d 1. The 3rd-largest count is 2,
        // with a declared before c.
        let pb = parse_pabulib(FIXTURE).unwrap();
        assert_eq!(projects_by_approval(&pb), vec![1, 0, 2, 3]);
        let e = subsample_pabulib(&pb, 2, 50, 5).unwrap();
        // Candidate 0 is b, candidate 1 is a; voter 5 (only c) is ineligible.
        for vote in e.votes() {
            assert!(!vote.is_empty());
            assert!(vote.iter().all(|c| c < 2));
        }
    }

    #[test]
    fn subsample_edge_cases() {
        let pb = parse_pabulib(FIXTURE).unwrap();
        let e = subsample_pabulib(&pb, 1, 20, 1).unwrap();
        assert!(e.votes().iter().all(|v| v.to_vec() == vec![0]));
        let e = subsample_pabulib(&pb, 4, 200, 1).unwrap();
        let originals: Vec<Vec<usize>> = {
            let order = projects_by_approval(&pb);
            pb.votes
                .iter()
                .map(|v| {
                    let mut r: Vec<usize> = v.iter().map(|p| order.iter().position(|q| q == p).unwrap()).collect();
                    r.sort();
                    r
                })
                .collect()
        };
        assert!(e.vote_lists().iter().all(|v| originals.contains(v)));
        assert!(subsample_pabulib(&pb, 5, 10, 1).is_err());
    }

    #[test]
    fn culture_config_round_trip() {
        let c: Culture = serde_json::from_str(r#"{"culture":"resampling","p":"1/6","phi":"3/4"}"#).unwrap();
        assert_eq!(
            c,
            Culture::Resampling {
                p: ratio(1, 6),
                phi: ratio(3, 4)
            }
        );
        assert_eq!(
            serde_json::from_str::<Culture>(&serde_json::to_string(&c).unwrap()).unwrap(),
            c
        );
        let s = c.prepare(30).unwrap();
        assert_eq!(
            s.generate(30, 5, 1).unwrap(),
            gen_resampling(30, 5, &ratio(1, 6), &ratio(3, 4), 1).unwrap()
        );
        let bad = Culture::Interval {
            radius: Some(0.1),
            target_approvals: Some(3.0),
        };
        assert!(bad.prepare(10).is_err());
    }

    #[test]
    fn pabulib_sampler_reads_files() {
        let dir = std::env::temp_dir().join(format!("pb-sampler-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("x.pb");
        std::fs::write(&path, FIXTURE).unwrap();
        let c = Culture::Pabulib {
            sources: vec![path.clone()],
            selection_seed: 0,
        };
        let e = c.prepare(3).unwrap().generate(3, 10, 4).unwrap();
        assert_eq!(e.num_voters(), 10);
        assert!(c.prepare(5).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
