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

//! `ties`: command-line front end for committee-ties.

use clap::{Args, Parser, Subcommand, ValueEnum};
use committee_ties::cultures::{
    calibrate_interval_radius, gen_interval, gen_resampling, parse_pabulib, subsample_pabulib, CALIBRATION_SEED,
};
use committee_ties::experiments::{
    count_winning, emit_csv, emit_diagnostic_csv, enumerate_winning, evaluate_rule, run_basic_experiment,
    ExperimentConfig, RuleName,
};
use committee_ties::gadgets::{
    count_independent_sets, count_matchings, gen_is_gadget, gen_matching_gadget, parse_graph,
};
use committee_ties::rational::{format_rational, parse_rational};
use committee_ties::scores::{av_scores, sav_scores};
use committee_ties::sequential::run_resolute;
use committee_ties::simple_rules::score_rule_tally;
use committee_ties::thiele_exact::thiele_optimum;
use committee_ties::{
    parse_election, serialize_election, Committee, Election, Error, Rational, UniqueReport, WeightFunction, WeightKind,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 20_240_101;
const EXIT_DOMAIN: u8 = 1;
const EXIT_TIED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ties",
    version,
    about = "Winning committees and ties for approval-based multiwinner rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RuleArgs {
    /// av, sav, ccav-exact, pav-exact, greedy-pav, greedy-ccav, phragmen, meqs-phase1, meqs-full
    #[arg(long, value_parser = parse_rule)]
    rule: RuleName,
    /// Committee size.
    #[arg(short)]
    k: usize,
    /// Election file.
    election: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CultureArg {
    Resampling,
    Interval,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random election.
    Gen {
        #[arg(long, value_enum)]
        culture: CultureArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Resampling approval probability, e.g. 1/6.
        #[arg(long, value_parser = parse_rational_arg)]
        p: Option<Rational>,
        /// Resampling probability, e.g. 3/4.
        #[arg(long, value_parser = parse_rational_arg)]
        phi: Option<Rational>,
        /// Interval base radius.
        #[arg(long, conflicts_with = "target_approvals")]
        radius: Option<f64>,
        /// Interval: calibrate the radius to this mean number of approvals.
        #[arg(long)]
        target_approvals: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Run a rule once, breaking ties by lowest index.
    Eval(RuleArgs),
    /// Decide whether the winning committee is unique.
    Unique {
        #[command(flatten)]
        args: RuleArgs,
        /// Search budget for sequential rules.
        #[arg(long)]
        max_states: Option<u64>,
    },
    /// Count winning committees.
    Count {
        #[command(flatten)]
        args: RuleArgs,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
    },
    /// List winning committees.
    Enumerate {
        #[command(flatten)]
        args: RuleArgs,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Build test elections from a graph.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Run a tie-frequency experiment from a JSON config and print CSV.
    Experiment {
        config: PathBuf,
        /// Override the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Add a column counting cells that hit the search budget.
        #[arg(long)]
        diagnostics: bool,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Subsample a PabuLib file into an election.
    PabulibSample {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Election whose PAV-style optimum count equals the number of size-k
    /// independent sets of the graph plus k universal vertices.
    Is {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// pav, cc, or comma-separated increments such as 1,1/2,1/3.
        #[arg(long, default_value = "pav")]
        weights: String,
        #[arg(short)]
        o: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Elections E and E_p; writes PREFIX.appr and PREFIX_p.appr.
    Matching {
        graph: PathBuf,
        /// Output prefix.
        #[arg(short)]
        o: PathBuf,
        /// Also report the number of matchings of this size.
        #[arg(short)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_rule(s: &str) -> Result<RuleName, String> {
    match s {
        "ccav" | "cc" => Ok(RuleName::CcavExact),
        "pav" => Ok(RuleName::PavExact),
        _ => s.parse().map_err(|e: Error| e.to_string()),
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_election(path: &Path) -> Result<Election, Error> {
    parse_election(&read(path)?).map_err(|e| Error::InvalidElection(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn committee_json(c: &Committee) -> Value {
    json!(c.members())
}

fn report_json(rule: RuleName, k: usize, report: &UniqueReport) -> Value {
    json!({
        "rule": rule.as_str(),
        "k": k,
        "verdict": report.verdict.to_string(),
        "witnesses": report.witnesses.iter().map(committee_json).collect::<Vec<_>>(),
        "optimum": report.optimum.as_ref().map(format_rational),
        "nodes_explored": report.nodes_explored,
        "truncated": report.truncated,
    })
}

fn weights_arg(spec: &str, k: usize) -> Result<WeightFunction, Error> {
    match spec {
        "pav" | "cc" | "ccav" | "av" => WeightFunction::standard(spec.parse::<WeightKind>()?, k),
        _ => {
            let increments = spec
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            WeightFunction::from_increments(increments)
        }
    }
}

/// Resolute run: a winner and a human-readable trace.
fn eval(rule: RuleName, election: &Election, k: usize) -> Result<(Committee, Vec<String>, Value), Error> {
    match rule {
        RuleName::Av | RuleName::Sav => {
            let scores = if rule == RuleName::Av {
                av_scores(election)
            } else {
                sav_scores(election)
            };
            let tally = score_rule_tally(&scores, k)?;
            let winner: Committee = tally
                .above
                .iter()
                .chain(&tally.tied[..tally.open_seats()])
                .copied()
                .collect();
            let line = format!(
                "threshold {}, above {:?}, tied {:?}",
                format_rational(&tally.threshold),
                tally.above,
                tally.tied
            );
            let extra = json!({
                "threshold": format_rational(&tally.threshold),
                "above": tally.above,
                "tied": tally.tied,
            });
            Ok((winner, vec![line], extra))
        }
        RuleName::CcavExact | RuleName::PavExact => {
            let kind = if rule == RuleName::CcavExact {
                WeightKind::Cc
            } else {
                WeightKind::Pav
            };
            let (score, winner) = thiele_optimum(election, &WeightFunction::standard(kind, k)?, k)?;
            Ok((
                winner,
                vec![format!("score {}", format_rational(&score))],
                json!({ "score": format_rational(&score) }),
            ))
        }
        _ => {
            let seq = rule.sequential_rule(k)?.expect("sequential rule");
            let (winner, trace) = run_resolute(&seq, election, k)?;
            let lines = trace
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    format!(
                        "step {}: {:?} tie set {:?}, merit {}",
                        i + 1,
                        t.kind,
                        t.candidates,
                        format_rational(&t.merit)
                    )
                })
                .collect();
            let steps: Vec<Value> = trace
                .iter()
                .map(|t| json!({ "kind": format!("{:?}", t.kind), "candidates": t.candidates, "merit": format_rational(&t.merit) }))
                .collect();
            Ok((winner, lines, json!({ "trace": steps })))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            culture,
            m,
            n,
            p,
            phi,
            radius,
            target_approvals,
            seed,
            o,
        } => {
            let election = match culture {
                CultureArg::Resampling => {
                    let (Some(p), Some(phi)) = (p, phi) else {
                        return Err(Error::InvalidParams("resampling needs --p and --phi".into()));
                    };
                    gen_resampling(m, n, &p, &phi, seed)?
                }
                CultureArg::Interval => {
                    let r = match (radius, target_approvals) {
                        (Some(r), _) => r,
                        (None, Some(target)) => {
                            let r = calibrate_interval_radius(m, target, CALIBRATION_SEED)?;
                            eprintln!("calibrated radius {r}");
                            r
                        }
                        (None, None) => {
                            return Err(Error::InvalidParams(
                                "interval needs --radius or --target-approvals".into(),
                            ))
                        }
                    };
                    gen_interval(m, n, r, seed)?
                }
            };
            write_out(o.as_deref(), &serialize_election(&election))?;
            Ok(0)
        }
        Command::Eval(args) => {
            let election = load_election(&args.election)?;
            let (winner, lines, extra) = eval(args.rule, &election, args.k)?;
            if args.json {
                let mut doc = json!({ "rule": args.rule.as_str(), "k": args.k, "committee": committee_json(&winner) });
                if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, extra) {
                    doc.extend(extra);
                }
                println!("{doc}");
            } else {
                println!("{winner}");
                for line in lines {
                    println!("{line}");
                }
            }
            Ok(0)
        }
        Command::Unique { args, max_states } => {
            let election = load_election(&args.election)?;
            let report = evaluate_rule(args.rule, &election, args.k, max_states.unwrap_or(u64::MAX))?;
            if args.json {
                println!("{}", report_json(args.rule, args.k, &report));
            } else {
                println!("{}", report.verdict);
                for w in &report.witnesses {
                    println!("{w}");
                }
                if report.truncated {
                    println!("search budget exhausted; verdict is not proven");
                }
            }
            Ok(if report.is_unique() { 0 } else { EXIT_TIED })
        }
        Command::Count { args, limit } => {
            let election = load_election(&args.election)?;
            let count = count_winning(args.rule, &election, args.k, limit)?;
            if args.json {
                println!(
                    "{}",
                    json!({ "rule": args.rule.as_str(), "k": args.k, "count": count.to_string() })
                );
            } else {
                println!("{count}");
            }
            Ok(0)
        }
        Command::Enumerate { args, limit } => {
            let election = load_election(&args.election)?;
            let all = enumerate_winning(args.rule, &election, args.k, limit)?;
            if args.json {
                let list: Vec<Value> = all.iter().map(committee_json).collect();
                println!(
                    "{}",
                    json!({ "rule": args.rule.as_str(), "k": args.k, "committees": list })
                );
            } else {
                for c in &all {
                    println!("{c}");
                }
            }
            Ok(0)
        }
        Command::Gadget(GadgetCommand::Is {
            graph,
            k,
            weights,
            o,
            json,
        }) => {
            let graph = parse_graph(&read(&graph)?)?;
            let w = weights_arg(&weights, k)?;
            let gadget = gen_is_gadget(&graph, k, &w)?;
            let expected = count_independent_sets(&gadget.augmented, k)?;
            let has_is = count_independent_sets(&graph, k)? > 0;
            let text = serialize_election(&gadget.election);
            let summary = json!({
                "committee_size": gadget.committee_size,
                "dummies": gadget.dummies,
                "candidates": gadget.election.num_candidates(),
                "voters": gadget.election.num_voters(),
                "winning_committees": expected,
                "unique": !has_is,
            });
            match &o {
                Some(path) => write_out(Some(path), &text)?,
                None if !json => print!("{text}"),
                None => {}
            }
            if json {
                println!("{summary}");
            } else {
                eprintln!(
                    "committee size {}, {} winning committees, {}",
                    gadget.committee_size,
                    expected,
                    if has_is { "tied" } else { "unique" }
                );
            }
            Ok(0)
        }
        Command::Gadget(GadgetCommand::Matching { graph, o, k, json }) => {
            let graph = parse_graph(&read(&graph)?)?;
            let (plain, with_p) = gen_matching_gadget(&graph)?;
            let prefix = o.to_string_lossy().into_owned();
            write_out(Some(Path::new(&format!("{prefix}.appr"))), &serialize_election(&plain))?;
            write_out(
                Some(Path::new(&format!("{prefix}_p.appr"))),
                &serialize_election(&with_p),
            )?;
            let matchings = k.map(|k| count_matchings(&graph, k)).transpose()?;
            let summary = json!({
                "candidates": plain.num_candidates(),
                "voters": plain.num_voters(),
                "p": with_p.num_candidates() - 1,
                "matchings": matchings,
            });
            if json {
                println!("{summary}");
            } else if let (Some(k), Some(count)) = (k, matchings) {
                println!("{count} matchings of size {k}");
            }
            Ok(0)
        }
        Command::Experiment {
            config,
            workers,
            diagnostics,
            o,
        } => {
            let mut cfg = ExperimentConfig::from_json(&read(&config)?)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let table = run_basic_experiment(&cfg)?;
            eprintln!("culture: {}", table.culture);
            let csv = if diagnostics {
                emit_diagnostic_csv(&table)
            } else {
                emit_csv(&table)
            };
            write_out(o.as_deref(), &csv)?;
            Ok(0)
        }
        Command::PabulibSample { file, m, n, seed, o } => {
            let pb = parse_pabulib(&read(&file)?)?;
            let election = subsample_pabulib(&pb, m, n, seed)?;
            write_out(o.as_deref(), &serialize_election(&election))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
