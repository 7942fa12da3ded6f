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

//! Replays the checked-in fuzz seeds through the parsers on the stable
//! toolchain, with the same round-trip checks as the fuzz targets.

use committee_ties::cultures::{parse_pabulib, serialize_pabulib};
use committee_ties::experiments::ExperimentConfig;
use committee_ties::gadgets::{parse_graph, serialize_graph};
use committee_ties::rational::{format_rational, parse_rational};
use committee_ties::{parse_election, serialize_election};
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (path.display().to_string(), std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn election_seeds() {
    let mut parsed = 0;
    for (_, text) in seeds("parse_election") {
        if let Ok(e) = parse_election(&text) {
            assert_eq!(parse_election(&serialize_election(&e)).unwrap(), e);
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn pabulib_seeds() {
    for (name, text) in seeds("parse_pabulib") {
        let pb = parse_pabulib(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_pabulib(&serialize_pabulib(&pb)).unwrap();
        assert_eq!(again.projects, pb.projects);
        assert_eq!(again.votes, pb.votes);
    }
}

#[test]
fn graph_seeds() {
    for (name, text) in seeds("parse_graph") {
        let g = parse_graph(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }
}

#[test]
fn rational_seeds() {
    let mut rejected = 0;
    for (_, text) in seeds("parse_rational") {
        match parse_rational(&text) {
            Ok(value) => assert_eq!(parse_rational(&format_rational(&value)).unwrap(), value),
            Err(_) => rejected += 1,
        }
    }
    // Exponent notation is not accepted.
    assert!(rejected >= 1);
}

#[test]
fn config_seeds() {
    for (name, text) in seeds("experiment_config") {
        let cfg = ExperimentConfig::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap(),
            cfg
        );
    }
}

#[test]
fn oversized_inputs_do_not_allocate() {
    assert!(parse_election("m 10000000000000\nn 1\nv\n").is_err());
    assert!(parse_graph("p 10000000000000 0\n").is_err());
    let huge = r#"{"m":3,"k":1,"culture":{"culture":"resampling","p":"1/2","phi":"1"},"rules":["av"],
        "n_grid":{"start":1,"stop":18446744073709551615,"step":1},"repetitions":1,"master_seed":0}"#;
    assert!(ExperimentConfig::from_json(huge).is_ok());
}
