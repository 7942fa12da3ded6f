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

#![no_main]

use committee_ties::cultures::{parse_pabulib, serialize_pabulib};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pb) = parse_pabulib(text) {
        // Identifiers containing separators do not survive serialization.
        let plain = |s: &String| !s.contains([';', ',', '"', '\n', '\r', '\u{feff}']) && s.trim() == s && !s.is_empty();
        if pb.projects.iter().all(plain) && pb.voter_ids.iter().all(plain) {
            if let Ok(again) = parse_pabulib(&serialize_pabulib(&pb)) {
                assert_eq!(again.projects, pb.projects);
                assert_eq!(again.votes, pb.votes);
            }
        }
    }
});
