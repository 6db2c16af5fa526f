/* Copyright 2026 The Lighthouse Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lighthouse/data/types.hpp"

namespace lighthouse {

// Annotation JSONL, one object per line, QVHighlights field names:
//   qid, query, vid, duration, relevant_windows, relevant_clip_ids,
//   saliency_scores, and an optional TVSum `domain`.
//
// Which fields are required depends on `kind`. Malformed JSON raises
// ParseError naming the 1-based line; invariant violations raise
// ValidationError naming the query id and field. Blank lines are skipped.
std::vector<DatasetSample> parse_annotations(const std::filesystem::path& path,
                                             DatasetKind kind);
std::vector<DatasetSample> parse_annotations_text(const std::string& text,
                                                  DatasetKind kind);

// Checks one sample against the invariants of `kind`.
void validate_sample(const DatasetSample& sample, DatasetKind kind);

// Canonical single-line form: fixed key order, shortest round-trip floats.
std::string serialize_annotation(const DatasetSample& sample);
void write_annotations(const std::vector<DatasetSample>& samples,
                       const std::filesystem::path& path);

}  // namespace lighthouse
