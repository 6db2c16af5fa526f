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

#include "lighthouse/data/annotations.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lighthouse/errors.hpp"

namespace lighthouse {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(std::int64_t qid, const std::string& field,
                       const std::string& what) {
  throw ValidationError("query " + std::to_string(qid) + ": field '" + field +
                        "': " + what);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double as_number(const json& value, std::int64_t qid, const std::string& field) {
  if (!value.is_number()) fail(qid, field, "expected a number");
  return value.get<double>();
}

DatasetSample sample_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) parse_fail(line, "expected a JSON object");
  if (!obj.contains("qid") || !obj["qid"].is_number_integer()) {
    parse_fail(line, "missing integer field 'qid'");
  }
  DatasetSample s;
  s.query_id = obj["qid"].get<std::int64_t>();
  const auto qid = s.query_id;

  if (!obj.contains("query") || !obj["query"].is_string()) {
    fail(qid, "query", "missing or not a string");
  }
  s.query_text = obj["query"].get<std::string>();
  if (!obj.contains("vid") || !obj["vid"].is_string()) {
    fail(qid, "vid", "missing or not a string");
  }
  s.video_id = obj["vid"].get<std::string>();
  if (!obj.contains("duration")) fail(qid, "duration", "missing");
  s.duration_s = as_number(obj["duration"], qid, "duration");

  if (obj.contains("relevant_windows")) {
    const auto& windows = obj["relevant_windows"];
    if (!windows.is_array()) fail(qid, "relevant_windows", "expected a list");
    for (const auto& w : windows) {
      if (!w.is_array() || w.size() != 2) {
        fail(qid, "relevant_windows", "each window must be [start, end]");
      }
      s.gt_moments.push_back({as_number(w[0], qid, "relevant_windows"),
                              as_number(w[1], qid, "relevant_windows")});
    }
  }

  const bool has_ids = obj.contains("relevant_clip_ids");
  const bool has_scores = obj.contains("saliency_scores");
  if (has_ids != has_scores) {
    fail(qid, has_ids ? "saliency_scores" : "relevant_clip_ids",
         "relevant_clip_ids and saliency_scores must appear together");
  }
  if (has_ids) {
    SaliencyAnnotation sal;
    const auto& ids = obj["relevant_clip_ids"];
    const auto& scores = obj["saliency_scores"];
    if (!ids.is_array()) fail(qid, "relevant_clip_ids", "expected a list");
    if (!scores.is_array()) fail(qid, "saliency_scores", "expected a list");
    for (const auto& id : ids) {
      if (!id.is_number_integer()) fail(qid, "relevant_clip_ids", "expected integers");
      sal.clip_ids.push_back(id.get<int>());
    }
    for (const auto& row : scores) {
      if (!row.is_array()) fail(qid, "saliency_scores", "expected a list per clip");
      std::vector<int> labels;
      for (const auto& v : row) {
        if (!v.is_number_integer()) {
          fail(qid, "saliency_scores", "scores must be integers in 1..5");
        }
        labels.push_back(v.get<int>());
      }
      sal.scores.push_back(std::move(labels));
    }
    s.saliency = std::move(sal);
  }

  if (obj.contains("domain")) {
    if (!obj["domain"].is_string()) fail(qid, "domain", "expected a string");
    s.domain_tag = obj["domain"].get<std::string>();
  }
  return s;
}

}  // namespace

void validate_sample(const DatasetSample& s, DatasetKind kind) {
  const auto qid = s.query_id;
  if (!(s.duration_s > 0.0) || !std::isfinite(s.duration_s)) {
    fail(qid, "duration", "must be a positive finite number");
  }
  for (const auto& m : s.gt_moments) {
    if (!std::isfinite(m.start_s) || !std::isfinite(m.end_s)) {
      fail(qid, "relevant_windows", "non-finite timestamp");
    }
    if (m.start_s < 0.0) fail(qid, "relevant_windows", "start_s must be >= 0");
    if (!(m.start_s < m.end_s)) fail(qid, "relevant_windows", "start_s < end_s violated");
    if (m.end_s > s.duration_s) {
      fail(qid, "relevant_windows", "end_s exceeds video duration");
    }
  }

  const bool needs_moments = kind != DatasetKind::kHd;
  const bool needs_saliency = kind != DatasetKind::kMr;
  if (needs_moments && s.gt_moments.empty()) {
    fail(qid, "relevant_windows", "at least one moment required for this dataset kind");
  }
  if (!needs_moments && !s.gt_moments.empty()) {
    fail(qid, "relevant_windows", "HD samples carry no moments");
  }
  if (needs_saliency && !s.saliency) {
    fail(qid, "saliency_scores", "saliency labels required for this dataset kind");
  }
  if (!needs_saliency && s.saliency) {
    fail(qid, "saliency_scores", "MR samples carry no saliency labels");
  }

  if (s.saliency) {
    const auto& sal = *s.saliency;
    if (sal.clip_ids.size() != sal.scores.size()) {
      fail(qid, "saliency_scores", "one score row per relevant clip id required");
    }
    for (std::size_t i = 0; i < sal.clip_ids.size(); ++i) {
      if (sal.clip_ids[i] < 0) fail(qid, "relevant_clip_ids", "clip ids must be >= 0");
      if (i > 0 && sal.clip_ids[i] <= sal.clip_ids[i - 1]) {
        fail(qid, "relevant_clip_ids", "clip ids must be strictly increasing");
      }
    }
    const std::size_t annotators = sal.annotator_count();
    for (const auto& row : sal.scores) {
      if (row.empty() || row.size() != annotators) {
        fail(qid, "saliency_scores", "every clip needs the same non-zero annotator count");
      }
      for (int v : row) {
        if (v < 1 || v > 5) fail(qid, "saliency_scores", "score outside 1..5");
      }
    }
  }
  if (s.domain_tag && s.domain_tag->empty()) fail(qid, "domain", "empty domain tag");
}

std::vector<DatasetSample> parse_annotations_text(const std::string& text,
                                                  DatasetKind kind) {
  std::vector<DatasetSample> samples;
  std::set<std::int64_t> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(line_no, std::string("malformed JSON: ") + e.what());
    }
    DatasetSample s = sample_from_json(obj, line_no);
    validate_sample(s, kind);
    if (!seen.insert(s.query_id).second) {
      fail(s.query_id, "qid", "duplicate query id in split");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<DatasetSample> parse_annotations(const std::filesystem::path& path,
                                             DatasetKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations_text(buf.str(), kind);
}

std::string serialize_annotation(const DatasetSample& s) {
  ordered_json obj;
  obj["qid"] = s.query_id;
  obj["query"] = s.query_text;
  obj["vid"] = s.video_id;
  obj["duration"] = s.duration_s;
  if (!s.gt_moments.empty()) {
    ordered_json windows = ordered_json::array();
    for (const auto& m : s.gt_moments) windows.push_back({m.start_s, m.end_s});
    obj["relevant_windows"] = std::move(windows);
  }
  if (s.saliency) {
    obj["relevant_clip_ids"] = s.saliency->clip_ids;
    obj["saliency_scores"] = s.saliency->scores;
  }
  if (s.domain_tag) obj["domain"] = *s.domain_tag;
  return obj.dump();
}

void write_annotations(const std::vector<DatasetSample>& samples,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write annotation file " + path.string());
  for (const auto& s : samples) out << serialize_annotation(s) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace lighthouse
