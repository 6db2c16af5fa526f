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

#include "lighthouse/data/predictions.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lighthouse/errors.hpp"

namespace lighthouse {

using nlohmann::json;
using nlohmann::ordered_json;

double round_to_decimals(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double rounded = std::round(value * scale) / scale;
  return rounded == 0.0 ? 0.0 : rounded;  // no "-0.0" in files
}

std::string serialize_prediction(const PredictionRecord& record) {
  const auto qid = std::to_string(record.query_id);
  ordered_json obj;
  obj["qid"] = record.query_id;
  ordered_json windows = ordered_json::array();
  for (std::size_t i = 0; i < record.moments.size(); ++i) {
    const auto& m = record.moments[i];
    if (!std::isfinite(m.span.start_s) || !std::isfinite(m.span.end_s) ||
        !std::isfinite(m.confidence)) {
      throw ValidationError("prediction " + qid + ": non-finite moment value");
    }
    if (i > 0 && m.confidence > record.moments[i - 1].confidence) {
      throw ValidationError("prediction " + qid +
                            ": moments must be sorted by confidence descending");
    }
    windows.push_back({round_to_decimals(m.span.start_s, kPredictionDecimals),
                       round_to_decimals(m.span.end_s, kPredictionDecimals),
                       round_to_decimals(m.confidence, kPredictionDecimals)});
  }
  obj["pred_relevant_windows"] = std::move(windows);
  ordered_json saliency = ordered_json::array();
  for (double v : record.saliency_scores) {
    if (!std::isfinite(v)) {
      throw ValidationError("prediction " + qid + ": non-finite saliency score");
    }
    saliency.push_back(round_to_decimals(v, kPredictionDecimals));
  }
  obj["pred_saliency_scores"] = std::move(saliency);
  return obj.dump();
}

void write_predictions(const std::vector<PredictionRecord>& records,
                       const std::filesystem::path& path) {
  // Serialize everything first so an invalid record leaves no partial file.
  std::string body;
  for (const auto& r : records) {
    body += serialize_prediction(r);
    body += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write prediction file " + path.string());
  out << body;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<PredictionRecord> parse_predictions_text(const std::string& text) {
  std::vector<PredictionRecord> records;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    try {
      const json obj = json::parse(line);
      PredictionRecord r;
      r.query_id = obj.at("qid").get<std::int64_t>();
      for (const auto& w : obj.at("pred_relevant_windows")) {
        if (!w.is_array() || w.size() != 3) {
          throw ParseError(where + "window must be [start, end, score]");
        }
        r.moments.push_back(
            {{w[0].get<double>(), w[1].get<double>()}, w[2].get<double>()});
      }
      r.saliency_scores = obj.at("pred_saliency_scores").get<std::vector<double>>();
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
  }
  return records;
}

std::vector<PredictionRecord> parse_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prediction file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_predictions_text(buf.str());
}

}  // namespace lighthouse
