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

// Values written to prediction files are rounded to this many decimals.
inline constexpr int kPredictionDecimals = 4;

double round_to_decimals(double value, int decimals);

// {"qid":..,"pred_relevant_windows":[[s,e,score],..],"pred_saliency_scores":[..]}
// Throws ValidationError if moments are not sorted by confidence descending
// or a value is not finite.
std::string serialize_prediction(const PredictionRecord& record);

void write_predictions(const std::vector<PredictionRecord>& records,
                       const std::filesystem::path& path);

std::vector<PredictionRecord> parse_predictions(const std::filesystem::path& path);
std::vector<PredictionRecord> parse_predictions_text(const std::string& text);

}  // namespace lighthouse
