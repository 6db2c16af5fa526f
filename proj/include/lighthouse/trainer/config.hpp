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

#include <cstdint>
#include <filesystem>
#include <string>

#include "lighthouse/data/types.hpp"
#include "lighthouse/metrics/metrics.hpp"
#include "lighthouse/model/config.hpp"
#include "lighthouse/serving/postprocess.hpp"

namespace lighthouse {

struct DataConfig {
  DatasetKind kind = DatasetKind::kMrHd;
  std::filesystem::path train_annotations;  // required
  std::filesystem::path val_annotations;    // optional
  std::filesystem::path feature_dir;        // required
  double clip_len_s = 2.0;
};

struct FeatureConfig {
  std::string name = "synthetic";
  int dv = 128;
  int dt = 128;
};

struct OptimConfig {
  double lr = 1e-4;
  double weight_decay = 1e-4;
  int epochs = 200;
  int batch_size = 32;
  double grad_clip = 0.1;
  int lr_drop_epoch = 0;  // 0 means 75% of epochs, resolved at load time
};

struct EvalConfig {
  MetricConfig metrics;
  PostprocessConfig postprocess;
};

struct RunConfig {
  std::uint64_t seed = 0;  // required
  std::filesystem::path results_dir = "results";
  int checkpoint_every = 0;  // 0: final checkpoint only
  int eval_every = 1;        // 0: never evaluate during training
};

struct TrainConfig {
  DataConfig data;
  FeatureConfig features;
  ModelConfig model;
  OptimConfig optim;
  EvalConfig eval;
  RunConfig run;
};

// Parses, fills defaults and validates. Relative paths resolve against
// `base_dir`. Throws ConfigError naming the offending key for unknown keys,
// missing required keys, type mismatches and missing paths.
TrainConfig parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir);

// parse_config on a file, with paths relative to the file's directory. The
// LIGHTHOUSE_RESULTS_DIR environment variable overrides run.results_dir.
TrainConfig load_config(const std::filesystem::path& path);

// Canonical YAML of every setting, defaults included. Loading it back
// yields an equal config.
std::string effective_config_yaml(const TrainConfig& config);

// Digest of the canonical YAML without run.results_dir, which only says
// where artifacts go.
std::string config_hash(const TrainConfig& config);

}  // namespace lighthouse
