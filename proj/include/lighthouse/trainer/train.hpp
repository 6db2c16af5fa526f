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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lighthouse/metrics/report.hpp"
#include "lighthouse/model/checkpoint.hpp"
#include "lighthouse/serving/postprocess.hpp"
#include "lighthouse/trainer/config.hpp"
#include "lighthouse/trainer/dataset.hpp"

namespace lighthouse {

// Seed used for torch's generator during `epoch`; epochs are independent so
// a resumed run replays the same randomness.
std::uint64_t epoch_seed(std::uint64_t seed, int epoch);

// Single-writer training state: model plus optimizer.
class Trainer {
 public:
  // Model weights are initialized from `seed`.
  Trainer(const ModelConfig& model, const OptimConfig& optim, std::uint64_t seed);

  // Runs one epoch (1-based) over `items` and returns per-sample mean loss
  // components. Batch order depends only on (seed, epoch).
  std::map<std::string, double> run_epoch(const std::vector<TrainItem>& items, int epoch);

  // Learning rate in effect during `epoch`.
  double lr_for_epoch(int epoch) const;

  MomentDetr& model() { return model_; }
  AdamW& optimizer() { return optimizer_; }

 private:
  ModelConfig model_config_;
  OptimConfig optim_;
  std::uint64_t seed_;
  MomentDetr model_;
  AdamW optimizer_;
};

// Post-processed predictions for every item, in item order.
std::vector<PredictionRecord> predict_items(MomentDetr& model, const std::vector<TrainItem>& items,
                                            const PostprocessConfig& postprocess);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  std::map<std::string, double> loss;
  std::vector<std::pair<std::string, double>> val;  // empty when not evaluated
};

struct RunLog {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string code_version;
  std::vector<EpochRecord> epochs;

  std::string to_jsonl() const;
  static RunLog from_jsonl(const std::string& text);
};

struct TrainResult {
  std::filesystem::path checkpoint;
  RunLog log;
};

// Trains per `config`, writing under run.results_dir: config.yaml (effective
// config), feature_manifest.json, runlog.jsonl, timing.jsonl, checkpoints/
// and model_final.ckpt. With `resume`, training continues after the epoch
// stored in that checkpoint and the earlier RunLog records are kept.
TrainResult train_run(const TrainConfig& config,
                      const std::optional<std::filesystem::path>& resume = std::nullopt);

struct EvalResult {
  MetricReport report;
  std::vector<PredictionRecord> predictions;
  std::filesystem::path output_dir;
};

// Evaluates `checkpoint` on the "train" or "val" split. Writes report.txt,
// report.json and predictions.jsonl under results_dir/eval_<split>/. Throws
// MismatchError showing both hashes when the checkpoint's model differs from
// the config's model section.
EvalResult evaluate_run(const TrainConfig& config, const std::filesystem::path& checkpoint,
                        const std::string& split = "val");

}  // namespace lighthouse
