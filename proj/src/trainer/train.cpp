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

#include "lighthouse/trainer/train.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lighthouse/data/predictions.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/model/matcher.hpp"

#ifndef LIGHTHOUSE_VERSION
#define LIGHTHOUSE_VERSION "unknown"
#endif

namespace lighthouse {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("short write to " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AdamWOptions adamw_options(const OptimConfig& optim) {
  AdamWOptions o;
  o.lr = optim.lr;
  o.weight_decay = optim.weight_decay;
  return o;
}

MomentDetr seeded_model(const ModelConfig& config, std::uint64_t seed) {
  torch::manual_seed(seed);
  return MomentDetr(config);
}

LoadedSplit load_named_split(const TrainConfig& config, const std::string& split) {
  fs::path annotations;
  if (split == "train") {
    annotations = config.data.train_annotations;
  } else if (split == "val") {
    if (config.data.val_annotations.empty()) {
      throw ConfigError("split 'val' requested but data.val_annotations is not set");
    }
    annotations = config.data.val_annotations;
  } else {
    throw ArgumentError("unknown split '" + split + "'; expected train or val");
  }
  return load_split(annotations, config.data.kind, config.data.feature_dir,
                    config.data.clip_len_s, config.features.dv, config.features.dt);
}

std::string checkpoint_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%04d.ckpt", epoch);
  return buf;
}

}  // namespace

std::uint64_t epoch_seed(std::uint64_t seed, int epoch) {
  // splitmix64 finalizer over (seed, epoch)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return (z ^ (z >> 31)) & 0x7fffffffffffffffULL;
}

Trainer::Trainer(const ModelConfig& model, const OptimConfig& optim, std::uint64_t seed)
    : model_config_(model),
      optim_(optim),
      seed_(seed),
      model_(seeded_model(model, seed)),
      optimizer_(model_->parameters(), adamw_options(optim)) {}

double Trainer::lr_for_epoch(int epoch) const {
  return epoch > optim_.lr_drop_epoch ? optim_.lr * 0.1 : optim_.lr;
}

std::map<std::string, double> Trainer::run_epoch(const std::vector<TrainItem>& items, int epoch) {
  if (items.empty()) throw ArgumentError("cannot train on an empty split");
  torch::manual_seed(epoch_seed(seed_, epoch));
  optimizer_.set_lr(lr_for_epoch(epoch));
  model_->train();

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed_ + static_cast<std::uint64_t>(epoch));
  std::shuffle(order.begin(), order.end(), rng);

  std::map<std::string, double> sums;
  const auto params = model_->parameters();
  const std::size_t batch = static_cast<std::size_t>(optim_.batch_size);
  for (std::size_t begin = 0; begin < order.size(); begin += batch) {
    const std::size_t end = std::min(order.size(), begin + batch);
    const auto n = static_cast<double>(end - begin);
    optimizer_.zero_grad();
    torch::Tensor total;
    for (std::size_t j = begin; j < end; ++j) {
      const auto& item = items[order[j]];
      auto out = model_->forward(item.video, item.text);
      torch::Tensor negative;
      if (model_config_.neg_pair && end - begin > 1) {
        const std::size_t next = begin + (j - begin + 1) % (end - begin);
        negative = model_->saliency(item.video, items[order[next]].text);
      }
      const auto assignment =
          match_spans(to_span_prediction(out), item.targets.spans, model_config_.weights);
      auto loss = compute_loss(out, item.targets, assignment, model_config_, negative);
      total = total.defined() ? total + loss.total : loss.total;
      for (const auto& [k, v] : loss.components) sums[k] += v;
    }
    (total / n).backward();
    if (optim_.grad_clip > 0.0) torch::nn::utils::clip_grad_norm_(params, optim_.grad_clip);
    optimizer_.step();
  }
  for (auto& [k, v] : sums) v /= static_cast<double>(items.size());
  return sums;
}

std::vector<PredictionRecord> predict_items(MomentDetr& model, const std::vector<TrainItem>& items,
                                            const PostprocessConfig& postprocess) {
  torch::NoGradGuard guard;
  const bool was_training = model->is_training();
  model->eval();
  std::vector<PredictionRecord> records;
  for (const auto& item : items) {
    const auto out = model->forward(item.video, item.text);
    const auto result = lighthouse::postprocess(to_span_prediction(out), to_saliency_scores(out),
                                                item.sample.duration_s, item.grid, postprocess);
    records.push_back(to_prediction_record(item.sample.query_id, result));
  }
  if (was_training) model->train();
  return records;
}

std::string RunLog::to_jsonl() const {
  std::string out;
  nlohmann::ordered_json header;
  header["type"] = "header";
  header["config_hash"] = config_hash;
  header["seed"] = seed;
  header["code_version"] = code_version;
  out += header.dump() + "\n";
  for (const auto& e : epochs) {
    nlohmann::ordered_json j;
    j["type"] = "epoch";
    j["epoch"] = e.epoch;
    j["lr"] = e.lr;
    j["loss"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : e.loss) j["loss"][k] = v;
    if (!e.val.empty()) {
      j["val"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : e.val) j["val"][k] = v;
    }
    out += j.dump() + "\n";
  }
  return out;
}

RunLog RunLog::from_jsonl(const std::string& text) {
  RunLog log;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::ordered_json::parse(line);
      if (j.at("type") == "header") {
        log.config_hash = j.at("config_hash").get<std::string>();
        log.seed = j.at("seed").get<std::uint64_t>();
        log.code_version = j.at("code_version").get<std::string>();
        have_header = true;
        continue;
      }
      EpochRecord e;
      e.epoch = j.at("epoch").get<int>();
      e.lr = j.at("lr").get<double>();
      for (const auto& [k, v] : j.at("loss").items()) e.loss[k] = v.get<double>();
      if (j.contains("val")) {
        for (const auto& [k, v] : j.at("val").items()) e.val.emplace_back(k, v.get<double>());
      }
      log.epochs.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad run log: ") + e.what());
  }
  if (!have_header) throw FormatError("run log has no header line");
  return log;
}

TrainResult train_run(const TrainConfig& config, const std::optional<fs::path>& resume) {
  torch::set_num_threads(1);
  const auto hash = config_hash(config);
  const auto& dir = config.run.results_dir;
  fs::create_directories(dir / "checkpoints");

  // Everything is loaded and checked before the first epoch.
  const auto train = load_named_split(config, "train");
  std::optional<LoadedSplit> val;
  if (!config.data.val_annotations.empty()) val = load_named_split(config, "val");

  write_text(dir / "config.yaml", effective_config_yaml(config));
  nlohmann::ordered_json manifest;
  manifest["feature_dir"] = config.data.feature_dir.string();
  manifest["files"] = nlohmann::ordered_json::object();
  for (const auto& [path, digest] : train.manifest) manifest["files"][path] = digest;
  if (val) {
    for (const auto& [path, digest] : val->manifest) manifest["files"][path] = digest;
  }
  write_text(dir / "feature_manifest.json", manifest.dump(2) + "\n");

  Trainer trainer(config.model, config.optim, config.run.seed);
  RunLog log;
  log.config_hash = hash;
  log.seed = config.run.seed;
  log.code_version = LIGHTHOUSE_VERSION;
  int start_epoch = 1;
  std::string timing;
  if (resume) {
    const auto ckpt = load_checkpoint(*resume);
    if (ckpt.meta.config_hash != hash) {
      throw MismatchError("checkpoint config hash " + ckpt.meta.config_hash +
                          " does not match config hash " + hash);
    }
    load_parameters(ckpt, trainer.model());
    restore_optimizer(ckpt, trainer.model(), trainer.optimizer());
    start_epoch = static_cast<int>(ckpt.meta.epoch) + 1;
    const auto previous = RunLog::from_jsonl(read_text(dir / "runlog.jsonl"));
    for (const auto& e : previous.epochs) {
      if (e.epoch < start_epoch) log.epochs.push_back(e);
    }
    if (static_cast<int>(log.epochs.size()) != start_epoch - 1) {
      throw StateError("run log in " + dir.string() + " does not cover epochs 1.." +
                       std::to_string(start_epoch - 1));
    }
    if (fs::exists(dir / "timing.jsonl")) timing = read_text(dir / "timing.jsonl");
  }

  auto save = [&](const fs::path& path, int epoch) {
    CheckpointMeta meta;
    meta.epoch = epoch;
    meta.seed = config.run.seed;
    meta.config_hash = hash;
    meta.extra["feature_name"] = config.features.name;
    save_checkpoint(path, trainer.model(), meta, &trainer.optimizer());
  };

  for (int epoch = start_epoch; epoch <= config.optim.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochRecord record;
    record.epoch = epoch;
    record.lr = trainer.lr_for_epoch(epoch);
    record.loss = trainer.run_epoch(train.items, epoch);
    const bool eval_now = val && config.run.eval_every > 0 &&
                          (epoch % config.run.eval_every == 0 || epoch == config.optim.epochs);
    if (eval_now) {
      const auto preds = predict_items(trainer.model(), val->items, config.eval.postprocess);
      const auto samples = [&] {
        std::vector<DatasetSample> s;
        for (const auto& item : val->items) s.push_back(item.sample);
        return s;
      }();
      record.val = evaluate_predictions(preds, samples, config.data.kind, config.eval.metrics, "val")
                       .values;
    }
    log.epochs.push_back(record);
    if (config.run.checkpoint_every > 0 && epoch % config.run.checkpoint_every == 0) {
      save(dir / "checkpoints" / checkpoint_name(epoch), epoch);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    timing += nlohmann::ordered_json{{"epoch", epoch}, {"wall_time_s", secs}}.dump() + "\n";
    write_text(dir / "runlog.jsonl", log.to_jsonl());
    write_text(dir / "timing.jsonl", timing);
  }

  TrainResult result;
  result.checkpoint = dir / "model_final.ckpt";
  save(result.checkpoint, config.optim.epochs);
  write_text(dir / "runlog.jsonl", log.to_jsonl());
  result.log = std::move(log);
  return result;
}

EvalResult evaluate_run(const TrainConfig& config, const fs::path& checkpoint,
                        const std::string& split) {
  torch::set_num_threads(1);
  const auto ckpt = load_checkpoint(checkpoint);
  const auto want = model_config_hash(config.model);
  const auto have = model_config_hash(ckpt.config);
  if (want != have) {
    throw MismatchError("checkpoint model hash " + have + " does not match config model hash " +
                        want);
  }
  const auto data = load_named_split(config, split);
  auto model = restore_model(ckpt);
  EvalResult result;
  result.predictions = predict_items(model, data.items, config.eval.postprocess);
  std::vector<DatasetSample> samples;
  for (const auto& item : data.items) samples.push_back(item.sample);
  result.report = evaluate_predictions(result.predictions, samples, config.data.kind,
                                       config.eval.metrics, split);
  result.output_dir = config.run.results_dir / ("eval_" + split);
  fs::create_directories(result.output_dir);
  result.report.write(result.output_dir / "report.txt", result.output_dir / "report.json");
  write_predictions(result.predictions, result.output_dir / "predictions.jsonl");
  return result;
}

}  // namespace lighthouse
