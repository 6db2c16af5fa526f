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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lighthouse/data/annotations.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/metrics/metrics.hpp"
#include "lighthouse/model/checkpoint.hpp"
#include "lighthouse/trainer/config.hpp"
#include "lighthouse/trainer/synth_data.hpp"
#include "lighthouse/trainer/train.hpp"
#include "support/temp_dir.hpp"

namespace lighthouse {
namespace {
namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// A small synthetic dataset plus a config that trains on it in seconds.
class TrainerFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthDataSpec spec;
    spec.base.dv = 16;
    spec.base.dt = 16;
    spec.train_samples = 8;
    spec.val_samples = 6;
    spec.seed = 3;
    spec.val_seed = 4;
    paths_ = write_synthetic_data(spec, dir_.path() / "data");
  }

  std::string yaml(const std::string& results, int epochs = 4,
                   const std::string& model_extra = "") const {
    std::ostringstream y;
    y << "data:\n"
      << "  train_annotations: data/train.jsonl\n"
      << "  val_annotations: data/val.jsonl\n"
      << "  feature_dir: data/features\n"
      << "features: {dv: 16, dt: 16}\n"
      << "model: {hidden_dim: 16, ff_dim: 32, heads: 2, num_slots: 4" << model_extra << "}\n"
      << "optim: {epochs: " << epochs << ", batch_size: 4, lr: 0.001}\n"
      << "run: {seed: 7, results_dir: " << results << ", checkpoint_every: 2}\n";
    return y.str();
  }

  TrainConfig config(const std::string& results, int epochs = 4,
                     const std::string& model_extra = "") const {
    return parse_config(yaml(results, epochs, model_extra), dir_.path());
  }

  test::TempDir dir_;
  SynthDataPaths paths_;
};

TEST_F(TrainerFixture, MinimalConfigFillsDefaults) {
  const TrainConfig c = parse_config(
      "data: {train_annotations: data/train.jsonl, feature_dir: data/features}\n"
      "run: {seed: 1}\n",
      dir_.path());
  EXPECT_EQ(c.model.hidden_dim, 256);
  EXPECT_EQ(c.model.num_slots, 10);
  EXPECT_EQ(c.optim.epochs, 200);
  EXPECT_EQ(c.optim.lr_drop_epoch, 150);
  EXPECT_EQ(c.features.name, "synthetic");
  EXPECT_EQ(c.data.train_annotations, dir_.path() / "data/train.jsonl");
  const std::string eff = effective_config_yaml(c);
  for (const char* key : {"hidden_dim: 256", "num_slots: 10", "enc_layers: 2", "heads: 8",
                          "dropout: 0.1", "lr: ", "weight_decay: ",
                          "batch_size: 32", "grad_clip: 0.1", "lr_drop_epoch: 150",
                          "neg_pair: false", "dummy_tokens: 0", "content_slots: false",
                          "nms_threshold: 0.7", "seed: 1"}) {
    EXPECT_NE(eff.find(key), std::string::npos) << key << "\n" << eff;
  }
}

TEST_F(TrainerFixture, MisspelledKeyIsNamed) {
  try {
    parse_config(
        "data: {train_annotations: data/train.jsonl, feature_dir: data/features}\n"
        "model: {hiden_dim: 64}\nrun: {seed: 1}\n",
        dir_.path());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.hiden_dim"), std::string::npos) << e.what();
  }
}

TEST_F(TrainerFixture, MissingRequiredKeyAndTypeMismatchAreRejected) {
  try {
    parse_config("data: {train_annotations: data/train.jsonl, feature_dir: data/features}\n",
                 dir_.path());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.seed"), std::string::npos) << e.what();
  }
  try {
    parse_config(
        "data: {train_annotations: data/train.jsonl, feature_dir: data/features}\n"
        "optim: {lr: fast}\nrun: {seed: 1}\n",
        dir_.path());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("optim.lr"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("data: {train_annotations: nope.jsonl, feature_dir: data/features}\n"
                            "run: {seed: 1}\n",
                            dir_.path()),
               ConfigError);
}

TEST_F(TrainerFixture, EffectiveConfigReproducesHash) {
  const TrainConfig c = config("results");
  write_file(dir_.path() / "effective.yaml", effective_config_yaml(c));
  const TrainConfig back = load_config(dir_.path() / "effective.yaml");
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(effective_config_yaml(back), effective_config_yaml(c));
  EXPECT_NE(config_hash(config("results", 5)), config_hash(c));
}

TEST_F(TrainerFixture, UnknownVideoIdFailsBeforeTraining) {
  auto samples = parse_annotations(paths_.train_annotations, DatasetKind::kMrHd);
  samples[0].video_id = "no_such_video";
  write_annotations(samples, dir_.path() / "bad.jsonl");
  TrainConfig c = config((dir_.path() / "bad_results").string());
  c.data.train_annotations = dir_.path() / "bad.jsonl";
  try {
    train_run(c);
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("no_such_video"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir_.path() / "bad_results" / "model_final.ckpt"));
}

TEST_F(TrainerFixture, SameSeedGivesIdenticalRunsAndLossFalls) {
  const TrainResult a = train_run(config("run_a", 6));
  const TrainResult b = train_run(config("run_b", 6));
  EXPECT_EQ(a.log.to_jsonl(), b.log.to_jsonl());
  EXPECT_EQ(read_file(a.checkpoint), read_file(b.checkpoint));
  ASSERT_EQ(a.log.epochs.size(), 6u);
  EXPECT_LT(a.log.epochs.back().loss.at("total"), a.log.epochs.front().loss.at("total"));
  for (const char* f : {"config.yaml", "feature_manifest.json", "runlog.jsonl", "timing.jsonl",
                        "checkpoints/epoch_0002.ckpt", "model_final.ckpt"}) {
    EXPECT_TRUE(fs::exists(dir_.path() / "run_a" / f)) << f;
  }
  const RunLog parsed = RunLog::from_jsonl(read_file(dir_.path() / "run_a" / "runlog.jsonl"));
  EXPECT_EQ(parsed.to_jsonl(), a.log.to_jsonl());
}

TEST_F(TrainerFixture, ResumeMatchesUninterruptedRun) {
  const TrainResult full = train_run(config("full", 6));
  fs::copy(dir_.path() / "full", dir_.path() / "resumed", fs::copy_options::recursive);
  const TrainResult resumed = train_run(config("resumed", 6),
                                        dir_.path() / "resumed/checkpoints/epoch_0004.ckpt");
  EXPECT_EQ(resumed.log.to_jsonl(), full.log.to_jsonl());
  EXPECT_EQ(read_file(resumed.checkpoint), read_file(full.checkpoint));

  // A different config cannot resume this run.
  EXPECT_THROW(train_run(config("resumed", 7), dir_.path() / "full/checkpoints/epoch_0004.ckpt"),
               MismatchError);
}

TEST_F(TrainerFixture, EvaluateIsBitwiseDeterministic) {
  const TrainConfig c = config("eval_run", 2);
  const TrainResult r = train_run(c);
  const EvalResult a = evaluate_run(c, r.checkpoint, "val");
  const std::string report = read_file(a.output_dir / "report.json");
  const std::string preds = read_file(a.output_dir / "predictions.jsonl");
  const EvalResult b = evaluate_run(c, r.checkpoint, "val");
  EXPECT_EQ(a.report.to_json(), b.report.to_json());
  EXPECT_TRUE(a.predictions == b.predictions);
  EXPECT_EQ(read_file(b.output_dir / "report.json"), report);
  EXPECT_EQ(read_file(b.output_dir / "predictions.jsonl"), preds);
  EXPECT_TRUE(fs::exists(a.output_dir / "report.txt"));
}

TEST_F(TrainerFixture, EvaluateRejectsForeignCheckpoint) {
  const TrainResult r = train_run(config("foreign", 1));
  const TrainConfig other = config("foreign", 1, ", dummy_tokens: 1");
  try {
    evaluate_run(other, r.checkpoint, "val");
    FAIL() << "expected MismatchError";
  } catch (const MismatchError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(model_config_hash(config("foreign", 1).model)), std::string::npos) << msg;
    EXPECT_NE(msg.find(model_config_hash(other.model)), std::string::npos) << msg;
  }
}

TEST_F(TrainerFixture, LearningRateDropsOnce) {
  OptimConfig o;
  o.lr = 1e-3;
  o.epochs = 8;
  o.lr_drop_epoch = 6;
  Trainer t(config("x").model, o, 1);
  EXPECT_DOUBLE_EQ(t.lr_for_epoch(1), 1e-3);
  EXPECT_DOUBLE_EQ(t.lr_for_epoch(6), 1e-3);
  EXPECT_DOUBLE_EQ(t.lr_for_epoch(7), 1e-4);
  EXPECT_NE(epoch_seed(1, 1), epoch_seed(1, 2));
  EXPECT_NE(epoch_seed(1, 1), epoch_seed(2, 1));
}

// Percent of samples hit with IoU > theta by a span drawn from the planted
// moment geometry: a whole number of clips in [min_clips, max_clips] at a
// uniformly random start.
double random_span_chance(const std::vector<DatasetSample>& samples, const SyntheticSpec& geo,
                          double theta, int draws, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(geo.moment_min_clips, geo.moment_max_clips);
  double hits = 0.0;
  for (const auto& s : samples) {
    for (int d = 0; d < draws; ++d) {
      const int l = len(rng);
      std::uniform_int_distribution<int> start(0, geo.clips_per_video - l);
      const int a = start(rng);
      const MomentSpan p{a * geo.clip_len_s, (a + l) * geo.clip_len_s};
      for (const auto& g : s.gt_moments) {
        if (temporal_iou(p, g) > theta) {
          hits += 1.0;
          break;
        }
      }
    }
  }
  return 100.0 * hits / (static_cast<double>(samples.size()) * draws);
}

TEST_F(TrainerFixture, FreshModelScoresNearChance) {
  SynthDataSpec spec;
  spec.base.dv = 16;
  spec.base.dt = 16;
  spec.train_samples = 1;
  spec.val_samples = 200;
  const SynthDataPaths p = write_synthetic_data(spec, dir_.path() / "chance");
  TrainConfig c = config("chance_results", 1);
  c.data.train_annotations = p.train_annotations;
  c.data.val_annotations = p.val_annotations;
  c.data.feature_dir = p.feature_dir;

  Trainer fresh(c.model, c.optim, 7);
  save_checkpoint(dir_.path() / "fresh.ckpt", fresh.model(), CheckpointMeta{});
  const EvalResult r = evaluate_run(c, dir_.path() / "fresh.ckpt", "val");
  const double fresh_r1 = r.report.at("MR-R1@0.5");

  std::mt19937_64 rng(1);
  const auto samples = parse_annotations(p.val_annotations, DatasetKind::kMrHd);
  const double chance = random_span_chance(samples, spec.base, 0.5, 2000, rng);
  // An untrained model emits nearly the same span for every query, so its
  // score is a binomial draw over 200 queries around the chance rate.
  const double sd = 100.0 * std::sqrt(chance / 100.0 * (1.0 - chance / 100.0) / 200.0);
  EXPECT_GT(chance, 0.0);
  EXPECT_LT(chance, 40.0);
  EXPECT_NEAR(fresh_r1, chance, 4.0 * sd) << "chance " << chance;
}

}  // namespace
}  // namespace lighthouse
