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

// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. `--only A3,A4` runs a subset.

#include <torch/torch.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lighthouse/errors.hpp"
#include "lighthouse/features/frames.hpp"
#include "lighthouse/metrics/metrics.hpp"
#include "lighthouse/model/attention.hpp"
#include "lighthouse/model/loss.hpp"
#include "lighthouse/model/network.hpp"
#include "lighthouse/serving/http_server.hpp"
#include "lighthouse/serving/postprocess.hpp"
#include "lighthouse/serving/predictor.hpp"
#include "lighthouse/trainer/config.hpp"
#include "lighthouse/trainer/dataset.hpp"
#include "lighthouse/trainer/synth_data.hpp"
#include "lighthouse/trainer/train.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

// After the Eigen users: <resolv.h> defines a _res macro.
#include <httplib.h>

namespace lighthouse {
namespace {
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects named checks; the criterion passes when all of them do.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failed_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    expect(std::abs(got - want) <= tol, what + " got " + fmt(got, 17) + " want " + fmt(want, 17));
  }
  bool ok() const { return failed_.empty(); }
  std::string summary() const {
    std::string s = std::to_string(total_ - failed_.size()) + "/" + std::to_string(total_) +
                    " checks";
    for (const auto& f : failed_) s += "; failed: " + f;
    return s;
  }

 private:
  int total_ = 0;
  std::vector<std::string> failed_;
};

// --- A1 ----------------------------------------------------------------------

Outcome a1_oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  MetricConfig config;
  config.r1_thresholds = {0.5, 0.7};
  config.map_thresholds = {0.5, 0.75};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const oracle::Instance inst = oracle::random_instance(rng, 10, 6, 20);
    const auto& p = inst.predictions;
    const auto& s = inst.samples;
    auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
    for (double t : config.r1_thresholds) track(recall1_at(p, s, t), oracle::recall1(p, s, t));
    const MapSuite suite = map_suite(p, s, config);
    for (double t : config.map_thresholds) track(suite.map_at.at(t), oracle::mean_ap(p, s, t));
    track(suite.avg_map, oracle::avg_map(p, s, config.avg_map_grid));
    track(hd_map(p, s, config), oracle::hd_map(p, s, config.hd_positive_level));
    track(hit_at_1(p, s, config), oracle::hit_at_1(p, s, config.hd_positive_level));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30.0,
          "200 instances, max |diff| " + fmt(worst) + " (tol 1e-9), " + fmt(secs) + " s (< 30)"};
}

// --- A2 ----------------------------------------------------------------------

DatasetSample mr(std::int64_t qid, MomentSpan gt) {
  DatasetSample s;
  s.query_id = qid;
  s.query_text = "q";
  s.video_id = "v";
  s.duration_s = 150.0;
  s.gt_moments = {gt};
  return s;
}

PredictionRecord top1(std::int64_t qid, MomentSpan span) {
  PredictionRecord p;
  p.query_id = qid;
  p.moments = {{span, 1.0}};
  return p;
}

DatasetSample hd(std::vector<std::vector<int>> labels) {
  DatasetSample s = mr(1, {0.0, 2.0});
  SaliencyAnnotation a;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    a.clip_ids.push_back(static_cast<int>(c));
    a.scores.push_back(labels[c]);
  }
  s.saliency = a;
  return s;
}

PredictionRecord scored(std::vector<double> scores) {
  PredictionRecord p;
  p.query_id = 1;
  p.saliency_scores = std::move(scores);
  return p;
}

Outcome a2_fixtures() {
  Checks c;
  const MetricConfig config;
  c.expect(temporal_iou({0, 10}, {5, 15}) == 1.0 / 3.0, "IoU([0,10],[5,15]) == 1/3");
  c.expect(temporal_iou({0, 10}, {0, 10}) == 1.0, "IoU identical == 1");
  c.expect(temporal_iou({0, 5}, {5, 10}) == 0.0, "IoU touching == 0");

  const std::vector<DatasetSample> two = {mr(1, {10, 20}), mr(2, {10, 20})};
  const std::vector<PredictionRecord> shifted = {top1(1, {12, 22}), top1(2, {12, 22})};
  c.expect(recall1_at(shifted, two, 0.5) == 100.0, "R1@0.5 of [12,22] vs [10,20] == 100");
  c.expect(recall1_at(shifted, two, 0.7) == 0.0, "R1@0.7 of [12,22] vs [10,20] == 0");
  const std::vector<PredictionRecord> half = {top1(1, {10, 20}), top1(2, {40, 50})};
  c.expect(recall1_at(half, two, 0.5) == 50.0, "R1 one hit of two == 50");

  const std::vector<MomentSpan> gt2 = {{0, 10}, {20, 30}};
  const double ap = average_precision_single_query(
      {{{0, 10}, 0.9}, {{50, 60}, 0.8}, {{20, 30}, 0.7}}, gt2, 0.5);
  c.expect(ap == (1.0 + 2.0 / 3.0) / 2.0, "AP [TP,FP,TP] == (1 + 2/3)/2, got " + fmt(ap, 17));
  c.expect(average_precision_single_query({{{0, 10}, 0.9}, {{0, 10}, 0.8}}, {{0, 10}}, 0.5) ==
               1.0,
           "AP with duplicate TP == 1");

  const double hit = hit_at_1({scored({0.9, 0.1})}, {hd({{5, 4, 5}, {1, 1, 1}})}, config);
  c.expect(hit == 100.0 * (2.0 / 3.0), "HIT@1 labels [5,4,5] == 2/3, got " + fmt(hit, 17));
  c.expect(hit_at_1({scored({0.2, 0.2})}, {hd({{1, 1, 1}, {5, 5, 5}})}, config) == 0.0,
           "HIT@1 tie picks clip 0");
  const double hdap =
      hd_map({scored({0.9, 0.8, 0.7, 0.6})}, {hd({{5}, {1}, {5}, {1}})}, config);
  c.expect(hdap == 100.0 * (1.0 + 2.0 / 3.0) / 2.0, "HD AP [5,1,5,1] == 0.8333, got " +
                                                        fmt(hdap, 17));

  std::vector<DatasetSample> dom;
  std::map<std::int64_t, double> per_query;
  const std::pair<const char*, double> rows[] = {{"VT", 0.8}, {"VT", 0.8}, {"DS", 0.9}};
  for (std::size_t i = 0; i < 3; ++i) {
    DatasetSample s = hd({{5}});
    s.query_id = static_cast<std::int64_t>(i);
    s.domain_tag = rows[i].first;
    dom.push_back(s);
    per_query[s.query_id] = rows[i].second;
  }
  c.expect(tvsum_domain_report(per_query, dom).avg == 85.0, "domain avg of 80 and 90 == 85");

  const std::vector<ScoredMoment> nms_in = {{{0, 10}, 0.9}, {{1, 11}, 0.8}, {{20, 30}, 0.7}};
  const auto kept = temporal_nms(nms_in, 0.7);
  c.expect(kept == std::vector<ScoredMoment>{nms_in[0], nms_in[2]},
           "NMS keeps [0,10] and [20,30]");
  return {c.ok(), c.summary()};
}

// --- shared synthetic experiment helpers -------------------------------------

TrainConfig synthetic_config(const SynthDataPaths& data, const fs::path& results,
                             std::uint64_t seed) {
  TrainConfig c;
  c.data.train_annotations = data.train_annotations;
  c.data.val_annotations = data.val_annotations;
  c.data.feature_dir = data.feature_dir;
  c.run.seed = seed;
  c.run.results_dir = results;
  c.run.eval_every = 0;
  return c;
}

void finalize(TrainConfig& c) {
  if (c.optim.lr_drop_epoch == 0) c.optim.lr_drop_epoch = std::max(1, c.optim.epochs * 3 / 4);
}

// --- A3 ----------------------------------------------------------------------

Outcome a3_overfit(const fs::path& work) {
  SynthDataSpec spec;
  spec.train_samples = 32;
  spec.base.signal_strength = 0.8;
  spec.base.noise_sigma = 0.3;
  spec.seed = 0;
  const SynthDataPaths data = write_synthetic_data(spec, work / "a3_data");
  TrainConfig c = synthetic_config(data, work / "a3_run", 0);
  c.optim.epochs = 200;
  c.optim.batch_size = 4;
  finalize(c);

  const auto t0 = Clock::now();
  const TrainResult run = train_run(c);
  const EvalResult eval = evaluate_run(c, run.checkpoint, "train");
  const double secs = seconds_since(t0);
  const double r1 = eval.report.at("MR-R1@0.5");
  const double hit = eval.report.at("HD-HIT@1");
  return {r1 >= 90.0 && hit >= 80.0 && secs < 300.0,
          "train R1@0.5 " + fmt(r1) + " (>= 90), HIT@1 " + fmt(hit) + " (>= 80), " +
              std::to_string(c.optim.epochs) + " epochs, " + fmt(secs) + " s (< 300)"};
}

// --- A4 ----------------------------------------------------------------------

Outcome a4_generalization(const fs::path& work) {
  const auto t0 = Clock::now();
  int passing = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthDataSpec spec;
    spec.train_samples = 256;
    spec.val_samples = 64;
    spec.seed = 100 * seed;
    spec.val_seed = 100 * seed + 1;
    const fs::path dir = work / ("a4_seed" + std::to_string(seed));
    const SynthDataPaths data = write_synthetic_data(spec, dir / "data");
    TrainConfig c = synthetic_config(data, dir / "run", seed);
    c.optim.epochs = 30;
    c.optim.batch_size = 8;
    finalize(c);
    const TrainResult run = train_run(c);
    const double r1 = evaluate_run(c, run.checkpoint, "val").report.at("MR-R1@0.5");
    passing += r1 >= 70.0;
    detail += "seed " + std::to_string(seed) + " val R1@0.5 " + fmt(r1) + "; ";
  }
  const double secs = seconds_since(t0);
  return {passing >= 2 && secs < 1200.0,
          detail + std::to_string(passing) + "/3 seeds >= 70 (need 2), " + fmt(secs) +
              " s (< 1200)"};
}

// --- A5 ----------------------------------------------------------------------

// Mean saliency of every validation video under its own query and under the
// next sample's query.
std::pair<double, double> matched_vs_mismatched(MomentDetr& model,
                                                const std::vector<TrainItem>& items) {
  model->eval();
  torch::NoGradGuard guard;
  double matched = 0.0, mismatched = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& other = items[(i + 1) % items.size()];
    matched += model->saliency(items[i].video, items[i].text).mean().item<double>();
    mismatched += model->saliency(items[i].video, other.text).mean().item<double>();
  }
  const auto n = static_cast<double>(items.size());
  return {matched / n, mismatched / n};
}

Outcome a5_variants(const fs::path& work) {
  Checks c;
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthDataSpec spec;
    spec.train_samples = 128;
    spec.val_samples = 32;
    spec.seed = 500 + seed;
    spec.val_seed = 600 + seed;
    const fs::path dir = work / ("a5_seed" + std::to_string(seed));
    const SynthDataPaths data = write_synthetic_data(spec, dir / "data");
    TrainConfig cfg = synthetic_config(data, dir / "run", seed);
    cfg.model.neg_pair = true;
    cfg.optim.epochs = 30;
    cfg.optim.batch_size = 8;
    cfg.optim.lr = 1e-4;
    finalize(cfg);
    const TrainResult run = train_run(cfg);
    MomentDetr model = restore_model(load_checkpoint(run.checkpoint));
    const LoadedSplit val = load_split(data.val_annotations, DatasetKind::kMrHd,
                                       data.feature_dir, 2.0, 128, 128);
    const auto [matched, mismatched] = matched_vs_mismatched(model, val.items);
    c.expect(mismatched < matched, "seed " + std::to_string(seed) + " mismatched " +
                                       fmt(mismatched) + " < matched " + fmt(matched));
  }

  ModelConfig base;
  ModelConfig variant = base;
  variant.neg_pair = true;
  variant.dummy_tokens = 0;
  torch::manual_seed(3);
  MomentDetr a(base);
  torch::manual_seed(3);
  MomentDetr b(variant);
  a->eval();
  b->eval();
  torch::NoGradGuard guard;
  const auto video = torch::randn({12, 128});
  const auto text = torch::randn({5, 128});
  const ModelOutput oa = a->forward(video, text);
  const ModelOutput ob = b->forward(video, text);
  c.expect(torch::equal(oa.spans, ob.spans) && torch::equal(oa.logits, ob.logits) &&
               torch::equal(oa.saliency, ob.saliency),
           "dummy_tokens=0 forward bit-identical to baseline");
  return {c.ok(), c.summary()};
}

// --- A6 ----------------------------------------------------------------------

Outcome a6_gradients() {
  double worst = 0.0;
  std::string where;
  int tensors = 0;
  std::int64_t elements = 0;
  for (std::uint64_t seed : {0, 1, 2}) {
    const test::GradCheckResult r = test::gradient_check(seed, 1e-4);
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      where = r.worst_param;
    }
    tensors = r.tensors_checked;
    elements = r.elements_checked;
  }
  return {worst < 1e-3, "max relative error " + fmt(worst) + " (< 1e-3) at " + where + ", " +
                            std::to_string(tensors) + " tensors / " + std::to_string(elements) +
                            " elements x 3 seeds"};
}

// --- A7 ----------------------------------------------------------------------

Outcome a7_reproducibility(const fs::path& work) {
  SynthDataSpec spec;
  spec.train_samples = 16;
  spec.val_samples = 8;
  spec.base.dv = 32;
  spec.base.dt = 32;
  const SynthDataPaths data = write_synthetic_data(spec, work / "a7_data");
  auto yaml = [&](const std::string& results) {
    std::ostringstream y;
    y << "data: {train_annotations: " << data.train_annotations
      << ", val_annotations: " << data.val_annotations << ", feature_dir: " << data.feature_dir
      << "}\nfeatures: {dv: 32, dt: 32}\n"
      << "model: {hidden_dim: 32, ff_dim: 64, heads: 4}\n"
      << "optim: {epochs: 5, batch_size: 4, lr: 0.0005}\n"
      << "run: {seed: 17, results_dir: " << (work / results) << "}\n";
    return y.str();
  };
  Checks c;
  const TrainConfig ca = parse_config(yaml("a7_a"), work);
  const TrainConfig cb = parse_config(yaml("a7_b"), work);
  const TrainResult ra = train_run(ca);
  const TrainResult rb = train_run(cb);
  c.expect(ra.log.to_jsonl() == rb.log.to_jsonl(), "identical RunLogs");
  c.expect(read_file(work / "a7_a/runlog.jsonl") == read_file(work / "a7_b/runlog.jsonl"),
           "identical runlog.jsonl files");
  c.expect(read_file(ra.checkpoint) == read_file(rb.checkpoint), "identical checkpoint bytes");
  const EvalResult e1 = evaluate_run(ca, ra.checkpoint, "val");
  const std::string report1 = read_file(e1.output_dir / "report.json");
  const std::string preds1 = read_file(e1.output_dir / "predictions.jsonl");
  const EvalResult e2 = evaluate_run(ca, ra.checkpoint, "val");
  c.expect(report1 == read_file(e2.output_dir / "report.json"), "bitwise report.json");
  c.expect(preds1 == read_file(e2.output_dir / "predictions.jsonl"), "bitwise predictions");
  c.expect(e1.predictions == e2.predictions, "identical in-memory predictions");
  return {c.ok(), c.summary()};
}

// --- A8 ----------------------------------------------------------------------

Outcome a8_api(const fs::path& work) {
  Checks c;
  torch::manual_seed(8);
  ModelConfig mc;
  mc.hidden_dim = 64;
  mc.ff_dim = 128;
  mc.heads = 4;
  MomentDetr model(mc);
  const fs::path ckpt = work / "a8.ckpt";
  save_checkpoint(ckpt, model, CheckpointMeta{});

  ClipFrames video;
  for (int clip = 0; clip < 6; ++clip) {
    std::vector<RgbFrame> frames;
    for (int f = 0; f < 2; ++f) {
      frames.push_back(RgbFrame::filled(8, 8, static_cast<std::uint8_t>(30 * clip),
                                        static_cast<std::uint8_t>(100 + 10 * f),
                                        static_cast<std::uint8_t>(200 - 25 * clip)));
    }
    video.clips.push_back(std::move(frames));
  }
  const fs::path frames = work / "a8_frames";
  write_frame_dir(video, frames);

  auto p = new_predictor(ckpt, Device::kCpu, "trivial");
  try {
    p->predict("a person cooks");
    c.expect(false, "predict before encode_video raises");
  } catch (const StateError& e) {
    c.expect(std::string(e.what()) == "call encode_video first", "state error message");
  }
  p->encode_video(frames);
  const PredictResult r = p->predict("a person cooks");
  const double duration = p->encoded_video().duration_s;
  const double nms = p->postprocess_config().nms_threshold;
  c.expect(!r.moments.empty(), "moments returned");
  c.expect(r.saliency.size() == 6, "one saliency pair per clip");
  for (std::size_t i = 0; i < r.moments.size(); ++i) {
    const auto& m = r.moments[i];
    c.expect(m.span.start_s >= 0.0 && m.span.end_s <= duration && m.span.start_s < m.span.end_s,
             "span within [0, duration]");
    c.expect(m.confidence >= 0.0 && m.confidence <= 1.0, "score in [0, 1]");
    if (i > 0) c.expect(r.moments[i - 1].confidence >= m.confidence, "sorted descending");
    for (std::size_t j = 0; j < i; ++j) {
      c.expect(temporal_iou(r.moments[j].span, m.span) <= nms, "pairwise IoU <= nms");
    }
  }

  ServerConfig sc;
  sc.port = 0;
  sc.upload_dir = work / "a8_uploads";
  sc.models = {{"m", ckpt, "trivial", 0, 1.0}};
  DemoServer server(sc);
  const int port = server.start();
  {
    httplib::Client client("127.0.0.1", port);
    const auto up = client.Post("/api/videos", json{{"frame_dir", frames.string()}}.dump(),
                                "application/json");
    c.expect(up && up->status == 200, "video registration");
    if (up && up->status == 200) {
      const json token = json::parse(up->body)["video_token"];
      const auto res = client.Post(
          "/api/predict",
          json{{"video_token", token}, {"model_id", "m"}, {"query", "a person cooks"}}.dump(),
          "application/json");
      c.expect(res && res->status == 200, "HTTP predict");
      if (res && res->status == 200) {
        c.expect(json::parse(res->body) == predict_result_json(r),
                 "HTTP result equals in-process result");
      }
    }
  }
  server.stop();
  return {c.ok(), c.summary()};
}

// --- A9 ----------------------------------------------------------------------

Outcome a9_monotonicity() {
  std::mt19937_64 rng(99);
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  MetricConfig config;
  config.map_thresholds = grid;
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const oracle::Instance inst = oracle::random_instance(rng, 10, 6, 20);
    const MapSuite suite = map_suite(inst.predictions, inst.samples, config);
    double prev_r1 = 1e9, prev_map = 1e9;
    for (double t : grid) {
      const double r1 = recall1_at(inst.predictions, inst.samples, t);
      const double m = suite.map_at.at(t);
      violations += (r1 > prev_r1) + (m > prev_map);
      prev_r1 = r1;
      prev_map = m;
    }
  }
  return {violations == 0, "500 cases x 19 thresholds, " + std::to_string(violations) +
                               " monotonicity violations"};
}

}  // namespace
}  // namespace lighthouse

int main(int argc, char** argv) {
  using namespace lighthouse;
  CLI::App app{"acceptance criteria runner"};
  std::string only;
  app.add_option("--only", only, "comma-separated subset, e.g. A1,A9");
  CLI11_PARSE(app, argc, argv);
  std::set<std::string> selected;
  std::stringstream ss(only);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) selected.insert(item);
  }

  torch::set_num_threads(1);
  test::TempDir work;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", [] { return a1_oracle_equivalence(); }},
      {"A2", [] { return a2_fixtures(); }},
      {"A3", [&] { return a3_overfit(work.path()); }},
      {"A4", [&] { return a4_generalization(work.path()); }},
      {"A5", [&] { return a5_variants(work.path()); }},
      {"A6", [] { return a6_gradients(); }},
      {"A7", [&] { return a7_reproducibility(work.path()); }},
      {"A8", [&] { return a8_api(work.path()); }},
      {"A9", [] { return a9_monotonicity(); }},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && !selected.count(name)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    std::cout << name << " " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
