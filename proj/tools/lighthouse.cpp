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

// Command-line front end: train, evaluate, synth-data, extract-features,
// predict and serve-demo.

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lighthouse/data/annotations.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"
#include "lighthouse/serving/http_server.hpp"
#include "lighthouse/serving/predictor.hpp"
#include "lighthouse/trainer/dataset.hpp"
#include "lighthouse/trainer/synth_data.hpp"
#include "lighthouse/trainer/train.hpp"

namespace fs = std::filesystem;
using namespace lighthouse;

namespace {

// A video id resolves to a frame directory <dir>/<vid> or a single file
// <dir>/<vid>.<ext>.
fs::path find_video(const fs::path& dir, const std::string& video_id) {
  if (fs::is_directory(dir / video_id)) return dir / video_id;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().stem() == video_id && entry.is_regular_file()) return entry.path();
    }
  }
  throw NotFoundError("no video input for video_id '" + video_id + "' in " + dir.string());
}

int run_train(const std::string& config_path, const std::string& resume) {
  const auto config = load_config(config_path);
  const auto result =
      train_run(config, resume.empty() ? std::nullopt : std::optional<fs::path>(resume));
  const auto& last = result.log.epochs.back();
  std::cout << "checkpoint: " << result.checkpoint.string() << "\n"
            << "epochs: " << last.epoch << "\n"
            << "final loss: " << last.loss.at("total") << "\n";
  for (const auto& [name, value] : last.val) std::cout << "val " << name << ": " << value << "\n";
  return 0;
}

int run_evaluate(const std::string& config_path, const std::string& checkpoint,
                 const std::string& split) {
  const auto config = load_config(config_path);
  const auto result = evaluate_run(config, checkpoint, split);
  std::cout << result.report.to_text();
  std::cout << "written: " << result.output_dir.string() << "\n";
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& out) {
  const auto spec = load_synth_spec(spec_path);
  const auto paths = write_synthetic_data(spec, out);
  std::cout << "train annotations: " << paths.train_annotations.string() << "\n";
  if (!paths.val_annotations.empty()) {
    std::cout << "val annotations: " << paths.val_annotations.string() << "\n";
  }
  std::cout << "feature dir: " << paths.feature_dir.string() << "\n";
  return 0;
}

int run_extract(const FeatureExtractorSpec& spec, const std::string& annotations,
                const std::string& kind, const std::string& video_dir, const std::string& out) {
  const auto extractor = make_extractor(spec);
  const auto samples = parse_annotations(annotations, parse_dataset_kind(kind));
  std::size_t videos = 0;
  std::set<std::string> done;
  for (const auto& s : samples) {
    if (done.insert(s.video_id).second) {
      const auto encoded = extractor->encode_video(find_video(video_dir, s.video_id));
      save_features(encoded.video, video_feature_path(out, s.video_id));
      ++videos;
    }
    save_features(extractor->encode_text(s.query_text), text_feature_path(out, s.query_id));
  }
  std::cout << "extracted " << videos << " videos and " << samples.size() << " queries into "
            << out << "\n";
  return 0;
}

int run_predict(const std::string& checkpoint, const FeatureExtractorSpec& spec,
                const std::string& video, const std::vector<std::string>& queries) {
  auto predictor = Predictor::create(checkpoint, Device::kCpu, spec);
  predictor->encode_video(video);
  for (const auto& q : queries) {
    auto j = predict_result_json(predictor->predict(q));
    j["query"] = q;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int run_serve(const std::string& config_path, int port) {
  auto config = load_server_config(config_path);
  if (port >= 0) config.port = port;
  DemoServer server(config);
  const int bound = server.bind();
  std::cout << "serving on http://" << config.host << ":" << bound << "\n" << std::flush;
  server.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Video moment retrieval and highlight detection toolkit"};
  app.require_subcommand(1);

  std::string config, checkpoint, resume, split = "val", spec_path, out;
  auto* train = app.add_subcommand("train", "Train a model from a YAML config");
  train->add_option("--config", config, "YAML config")->required();
  train->add_option("--resume", resume, "Checkpoint to continue from");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  evaluate->add_option("--config", config, "YAML config")->required();
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--split", split, "train or val")->check(CLI::IsMember({"train", "val"}));

  auto* synth = app.add_subcommand("synth-data", "Write a planted-signal synthetic dataset");
  synth->add_option("--spec", spec_path, "YAML synthetic spec")->required();
  synth->add_option("--out", out, "Output directory")->required();

  FeatureExtractorSpec fspec;
  std::string annotations, kind = "mr_hd", video_dir;
  auto* extract = app.add_subcommand("extract-features", "Pre-extract features for a dataset");
  extract->add_option("--annotations", annotations, "Annotation JSONL")->required();
  extract->add_option("--kind", kind, "mr_hd, mr or hd");
  extract->add_option("--videos", video_dir, "Directory of frame dirs or video files")->required();
  extract->add_option("--out", out, "Feature directory")->required();
  extract->add_option("--feature", fspec.name, "Extractor name");
  extract->add_option("--dv", fspec.dv, "Video feature dim");
  extract->add_option("--dt", fspec.dt, "Text feature dim");
  extract->add_option("--seed", fspec.seed, "Extractor seed");
  extract->add_option("--clip-len", fspec.clip_len_s, "Clip length in seconds");
  extract->add_option("--fps", fspec.sample_fps, "Frames per second in frame directories");

  std::string video;
  std::vector<std::string> queries;
  auto* predict = app.add_subcommand("predict", "Retrieve moments for queries about one video");
  predict->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  predict->add_option("--video", video, "Frame dir, video file or .lhf")->required();
  predict->add_option("--query", queries, "Query text (repeatable)")->required();
  predict->add_option("--feature", fspec.name, "Extractor name");
  predict->add_option("--seed", fspec.seed, "Extractor seed");
  predict->add_option("--fps", fspec.sample_fps, "Frames per second in frame directories");

  int port = -1;
  auto* serve = app.add_subcommand("serve-demo", "Run the HTTP demo backend");
  serve->add_option("--config", config, "Server YAML")->required();
  serve->add_option("--port", port, "Port (overrides the config; 0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) return run_train(config, resume);
    if (*evaluate) return run_evaluate(config, checkpoint, split);
    if (*synth) return run_synth(spec_path, out);
    if (*extract) return run_extract(fspec, annotations, kind, video_dir, out);
    if (*predict) {
      const auto ckpt = load_checkpoint(checkpoint);
      fspec.dv = ckpt.config.video_dim;
      fspec.dt = ckpt.config.text_dim;
      return run_predict(checkpoint, fspec, video, queries);
    }
    if (*serve) return run_serve(config, port);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
