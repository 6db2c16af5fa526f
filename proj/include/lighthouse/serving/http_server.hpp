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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "lighthouse/serving/predictor.hpp"

namespace lighthouse {

struct ServedModel {
  std::string id;
  std::filesystem::path checkpoint;
  std::string feature_name = "trivial";
  std::uint64_t feature_seed = 0;
  double sample_fps = 1.0;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_upload_bytes = 64u << 20;
  std::filesystem::path upload_dir = "uploads";
  std::filesystem::path static_dir;  // optional web client
  PostprocessConfig postprocess;
  std::vector<ServedModel> models;
};

// YAML with keys host, port, max_upload_mb, upload_dir, static_dir,
// nms_threshold, top_k and a `models` list of {id, checkpoint, feature,
// feature_seed, sample_fps}. Relative paths resolve against the file.
ServerConfig load_server_config(const std::filesystem::path& path);

// PredictResult as served over HTTP:
// {"moments": [[start, end, score], ...], "saliency": [[clip_start, score], ...]}
nlohmann::json predict_result_json(const PredictResult& result);

// HTTP backend of the demo:
//   GET  /api/models   -> [{"id", "feature_name"}]
//   POST /api/videos   -> {"video_token", "duration", "clip_len"}
//                         multipart field "video", or JSON {"frame_dir"} / {"path"}
//   POST /api/predict  {"video_token", "model_id", "query"} -> predict_result_json
// Errors are {"error": message} with 400, 404, 409, 413 or 500.
class DemoServer {
 public:
  explicit DemoServer(ServerConfig config);
  ~DemoServer();
  DemoServer(const DemoServer&) = delete;
  DemoServer& operator=(const DemoServer&) = delete;

  // Binds to config.port, or to a free port when it is 0. Returns the port.
  int bind();
  // Serves until stop(); blocks.
  void listen();
  // bind() + listen() on a background thread; returns the bound port.
  int start();
  void stop();

  // The session behind `model_id`, for in-process comparisons.
  Predictor& predictor(const std::string& model_id);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lighthouse
