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

#include "lighthouse/serving/http_server.hpp"

#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "httplib.h"
#include "lighthouse/errors.hpp"

namespace lighthouse {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

int status_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "not_found") return 404;
  if (k == "state") return 409;
  if (k == "length") return 413;
  if (k == "argument" || k == "validation" || k == "parse" || k == "shape" ||
      k == "mismatch" || k == "format" || k == "io" || k == "config") {
    return 400;
  }
  return 500;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

std::string require_string(const json& body, const std::string& field) {
  if (!body.contains(field)) throw ArgumentError("missing field '" + field + "'");
  if (!body.at(field).is_string()) throw ArgumentError("field '" + field + "' must be a string");
  return body.at(field).get<std::string>();
}

// Keeps only characters that are safe in a file name.
std::string safe_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), 'v');
  return out;
}

}  // namespace

ServerConfig load_server_config(const fs::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw IoError("cannot read server config " + path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  const auto base = fs::absolute(path).parent_path();
  ServerConfig c;
  c.upload_dir = base / "uploads";
  static const std::set<std::string> kKeys{"host", "port", "max_upload_mb", "upload_dir",
                                           "static_dir", "nms_threshold", "top_k", "models"};
  static const std::set<std::string> kModelKeys{"id", "checkpoint", "feature", "feature_seed",
                                                "sample_fps"};
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (!kKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    }
    if (root["host"]) c.host = root["host"].as<std::string>();
    if (root["port"]) c.port = root["port"].as<int>();
    if (root["max_upload_mb"]) {
      c.max_upload_bytes = static_cast<std::size_t>(root["max_upload_mb"].as<double>() * (1 << 20));
    }
    if (root["upload_dir"]) c.upload_dir = resolve(base, root["upload_dir"].as<std::string>());
    if (root["static_dir"]) c.static_dir = resolve(base, root["static_dir"].as<std::string>());
    if (root["nms_threshold"]) c.postprocess.nms_threshold = root["nms_threshold"].as<double>();
    if (root["top_k"]) c.postprocess.top_k = root["top_k"].as<int>();
    if (!root["models"] || !root["models"].IsSequence() || root["models"].size() == 0) {
      throw ConfigError("key 'models' must list at least one model");
    }
    for (const auto& m : root["models"]) {
      for (const auto& kv : m) {
        const auto key = kv.first.as<std::string>();
        if (!kModelKeys.count(key)) throw ConfigError("unknown key 'models[]." + key + "'");
      }
      ServedModel sm;
      if (!m["id"] || !m["checkpoint"]) throw ConfigError("every model needs 'id' and 'checkpoint'");
      sm.id = m["id"].as<std::string>();
      sm.checkpoint = resolve(base, m["checkpoint"].as<std::string>());
      if (m["feature"]) sm.feature_name = m["feature"].as<std::string>();
      if (m["feature_seed"]) sm.feature_seed = m["feature_seed"].as<std::uint64_t>();
      if (m["sample_fps"]) sm.sample_fps = m["sample_fps"].as<double>();
      c.models.push_back(sm);
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad server config: ") + e.what());
  }
  c.postprocess.validate();
  return c;
}

json predict_result_json(const PredictResult& result) {
  json moments = json::array();
  for (const auto& m : result.moments) {
    moments.push_back({m.span.start_s, m.span.end_s, m.confidence});
  }
  json saliency = json::array();
  for (const auto& [start, score] : result.saliency) saliency.push_back({start, score});
  return json{{"moments", moments}, {"saliency", saliency}};
}

struct DemoServer::Impl {
  struct Session {
    ServedModel spec;
    std::unique_ptr<Predictor> predictor;
    std::mutex mutex;
  };
  struct Video {
    fs::path source;
    std::map<std::string, std::shared_ptr<const EncodedVideo>> encoded;  // by model id
    std::mutex mutex;
  };

  ServerConfig config;
  httplib::Server server;
  std::vector<std::unique_ptr<Session>> sessions;
  std::shared_mutex videos_mutex;
  std::map<std::string, std::shared_ptr<Video>> videos;
  std::thread thread;
  std::atomic<bool> bound{false};
  int port = 0;
  std::mt19937_64 token_rng{std::random_device{}()};
  std::mutex token_mutex;

  Session& session(const std::string& id) {
    for (auto& s : sessions) {
      if (s->spec.id == id) return *s;
    }
    throw NotFoundError("unknown model_id '" + id + "'");
  }

  std::string new_token() {
    std::lock_guard<std::mutex> lock(token_mutex);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                  static_cast<unsigned long long>(token_rng()),
                  static_cast<unsigned long long>(token_rng()));
    return buf;
  }

  std::shared_ptr<const EncodedVideo> encoded(Video& video, Session& s) {
    std::lock_guard<std::mutex> lock(video.mutex);
    auto it = video.encoded.find(s.spec.id);
    if (it != video.encoded.end()) return it->second;
    std::shared_ptr<const EncodedVideo> enc;
    {
      std::lock_guard<std::mutex> model_lock(s.mutex);
      enc = std::make_shared<const EncodedVideo>(s.predictor->encode(video.source));
    }
    video.encoded[s.spec.id] = enc;
    return enc;
  }

  void handle_models(httplib::Response& res) {
    json out = json::array();
    for (const auto& s : sessions) {
      out.push_back({{"id", s->spec.id}, {"feature_name", s->spec.feature_name}});
    }
    send_json(res, 200, out);
  }

  void handle_videos(const httplib::Request& req, httplib::Response& res) {
    auto video = std::make_shared<Video>();
    const auto token = new_token();
    if (req.is_multipart_form_data()) {
      if (!req.has_file("video")) throw ArgumentError("missing field 'video'");
      const auto file = req.get_file_value("video");
      const auto dir = config.upload_dir / token;
      fs::create_directories(dir);
      video->source = dir / safe_name(file.filename.empty() ? "upload.bin" : file.filename);
      std::ofstream out(video->source, std::ios::binary);
      out.write(file.content.data(), static_cast<std::streamsize>(file.content.size()));
      if (!out) throw IoError("cannot store upload");
    } else {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        throw ArgumentError("request body must be JSON or multipart/form-data");
      }
      if (body.contains("frame_dir")) {
        video->source = require_string(body, "frame_dir");
      } else if (body.contains("path")) {
        video->source = require_string(body, "path");
      } else {
        throw ArgumentError("missing field 'frame_dir'");
      }
    }
    // The first model whose extractor accepts the input sets the timeline.
    std::shared_ptr<const EncodedVideo> enc;
    std::exception_ptr first_error;
    for (auto& s : sessions) {
      try {
        enc = encoded(*video, *s);
        break;
      } catch (const Error&) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (!enc) std::rethrow_exception(first_error);
    {
      std::unique_lock<std::shared_mutex> lock(videos_mutex);
      videos.emplace(token, video);
    }
    send_json(res, 200,
              json{{"video_token", token},
                   {"duration", enc->duration_s},
                   {"clip_len", enc->clip_grid.clip_len_s}});
  }

  void handle_predict(const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      throw ArgumentError("request body must be JSON");
    }
    if (!body.is_object()) throw ArgumentError("request body must be a JSON object");
    const auto token = require_string(body, "video_token");
    const auto model_id = require_string(body, "model_id");
    const auto query = require_string(body, "query");
    std::shared_ptr<Video> video;
    {
      std::shared_lock<std::shared_mutex> lock(videos_mutex);
      auto it = videos.find(token);
      if (it != videos.end()) video = it->second;
    }
    if (!video) throw NotFoundError("unknown video_token");
    auto& s = session(model_id);
    const auto enc = encoded(*video, s);
    PredictResult result;
    {
      std::lock_guard<std::mutex> lock(s.mutex);
      result = s.predictor->predict(*enc, query);
    }
    send_json(res, 200, predict_result_json(result));
  }

  template <typename F>
  void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      send_error(res, status_for(e), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  }
};

DemoServer::DemoServer(ServerConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  if (impl_->config.models.empty()) throw ConfigError("the server needs at least one model");
  for (const auto& m : impl_->config.models) {
    auto ckpt = load_checkpoint(m.checkpoint);
    FeatureExtractorSpec spec;
    spec.name = m.feature_name;
    spec.dv = ckpt.config.video_dim;
    spec.dt = ckpt.config.text_dim;
    spec.seed = m.feature_seed;
    spec.sample_fps = m.sample_fps;
    auto s = std::make_unique<Impl::Session>();
    s->spec = m;
    s->predictor = Predictor::create(m.checkpoint, Device::kCpu, spec, impl_->config.postprocess);
    impl_->sessions.push_back(std::move(s));
  }
  auto* impl = impl_.get();
  auto& server = impl_->server;
  server.set_payload_max_length(impl_->config.max_upload_bytes);
  server.Get("/api/models", [impl](const httplib::Request&, httplib::Response& res) {
    impl->guarded(res, [&] { impl->handle_models(res); });
  });
  server.Post("/api/videos", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->handle_videos(req, res); });
  });
  server.Post("/api/predict", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->handle_predict(req, res); });
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    std::string message = httplib::status_message(res.status);
    if (res.status == 413) message = "upload exceeds the size limit";
    send_error(res, res.status, message);
  });
  if (!impl_->config.static_dir.empty()) {
    server.set_mount_point("/", impl_->config.static_dir.string());
  }
}

DemoServer::~DemoServer() { stop(); }

int DemoServer::bind() {
  auto& c = impl_->config;
  if (c.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(c.host);
  } else {
    impl_->port = impl_->server.bind_to_port(c.host, c.port) ? c.port : -1;
  }
  if (impl_->port < 0) {
    throw IoError("cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  impl_->bound = true;
  return impl_->port;
}

void DemoServer::listen() {
  if (!impl_->bound) bind();
  impl_->server.listen_after_bind();
}

int DemoServer::start() {
  const int port = bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void DemoServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

Predictor& DemoServer::predictor(const std::string& model_id) {
  return *impl_->session(model_id).predictor;
}

}  // namespace lighthouse
