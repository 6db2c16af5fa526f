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

#include "lighthouse/trainer/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"

namespace lighthouse {

namespace fs = std::filesystem;

namespace {

// Reads one YAML mapping, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const YAML::Node& node, std::string name) : node_(node), name_(std::move(name)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError("key '" + name_ + "': expected a mapping");
    }
  }

  template <typename T>
  void read(const std::string& key, T& out, bool required = false) {
    seen_.insert(key);
    const auto value = node_ ? node_[key] : YAML::Node();
    if (!value || value.IsNull()) {
      if (required) throw ConfigError("missing required key '" + path(key) + "'");
      return;
    }
    try {
      out = value.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("key '" + path(key) + "': expected " + type_name<T>());
    }
  }

  void read_path(const std::string& key, fs::path& out, const fs::path& base, bool required) {
    std::string text;
    read(key, text, required);
    if (text.empty()) return;
    fs::path p(text);
    out = p.is_absolute() ? p : (base / p).lexically_normal();
  }

  void reject_unknown() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError("unknown key '" + path(key) + "'");
    }
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  template <typename T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list of numbers";
  }

  YAML::Node node_;
  std::string name_;
  std::set<std::string> seen_;
};

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string list(const std::vector<double>& vs) {
  std::string s = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + num(vs[i]);
  return s + "]";
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string boolean(bool b) { return b ? "true" : "false"; }

void require_path(const fs::path& p, const std::string& key) {
  if (!fs::exists(p)) throw ConfigError("key '" + key + "': path does not exist: " + p.string());
}

std::string emit(const TrainConfig& c, bool with_results_dir) {
  const auto& m = c.model;
  const auto& e = c.eval;
  std::ostringstream out;
  out << "data:\n"
      << "  kind: " << to_string(c.data.kind) << "\n"
      << "  train_annotations: " << quoted(c.data.train_annotations.string()) << "\n"
      << "  val_annotations: " << quoted(c.data.val_annotations.string()) << "\n"
      << "  feature_dir: " << quoted(c.data.feature_dir.string()) << "\n"
      << "  clip_len_s: " << num(c.data.clip_len_s) << "\n"
      << "features:\n"
      << "  name: " << quoted(c.features.name) << "\n"
      << "  dv: " << c.features.dv << "\n"
      << "  dt: " << c.features.dt << "\n"
      << "model:\n"
      << "  hidden_dim: " << m.hidden_dim << "\n"
      << "  num_slots: " << m.num_slots << "\n"
      << "  enc_layers: " << m.enc_layers << "\n"
      << "  dec_layers: " << m.dec_layers << "\n"
      << "  heads: " << m.heads << "\n"
      << "  ff_dim: " << m.ff_dim << "\n"
      << "  dropout: " << num(m.dropout) << "\n"
      << "  w_l1: " << num(m.weights.l1) << "\n"
      << "  w_giou: " << num(m.weights.giou) << "\n"
      << "  w_cls: " << num(m.weights.cls) << "\n"
      << "  w_sal: " << num(m.weights.saliency) << "\n"
      << "  w_neg: " << num(m.weights.neg_pair) << "\n"
      << "  saliency_margin: " << num(m.saliency_margin) << "\n"
      << "  neg_margin: " << num(m.neg_margin) << "\n"
      << "  eos_coef: " << num(m.eos_coef) << "\n"
      << "  neg_pair: " << boolean(m.neg_pair) << "\n"
      << "  dummy_tokens: " << m.dummy_tokens << "\n"
      << "  content_slots: " << boolean(m.content_slots) << "\n"
      << "  position_encoding: " << boolean(m.position_encoding) << "\n"
      << "optim:\n"
      << "  lr: " << num(c.optim.lr) << "\n"
      << "  weight_decay: " << num(c.optim.weight_decay) << "\n"
      << "  epochs: " << c.optim.epochs << "\n"
      << "  batch_size: " << c.optim.batch_size << "\n"
      << "  grad_clip: " << num(c.optim.grad_clip) << "\n"
      << "  lr_drop_epoch: " << c.optim.lr_drop_epoch << "\n"
      << "eval:\n"
      << "  r1_thresholds: " << list(e.metrics.r1_thresholds) << "\n"
      << "  map_thresholds: " << list(e.metrics.map_thresholds) << "\n"
      << "  avg_map_grid: " << list(e.metrics.avg_map_grid) << "\n"
      << "  hd_positive_level: " << e.metrics.hd_positive_level << "\n"
      << "  hd_positive_mode: "
      << (e.metrics.hd_positive_mode == HdPositiveMode::kThreshold ? "threshold" : "top_fraction")
      << "\n"
      << "  hd_top_fraction: " << num(e.metrics.hd_top_fraction) << "\n"
      << "  nms_threshold: " << num(e.postprocess.nms_threshold) << "\n"
      << "  top_k: " << e.postprocess.top_k << "\n"
      << "run:\n"
      << "  seed: " << c.run.seed << "\n";
  if (with_results_dir) out << "  results_dir: " << quoted(c.run.results_dir.string()) << "\n";
  out << "  checkpoint_every: " << c.run.checkpoint_every << "\n"
      << "  eval_every: " << c.run.eval_every << "\n";
  return out.str();
}

}  // namespace

TrainConfig parse_config(const std::string& yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a YAML mapping");
  static const std::set<std::string> kSections{"data", "features", "model", "optim", "eval", "run"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kSections.count(key)) throw ConfigError("unknown key '" + key + "'");
  }

  TrainConfig c;
  {
    Section s(root["data"], "data");
    std::string kind = "mr_hd";
    s.read("kind", kind);
    try {
      c.data.kind = parse_dataset_kind(kind);
    } catch (const Error& e) {
      throw ConfigError("key 'data.kind': " + std::string(e.what()));
    }
    s.read_path("train_annotations", c.data.train_annotations, base_dir, true);
    s.read_path("val_annotations", c.data.val_annotations, base_dir, false);
    s.read_path("feature_dir", c.data.feature_dir, base_dir, true);
    s.read("clip_len_s", c.data.clip_len_s);
    s.reject_unknown();
  }
  {
    Section s(root["features"], "features");
    s.read("name", c.features.name);
    s.read("dv", c.features.dv);
    s.read("dt", c.features.dt);
    s.reject_unknown();
  }
  {
    Section s(root["model"], "model");
    auto& m = c.model;
    int video_dim = c.features.dv, text_dim = c.features.dt;
    s.read("video_dim", video_dim);
    s.read("text_dim", text_dim);
    if (video_dim != c.features.dv || text_dim != c.features.dt) {
      throw ConfigError("model.video_dim/text_dim must equal features.dv/dt");
    }
    m.video_dim = c.features.dv;
    m.text_dim = c.features.dt;
    s.read("hidden_dim", m.hidden_dim);
    s.read("num_slots", m.num_slots);
    s.read("enc_layers", m.enc_layers);
    s.read("dec_layers", m.dec_layers);
    s.read("heads", m.heads);
    s.read("ff_dim", m.ff_dim);
    s.read("dropout", m.dropout);
    s.read("w_l1", m.weights.l1);
    s.read("w_giou", m.weights.giou);
    s.read("w_cls", m.weights.cls);
    s.read("w_sal", m.weights.saliency);
    s.read("w_neg", m.weights.neg_pair);
    s.read("saliency_margin", m.saliency_margin);
    s.read("neg_margin", m.neg_margin);
    s.read("eos_coef", m.eos_coef);
    s.read("neg_pair", m.neg_pair);
    s.read("dummy_tokens", m.dummy_tokens);
    s.read("content_slots", m.content_slots);
    s.read("position_encoding", m.position_encoding);
    s.reject_unknown();
  }
  {
    Section s(root["optim"], "optim");
    s.read("lr", c.optim.lr);
    s.read("weight_decay", c.optim.weight_decay);
    s.read("epochs", c.optim.epochs);
    s.read("batch_size", c.optim.batch_size);
    s.read("grad_clip", c.optim.grad_clip);
    s.read("lr_drop_epoch", c.optim.lr_drop_epoch);
    s.reject_unknown();
  }
  {
    Section s(root["eval"], "eval");
    auto& mc = c.eval.metrics;
    s.read("r1_thresholds", mc.r1_thresholds);
    s.read("map_thresholds", mc.map_thresholds);
    s.read("avg_map_grid", mc.avg_map_grid);
    s.read("hd_positive_level", mc.hd_positive_level);
    std::string mode = "threshold";
    s.read("hd_positive_mode", mode);
    if (mode == "threshold") {
      mc.hd_positive_mode = HdPositiveMode::kThreshold;
    } else if (mode == "top_fraction") {
      mc.hd_positive_mode = HdPositiveMode::kTopFraction;
    } else {
      throw ConfigError("key 'eval.hd_positive_mode': expected threshold or top_fraction");
    }
    s.read("hd_top_fraction", mc.hd_top_fraction);
    s.read("nms_threshold", c.eval.postprocess.nms_threshold);
    s.read("top_k", c.eval.postprocess.top_k);
    s.reject_unknown();
  }
  {
    Section s(root["run"], "run");
    if (root["run"] && root["run"]["seed"] && root["run"]["seed"].IsScalar()) {
      const auto text = root["run"]["seed"].Scalar();
      if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("key 'run.seed': expected a non-negative integer");
      }
    }
    s.read("seed", c.run.seed, true);
    s.read_path("results_dir", c.run.results_dir, base_dir, false);
    if (c.run.results_dir.is_relative()) c.run.results_dir = base_dir / c.run.results_dir;
    s.read("checkpoint_every", c.run.checkpoint_every);
    s.read("eval_every", c.run.eval_every);
    s.reject_unknown();
  }

  if (!(c.data.clip_len_s > 0.0)) throw ConfigError("data.clip_len_s must be > 0");
  if (c.features.dv < 1 || c.features.dt < 1) throw ConfigError("features.dv/dt must be >= 1");
  if (!(c.optim.lr > 0.0)) throw ConfigError("optim.lr must be > 0");
  if (c.optim.weight_decay < 0.0) throw ConfigError("optim.weight_decay must be >= 0");
  if (c.optim.epochs < 1) throw ConfigError("optim.epochs must be >= 1");
  if (c.optim.batch_size < 1) throw ConfigError("optim.batch_size must be >= 1");
  if (c.optim.grad_clip < 0.0) throw ConfigError("optim.grad_clip must be >= 0");
  if (c.optim.lr_drop_epoch == 0) c.optim.lr_drop_epoch = std::max(1, c.optim.epochs * 3 / 4);
  if (c.optim.lr_drop_epoch < 1) throw ConfigError("optim.lr_drop_epoch must be >= 1");
  if (c.run.checkpoint_every < 0 || c.run.eval_every < 0) {
    throw ConfigError("run.checkpoint_every and run.eval_every must be >= 0");
  }
  c.model.validate();
  c.eval.metrics.validate();
  c.eval.postprocess.validate();
  require_path(c.data.train_annotations, "data.train_annotations");
  if (!c.data.val_annotations.empty()) require_path(c.data.val_annotations, "data.val_annotations");
  require_path(c.data.feature_dir, "data.feature_dir");
  return c;
}

TrainConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto config = parse_config(ss.str(), fs::absolute(path).parent_path());
  if (const char* dir = std::getenv("LIGHTHOUSE_RESULTS_DIR"); dir != nullptr && *dir != '\0') {
    config.run.results_dir = fs::absolute(dir);
  }
  return config;
}

std::string effective_config_yaml(const TrainConfig& config) { return emit(config, true); }

std::string config_hash(const TrainConfig& config) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(emit(config, false))));
  return hex;
}

}  // namespace lighthouse
