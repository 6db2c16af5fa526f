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

#include "lighthouse/trainer/synth_data.hpp"

#include <set>
#include <string>

#include <yaml-cpp/yaml.h>

#include "lighthouse/data/annotations.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/trainer/dataset.hpp"

namespace lighthouse {

namespace fs = std::filesystem;

SynthDataSpec load_synth_spec(const fs::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw IoError("cannot read synthetic spec " + path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  SynthDataSpec s;
  if (root.IsNull()) return s;
  if (!root.IsMap()) throw ConfigError("synthetic spec must be a YAML mapping");
  std::set<std::string> seen;
  auto get = [&](const char* key, auto& out) {
    seen.insert(key);
    if (!root[key]) return;
    try {
      out = root[key].as<std::decay_t<decltype(out)>>();
    } catch (const YAML::Exception&) {
      throw ConfigError(std::string("key '") + key + "': wrong type");
    }
  };
  auto& b = s.base;
  get("train_samples", s.train_samples);
  get("val_samples", s.val_samples);
  get("seed", s.seed);
  s.val_seed = s.seed + 1;
  get("val_seed", s.val_seed);
  get("clips_per_video", b.clips_per_video);
  get("dv", b.dv);
  get("dt", b.dt);
  get("moment_min_clips", b.moment_min_clips);
  get("moment_max_clips", b.moment_max_clips);
  get("signal_strength", b.signal_strength);
  get("noise_sigma", b.noise_sigma);
  get("words_per_query", b.words_per_query);
  get("vocab_size", b.vocab_size);
  get("label_noise", b.label_noise);
  get("clip_len_s", b.clip_len_s);
  get("normalize", b.normalize);
  get("decoy", b.decoy);
  get("mixing_seed", b.mixing_seed);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!seen.count(key)) throw ConfigError("unknown key '" + key + "'");
  }
  if (s.train_samples < 1) throw ConfigError("train_samples must be >= 1");
  if (s.val_samples < 0) throw ConfigError("val_samples must be >= 0");
  return s;
}

SynthDataPaths write_synthetic_data(const SynthDataSpec& spec, const fs::path& out) {
  SynthDataPaths paths;
  paths.feature_dir = out / "features";
  paths.train_annotations = out / "train.jsonl";
  fs::create_directories(paths.feature_dir);

  auto train_spec = spec.base;
  train_spec.num_samples = spec.train_samples;
  train_spec.first_query_id = 0;
  const auto train = synthesize_dataset(train_spec, spec.seed);
  write_annotations(train.samples, paths.train_annotations);
  write_feature_dir(paths.feature_dir, train.samples, train.features);

  if (spec.val_samples > 0) {
    auto val_spec = spec.base;
    val_spec.num_samples = spec.val_samples;
    val_spec.first_query_id = spec.train_samples;
    const auto val = synthesize_dataset(val_spec, spec.val_seed);
    paths.val_annotations = out / "val.jsonl";
    write_annotations(val.samples, paths.val_annotations);
    write_feature_dir(paths.feature_dir, val.samples, val.features);
  }
  return paths;
}

}  // namespace lighthouse
