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

#include "lighthouse/features/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "lighthouse/data/clip_grid.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"

namespace lighthouse {
namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v / v.norm();
}

std::vector<std::string> split_words(std::string_view query) {
  std::vector<std::string> words;
  std::istringstream in{std::string(query)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_samples < 1) throw ArgumentError("num_samples must be >= 1");
  if (clips_per_video < 1) throw ArgumentError("clips_per_video must be >= 1");
  if (dv < 1 || dt < 1) throw ArgumentError("feature dims must be >= 1");
  if (moment_min_clips < 1 || moment_min_clips > moment_max_clips ||
      moment_max_clips > clips_per_video) {
    throw ArgumentError(
        "infeasible moment bounds: need 1 <= moment_min_clips <= moment_max_clips <= "
        "clips_per_video");
  }
  if (!(signal_strength > 0.0) || signal_strength > 1.0) {
    throw ArgumentError("signal_strength must lie in (0, 1]");
  }
  if (noise_sigma < 0.0) throw ArgumentError("noise_sigma must be >= 0");
  if (words_per_query < 1 || vocab_size < 1) {
    throw ArgumentError("words_per_query and vocab_size must be >= 1");
  }
  if (label_noise < 0.0 || label_noise > 1.0) throw ArgumentError("label_noise must lie in [0, 1]");
  if (!(clip_len_s > 0.0)) throw ArgumentError("clip_len_s must be positive");
  if (first_query_id < 0) throw ArgumentError("first_query_id must be >= 0");
}

FeatureMatrix synthetic_mixing_matrix(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.mixing_seed ^ (std::uint64_t(spec.dv) << 32) ^ spec.dt);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(spec.dt)));
  FeatureMatrix w(spec.dv, spec.dt);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<float>(normal(rng));
  return w;
}

Eigen::VectorXf synthetic_word_vector(std::string_view word, int dt) {
  std::mt19937_64 rng(fnv1a64(word));
  return random_unit(rng, dt).cast<float>();
}

FeatureMatrix synthetic_text_features(std::string_view query, int dt) {
  const auto words = split_words(query);
  if (words.empty()) throw ArgumentError("query must contain at least one word");
  FeatureMatrix rows(static_cast<Eigen::Index>(words.size()), dt);
  for (std::size_t i = 0; i < words.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = synthetic_word_vector(words[i], dt).transpose();
  }
  return rows;
}

Eigen::VectorXf synthetic_query_vector(std::string_view query, int dt) {
  const FeatureMatrix rows = synthetic_text_features(query, dt);
  Eigen::VectorXd q = rows.cast<double>().colwise().sum().transpose();
  return (q / q.norm()).cast<float>();
}

SyntheticDataset synthesize_dataset(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Eigen::MatrixXd mixing = synthetic_mixing_matrix(spec).cast<double>();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> vocab(0, spec.vocab_size - 1);
  std::uniform_int_distribution<int> moment_len(spec.moment_min_clips, spec.moment_max_clips);
  std::uniform_int_distribution<int> background_label(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_scale = spec.noise_sigma / std::sqrt(static_cast<double>(spec.dv));
  const double duration = spec.clips_per_video * spec.clip_len_s;
  constexpr int kAnnotators = 3;

  SyntheticDataset out;
  out.samples.reserve(static_cast<std::size_t>(spec.num_samples));
  out.features.reserve(static_cast<std::size_t>(spec.num_samples));
  char buf[64];
  for (int n = 0; n < spec.num_samples; ++n) {
    DatasetSample s;
    s.query_id = spec.first_query_id + n;
    std::snprintf(buf, sizeof(buf), "syn_%06llu_%05d",
                  static_cast<unsigned long long>(seed % 1000000), n);
    s.video_id = buf;
    s.duration_s = duration;
    std::string query;
    for (int w = 0; w < spec.words_per_query; ++w) {
      std::snprintf(buf, sizeof(buf), "%stok%04d", w ? " " : "", vocab(rng));
      query += buf;
    }
    s.query_text = query;

    const int len = moment_len(rng);
    std::uniform_int_distribution<int> start_dist(0, spec.clips_per_video - len);
    const int first = start_dist(rng);
    s.gt_moments.push_back({first * spec.clip_len_s, (first + len) * spec.clip_len_s});

    const Eigen::VectorXd q = synthetic_query_vector(query, spec.dt).cast<double>();
    const Eigen::VectorXd signal = spec.signal_strength * (mixing * q);

    // Decoy run: same length law as the moment, disjoint from it.
    int decoy_first = -1;
    int decoy_len = 0;
    Eigen::VectorXd decoy_signal;
    if (spec.decoy) {
      decoy_len = moment_len(rng);
      std::vector<int> starts;
      for (int d = 0; d + decoy_len <= spec.clips_per_video; ++d) {
        if (d + decoy_len <= first || d >= first + len) starts.push_back(d);
      }
      if (!starts.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
        decoy_first = starts[pick(rng)];
        decoy_signal = spec.signal_strength * (mixing * random_unit(rng, spec.dt));
      }
    }

    FeaturePair pair;
    pair.clip_grid = clip_grid(duration, spec.clip_len_s);
    pair.video.resize(spec.clips_per_video, spec.dv);
    SaliencyAnnotation sal;
    for (int c = 0; c < spec.clips_per_video; ++c) {
      const bool inside = c >= first && c < first + len;
      const bool in_decoy = decoy_first >= 0 && c >= decoy_first && c < decoy_first + decoy_len;
      Eigen::VectorXd row =
          inside     ? signal
          : in_decoy ? decoy_signal
                     : Eigen::VectorXd(spec.signal_strength * (mixing * random_unit(rng, spec.dt)));
      for (int d = 0; d < spec.dv; ++d) row[d] += noise_scale * normal(rng);
      pair.video.row(c) = row.cast<float>().transpose();

      const int base = inside ? 5 : background_label(rng);
      std::vector<int> labels;
      for (int a = 0; a < kAnnotators; ++a) {
        int label = base;
        if (unit(rng) < spec.label_noise) label += unit(rng) < 0.5 ? -1 : 1;
        labels.push_back(std::clamp(label, 1, 5));
      }
      sal.clip_ids.push_back(c);
      sal.scores.push_back(std::move(labels));
    }
    s.saliency = std::move(sal);
    if (spec.normalize) l2_normalize_rows(pair.video);
    pair.text = synthetic_text_features(query, spec.dt);

    out.samples.push_back(std::move(s));
    out.features.push_back(std::move(pair));
  }
  return out;
}

}  // namespace lighthouse
