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
#include <string>
#include <string_view>
#include <vector>

#include "lighthouse/data/types.hpp"
#include "lighthouse/features/matrix.hpp"

namespace lighthouse {

// Planted-signal dataset. Every query is a handful of made-up words; each
// word maps to a fixed unit vector, and the query vector q is the normalized
// sum. Clips inside the planted moment carry signal_strength * W q, clips
// outside carry signal_strength * W d for a random unit distractor d. Both
// get isotropic Gaussian noise with expected norm noise_sigma. With decoy set,
// one run of background clips shares a single distractor direction, so the
// planted moment is the only repeated run that agrees with the query.
struct SyntheticSpec {
  int num_samples = 32;
  int clips_per_video = 10;
  int dv = 128;
  int dt = 128;
  int moment_min_clips = 2;
  int moment_max_clips = 4;
  double signal_strength = 0.8;
  double noise_sigma = 0.3;
  int words_per_query = 4;
  int vocab_size = 100;
  double label_noise = 0.1;  // chance a label moves one step
  double clip_len_s = 2.0;
  bool normalize = true;
  bool decoy = true;
  std::uint64_t mixing_seed = 0x5eed;  // W is shared by every split
  std::int64_t first_query_id = 0;     // query ids are consecutive from here

  void validate() const;
};

struct SyntheticDataset {
  std::vector<DatasetSample> samples;
  std::vector<FeaturePair> features;  // aligned with samples
};

SyntheticDataset synthesize_dataset(const SyntheticSpec& spec, std::uint64_t seed);

// dv x dt mixing matrix W.
FeatureMatrix synthetic_mixing_matrix(const SyntheticSpec& spec);

// Unit vector for one word, seeded by the word's hash.
Eigen::VectorXf synthetic_word_vector(std::string_view word, int dt);

// One row per whitespace-separated word. Throws ArgumentError on an empty query.
FeatureMatrix synthetic_text_features(std::string_view query, int dt);

// Normalized sum of the word vectors of `query`.
Eigen::VectorXf synthetic_query_vector(std::string_view query, int dt);

}  // namespace lighthouse
