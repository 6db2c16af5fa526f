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
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lighthouse/data/clip_grid.hpp"
#include "lighthouse/features/frames.hpp"
#include "lighthouse/features/matrix.hpp"

namespace lighthouse {

inline constexpr int kDefaultFeatureDim = 128;

struct FeatureExtractorSpec {
  std::string name = "trivial";
  int dv = kDefaultFeatureDim;
  int dt = kDefaultFeatureDim;
  std::uint64_t seed = 0;
  bool normalize = true;
  double clip_len_s = kDefaultClipLenS;
  double sample_fps = 1.0;  // frames per second in frame directories

  void validate() const;
};

// Video half of a FeaturePair plus its time axis.
struct EncodedVideo {
  FeatureMatrix video;
  ClipGrid clip_grid;
  double duration_s = 0.0;
};

// Turns raw inputs into feature rows. Extractors are stateless once built
// and safe to share between threads.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(FeatureExtractorSpec spec) : spec_(std::move(spec)) {}
  virtual ~FeatureExtractor() = default;

  const FeatureExtractorSpec& spec() const { return spec_; }

  // `source` is a frame directory, a video file (external decoder), or an
  // .lhf file, depending on the extractor.
  virtual EncodedVideo encode_video(const std::filesystem::path& source) const = 0;
  virtual FeatureMatrix encode_text(std::string_view query) const = 0;

 protected:
  FeatureExtractorSpec spec_;
};

// Names accepted by make_extractor, in registration order.
std::vector<std::string> registered_extractors();

// Throws NotFoundError listing the registered names for an unknown name.
std::unique_ptr<FeatureExtractor> make_extractor(const FeatureExtractorSpec& spec);

// --- trivial extractor -------------------------------------------------------

inline constexpr int kHistogramBins = 32;
inline constexpr int kClipDescriptorDim = kHistogramBins + 6;
inline constexpr int kTextHashBuckets = 1024;

// 32-bin grayscale histogram (mass normalized to 1) followed by per-channel
// RGB mean and standard deviation in [0, 1]. Throws on an empty clip.
Eigen::VectorXf clip_descriptor(const std::vector<RgbFrame>& frames);

// Lower-cased alphanumeric tokens of `query`.
std::vector<std::string> tokenize(std::string_view query);

// Seeded Gaussian projections used by the trivial extractor.
FeatureMatrix video_projection(const FeatureExtractorSpec& spec);  // dv x 38
FeatureMatrix text_projection(const FeatureExtractorSpec& spec);   // dt x 1024

FeatureMatrix trivial_video_features(const ClipFrames& video,
                                     const FeatureExtractorSpec& spec);
// One row per word, ordered by hash bucket, so word order does not matter.
FeatureMatrix trivial_text_features(std::string_view query,
                                    const FeatureExtractorSpec& spec);

// Duration implied by a frame directory at `sample_fps`, checked against the
// clip layout. Throws ArgumentError when it yields no clips.
double frame_dir_duration(const ClipFrames& video, const FeatureExtractorSpec& spec);

}  // namespace lighthouse
