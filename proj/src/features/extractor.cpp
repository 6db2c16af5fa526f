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

#include "lighthouse/features/extractor.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <random>

#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"
#include "lighthouse/features/synthetic.hpp"

namespace lighthouse {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kVideoProjectionTag = 0x766964656fULL;
constexpr std::uint64_t kTextProjectionTag = 0x74657874ULL;

FeatureMatrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cols)));
  FeatureMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<float>(normal(rng));
  return m;
}

std::size_t hash_bucket(std::string_view token) {
  return static_cast<std::size_t>(fnv1a64(token) % kTextHashBuckets);
}

EncodedVideo load_encoded_lhf(const fs::path& source, const FeatureExtractorSpec& spec) {
  if (fs::is_directory(source) || source.extension() != ".lhf") {
    throw IoError("extractor '" + spec.name + "' expects an .lhf video feature file, got " +
                  source.string());
  }
  EncodedVideo out;
  out.video = load_features(source);
  if (out.video.cols() != spec.dv) {
    throw ShapeError("video feature dim " + std::to_string(out.video.cols()) +
                     " in " + source.string() + " does not match extractor dim " +
                     std::to_string(spec.dv));
  }
  if (out.video.rows() == 0) throw ArgumentError("video has zero clips: " + source.string());
  out.duration_s = static_cast<double>(out.video.rows()) * spec.clip_len_s;
  out.clip_grid = clip_grid(out.duration_s, spec.clip_len_s);
  return out;
}

FeatureMatrix video_rows(const ClipFrames& video, const FeatureMatrix& proj,
                         bool normalize) {
  FeatureMatrix rows(static_cast<Eigen::Index>(video.clips.size()), proj.rows());
  for (std::size_t c = 0; c < video.clips.size(); ++c) {
    rows.row(static_cast<Eigen::Index>(c)) =
        (proj * clip_descriptor(video.clips[c])).transpose();
  }
  if (normalize) l2_normalize_rows(rows);
  return rows;
}

FeatureMatrix text_rows(std::string_view query, const FeatureMatrix& proj,
                        bool normalize) {
  const auto tokens = tokenize(query);
  if (tokens.empty()) throw ArgumentError("query must contain at least one word");
  std::vector<std::size_t> buckets;
  for (const auto& t : tokens) buckets.push_back(hash_bucket(t));
  std::sort(buckets.begin(), buckets.end());
  FeatureMatrix rows(static_cast<Eigen::Index>(buckets.size()), proj.rows());
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) =
        proj.col(static_cast<Eigen::Index>(buckets[i])).transpose();
  }
  if (normalize) l2_normalize_rows(rows);
  return rows;
}

class TrivialExtractor final : public FeatureExtractor {
 public:
  explicit TrivialExtractor(FeatureExtractorSpec spec)
      : FeatureExtractor(std::move(spec)),
        video_proj_(video_projection(spec_)),
        text_proj_(text_projection(spec_)) {}

  EncodedVideo encode_video(const fs::path& source) const override {
    ClipFrames frames;
    if (fs::is_directory(source)) {
      frames = load_frame_dir(source);
    } else {
      static std::atomic<unsigned> counter{0};
      const fs::path tmp = fs::temp_directory_path() /
                           ("lighthouse_decode_" + std::to_string(counter++) + "_" +
                            std::to_string(fnv1a64(source.string())));
      fs::remove_all(tmp);
      const auto per_clip = static_cast<std::size_t>(
          std::max(1.0, std::round(spec_.sample_fps * spec_.clip_len_s)));
      decode_video_to_frame_dir(source, tmp, spec_.sample_fps, per_clip);
      frames = load_frame_dir(tmp);
      fs::remove_all(tmp);
    }
    EncodedVideo out;
    out.duration_s = frame_dir_duration(frames, spec_);
    out.clip_grid = clip_grid(out.duration_s, spec_.clip_len_s);
    out.video = video_rows(frames, video_proj_, spec_.normalize);
    return out;
  }

  FeatureMatrix encode_text(std::string_view query) const override {
    return text_rows(query, text_proj_, spec_.normalize);
  }

 private:
  FeatureMatrix video_proj_;
  FeatureMatrix text_proj_;
};

// Serves planted-signal datasets: video rows come from .lhf files written by
// synthesize_dataset, text rows from the same word-vector table.
class SyntheticExtractor final : public FeatureExtractor {
 public:
  using FeatureExtractor::FeatureExtractor;

  EncodedVideo encode_video(const fs::path& source) const override {
    return load_encoded_lhf(source, spec_);
  }
  FeatureMatrix encode_text(std::string_view query) const override {
    return synthetic_text_features(query, spec_.dt);
  }
};

// Video rows precomputed offline into .lhf files; queries use the hashed
// bag-of-words text encoder.
class PrecomputedExtractor final : public FeatureExtractor {
 public:
  explicit PrecomputedExtractor(FeatureExtractorSpec spec)
      : FeatureExtractor(std::move(spec)), text_proj_(text_projection(spec_)) {}

  EncodedVideo encode_video(const fs::path& source) const override {
    return load_encoded_lhf(source, spec_);
  }
  FeatureMatrix encode_text(std::string_view query) const override {
    return text_rows(query, text_proj_, spec_.normalize);
  }

 private:
  FeatureMatrix text_proj_;
};

}  // namespace

void FeatureExtractorSpec::validate() const {
  if (dv <= 0 || dt <= 0) throw ArgumentError("feature dims must be positive");
  if (!(clip_len_s > 0.0)) throw ArgumentError("clip_len_s must be positive");
  if (!(sample_fps > 0.0)) throw ArgumentError("sample_fps must be positive");
  const auto names = registered_extractors();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + ("\"" + n + "\"");
    throw NotFoundError("unknown feature extractor '" + name + "'; registered: [" + list +
                        "]");
  }
}

std::vector<std::string> registered_extractors() {
  return {"trivial", "synthetic", "precomputed"};
}

std::unique_ptr<FeatureExtractor> make_extractor(const FeatureExtractorSpec& spec) {
  spec.validate();
  if (spec.name == "trivial") return std::make_unique<TrivialExtractor>(spec);
  if (spec.name == "synthetic") return std::make_unique<SyntheticExtractor>(spec);
  return std::make_unique<PrecomputedExtractor>(spec);
}

Eigen::VectorXf clip_descriptor(const std::vector<RgbFrame>& frames) {
  if (frames.empty()) throw ArgumentError("clip has zero frames");
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(kHistogramBins);
  double sum[3] = {0, 0, 0};
  double sum_sq[3] = {0, 0, 0};
  double pixels = 0.0;
  for (const auto& f : frames) {
    const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
    if (n == 0 || f.pixels.size() != n * 3) throw ArgumentError("malformed frame in clip");
    for (std::size_t p = 0; p < n; ++p) {
      const double r = f.pixels[3 * p];
      const double g = f.pixels[3 * p + 1];
      const double b = f.pixels[3 * p + 2];
      const double gray = 0.299 * r + 0.587 * g + 0.114 * b;
      const int bin = std::min(kHistogramBins - 1,
                               static_cast<int>(gray * kHistogramBins / 256.0));
      hist[bin] += 1.0;
      const double ch[3] = {r / 255.0, g / 255.0, b / 255.0};
      for (int c = 0; c < 3; ++c) {
        sum[c] += ch[c];
        sum_sq[c] += ch[c] * ch[c];
      }
    }
    pixels += static_cast<double>(n);
  }
  Eigen::VectorXf d(kClipDescriptorDim);
  d.head(kHistogramBins) = (hist / pixels).cast<float>();
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / pixels;
    const double var = std::max(0.0, sum_sq[c] / pixels - mean * mean);
    d[kHistogramBins + c] = static_cast<float>(mean);
    d[kHistogramBins + 3 + c] = static_cast<float>(std::sqrt(var));
  }
  return d;
}

std::vector<std::string> tokenize(std::string_view query) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : query) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

FeatureMatrix video_projection(const FeatureExtractorSpec& spec) {
  return gaussian_matrix(spec.dv, kClipDescriptorDim, spec.seed ^ kVideoProjectionTag);
}

FeatureMatrix text_projection(const FeatureExtractorSpec& spec) {
  return gaussian_matrix(spec.dt, kTextHashBuckets, spec.seed ^ kTextProjectionTag);
}

FeatureMatrix trivial_video_features(const ClipFrames& video,
                                     const FeatureExtractorSpec& spec) {
  return video_rows(video, video_projection(spec), spec.normalize);
}

FeatureMatrix trivial_text_features(std::string_view query,
                                    const FeatureExtractorSpec& spec) {
  return text_rows(query, text_projection(spec), spec.normalize);
}

double frame_dir_duration(const ClipFrames& video, const FeatureExtractorSpec& spec) {
  if (video.clips.empty()) throw ArgumentError("video has zero clips");
  for (std::size_t c = 0; c < video.clips.size(); ++c) {
    if (video.clips[c].empty()) {
      throw ArgumentError("clip " + std::to_string(c) + " has zero frames");
    }
  }
  const double duration = static_cast<double>(video.total_frames()) / spec.sample_fps;
  if (!(duration > 0.0)) throw ArgumentError("video duration must be positive");
  const auto expected = clip_grid(duration, spec.clip_len_s).size();
  if (expected != video.clips.size()) {
    throw ArgumentError("frame directory has " + std::to_string(video.clips.size()) +
                        " clips but " + std::to_string(video.total_frames()) +
                        " frames at " + std::to_string(spec.sample_fps) +
                        " fps imply " + std::to_string(expected));
  }
  return duration;
}

}  // namespace lighthouse
