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

#include <gtest/gtest.h>
#include <torch/torch.h>

#include <array>
#include <cstdio>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>

#include "lighthouse/errors.hpp"
#include "lighthouse/features/extractor.hpp"
#include "lighthouse/features/feature_file.hpp"
#include "lighthouse/features/frames.hpp"
#include "lighthouse/metrics/metrics.hpp"
#include "lighthouse/model/checkpoint.hpp"
#include "lighthouse/model/network.hpp"
#include "lighthouse/serving/http_server.hpp"
#include "lighthouse/serving/postprocess.hpp"
#include "lighthouse/serving/predictor.hpp"
#include "support/temp_dir.hpp"

// After the Eigen users: <resolv.h> defines a _res macro.
#include <httplib.h>

namespace lighthouse {
namespace {
namespace fs = std::filesystem;
using nlohmann::json;

TEST(TemporalNms, SuppressesHeavyOverlap) {
  const std::vector<ScoredMoment> in = {{{0, 10}, 0.9}, {{1, 11}, 0.8}, {{20, 30}, 0.7}};
  const auto kept = temporal_nms(in, 0.7);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0], in[0]);
  EXPECT_EQ(kept[1], in[2]);
  EXPECT_EQ(temporal_nms({in[1]}, 0.7), std::vector<ScoredMoment>{in[1]});
}

TEST(TemporalNms, ThresholdOneKeepsExactDuplicates) {
  const std::vector<ScoredMoment> in = {{{0, 10}, 0.9}, {{0, 10}, 0.8}, {{2, 9}, 0.5}};
  EXPECT_EQ(temporal_nms(in, 1.0).size(), 3u);
}

TEST(TemporalNms, RandomizedProperties) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ScoredMoment> in;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const double a = 30.0 * u(rng), b = 30.0 * u(rng);
      in.push_back({{std::min(a, b), std::max(a, b) + 0.1}, std::round(u(rng) * 10) / 10});
    }
    const double theta = u(rng);
    const auto kept = temporal_nms(in, theta);
    ASSERT_FALSE(kept.empty());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      EXPECT_NE(std::find(in.begin(), in.end(), kept[i]), in.end());
      if (i > 0) EXPECT_GE(kept[i - 1].confidence, kept[i].confidence);
      for (std::size_t j = 0; j < i; ++j) {
        EXPECT_LE(temporal_iou(kept[i].span, kept[j].span), theta);
      }
    }
    // Every dropped span overlaps some kept span scored at least as high.
    for (const auto& m : in) {
      if (std::find(kept.begin(), kept.end(), m) != kept.end()) continue;
      bool covered = false;
      for (const auto& k : kept) {
        covered |= k.confidence >= m.confidence && temporal_iou(k.span, m.span) > theta;
      }
      EXPECT_TRUE(covered);
    }
  }
}

TEST(Postprocess, RanksClampsAndTruncates) {
  SpanPrediction p;
  p.spans = {{0.5, 0.5}, {0.05, 0.5}, {0.5, 0.0}, {0.9, 0.1}};
  p.confidence_logits = {0.0, 2.0, 5.0, -1.0};
  ClipGrid grid;
  grid.clip_len_s = 25.0;
  for (int c = 0; c < 4; ++c) grid.boundaries.push_back({25.0 * c, 25.0 * (c + 1)});
  PostprocessConfig config;
  config.top_k = 2;
  const PredictResult r = postprocess(p, {0.1, 0.2, 0.3, 0.4}, 100.0, grid, config);
  ASSERT_EQ(r.moments.size(), 2u);
  EXPECT_DOUBLE_EQ(r.moments[0].span.start_s, 0.0);
  EXPECT_NEAR(r.moments[0].span.end_s, 30.0, 1e-9);
  EXPECT_NEAR(r.moments[0].confidence, sigmoid(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(r.moments[1].span.start_s, 25.0);
  EXPECT_DOUBLE_EQ(r.moments[1].span.end_s, 75.0);
  ASSERT_EQ(r.saliency.size(), 4u);
  EXPECT_DOUBLE_EQ(r.saliency[3].first, 75.0);
  EXPECT_DOUBLE_EQ(r.saliency[3].second, 0.4);
}

ClipFrames fixture_video(int clips, int frames_per_clip, int shade) {
  ClipFrames v;
  for (int c = 0; c < clips; ++c) {
    std::vector<RgbFrame> frames;
    for (int f = 0; f < frames_per_clip; ++f) {
      RgbFrame fr = RgbFrame::filled(8, 6, 0, 0, 0);
      for (std::size_t p = 0; p < fr.pixels.size(); ++p) {
        fr.pixels[p] = static_cast<std::uint8_t>((p * 5 + c * 37 + f * 11 + shade) % 256);
      }
      frames.push_back(std::move(fr));
    }
    v.clips.push_back(std::move(frames));
  }
  return v;
}

ModelConfig serving_model(int dim = 128) {
  ModelConfig c;
  c.video_dim = dim;
  c.text_dim = dim;
  c.hidden_dim = 32;
  c.ff_dim = 64;
  c.heads = 4;
  c.num_slots = 6;
  return c;
}

class ServingFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    torch::manual_seed(21);
    MomentDetr model(serving_model());
    ckpt_ = dir_.path() / "model.ckpt";
    save_checkpoint(ckpt_, model, CheckpointMeta{});
    frames_a_ = dir_.path() / "video_a";
    frames_b_ = dir_.path() / "video_b";
    // 10 s at 1 frame per second and 2 s clips: 5 clips of 2 frames.
    write_frame_dir(fixture_video(5, 2, 0), frames_a_);
    write_frame_dir(fixture_video(4, 2, 90), frames_b_);
  }

  std::unique_ptr<Predictor> trivial_predictor() const {
    FeatureExtractorSpec spec;
    return Predictor::create(ckpt_, Device::kCpu, spec);
  }

  test::TempDir dir_;
  fs::path ckpt_, frames_a_, frames_b_;
};

void expect_invariants(const PredictResult& r, double duration, double nms) {
  for (std::size_t i = 0; i < r.moments.size(); ++i) {
    const auto& m = r.moments[i];
    EXPECT_GE(m.span.start_s, 0.0);
    EXPECT_LE(m.span.end_s, duration);
    EXPECT_LT(m.span.start_s, m.span.end_s);
    EXPECT_GE(m.confidence, 0.0);
    EXPECT_LE(m.confidence, 1.0);
    if (i > 0) EXPECT_GE(r.moments[i - 1].confidence, m.confidence);
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_LE(temporal_iou(r.moments[j].span, m.span), nms);
    }
  }
}

TEST_F(ServingFixture, FreshSessionRejectsPredict) {
  auto p = trivial_predictor();
  EXPECT_FALSE(p->has_video());
  try {
    p->predict("a man speaks");
    FAIL() << "expected StateError";
  } catch (const StateError& e) {
    EXPECT_EQ(std::string(e.what()), "call encode_video first");
  }
}

TEST_F(ServingFixture, EncodeThenPredictHoldsInvariants) {
  auto p = trivial_predictor();
  p->encode_video(frames_a_);
  ASSERT_TRUE(p->has_video());
  EXPECT_EQ(p->encoded_video().video.rows(), 5);
  EXPECT_DOUBLE_EQ(p->encoded_video().duration_s, 10.0);
  const PredictResult r = p->predict("a man speaks");
  EXPECT_FALSE(r.moments.empty());
  EXPECT_EQ(r.saliency.size(), 5u);
  expect_invariants(r, 10.0, p->postprocess_config().nms_threshold);
  EXPECT_THROW(p->predict("   "), ArgumentError);
}

TEST_F(ServingFixture, SecondEncodingReplacesTheFirst) {
  auto p = trivial_predictor();
  p->encode_video(frames_a_);
  p->encode_video(frames_b_);
  auto fresh = trivial_predictor();
  fresh->encode_video(frames_b_);
  const PredictResult a = p->predict("dog runs");
  const PredictResult b = fresh->predict("dog runs");
  EXPECT_EQ(a.moments, b.moments);
  EXPECT_EQ(a.saliency, b.saliency);
  EXPECT_EQ(a.saliency.size(), 4u);
}

TEST_F(ServingFixture, MatchesComposedParts) {
  auto p = trivial_predictor();
  p->encode_video(frames_a_);
  const PredictResult served = p->predict("a dog runs");

  FeatureExtractorSpec spec;
  const ClipFrames frames = load_frame_dir(frames_a_);
  const FeatureMatrix video = trivial_video_features(frames, spec);
  const FeatureMatrix text = trivial_text_features("a dog runs", spec);
  MomentDetr model = restore_model(load_checkpoint(ckpt_));
  model->eval();
  torch::NoGradGuard guard;
  const ModelOutput out = model->forward(to_tensor(video), to_tensor(text));
  const ClipGrid grid = clip_grid(10.0, spec.clip_len_s);
  const PredictResult manual = postprocess(to_span_prediction(out), to_saliency_scores(out), 10.0,
                                           grid, PostprocessConfig{});
  EXPECT_EQ(served.moments, manual.moments);
  EXPECT_EQ(served.saliency, manual.saliency);
}

TEST_F(ServingFixture, CreationErrors) {
  FeatureExtractorSpec narrow;
  narrow.dv = 64;
  try {
    Predictor::create(ckpt_, Device::kCpu, narrow);
    FAIL() << "expected MismatchError";
  } catch (const MismatchError& e) {
    EXPECT_EQ(std::string(e.what()), "video feature dim 64 ≠ model dim 128");
  }
  try {
    new_predictor(ckpt_, Device::kCpu, "clip");
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("\"trivial\", \"synthetic\", \"precomputed\""),
              std::string::npos)
        << e.what();
  }
  EXPECT_FALSE(new_predictor(ckpt_, Device::kCpu, "trivial")->has_video());
  EXPECT_THROW(parse_device("tpu"), ArgumentError);
  EXPECT_THROW(trivial_predictor()->encode_video(dir_.path() / "missing"), IoError);
}

class HttpFixture : public ServingFixture {
 protected:
  void SetUp() override {
    ServingFixture::SetUp();
    torch::manual_seed(22);
    MomentDetr other(serving_model(16));
    lhf_ckpt_ = dir_.path() / "lhf.ckpt";
    save_checkpoint(lhf_ckpt_, other, CheckpointMeta{});

    ServerConfig config;
    config.port = 0;
    config.max_upload_bytes = 4096;
    config.upload_dir = dir_.path() / "uploads";
    config.models = {{"trivial-a", ckpt_, "trivial", 0, 1.0},
                     {"lhf", lhf_ckpt_, "precomputed", 0, 1.0}};
    server_ = std::make_unique<DemoServer>(config);
    port_ = server_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    client_.reset();
    server_->stop();
  }

  httplib::Result post_json(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  fs::path lhf_ckpt_;
  std::unique_ptr<DemoServer> server_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpFixture, ListsModels) {
  const auto res = client_->Get("/api/models");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json body = json::parse(res->body);
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0]["id"], "trivial-a");
  EXPECT_EQ(body[1]["feature_name"], "precomputed");
}

TEST_F(HttpFixture, UnknownTokenIsNotFound) {
  const auto res =
      post_json("/api/predict", {{"video_token", "nope"}, {"model_id", "trivial-a"}, {"query", "x"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body), (json{{"error", "unknown video_token"}}));
}

TEST_F(HttpFixture, MissingFieldIsBadRequest) {
  const auto res = post_json("/api/predict", {{"video_token", "nope"}, {"query", "x"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_NE(json::parse(res->body)["error"].get<std::string>().find("model_id"),
            std::string::npos);
}

TEST_F(HttpFixture, OversizedUploadIsRejected) {
  httplib::MultipartFormDataItems items = {
      {"video", std::string(64 * 1024, 'x'), "big.mp4", "application/octet-stream"}};
  const auto res = client_->Post("/api/videos", items);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 413);
  EXPECT_TRUE(json::parse(res->body).contains("error"));
}

TEST_F(HttpFixture, HttpMatchesInProcess) {
  const auto up = post_json("/api/videos", {{"frame_dir", frames_a_.string()}});
  ASSERT_TRUE(up);
  ASSERT_EQ(up->status, 200) << up->body;
  const json video = json::parse(up->body);
  EXPECT_DOUBLE_EQ(video["duration"].get<double>(), 10.0);
  EXPECT_DOUBLE_EQ(video["clip_len"].get<double>(), 2.0);

  const auto res = post_json("/api/predict", {{"video_token", video["video_token"]},
                                              {"model_id", "trivial-a"},
                                              {"query", "a dog runs"}});
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;

  auto local = trivial_predictor();
  local->encode_video(frames_a_);
  const PredictResult expected = local->predict("a dog runs");
  EXPECT_EQ(json::parse(res->body), predict_result_json(expected));

  Predictor& served = server_->predictor("trivial-a");
  EXPECT_EQ(predict_result_json(served.predict(served.encode(frames_a_), "a dog runs")),
            predict_result_json(expected));
}

TEST_F(HttpFixture, MultipartFeatureFileServesTheMatchingModel) {
  FeatureMatrix rows = FeatureMatrix::Random(3, 16);
  l2_normalize_rows(rows);
  httplib::MultipartFormDataItems items = {
      {"video", encode_features(rows), "clip.lhf", "application/octet-stream"}};
  const auto up = client_->Post("/api/videos", items);
  ASSERT_TRUE(up);
  ASSERT_EQ(up->status, 200) << up->body;
  const json video = json::parse(up->body);
  EXPECT_DOUBLE_EQ(video["duration"].get<double>(), 6.0);

  const auto ok = post_json("/api/predict", {{"video_token", video["video_token"]},
                                             {"model_id", "lhf"},
                                             {"query", "red car"}});
  ASSERT_TRUE(ok);
  ASSERT_EQ(ok->status, 200) << ok->body;
  EXPECT_EQ(json::parse(ok->body)["saliency"].size(), 3u);

  // The frame-based model cannot read a feature file.
  const auto bad = post_json("/api/predict", {{"video_token", video["video_token"]},
                                              {"model_id", "trivial-a"},
                                              {"query", "red car"}});
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto unknown = post_json("/api/predict", {{"video_token", video["video_token"]},
                                                  {"model_id", "nope"},
                                                  {"query", "red car"}});
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
}

TEST_F(HttpFixture, VideoRegistrationNeedsASource) {
  const auto bad = post_json("/api/videos", {{"nothing", 1}});
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto missing = post_json("/api/videos", {{"frame_dir", (dir_.path() / "none").string()}});
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);
}

TEST(Cli, ErrorsNameTheirKind) {
  const std::string cmd = std::string(LIGHTHOUSE_CLI) +
                          " predict --checkpoint /nonexistent/model.ckpt --video x --query q 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  ASSERT_TRUE(pipe);
  std::string out;
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), pipe.get())) out += buf.data();
  const int status = pclose(pipe.release());
  EXPECT_NE(status, 0);
  EXPECT_EQ(out.rfind("error: io: ", 0), 0u) << out;
}

}  // namespace
}  // namespace lighthouse
