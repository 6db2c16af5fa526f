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

#include "lighthouse/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lighthouse/errors.hpp"

namespace lighthouse {
namespace {

struct Paired {
  const DatasetSample* sample;
  const PredictionRecord* prediction;
};

// Samples paired with their predictions, ordered by ascending query id so
// every reduction runs in the same order.
std::vector<Paired> pair_by_query(const std::vector<PredictionRecord>& predictions,
                                  const std::vector<DatasetSample>& samples) {
  std::map<std::int64_t, const PredictionRecord*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.query_id, &p);
  std::vector<Paired> out;
  std::vector<std::int64_t> missing;
  for (const auto& s : samples) {
    auto it = by_id.find(s.query_id);
    if (it == by_id.end()) {
      missing.push_back(s.query_id);
    } else {
      out.push_back({&s, it->second});
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string list;
    for (auto id : missing) list += (list.empty() ? "" : ", ") + std::to_string(id);
    throw NotFoundError("missing predictions for query ids [" + list + "]");
  }
  std::sort(out.begin(), out.end(), [](const Paired& a, const Paired& b) {
    return a.sample->query_id < b.sample->query_id;
  });
  return out;
}

const SaliencyAnnotation& require_saliency(const DatasetSample& s) {
  if (!s.saliency || s.saliency->clip_ids.empty()) {
    throw ValidationError("query " + std::to_string(s.query_id) +
                          ": highlight metrics need saliency labels");
  }
  return *s.saliency;
}

void check_saliency_length(const DatasetSample& s, const PredictionRecord& p) {
  const auto& labels = *s.saliency;
  if (p.saliency_scores.empty() ||
      static_cast<std::size_t>(labels.clip_ids.back()) >= p.saliency_scores.size()) {
    throw ValidationError("query " + std::to_string(s.query_id) +
                          ": predicted saliency has " +
                          std::to_string(p.saliency_scores.size()) +
                          " clips but labels reference clip " +
                          std::to_string(labels.clip_ids.back()));
  }
}

// Clip indices by predicted score descending; ties go to the lower index.
std::vector<int> rank_clips(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::vector<double> MetricConfig::default_avg_map_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(static_cast<double>(50 + 5 * i) / 100.0);
  return grid;
}

void MetricConfig::validate() const {
  auto check = [](const std::vector<double>& ts, const char* what) {
    if (ts.empty()) throw ConfigError(std::string(what) + " must not be empty");
    for (double t : ts) {
      if (!(t > 0.0 && t <= 1.0)) {
        throw ConfigError(std::string(what) + " values must lie in (0, 1]");
      }
    }
  };
  check(r1_thresholds, "r1_thresholds");
  check(map_thresholds, "map_thresholds");
  check(avg_map_grid, "avg_map_grid");
  for (std::size_t i = 1; i < avg_map_grid.size(); ++i) {
    if (!(avg_map_grid[i] > avg_map_grid[i - 1])) {
      throw ConfigError("avg_map_grid must be strictly increasing");
    }
  }
  if (hd_positive_level < 1 || hd_positive_level > 5) {
    throw ConfigError("hd_positive_level must lie in 1..5");
  }
  if (!(hd_top_fraction > 0.0 && hd_top_fraction <= 1.0)) {
    throw ConfigError("hd_top_fraction must lie in (0, 1]");
  }
}

double temporal_iou(const MomentSpan& a, const MomentSpan& b) {
  const double inter = std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
  const double uni = (a.end_s - a.start_s) + (b.end_s - b.start_s) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double recall1_at(const std::vector<PredictionRecord>& predictions,
                  const std::vector<DatasetSample>& samples, double theta) {
  const auto paired = pair_by_query(predictions, samples);
  if (paired.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [s, p] : paired) {
    if (s->gt_moments.empty()) {
      throw ValidationError("query " + std::to_string(s->query_id) +
                            ": R1 needs at least one ground-truth moment");
    }
    if (p->moments.empty()) continue;
    double best = 0.0;
    for (const auto& g : s->gt_moments) best = std::max(best, temporal_iou(p->moments[0].span, g));
    if (best > theta) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(paired.size());
}

double average_precision_single_query(const std::vector<ScoredMoment>& ranked,
                                      const std::vector<MomentSpan>& gt, double theta) {
  if (gt.empty()) return 0.0;
  std::vector<bool> used(gt.size(), false);
  std::size_t tp = 0;
  double precision_sum = 0.0;
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    double best = -1.0;
    std::size_t best_gt = gt.size();
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (used[g]) continue;
      const double iou = temporal_iou(ranked[rank].span, gt[g]);
      if (iou > best) {
        best = iou;
        best_gt = g;
      }
    }
    if (best_gt < gt.size() && best > theta) {
      used[best_gt] = true;
      ++tp;
      precision_sum += static_cast<double>(tp) / static_cast<double>(rank + 1);
    }
  }
  return precision_sum / static_cast<double>(gt.size());
}

MapSuite map_suite(const std::vector<PredictionRecord>& predictions,
                   const std::vector<DatasetSample>& samples, const MetricConfig& config) {
  const auto paired = pair_by_query(predictions, samples);
  auto mean_ap = [&](double theta) {
    if (paired.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [s, p] : paired) {
      sum += average_precision_single_query(p->moments, s->gt_moments, theta);
    }
    return 100.0 * sum / static_cast<double>(paired.size());
  };
  MapSuite out;
  std::map<double, double> cache;
  auto at = [&](double theta) {
    auto it = cache.find(theta);
    if (it != cache.end()) return it->second;
    return cache[theta] = mean_ap(theta);
  };
  for (double t : config.map_thresholds) out.map_at[t] = at(t);
  double sum = 0.0;
  for (double t : config.avg_map_grid) sum += at(t);
  out.avg_map = config.avg_map_grid.empty()
                    ? 0.0
                    : sum / static_cast<double>(config.avg_map_grid.size());
  return out;
}

std::vector<std::vector<int>> hd_positive_clips(const SaliencyAnnotation& labels,
                                                const MetricConfig& config) {
  const std::size_t annotators = labels.annotator_count();
  std::vector<std::vector<int>> positives(annotators);
  for (std::size_t a = 0; a < annotators; ++a) {
    if (config.hd_positive_mode == HdPositiveMode::kThreshold) {
      for (std::size_t i = 0; i < labels.clip_ids.size(); ++i) {
        if (labels.scores[i][a] == config.hd_positive_level) {
          positives[a].push_back(labels.clip_ids[i]);
        }
      }
    } else {
      std::vector<std::size_t> order(labels.clip_ids.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return labels.scores[x][a] > labels.scores[y][a];
      });
      const auto keep = static_cast<std::size_t>(
          std::ceil(config.hd_top_fraction * static_cast<double>(order.size()) - 1e-9));
      for (std::size_t k = 0; k < keep && k < order.size(); ++k) {
        positives[a].push_back(labels.clip_ids[order[k]]);
      }
      std::sort(positives[a].begin(), positives[a].end());
    }
  }
  return positives;
}

double hit_at_1(const std::vector<PredictionRecord>& predictions,
                const std::vector<DatasetSample>& samples, const MetricConfig& config) {
  const auto paired = pair_by_query(predictions, samples);
  if (paired.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [s, p] : paired) {
    const auto& labels = require_saliency(*s);
    check_saliency_length(*s, *p);
    const int top = rank_clips(p->saliency_scores).front();
    const auto positives = hd_positive_clips(labels, config);
    double hits = 0.0;
    for (const auto& pos : positives) {
      if (std::binary_search(pos.begin(), pos.end(), top)) hits += 1.0;
    }
    sum += hits / static_cast<double>(positives.size());
  }
  return 100.0 * sum / static_cast<double>(paired.size());
}

std::map<std::int64_t, double> hd_map_per_query(
    const std::vector<PredictionRecord>& predictions,
    const std::vector<DatasetSample>& samples, const MetricConfig& config) {
  std::map<std::int64_t, double> out;
  for (const auto& [s, p] : pair_by_query(predictions, samples)) {
    const auto& labels = require_saliency(*s);
    check_saliency_length(*s, *p);
    const auto order = rank_clips(p->saliency_scores);
    const auto positives = hd_positive_clips(labels, config);
    double ap_sum = 0.0;
    for (const auto& pos : positives) {
      if (pos.empty()) continue;  // contributes AP 0
      std::size_t tp = 0;
      double precision_sum = 0.0;
      for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (std::binary_search(pos.begin(), pos.end(), order[rank])) {
          ++tp;
          precision_sum += static_cast<double>(tp) / static_cast<double>(rank + 1);
        }
      }
      ap_sum += precision_sum / static_cast<double>(pos.size());
    }
    out[s->query_id] = ap_sum / static_cast<double>(positives.size());
  }
  return out;
}

double hd_map(const std::vector<PredictionRecord>& predictions,
              const std::vector<DatasetSample>& samples, const MetricConfig& config) {
  const auto per_query = hd_map_per_query(predictions, samples, config);
  if (per_query.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [qid, ap] : per_query) sum += ap;
  return 100.0 * sum / static_cast<double>(per_query.size());
}

DomainReport tvsum_domain_report(const std::map<std::int64_t, double>& per_query,
                                 const std::vector<DatasetSample>& samples) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  std::vector<const DatasetSample*> ordered;
  for (const auto& s : samples) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](auto* a, auto* b) { return a->query_id < b->query_id; });
  for (const auto* s : ordered) {
    if (!s->domain_tag) {
      throw ValidationError("query " + std::to_string(s->query_id) +
                            ": domain report needs a domain tag");
    }
    auto it = per_query.find(s->query_id);
    if (it == per_query.end()) {
      throw NotFoundError("no HD value for query " + std::to_string(s->query_id));
    }
    auto& slot = acc[*s->domain_tag];
    slot.first += it->second;
    slot.second += 1;
  }
  DomainReport report;
  double sum = 0.0;
  for (const auto& [domain, v] : acc) {
    const double mean = 100.0 * v.first / static_cast<double>(v.second);
    report.domain_means[domain] = mean;
    sum += mean;
  }
  report.avg = acc.empty() ? 0.0 : sum / static_cast<double>(acc.size());
  return report;
}

}  // namespace lighthouse
