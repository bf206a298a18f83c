// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/eval.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "vmr/error.hpp"

namespace vmr {
namespace {

// Neumaier summation; per-query terms are summed in query order, but the
// compensation keeps the result stable under any reordering.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_inputs(const PredictionSet& preds, const GroundTruthSet& gts) {
  if (gts.empty()) throw Error(ErrorKind::kEmptyInput, "no queries to evaluate");
  if (preds.size() != gts.size()) {
    throw Error(ErrorKind::kDimension, fmt::format("{} prediction lists for {} queries",
                                                   preds.size(), gts.size()));
  }
  for (std::size_t q = 0; q < gts.size(); ++q) {
    if (gts[q].empty()) {
      throw Error(ErrorKind::kEmptyInput, fmt::format("query {} has no ground truth", q));
    }
    for (const auto& g : gts[q]) g.validate();
    for (const auto& p : preds[q]) p.segment.validate();
  }
}

double best_iou(const TemporalSegment& pred, std::span<const TemporalSegment> gts) {
  double best = 0.0;
  for (const auto& g : gts) best = std::max(best, temporal_iou(pred, g));
  return best;
}

}  // namespace

void TemporalSegment::validate() const {
  if (!std::isfinite(start) || !std::isfinite(end) || start < 0.0 || !(start < end)) {
    throw Error(ErrorKind::kFormat, fmt::format("invalid segment [{}, {}]", start, end));
  }
}

GroundTruthSet single_ground_truth(std::span<const TemporalSegment> gts) {
  GroundTruthSet out;
  out.reserve(gts.size());
  for (const auto& g : gts) out.push_back({g});
  return out;
}

double temporal_iou(const TemporalSegment& a, const TemporalSegment& b) {
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = a.length() + b.length() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<MomentPrediction> rank_predictions(std::span<const MomentPrediction> preds) {
  std::vector<MomentPrediction> ranked(preds.begin(), preds.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.segment.start < b.segment.start;
  });
  return ranked;
}

double recall_at_k(const PredictionSet& preds, const GroundTruthSet& gts, std::size_t k,
                   double threshold) {
  if (k == 0) throw Error(ErrorKind::kConfig, "recall k must be >= 1");
  check_inputs(preds, gts);
  std::size_t hits = 0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    const auto ranked = rank_predictions(preds[q]);
    const std::size_t top = std::min(k, ranked.size());
    for (std::size_t r = 0; r < top; ++r) {
      if (best_iou(ranked[r].segment, gts[q]) >= threshold) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(gts.size());
}

double average_precision(std::span<const MomentPrediction> preds,
                         std::span<const TemporalSegment> gts, double threshold) {
  if (gts.empty()) throw Error(ErrorKind::kEmptyInput, "average precision needs ground truth");
  const auto ranked = rank_predictions(preds);
  std::vector<bool> matched(gts.size(), false);
  std::size_t hits = 0;
  CompensatedSum precision_sum;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    std::size_t best = gts.size();
    double best_overlap = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (matched[g]) continue;
      const double iou = temporal_iou(ranked[r].segment, gts[g]);
      if (iou >= threshold && iou > best_overlap) {
        best = g;
        best_overlap = iou;
      }
    }
    if (best == gts.size()) continue;
    matched[best] = true;
    ++hits;
    precision_sum.add(static_cast<double>(hits) / static_cast<double>(r + 1));
  }
  return precision_sum.value() / static_cast<double>(gts.size());
}

double mean_average_precision(const PredictionSet& preds, const GroundTruthSet& gts,
                              double threshold) {
  check_inputs(preds, gts);
  CompensatedSum total;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    total.add(average_precision(preds[q], gts[q], threshold));
  }
  return 100.0 * total.value() / static_cast<double>(gts.size());
}

std::vector<double> standard_map_thresholds() {
  std::vector<double> out;
  for (int i = 10; i <= 19; ++i) out.push_back(static_cast<double>(i) / 20.0);
  return out;
}

double mean_average_precision_avg(const PredictionSet& preds, const GroundTruthSet& gts,
                                  std::span<const double> thresholds) {
  if (thresholds.empty()) throw Error(ErrorKind::kConfig, "no mAP thresholds given");
  CompensatedSum total;
  for (double t : thresholds) total.add(mean_average_precision(preds, gts, t));
  return total.value() / static_cast<double>(thresholds.size());
}

double mean_iou(const PredictionSet& preds, const GroundTruthSet& gts) {
  check_inputs(preds, gts);
  CompensatedSum total;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    if (preds[q].empty()) {
      throw Error(ErrorKind::kEmptyInput, fmt::format("query {} has no prediction", q));
    }
    total.add(best_iou(rank_predictions(preds[q]).front().segment, gts[q]));
  }
  return 100.0 * total.value() / static_cast<double>(gts.size());
}

std::string EvalResult::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [t, v] : r1_at) j[fmt::format("R1@{}", t)] = v;
  for (const auto& [t, v] : map_at) j[fmt::format("mAP@{}", t)] = v;
  j["mAP_avg"] = map_avg;
  j["mIoU"] = miou;
  return j.dump();
}

EvalResult evaluate(const PredictionSet& preds, const GroundTruthSet& gts,
                    std::span<const double> r1_thresholds, std::span<const double> map_thresholds) {
  check_inputs(preds, gts);
  EvalResult result;
  for (double t : r1_thresholds) result.r1_at[t] = recall_at_k(preds, gts, 1, t);
  for (double t : map_thresholds) result.map_at[t] = mean_average_precision(preds, gts, t);
  const auto grid = standard_map_thresholds();
  result.map_avg = mean_average_precision_avg(preds, gts, grid);
  result.miou = mean_iou(preds, gts);
  return result;
}

EvalResult evaluate(const PredictionSet& preds, const GroundTruthSet& gts) {
  static constexpr double kR1[] = {0.5, 0.7};
  static constexpr double kMap[] = {0.5, 0.75};
  return evaluate(preds, gts, kR1, kMap);
}

}  // namespace vmr
