// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vmr {

struct TemporalSegment {
  double start = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - start; }
  /// Requires 0 <= start < end, both finite.
  void validate() const;

  friend bool operator==(const TemporalSegment&, const TemporalSegment&) = default;
};

struct MomentPrediction {
  TemporalSegment segment;
  double confidence = 0.0;
};

// Indexed by query.
using PredictionSet = std::vector<std::vector<MomentPrediction>>;
using GroundTruthSet = std::vector<std::vector<TemporalSegment>>;

/// Wraps one ground-truth segment per query.
GroundTruthSet single_ground_truth(std::span<const TemporalSegment> gts);

double temporal_iou(const TemporalSegment& a, const TemporalSegment& b);

/// Confidence descending; equal confidence ranks the earlier start first.
std::vector<MomentPrediction> rank_predictions(std::span<const MomentPrediction> preds);

/// Percentage of queries where one of the top-k predictions reaches
/// IoU >= threshold with any ground-truth segment of that query.
double recall_at_k(const PredictionSet& preds, const GroundTruthSet& gts, std::size_t k,
                   double threshold);

/// Non-interpolated AP in [0, 1]: walk the ranked list, a prediction is a
/// hit when it reaches IoU >= threshold with a not-yet-matched ground truth
/// (the best-overlapping one), and AP is the sum of precision at each hit
/// divided by the number of ground-truth segments.
double average_precision(std::span<const MomentPrediction> preds,
                         std::span<const TemporalSegment> gts, double threshold);

/// Mean AP over queries, as a percentage.
double mean_average_precision(const PredictionSet& preds, const GroundTruthSet& gts,
                              double threshold);

/// {0.50, 0.55, ..., 0.95}
std::vector<double> standard_map_thresholds();

double mean_average_precision_avg(const PredictionSet& preds, const GroundTruthSet& gts,
                                  std::span<const double> thresholds);

/// Mean over queries of the top-1 prediction's best IoU, as a percentage.
/// Every query needs at least one prediction.
double mean_iou(const PredictionSet& preds, const GroundTruthSet& gts);

struct EvalResult {
  std::map<double, double> r1_at;
  std::map<double, double> map_at;
  double map_avg = 0.0;
  double miou = 0.0;

  std::string to_json() const;
};

EvalResult evaluate(const PredictionSet& preds, const GroundTruthSet& gts,
                    std::span<const double> r1_thresholds, std::span<const double> map_thresholds);

/// evaluate() at R1@{0.5, 0.7} and mAP@{0.5, 0.75}.
EvalResult evaluate(const PredictionSet& preds, const GroundTruthSet& gts);

}  // namespace vmr
