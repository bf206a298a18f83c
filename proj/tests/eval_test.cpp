// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <json.hpp>

#include "oracles.hpp"
#include "vmr/error.hpp"
#include "vmr/eval.hpp"
#include "vmr/random.hpp"

namespace vmr {
namespace {

TemporalSegment random_segment(Rng& rng, double horizon = 60.0) {
  // Snap to a 0.5 s grid so exact ties in IoU and confidence happen.
  const double start = 0.5 * std::floor(rng.uniform() * horizon * 2.0);
  const double len = 0.5 * (1.0 + std::floor(rng.uniform() * 40.0));
  return {start, start + len};
}

struct Instance {
  PredictionSet preds;
  std::vector<TemporalSegment> gts;
};

Instance random_instance(Rng& rng, std::size_t max_queries = 20, std::size_t max_preds = 10) {
  Instance inst;
  const std::size_t queries = 1 + rng.below(max_queries);
  for (std::size_t q = 0; q < queries; ++q) {
    const auto gt = random_segment(rng);
    inst.gts.push_back(gt);
    std::vector<MomentPrediction> preds;
    const std::size_t n = 1 + rng.below(max_preds);
    for (std::size_t p = 0; p < n; ++p) {
      TemporalSegment seg = random_segment(rng);
      if (rng.uniform() < 0.3) {
        // Jitter the ground truth so high-IoU predictions are common.
        const double start = std::max(0.0, gt.start + std::floor(rng.uniform() * 5 - 2) * 0.5);
        seg = {start, std::max(start + 0.5, gt.end + 0.5 * static_cast<double>(rng.below(3)))};
      }
      preds.push_back({seg, 0.1 * static_cast<double>(rng.below(8))});
    }
    inst.preds.push_back(std::move(preds));
  }
  return inst;
}

TEST(TemporalIou, Examples) {
  EXPECT_EQ(temporal_iou({0, 10}, {0, 10}), 1.0);
  EXPECT_NEAR(temporal_iou({0, 10}, {5, 15}), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(temporal_iou({0, 5}, {5, 10}), 0.0);
  EXPECT_THROW(TemporalSegment({3, 3}).validate(), Error);
  EXPECT_THROW(TemporalSegment({-1, 3}).validate(), Error);
}

TEST(TemporalIou, Properties) {
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    const auto a = random_segment(rng), b = random_segment(rng);
    const double iou = temporal_iou(a, b);
    EXPECT_EQ(iou, temporal_iou(b, a));
    EXPECT_EQ(temporal_iou(a, a), 1.0);
    EXPECT_NEAR(iou, oracle::overlap_ratio(a, b), 1e-15);
    const double shift = 0.5 * rng.below(100);
    EXPECT_NEAR(temporal_iou({a.start + shift, a.end + shift}, {b.start + shift, b.end + shift}), iou, 1e-12);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
  }
}

TEST(RecallAtK, Examples) {
  const PredictionSet preds{{{{0, 10}, 0.9}}, {{{20, 30}, 0.9}}};
  const auto gts = single_ground_truth(std::vector<TemporalSegment>{{0, 10}, {40, 50}});
  EXPECT_EQ(recall_at_k(preds, gts, 1, 0.5), 50.0);
  EXPECT_EQ(recall_at_k(preds, single_ground_truth(std::vector<TemporalSegment>{{0, 10}, {20, 30}}), 1, 0.5),
            100.0);
  EXPECT_THROW(recall_at_k({}, {}, 1, 0.5), Error);
  EXPECT_THROW(recall_at_k(preds, single_ground_truth(std::vector<TemporalSegment>{{0, 10}}), 1, 0.5), Error);
}

TEST(AveragePrecision, Examples) {
  const std::vector<TemporalSegment> gt{{0, 10}};
  EXPECT_EQ(average_precision(std::vector<MomentPrediction>{{{0, 10}, 0.5}}, gt, 0.5), 1.0);
  // Correct prediction ranked second: precision at rank 2 is 1/2.
  const std::vector<MomentPrediction> second{{{0, 10}, 0.4}, {{30, 40}, 0.8}};
  EXPECT_EQ(average_precision(second, gt, 0.5), 0.5);
  EXPECT_EQ(mean_average_precision({second}, {gt}, 0.5), 50.0);
  // Equal confidence: the earlier start ranks first.
  const std::vector<MomentPrediction> tied{{{30, 40}, 0.5}, {{0, 10}, 0.5}};
  EXPECT_EQ(average_precision(tied, gt, 0.5), 1.0);
  EXPECT_EQ(average_precision(std::vector<MomentPrediction>{}, gt, 0.5), 0.0);
}

TEST(MeanIou, Examples) {
  const PredictionSet exact{{{{0, 10}, 1.0}}, {{{5, 6}, 1.0}}};
  const GroundTruthSet gts{{{0, 10}}, {{5, 6}}};
  EXPECT_EQ(mean_iou(exact, gts), 100.0);
  const PredictionSet disjoint{{{{20, 30}, 1.0}}, {{{7, 8}, 1.0}}};
  EXPECT_EQ(mean_iou(disjoint, gts), 0.0);
  EXPECT_THROW(mean_iou(PredictionSet{{}, {{{5, 6}, 1.0}}}, gts), Error);
}

TEST(Metrics, MatchBruteForceOracles) {
  Rng rng(2718);
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(rng);
    const auto gts = single_ground_truth(inst.gts);
    for (double thr : {0.3, 0.5, 0.7}) {
      for (std::size_t k : {1u, 3u, 100u}) {
        EXPECT_NEAR(recall_at_k(inst.preds, gts, k, thr), oracle::brute_recall(inst.preds, inst.gts, k, thr), 1e-9);
      }
    }
    for (double thr : {0.5, 0.75}) {
      EXPECT_NEAR(mean_average_precision(inst.preds, gts, thr), oracle::brute_map(inst.preds, inst.gts, thr), 1e-9);
    }
    EXPECT_NEAR(mean_average_precision_avg(inst.preds, gts, standard_map_thresholds()),
                oracle::brute_map_avg(inst.preds, inst.gts), 1e-9);
    EXPECT_NEAR(mean_iou(inst.preds, gts), oracle::brute_miou(inst.preds, inst.gts), 1e-9);

    const auto r = evaluate(inst.preds, gts);
    EXPECT_NEAR(r.r1_at.at(0.5), oracle::brute_recall(inst.preds, inst.gts, 1, 0.5), 1e-9);
    EXPECT_NEAR(r.r1_at.at(0.7), oracle::brute_recall(inst.preds, inst.gts, 1, 0.7), 1e-9);
    EXPECT_NEAR(r.map_at.at(0.75), oracle::brute_map(inst.preds, inst.gts, 0.75), 1e-9);
    for (double v : {r.r1_at.at(0.5), r.map_at.at(0.5), r.map_avg, r.miou}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 100.0);
    }
  }
}

TEST(Metrics, RecallMonotonicity) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(rng);
    const auto gts = single_ground_truth(inst.gts);
    double previous = -1.0;
    for (std::size_t k = 1; k <= 11; ++k) {
      const double r = recall_at_k(inst.preds, gts, k, 0.5);
      EXPECT_GE(r, previous);
      previous = r;
    }
    previous = 101.0;
    for (double thr = 0.05; thr <= 1.0; thr += 0.05) {
      const double r = recall_at_k(inst.preds, gts, 3, thr);
      EXPECT_LE(r, previous);
      previous = r;
    }
  }
}

TEST(Metrics, SinglePredictionMapEqualsRecall) {
  Rng rng(77);
  for (int t = 0; t < 300; ++t) {
    auto inst = random_instance(rng, 20, 1);
    const auto gts = single_ground_truth(inst.gts);
    for (double thr : {0.5, 0.7, 0.75, 0.9}) {
      EXPECT_NEAR(mean_average_precision(inst.preds, gts, thr), recall_at_k(inst.preds, gts, 1, thr), 1e-9);
    }
  }
}

// Greedy multi-ground-truth AP written against the definition: each ranked
// prediction claims the unclaimed ground truth it overlaps most, if that
// overlap reaches the threshold.
double greedy_ap(const std::vector<MomentPrediction>& preds, const std::vector<TemporalSegment>& gts, double thr) {
  std::vector<bool> used(gts.size(), false);
  double hits = 0, sum = 0;
  const auto order = oracle::rank_order(preds);
  for (std::size_t r = 0; r < order.size(); ++r) {
    int best = -1;
    double best_iou = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = oracle::overlap_ratio(preds[order[r]].segment, gts[g]);
      if (!used[g] && iou > best_iou) {
        best_iou = iou;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= thr) {
      used[static_cast<std::size_t>(best)] = true;
      hits += 1;
      sum += hits / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(gts.size());
}

TEST(Metrics, MultipleGroundTruths) {
  // Two disjoint ground truths, both found at ranks 1 and 3: (1/1 + 2/3) / 2.
  const std::vector<TemporalSegment> gts{{0, 10}, {20, 30}};
  const std::vector<MomentPrediction> preds{{{0, 10}, 0.9}, {{50, 60}, 0.8}, {{20, 30}, 0.7}, {{0, 10}, 0.6}};
  EXPECT_NEAR(average_precision(preds, gts, 0.5), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  // A duplicate of an already matched span is not a second hit.
  EXPECT_EQ(average_precision(std::vector<MomentPrediction>{{{0, 10}, 0.9}, {{0, 10}, 0.8}}, gts, 0.5), 0.5);
  EXPECT_EQ(recall_at_k({preds}, {gts}, 1, 0.5), 100.0);

  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    std::vector<TemporalSegment> many;
    for (std::size_t g = 0, n = 1 + rng.below(3); g < n; ++g) many.push_back(random_segment(rng));
    std::vector<MomentPrediction> ps;
    for (std::size_t p = 0, n = rng.below(10); p < n; ++p) ps.push_back({random_segment(rng), 0.1 * rng.below(5)});
    for (double thr : {0.1, 0.3, 0.5}) EXPECT_NEAR(average_precision(ps, many, thr), greedy_ap(ps, many, thr), 1e-12);
  }
}

TEST(Evaluate, JsonKeys) {
  const PredictionSet preds{{{{0, 10}, 1.0}}};
  const GroundTruthSet gts{{{0, 10}}};
  const auto j = nlohmann::json::parse(evaluate(preds, gts).to_json());
  for (const char* key : {"R1@0.5", "R1@0.7", "mAP@0.5", "mAP@0.75", "mAP_avg", "mIoU"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j[key], 100.0);
  }
  EXPECT_EQ(standard_map_thresholds().size(), 10u);
  EXPECT_EQ(standard_map_thresholds().front(), 0.5);
  EXPECT_EQ(standard_map_thresholds().back(), 0.95);
}

}  // namespace
}  // namespace vmr
