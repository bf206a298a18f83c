// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "vmr/ablation.hpp"
#include "vmr/error.hpp"
#include "vmr/random.hpp"
#include "vmr/synthetic.hpp"

namespace vmr {
namespace {

using S = CompressionStrategy;
const std::vector<S> kAll{S::kFrameSelection, S::kAveragePooling, S::kSvd};

FrameSequence make_sequence(const std::vector<EmbeddingVector>& embeddings) {
  FrameSequence seq;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    seq.frames.push_back({i, static_cast<double>(i), embeddings[i], std::nullopt});
  }
  seq.duration = static_cast<double>(embeddings.size());
  return seq;
}

TEST(Strategy, Names) {
  for (S s : kAll) EXPECT_EQ(parse_compression_strategy(to_string(s)), s);
  try {
    parse_compression_strategy("max_pooling");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(PairError, PlanarExample) {
  const EmbeddingVector a{1.0, 0.0}, b{0.8, 0.6};
  // |b - a|^2 = 0.04 + 0.36
  EXPECT_NEAR(pair_reconstruction_error(S::kFrameSelection, a, b, 1), 0.4, 1e-15);
  EXPECT_NEAR(pair_reconstruction_error(S::kAveragePooling, a, b, 1), 0.2, 1e-15);
  // Equal norms and a positive inner product: SVD meets the mean (sigma_2^2 = 0.2).
  EXPECT_NEAR(pair_reconstruction_error(S::kSvd, a, b, 1), 0.2, 1e-12);
  EXPECT_EQ(pair_reconstruction_error(S::kSvd, a, b, 2), 0.0);
  // Different lengths along one direction: only SVD is exact.
  const EmbeddingVector c{3.0, 0.0};
  EXPECT_NEAR(pair_reconstruction_error(S::kSvd, a, c, 1), 0.0, 1e-12);
  EXPECT_NEAR(pair_reconstruction_error(S::kAveragePooling, a, c, 1), 2.0, 1e-15);
  EXPECT_NEAR(pair_reconstruction_error(S::kFrameSelection, a, c, 1), 4.0, 1e-15);
}

TEST(ProxyPredict, PicksAlignedSlot) {
  const auto seq = make_sequence({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  const auto preds = proxy_predict(seq, {0.0, 1.0, 0.0}, 3);
  ASSERT_EQ(preds.size(), 3u);
  EXPECT_EQ(preds[0].segment, (TemporalSegment{1.0, 2.0}));
  EXPECT_NEAR(preds[0].confidence, 2.0 / 3.0, 1e-15);
  // Next best: [0,2) and [1,3) both score 1/3; the earlier start ranks first.
  EXPECT_EQ(preds[1].segment, (TemporalSegment{0.0, 2.0}));
  EXPECT_EQ(preds[2].segment, (TemporalSegment{1.0, 3.0}));
  EXPECT_THROW(proxy_predict(FrameSequence{}, {1.0}, 1), Error);
  EXPECT_THROW(proxy_predict(seq, {0.0, 1.0, 0.0}, 0), Error);
}

TEST(ProxyPredict, MatchesExhaustiveSpanScores) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(15), dim = 2 + rng.below(6);
    std::vector<EmbeddingVector> es;
    for (std::size_t i = 0; i < n; ++i) es.emplace_back(rng.normal_vector(dim));
    const auto seq = make_sequence(es);
    const EmbeddingVector q(rng.normal_vector(dim));
    const auto preds = proxy_predict(seq, q, 1);
    // Oracle: best span by direct re-summation.
    double mean = 0;
    for (const auto& e : es) mean += cosine_similarity(e, q) / static_cast<double>(n);
    double best = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double s = 0;
        for (std::size_t k = i; k <= j; ++k) s += cosine_similarity(es[k], q) - mean;
        best = std::max(best, s);
      }
    }
    ASSERT_EQ(preds.size(), 1u);
    EXPECT_NEAR(preds[0].confidence, best, 1e-12);
  }
}

TEST(RunAblation, IdenticalFramesHaveNoError) {
  const EmbeddingVector u{0.2, 0.9, -0.4};
  const auto seq = make_sequence(std::vector<EmbeddingVector>(6, u));
  const std::vector<TemporalSegment> gt{{0.0, 6.0}};
  const auto rows = run_ablation(seq, gt, u, kAll, AblationConfig{});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.reconstruction_error, 0.0, 1e-12);
    EXPECT_EQ(row.output_slots, 1u);
    EXPECT_EQ(row.merges, 5u);
    EXPECT_EQ(row.input_frames, 6u);
  }
}

TEST(RunAblation, FrameSelectionLosesWhenDroppedFrameDiffers) {
  // Plateau of two frames that differ only in length: the SVD slot is exact,
  // keeping the anchor is not.
  const auto seq = make_sequence({{1.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}});
  const std::vector<TemporalSegment> gt{{0.0, 2.0}};
  const auto rows = run_ablation(seq, gt, {1.0, 0.0}, kAll, AblationConfig{});
  EXPECT_NEAR(rows[2].reconstruction_error, 0.0, 1e-12);
  EXPECT_NEAR(rows[1].reconstruction_error, 0.5, 1e-15);
  EXPECT_NEAR(rows[0].reconstruction_error, 1.0, 1e-15);
  EXPECT_GT(rows[0].reconstruction_error, rows[2].reconstruction_error);
  // Slot embeddings: anchor kept, mean, and the SVD row mean (1.5, 0).
  EXPECT_EQ(rows[0].compressed.frames[0].embedding, (EmbeddingVector{1.0, 0.0}));
  EXPECT_NEAR(rows[1].compressed.frames[0].embedding[0], 1.5, 1e-15);
  EXPECT_NEAR(rows[2].compressed.frames[0].embedding[0], 1.5, 1e-12);
}

TEST(RunAblation, OrderingAndConsistencyOnRandomTraces) {
  Rng rng(4242);
  std::size_t non_degenerate = 0;
  for (int t = 0; t < 300; ++t) {
    PlateauTraceSpec spec;
    spec.frames = 2 + rng.below(40);
    spec.dimension = 2 + rng.below(32);
    spec.plateaus = 1 + rng.below(spec.frames / 2 + 1);
    spec.noise = 0.2 * rng.uniform();
    spec.magnitude_jitter = 0.5 * rng.uniform();
    spec.seed = rng.next();
    const auto trace = generate_plateau_trace(spec);
    const EmbeddingVector q(rng.normal_vector(spec.dimension));
    const std::vector<TemporalSegment> gt{{0.0, trace.sequence.duration / 2}};
    SvcConfig svc;
    svc.theta = 0.9;
    const auto rows = run_ablation(trace.sequence, gt, q, kAll, AblationConfig{svc, 5});
    const auto [reference, report] = compress_sequence(trace.sequence, svc);

    const double fs = rows[0].reconstruction_error, avg = rows[1].reconstruction_error,
                 svd = rows[2].reconstruction_error;
    EXPECT_LE(svd, avg + 1e-9);
    EXPECT_GE(fs, svd - 1e-9);
    EXPECT_NEAR(svd, report.total_reconstruction_error, 1e-9);
    if (report.merges.size() > 0 && spec.magnitude_jitter > 0.01) {
      ++non_degenerate;
      EXPECT_GT(fs, svd);
    }
    for (const auto& row : rows) {
      EXPECT_EQ(row.output_slots, reference.size());
      EXPECT_EQ(row.merges, report.merges.size());
      for (std::size_t i = 0; i < reference.size(); ++i) {
        EXPECT_EQ(row.compressed.frames[i].frame_index, reference.frames[i].frame_index);
        EXPECT_EQ(row.compressed.frames[i].merged_span.has_value(), reference.frames[i].merged_span.has_value());
      }
    }
    EXPECT_EQ(rows[2].compressed, reference);
  }
  EXPECT_GT(non_degenerate, 100u);
}

TEST(RunAblation, TableAndErrors) {
  const auto seq = make_sequence({{1.0, 0.0}, {1.0, 0.01}, {0.0, 1.0}});
  const std::vector<TemporalSegment> gt{{0.0, 2.0}};
  const auto rows = run_ablation(seq, gt, {1.0, 0.0}, kAll, AblationConfig{});
  std::ostringstream out;
  write_comparison_table(out, rows);
  std::istringstream lines(out.str());
  std::string header, line;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "strategy\tinput_frames\toutput_slots\tmerges\treconstruction_error\tR1@0.5\tR1@0.7\t"
            "mAP@0.5\tmAP@0.75\tmAP_avg\tmIoU");
  std::getline(lines, line);
  EXPECT_TRUE(line.starts_with("frame_selection\t3\t2\t1\t"));
  // Top proxy span is [0, 2), an exact hit.
  EXPECT_EQ(rows[2].metrics.r1_at.at(0.5), 100.0);

  EXPECT_THROW(run_ablation(FrameSequence{}, gt, {1.0, 0.0}, kAll, AblationConfig{}), Error);
  EXPECT_THROW(run_ablation(seq, {}, {1.0, 0.0}, kAll, AblationConfig{}), Error);
  EXPECT_THROW(run_ablation(seq, gt, {1.0, 0.0}, {}, AblationConfig{}), Error);
}

}  // namespace
}  // namespace vmr
