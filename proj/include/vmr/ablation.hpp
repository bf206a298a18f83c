// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "vmr/embeddings.hpp"
#include "vmr/eval.hpp"
#include "vmr/svc.hpp"

namespace vmr {

enum class CompressionStrategy {
  kFrameSelection,  // keep the anchor, drop the redundant frame
  kAveragePooling,  // replace the pair by its mean
  kSvd,             // rank-k truncated SVD, then row mean
};

std::string_view to_string(CompressionStrategy strategy) noexcept;
/// Accepts frame_selection, average_pooling, svd; anything else is a config error.
CompressionStrategy parse_compression_strategy(std::string_view name);

/// Squared Frobenius error of the strategy's approximation of [anchor; frame].
double pair_reconstruction_error(CompressionStrategy strategy, const EmbeddingVector& anchor,
                                 const EmbeddingVector& frame, int rank_k);

/// Retrieval stand-in used to compare strategies without a language model.
/// Slot j covers [t_j, t_{j+1}) (the last slot ends at the duration) and
/// scores s_j = cos(slot_j, query). Each contiguous slot span is scored by
/// sum(s_j - mean(s)), which favours spans of above-average slots and
/// penalises padding. The top_k spans are returned with that score as
/// confidence.
std::vector<MomentPrediction> proxy_predict(const FrameSequence& slots, const EmbeddingVector& query,
                                            std::size_t top_k);

struct AblationConfig {
  SvcConfig svc;
  std::size_t proxy_top_k = 5;
};

struct AblationRow {
  CompressionStrategy strategy = CompressionStrategy::kSvd;
  std::size_t input_frames = 0;
  std::size_t output_slots = 0;
  std::size_t merges = 0;
  double reconstruction_error = 0.0;
  EvalResult metrics;
  FrameSequence compressed;
};

/// Runs the anchor walk once and replays its redundant pairs through every
/// strategy, so all strategies merge the same frames into the same slots and
/// differ only in how a pair is reduced. reconstruction_error sums each
/// strategy's pair error over those pairs; metrics come from proxy_predict
/// on the strategy's output against `ground_truth` (one query).
std::vector<AblationRow> run_ablation(const FrameSequence& trace,
                                      std::span<const TemporalSegment> ground_truth,
                                      const EmbeddingVector& query,
                                      std::span<const CompressionStrategy> strategies,
                                      const AblationConfig& cfg);

/// Tab-separated, header first. Columns: strategy, input_frames,
/// output_slots, merges, reconstruction_error, R1@0.5, R1@0.7, mAP@0.5,
/// mAP@0.75, mAP_avg, mIoU.
void write_comparison_table(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace vmr
