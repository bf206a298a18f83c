// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vmr/embeddings.hpp"

namespace vmr {

/// Which embedding later frames are compared against after a merge.
enum class AnchorUpdate {
  kCompressed,  // the merged embedding becomes the anchor (chain merging)
  kOriginal,    // the anchor stays at the first frame of the merged run
};

struct SvcConfig {
  // Merge when cosine(anchor, frame) > theta. Values above 1 disable merging.
  double theta = 0.95;
  // Rank kept by the truncated SVD of the stacked pair; 1 or 2.
  int rank_k = 1;
  AnchorUpdate anchor_update = AnchorUpdate::kCompressed;

  void validate() const;
};

/// The 2xD matrix [anchor; frame].
struct StackedPair {
  EmbeddingVector anchor;
  EmbeddingVector frame;
};

struct PairApproximation {
  std::array<EmbeddingVector, 2> rows;
  // sigma_1 >= sigma_2 >= 0
  std::array<double, 2> singular_values{};
  // Sum of squared discarded singular values; equals the squared Frobenius
  // error of the approximation.
  double discarded_energy = 0.0;
};

/// Best rank-k approximation of a stacked pair in the Frobenius norm.
///
/// The SVD of a 2xD matrix M comes from the 2x2 Gram matrix G = M M^T:
/// its eigenvalues are sigma_j^2 and its top eigenvector u gives the rank-1
/// reconstruction u u^T M. Cost is O(D) and no general SVD routine is needed.
PairApproximation truncated_svd_rank_k(const StackedPair& m, int k);

/// Row mean of the rank-k reconstruction of [anchor; frame].
EmbeddingVector compress_pair(const EmbeddingVector& anchor, const EmbeddingVector& frame,
                              const SvcConfig& cfg);

struct MergeEvent {
  std::size_t anchor_index = 0;    // frame_index of the slot absorbing the frame
  std::size_t absorbed_index = 0;  // frame_index of the removed frame
  double similarity = 0.0;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

struct CompressionReport {
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::vector<MergeEvent> merges;
  double total_reconstruction_error = 0.0;

  /// Single-line JSON record for logs and the benchmark harness.
  std::string to_json() const;
};

/// Anchor walk over the sequence. Frame 0 starts as the anchor; each later
/// frame whose similarity to the anchor exceeds theta is folded into the
/// anchor's slot with compress_pair, otherwise it is kept and becomes the new
/// anchor. Merged slots keep the anchor's timestamp and frame_index and
/// record the covered time span.
std::pair<FrameSequence, CompressionReport> compress_sequence(const FrameSequence& seq,
                                                              const SvcConfig& cfg);

}  // namespace vmr
