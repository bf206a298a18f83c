// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "vmr/captions.hpp"
#include "vmr/embeddings.hpp"

namespace vmr {

/// How the query-caption and frame-caption cosines are combined into the
/// refined caption term. Both factors are rectified at zero first.
enum class RefinedForm {
  kProduct,  // max(0, cos(q,c)) * max(0, cos(f,c))
  kMean,     // arithmetic mean of the rectified cosines
  kMin,      // smaller of the rectified cosines
};

std::string_view to_string(RefinedForm form) noexcept;
RefinedForm parse_refined_form(std::string_view text);

struct ModulationConfig {
  double alpha1 = 0.7;  // visual-query term
  double alpha2 = 0.3;  // refined caption term
  RefinedForm refined_form = RefinedForm::kProduct;

  void validate() const;
};

struct ScoredCaption {
  CaptionRecord caption;
  double score = 0.0;
  // score * caption.embedding
  EmbeddingVector reweighted_embedding;
};

double visual_query_similarity(const EmbeddingVector& frame, const EmbeddingVector& query);

double refined_caption_similarity(const EmbeddingVector& query, const EmbeddingVector& frame,
                                  const EmbeddingVector& caption,
                                  RefinedForm form = RefinedForm::kProduct);

/// alpha1 * V(f, q) + alpha2 * Vbar(q, f, c)
double caption_weight(const EmbeddingVector& frame, const EmbeddingVector& caption,
                      const EmbeddingVector& query, const ModulationConfig& cfg);

/// Scores every caption against the frame nearest its segment midpoint (ties
/// to the earlier frame) and scales its embedding by the score. Negative
/// scores are applied as-is. Output order matches input order.
std::vector<ScoredCaption> modulate_captions(const FrameSequence& frames,
                                             std::span<const CaptionRecord> captions,
                                             const EmbeddingVector& query,
                                             const ModulationConfig& cfg);

}  // namespace vmr
